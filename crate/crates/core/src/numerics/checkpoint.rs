//! Binary checkpoint format for named tensors.
//!
//! Layout, all integers little-endian:
//!   magic "SSDF" | version u32 | tensor count u32 | entries...
//! each entry:
//!   name length u32 | UTF-8 name | rank u32 | dims u64 x rank | f32 data
//!
//! Data is stored in 32-bit regardless of the in-memory precision; optimizer
//! state tensors are stored alongside parameters under their own names.
//! Writers emit entries in a fixed order, so identical states produce
//! byte-identical files.

use std::path::Path;

use crate::numerics::tensor::{Scalar, Tensor};
use crate::util::atomic_write;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SSDF";
pub const VERSION: u32 = 1;

/// A tensor as stored on disk: shape plus 32-bit data.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTensor {
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl RawTensor {
    pub fn from_tensor<S: Scalar>(t: &Tensor<S>) -> Self {
        RawTensor {
            shape: t.shape().to_vec(),
            data: t.to_f32_vec(),
        }
    }

    pub fn to_tensor<S: Scalar>(&self) -> Tensor<S> {
        let data = self.data.iter().map(|&v| S::from_f64(v as f64)).collect();
        Tensor::from_vec(&self.shape, data).expect("RawTensor shape/data consistency")
    }

    pub fn scalar_u64(value: u64) -> Self {
        RawTensor {
            shape: vec![1],
            data: vec![value as f32],
        }
    }
}

/// Writes named tensors atomically in the given order.
pub fn write_checkpoint(path: &Path, entries: &[(String, RawTensor)]) -> Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(entries.len() as u32).to_le_bytes());
    for (name, t) in entries {
        let expected: usize = t.shape.iter().product();
        if expected != t.data.len() {
            return Err(Error::Checkpoint(format!(
                "tensor '{name}' has {} values for shape {:?}",
                t.data.len(),
                t.shape
            )));
        }
        let name_bytes = name.as_bytes();
        buf.extend_from_slice(&(name_bytes.len() as u32).to_le_bytes());
        buf.extend_from_slice(name_bytes);
        buf.extend_from_slice(&(t.shape.len() as u32).to_le_bytes());
        for &d in &t.shape {
            buf.extend_from_slice(&(d as u64).to_le_bytes());
        }
        for &v in &t.data {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    atomic_write(path, &buf)
}

/// Reads a checkpoint, validating magic, version, and table consistency.
pub fn read_checkpoint(path: &Path) -> Result<Vec<(String, RawTensor)>> {
    let bytes = std::fs::read(path)?;
    let mut cur = Cursor { bytes: &bytes, pos: 0 };
    let magic = cur.take(4)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint(format!(
            "bad magic {:?} in {}",
            &magic[..4.min(magic.len())],
            path.display()
        )));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let count = cur.u32()? as usize;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let name_len = cur.u32()? as usize;
        if name_len > 4096 {
            return Err(Error::Checkpoint(format!(
                "implausible tensor name length {name_len}"
            )));
        }
        let name = String::from_utf8(cur.take(name_len)?.to_vec())
            .map_err(|_| Error::Checkpoint("tensor name is not UTF-8".into()))?;
        let rank = cur.u32()? as usize;
        if rank > 8 {
            return Err(Error::Checkpoint(format!(
                "implausible rank {rank} for '{name}'"
            )));
        }
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(cur.u64()? as usize);
        }
        let n: usize = shape.iter().product();
        let raw = cur.take(n * 4)?;
        let mut data = Vec::with_capacity(n);
        for chunk in raw.chunks_exact(4) {
            data.push(f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]));
        }
        entries.push((name, RawTensor { shape, data }));
    }
    if cur.pos != bytes.len() {
        return Err(Error::Checkpoint(format!(
            "{} trailing bytes after tensor table",
            bytes.len() - cur.pos
        )));
    }
    Ok(entries)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Checkpoint("unexpected end of file".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes([
            b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7],
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_restores_names_shapes_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ssdf");
        let entries = vec![
            (
                "od.l0.weight".to_string(),
                RawTensor {
                    shape: vec![2, 3],
                    data: vec![0.5, -1.25, 3.0, 0.125, -0.75, 2.5],
                },
            ),
            (
                "adam.od.l0.weight.t".to_string(),
                RawTensor::scalar_u64(17),
            ),
        ];
        write_checkpoint(&path, &entries).unwrap();
        let back = read_checkpoint(&path).unwrap();
        assert_eq!(back, entries);
    }

    #[test]
    fn f32_values_survive_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ssdf");
        let t = Tensor::<f32>::from_vec(&[3], vec![0.1, 1.0e-30, -7.25]).unwrap();
        write_checkpoint(&path, &[("x".into(), RawTensor::from_tensor(&t))]).unwrap();
        let back = read_checkpoint(&path).unwrap();
        let restored: Tensor<f32> = back[0].1.to_tensor();
        assert_eq!(restored.data(), t.data());
    }

    #[test]
    fn bad_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ssdf");
        std::fs::write(&path, b"NOPE\x01\x00\x00\x00\x00\x00\x00\x00").unwrap();
        assert!(matches!(
            read_checkpoint(&path),
            Err(crate::Error::Checkpoint(_))
        ));
    }

    #[test]
    fn truncated_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ssdf");
        let t = Tensor::<f32>::from_vec(&[4], vec![1.0; 4]).unwrap();
        write_checkpoint(&path, &[("x".into(), RawTensor::from_tensor(&t))]).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        assert!(matches!(
            read_checkpoint(&path),
            Err(crate::Error::Checkpoint(_))
        ));
    }

    #[test]
    fn identical_states_produce_byte_identical_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.ssdf");
        let b = dir.path().join("b.ssdf");
        let entries = vec![(
            "w".to_string(),
            RawTensor {
                shape: vec![2, 2],
                data: vec![1.0, 2.0, 3.0, 4.0],
            },
        )];
        write_checkpoint(&a, &entries).unwrap();
        write_checkpoint(&b, &entries).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}
