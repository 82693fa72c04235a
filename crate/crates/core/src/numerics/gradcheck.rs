//! Central finite-difference gradient checking against analytic gradients.
//!
//! Runs in 64-bit only: with h = 1e-6 the truncation and round-off error of
//! central differences sit far below the tolerances used here, which is not
//! true in 32-bit.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// Step size for central differences.
pub const GRAD_CHECK_H: f64 = 1e-6;

/// Anything exposing named flat parameter vectors for perturbation.
pub trait ParamStore {
    fn names(&self) -> Vec<String>;
    fn param_len(&self, name: &str) -> usize;
    fn get(&self, name: &str, idx: usize) -> f64;
    fn set(&mut self, name: &str, idx: usize, value: f64);
}

impl ParamStore for Vec<(String, Vec<f64>)> {
    fn names(&self) -> Vec<String> {
        self.iter().map(|(n, _)| n.clone()).collect()
    }
    fn param_len(&self, name: &str) -> usize {
        self.iter().find(|(n, _)| n == name).map_or(0, |(_, v)| v.len())
    }
    fn get(&self, name: &str, idx: usize) -> f64 {
        self.iter().find(|(n, _)| n == name).unwrap().1[idx]
    }
    fn set(&mut self, name: &str, idx: usize, value: f64) {
        self.iter_mut().find(|(n, _)| n == name).unwrap().1[idx] = value;
    }
}

/// Result for one named tensor.
#[derive(Clone, Debug)]
pub struct TensorCheck {
    pub name: String,
    pub entries: usize,
    pub max_rel_err: f64,
    pub worst_index: usize,
    pub worst_analytic: f64,
    pub worst_numeric: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct GradCheckReport {
    pub checks: Vec<TensorCheck>,
    pub tolerance: f64,
}

impl GradCheckReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_rel_err(&self) -> f64 {
        self.checks.iter().map(|c| c.max_rel_err).fold(0.0, f64::max)
    }
}

/// Relative error with a small absolute floor, so near-zero gradient entries
/// are compared absolutely instead of dividing by ~0.
pub fn rel_err(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-3)
}

/// Checks every entry named in `analytic` by central differences of `loss`
/// over the parameters in `store`. The store is restored after each probe.
/// A non-finite loss aborts the check and echoes the offending input.
pub fn grad_check<P, F>(
    store: &mut P,
    analytic: &BTreeMap<String, Vec<f64>>,
    mut loss: F,
    h: f64,
    tolerance: f64,
) -> Result<GradCheckReport>
where
    P: ParamStore,
    F: FnMut(&mut P) -> Result<f64>,
{
    let mut checks = Vec::new();
    for (name, grad) in analytic {
        let n = store.param_len(name);
        assert_eq!(
            grad.len(),
            n,
            "analytic gradient for '{name}' has {} entries, parameter has {n}",
            grad.len()
        );
        let mut worst = TensorCheck {
            name: name.clone(),
            entries: n,
            max_rel_err: 0.0,
            worst_index: 0,
            worst_analytic: 0.0,
            worst_numeric: 0.0,
            pass: true,
        };
        for idx in 0..n {
            let orig = store.get(name, idx);
            store.set(name, idx, orig + h);
            let fp = loss(store)?;
            store.set(name, idx, orig - h);
            let fm = loss(store)?;
            store.set(name, idx, orig);
            if !fp.is_finite() || !fm.is_finite() {
                return Err(Error::NonFiniteLoss {
                    context: format!("grad check probe at {name}[{idx}] = {orig} ± {h}"),
                });
            }
            let numeric = (fp - fm) / (2.0 * h);
            let a = grad[idx];
            let rel = rel_err(a, numeric);
            if rel > worst.max_rel_err {
                worst.max_rel_err = rel;
                worst.worst_index = idx;
                worst.worst_analytic = a;
                worst.worst_numeric = numeric;
            }
        }
        worst.pass = worst.max_rel_err <= tolerance;
        checks.push(worst);
    }
    Ok(GradCheckReport { checks, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_loss_gradients_match_to_1e8() {
        let mut store = vec![("p".to_string(), vec![1.0, 2.0])];
        let mut analytic = BTreeMap::new();
        analytic.insert("p".to_string(), vec![2.0, 4.0]);
        let report = grad_check(
            &mut store,
            &analytic,
            |s: &mut Vec<(String, Vec<f64>)>| {
                Ok(s[0].1.iter().map(|v| v * v).sum::<f64>())
            },
            GRAD_CHECK_H,
            1e-8,
        )
        .unwrap();
        assert!(report.pass(), "max rel err {:.3e}", report.max_rel_err());
    }

    #[test]
    fn constant_loss_reports_zero_error() {
        let mut store = vec![("p".to_string(), vec![0.3, -0.4, 0.5])];
        let mut analytic = BTreeMap::new();
        analytic.insert("p".to_string(), vec![0.0, 0.0, 0.0]);
        let report = grad_check(&mut store, &analytic, |_| Ok(42.0), GRAD_CHECK_H, 1e-12).unwrap();
        assert_eq!(report.max_rel_err(), 0.0);
        assert!(report.pass());
    }

    #[test]
    fn non_finite_loss_aborts_with_context() {
        let mut store = vec![("p".to_string(), vec![1.0])];
        let mut analytic = BTreeMap::new();
        analytic.insert("p".to_string(), vec![0.0]);
        let err = grad_check(
            &mut store,
            &analytic,
            |_| Ok(f64::INFINITY),
            GRAD_CHECK_H,
            1e-4,
        )
        .unwrap_err();
        match err {
            crate::Error::NonFiniteLoss { context } => assert!(context.contains("p[0]")),
            other => panic!("expected NonFiniteLoss, got {other:?}"),
        }
    }

    #[test]
    fn params_are_restored_after_probing() {
        let mut store = vec![("p".to_string(), vec![0.25, -1.5])];
        let mut analytic = BTreeMap::new();
        analytic.insert("p".to_string(), vec![0.5, -3.0]);
        grad_check(
            &mut store,
            &analytic,
            |s: &mut Vec<(String, Vec<f64>)>| Ok(s[0].1.iter().map(|v| v * v).sum()),
            GRAD_CHECK_H,
            1e-6,
        )
        .unwrap();
        assert_eq!(store[0].1, vec![0.25, -1.5]);
    }
}
