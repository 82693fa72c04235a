//! Adam with named parameter groups. Moments and step counters are kept per
//! parameter so groups can be checkpointed and restored exactly.

use crate::numerics::tensor::{Scalar, Tensor};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct AdamState<S: Scalar> {
    pub m: Tensor<S>,
    pub v: Tensor<S>,
    pub t: u64,
}

impl<S: Scalar> AdamState<S> {
    pub fn new(shape: &[usize]) -> Self {
        AdamState {
            m: Tensor::zeros(shape),
            v: Tensor::zeros(shape),
            t: 0,
        }
    }
}

/// A named set of parameters sharing one learning rate, e.g. the object
/// codes vs the network weights.
#[derive(Clone, Debug)]
pub struct ParamGroup<S: Scalar> {
    pub name: String,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub param_names: Vec<String>,
    pub states: Vec<AdamState<S>>,
}

impl<S: Scalar> ParamGroup<S> {
    pub fn new(name: &str, lr: f64, params: &[(String, &[usize])]) -> Self {
        ParamGroup {
            name: name.to_string(),
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            param_names: params.iter().map(|(n, _)| n.clone()).collect(),
            states: params.iter().map(|(_, s)| AdamState::new(s)).collect(),
        }
    }
}

/// One Adam update over a group. `params` and `grads` are aligned with the
/// group's parameter list. A non-finite gradient rejects the whole step and
/// names the offending parameter; no state is modified in that case.
pub fn adam_step<S: Scalar>(
    group: &mut ParamGroup<S>,
    params: &mut [&mut Tensor<S>],
    grads: &[&Tensor<S>],
) -> Result<()> {
    assert_eq!(
        params.len(),
        group.param_names.len(),
        "param count does not match group '{}'",
        group.name
    );
    assert_eq!(
        grads.len(),
        group.param_names.len(),
        "grad count does not match group '{}'",
        group.name
    );
    for (i, g) in grads.iter().enumerate() {
        if !g.is_all_finite() {
            return Err(Error::NonFiniteGradient {
                param: format!("{}.{}", group.name, group.param_names[i]),
            });
        }
    }

    let b1 = S::from_f64(group.beta1);
    let b2 = S::from_f64(group.beta2);
    let one_minus_b1 = S::from_f64(1.0 - group.beta1);
    let one_minus_b2 = S::from_f64(1.0 - group.beta2);
    let lr = S::from_f64(group.lr);
    let eps = S::from_f64(group.eps);

    for i in 0..params.len() {
        let state = &mut group.states[i];
        let p = &mut *params[i];
        let g = grads[i];
        assert_eq!(
            p.shape(),
            g.shape(),
            "grad shape mismatch for '{}.{}'",
            group.name,
            group.param_names[i]
        );
        state.t += 1;
        let c1 = S::from_f64(1.0 / (1.0 - group.beta1.powi(state.t as i32)));
        let c2 = S::from_f64(1.0 / (1.0 - group.beta2.powi(state.t as i32)));
        let pd = p.data_mut();
        let md = state.m.data_mut();
        let vd = state.v.data_mut();
        let gd = g.data();
        for j in 0..pd.len() {
            let gj = gd[j];
            md[j] = b1 * md[j] + one_minus_b1 * gj;
            vd[j] = b2 * vd[j] + one_minus_b2 * gj * gj;
            let m_hat = md[j] * c1;
            let v_hat = vd[j] * c2;
            pd[j] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_group(lr: f64) -> (ParamGroup<f64>, Tensor<f64>) {
        let group = ParamGroup::new("g", lr, &[("p".to_string(), &[1][..])]);
        (group, Tensor::zeros(&[1]))
    }

    #[test]
    fn zero_gradient_on_fresh_state_leaves_params_unchanged() {
        let (mut group, mut p) = scalar_group(1e-3);
        p.data_mut()[0] = 0.375;
        let g = Tensor::zeros(&[1]);
        adam_step(&mut group, &mut [&mut p], &[&g]).unwrap();
        assert_eq!(p.data()[0], 0.375);
    }

    #[test]
    fn first_step_matches_closed_form() {
        // With g = 1: m_hat = v_hat = 1, so the update is -lr / (1 + eps).
        let (mut group, mut p) = scalar_group(1e-3);
        let g = Tensor::from_vec(&[1], vec![1.0]).unwrap();
        adam_step(&mut group, &mut [&mut p], &[&g]).unwrap();
        let expected = -1e-3 / (1.0 + 1e-8);
        assert!((p.data()[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn identical_params_and_grads_update_identically() {
        let mut group = ParamGroup::new(
            "g",
            1e-2,
            &[("a".to_string(), &[3][..]), ("b".to_string(), &[3][..])],
        );
        let mut pa = Tensor::from_vec(&[3], vec![0.1, -0.2, 0.9]).unwrap();
        let mut pb = pa.clone();
        let g = Tensor::from_vec(&[3], vec![0.5, -1.5, 0.01]).unwrap();
        for _ in 0..5 {
            adam_step(&mut group, &mut [&mut pa, &mut pb], &[&g, &g]).unwrap();
        }
        assert_eq!(pa.data(), pb.data());
    }

    #[test]
    fn zero_learning_rate_is_a_no_op_for_parameters() {
        let (mut group, mut p) = scalar_group(0.0);
        p.data_mut()[0] = -1.25;
        for step in 0..4 {
            let g = Tensor::from_vec(&[1], vec![(step as f64) - 1.7]).unwrap();
            adam_step(&mut group, &mut [&mut p], &[&g]).unwrap();
        }
        assert_eq!(p.data()[0], -1.25);
    }

    #[test]
    fn non_finite_gradient_is_rejected_with_param_name() {
        let (mut group, mut p) = scalar_group(1e-3);
        let g = Tensor::from_vec(&[1], vec![f64::NAN]).unwrap();
        match adam_step(&mut group, &mut [&mut p], &[&g]) {
            Err(crate::Error::NonFiniteGradient { param }) => assert_eq!(param, "g.p"),
            other => panic!("expected NonFiniteGradient, got {other:?}"),
        }
        assert_eq!(p.data()[0], 0.0);
        assert_eq!(group.states[0].t, 0);
    }
}
