use std::fmt;
use std::str::FromStr;

use crate::bargmann::BargmannSpace;
use crate::error::{HoloError, Result};
use crate::gates::{expectation, DiffOp, Normalization};
use crate::holostate::HoloPoly;

/// Largest imaginary part tolerated in a measured gate input.
pub const REAL_INPUT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activation {
    Identity,
    /// `1` for `u ≥ 0`, else `0`.
    Step,
    Logistic,
}

impl Activation {
    pub fn apply(self, u: f64) -> f64 {
        match self {
            Activation::Identity => u,
            Activation::Step => {
                if u >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Logistic => 1.0 / (1.0 + (-u).exp()),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Identity => "identity",
            Activation::Step => "step",
            Activation::Logistic => "logistic",
        })
    }
}

impl FromStr for Activation {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" => Ok(Activation::Identity),
            "step" => Ok(Activation::Step),
            "logistic" => Ok(Activation::Logistic),
            other => Err(HoloError::InvalidParameter(format!("unknown activation `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeuronParams {
    weights: Vec<f64>,
    bias: f64,
    activation: Activation,
}

impl NeuronParams {
    pub fn new(weights: Vec<f64>, bias: f64, activation: Activation) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
            return Err(HoloError::InvalidParameter("weights and bias must be finite".into()));
        }
        Ok(NeuronParams {
            weights,
            bias,
            activation,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// `activation(Σ ωᵢ xᵢ + b)`.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(HoloError::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        let u: f64 = self.weights.iter().zip(x).map(|(w, x)| w * x).sum();
        Ok(self.activation.apply(u + self.bias))
    }
}

/// A measured input `⟨f|L|f⟩ / ⟨f|f⟩`.
#[derive(Clone, Debug)]
pub struct GateInput {
    pub space: BargmannSpace,
    pub state: HoloPoly,
    pub op: DiffOp,
}

impl GateInput {
    pub fn new(space: BargmannSpace, state: HoloPoly, op: DiffOp) -> Self {
        GateInput { space, state, op }
    }
}

/// Real expectations of the inputs; a complex one is an error.
pub fn gate_features(inputs: &[GateInput]) -> Result<Vec<f64>> {
    inputs
        .iter()
        .enumerate()
        .map(|(index, g)| {
            let e = expectation(&g.space, &g.op, &g.state, Normalization::Normalized)?;
            if e.im.abs() > REAL_INPUT_TOL {
                return Err(HoloError::ComplexInput { index, imag: e.im });
            }
            Ok(e.re)
        })
        .collect()
}

pub fn neuron_forward(params: &NeuronParams, inputs: &[GateInput]) -> Result<f64> {
    params.forward(&gate_features(inputs)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingReport {
    pub params: NeuronParams,
    /// Misclassifications in each epoch that ran. Training stops after the
    /// first error-free epoch.
    pub errors_per_epoch: Vec<usize>,
}

/// Perceptron rule `ω ← ω + η(target − prediction)x`, bias likewise.
pub fn perceptron_train_features(
    initial: &NeuronParams,
    samples: &[(Vec<f64>, f64)],
    epochs: usize,
    eta: f64,
) -> Result<TrainingReport> {
    if initial.activation != Activation::Step {
        return Err(HoloError::InvalidParameter("perceptron training needs the step activation".into()));
    }
    if !eta.is_finite() {
        return Err(HoloError::InvalidParameter(format!("learning rate must be finite, got {eta}")));
    }
    if let Some((_, t)) = samples.iter().find(|(_, t)| *t != 0.0 && *t != 1.0) {
        return Err(HoloError::InvalidParameter(format!("targets must be 0 or 1, got {t}")));
    }
    let mut params = initial.clone();
    let mut errors_per_epoch = Vec::new();
    for _ in 0..epochs {
        let mut errors = 0;
        for (x, target) in samples {
            let delta = target - params.forward(x)?;
            if delta != 0.0 {
                errors += 1;
                for (w, xi) in params.weights.iter_mut().zip(x) {
                    *w += eta * delta * xi;
                }
                params.bias += eta * delta;
            }
        }
        errors_per_epoch.push(errors);
        if errors == 0 {
            break;
        }
    }
    Ok(TrainingReport {
        params,
        errors_per_epoch,
    })
}

/// Perceptron training on gate-measured inputs.
pub fn perceptron_train(
    initial: &NeuronParams,
    samples: &[(Vec<GateInput>, f64)],
    epochs: usize,
    eta: f64,
) -> Result<TrainingReport> {
    let features = samples
        .iter()
        .map(|(inputs, t)| Ok((gate_features(inputs)?, *t)))
        .collect::<Result<Vec<_>>>()?;
    perceptron_train_features(initial, &features, epochs, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{standard_gate, GateName};
    use crate::C64;

    fn z_input(var: usize) -> GateInput {
        let s = BargmannSpace::new(2, 1.0).unwrap();
        GateInput::new(s, HoloPoly::variable(2, 1, var).unwrap(), standard_gate(&GateName::Z).unwrap())
    }

    #[test]
    fn forward_examples() {
        let p = NeuronParams::new(vec![1.0, 1.0], 0.0, Activation::Identity).unwrap();
        assert_eq!(neuron_forward(&p, &[z_input(0), z_input(1)]).unwrap(), 0.0);
        assert_eq!(Activation::Step.apply(0.5), 1.0);
        assert_eq!(Activation::Step.apply(0.0), 1.0);
        assert_eq!(Activation::Step.apply(-0.1), 0.0);
        assert_eq!(Activation::Logistic.apply(0.0), 0.5);
        let zero = NeuronParams::new(vec![0.0, 0.0], 0.3, Activation::Logistic).unwrap();
        assert_eq!(zero.forward(&[5.0, -7.0]).unwrap(), Activation::Logistic.apply(0.3));
        assert!(p.forward(&[1.0]).is_err());
    }

    #[test]
    fn complex_input_rejected() {
        let s = BargmannSpace::new(2, 1.0).unwrap();
        let f = HoloPoly::from_terms(
            2,
            1,
            [
                (crate::MultiIndex::new(vec![1, 0]), C64::new(1.0, 0.0)),
                (crate::MultiIndex::new(vec![0, 1]), C64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        let op = DiffOp::hop(2, 0, 1, C64::new(1.0, 0.0)).unwrap();
        let err = gate_features(&[z_input(0), GateInput::new(s, f, op.scale(C64::i()))]).unwrap_err();
        assert!(matches!(err, HoloError::ComplexInput { index: 1, .. }));
    }

    fn and_data() -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::new();
        for a in [1.0, -1.0] {
            for b in [1.0, -1.0] {
                out.push((vec![a, b], if a > 0.0 && b > 0.0 { 1.0 } else { 0.0 }));
            }
        }
        out
    }

    #[test]
    fn perceptron_learns_and() {
        let init = NeuronParams::new(vec![0.0, 0.0], 0.0, Activation::Step).unwrap();
        let r = perceptron_train_features(&init, &and_data(), 50, 0.5).unwrap();
        assert_eq!(*r.errors_per_epoch.last().unwrap(), 0);
        for (x, t) in and_data() {
            assert_eq!(r.params.forward(&x).unwrap(), t);
        }
    }

    #[test]
    fn perceptron_fixed_points() {
        let good = NeuronParams::new(vec![1.0, 1.0], -1.5, Activation::Step).unwrap();
        let r = perceptron_train_features(&good, &and_data(), 50, 0.5).unwrap();
        assert_eq!(r.params, good);
        assert_eq!(r.errors_per_epoch, vec![0]);

        let init = NeuronParams::new(vec![0.0, 0.0], 0.0, Activation::Step).unwrap();
        let r = perceptron_train_features(&init, &and_data(), 5, 0.0).unwrap();
        assert_eq!(r.params, init);
        assert_eq!(r.errors_per_epoch, vec![3; 5]);
    }

    #[test]
    fn perceptron_on_gate_inputs() {
        let up = || z_input(0);
        let down = || z_input(1);
        let samples = vec![
            (vec![up(), up()], 1.0),
            (vec![up(), down()], 0.0),
            (vec![down(), up()], 0.0),
            (vec![down(), down()], 0.0),
        ];
        let init = NeuronParams::new(vec![0.0, 0.0], 0.0, Activation::Step).unwrap();
        let r = perceptron_train(&init, &samples, 50, 1.0).unwrap();
        assert_eq!(*r.errors_per_epoch.last().unwrap(), 0);
    }
}
