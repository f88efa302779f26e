//! Probabilities of holomorphic channel ensembles and the entropy measures
//! built on them. Logarithms are natural (nats).

use nalgebra::DMatrix;

use crate::bargmann::BargmannSpace;
use crate::error::{HoloError, Result};
use crate::gates::DiffOp;
use crate::holostate::HoloPoly;

/// Tolerance on `Σ p_i = 1`.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// An ordered list of channel states `(f₁, …, f_N)` in one space.
#[derive(Clone, Debug)]
pub struct ChannelEnsemble {
    space: BargmannSpace,
    components: Vec<HoloPoly>,
}

impl ChannelEnsemble {
    pub fn new(space: BargmannSpace, components: Vec<HoloPoly>) -> Result<Self> {
        for f in &components {
            if f.dim() != space.dim() {
                return Err(HoloError::DimensionMismatch {
                    expected: space.dim(),
                    found: f.dim(),
                });
            }
        }
        if components.iter().all(HoloPoly::is_zero) {
            return Err(HoloError::ZeroState);
        }
        Ok(ChannelEnsemble { space, components })
    }

    pub fn space(&self) -> &BargmannSpace {
        &self.space
    }

    pub fn components(&self) -> &[HoloPoly] {
        &self.components
    }

    /// The ensemble `(L f₁, …, L f_N)`.
    pub fn map(&self, op: &DiffOp) -> Result<ChannelEnsemble> {
        let out = self.components.iter().map(|f| op.apply(f)).collect::<Result<Vec<_>>>()?;
        ChannelEnsemble::new(self.space, out)
    }
}

/// Non-negative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(HoloError::InvalidDistribution("empty".into()));
        }
        if let Some(i) = p.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(HoloError::InvalidDistribution(format!("entry {i} is {}", p[i])));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(HoloError::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(ProbVector(p))
    }

    /// Normalize non-negative weights.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let total: f64 = w.iter().sum();
        if !(total.is_finite() && total > 0.0) || w.iter().any(|x| *x < 0.0) {
            return Err(HoloError::InvalidDistribution(format!("weights {w:?} cannot be normalized")));
        }
        Ok(ProbVector(w.iter().map(|x| x / total).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `p_i = ⟨f_i|f_i⟩ / Σ_j ⟨f_j|f_j⟩`.
pub fn channel_probabilities(ens: &ChannelEnsemble) -> Result<ProbVector> {
    let norms = ens
        .components
        .iter()
        .map(|f| ens.space.norm_sq(f))
        .collect::<Result<Vec<_>>>()?;
    if norms.iter().sum::<f64>() <= 0.0 {
        return Err(HoloError::ZeroState);
    }
    ProbVector::from_weights(&norms)
}

/// `−Σ p_i ln p_i` with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    -p.0.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyChange {
    pub s_in: f64,
    pub s_out: f64,
    /// `S_out − S_in`. Nothing forces this to be non-negative.
    pub delta: f64,
}

/// Entropy of the ensemble before and after applying `op` to every component.
pub fn entropy_change(ens: &ChannelEnsemble, op: &DiffOp) -> Result<EntropyChange> {
    let s_in = shannon_entropy(&channel_probabilities(ens)?);
    let s_out = shannon_entropy(&channel_probabilities(&ens.map(op)?)?);
    Ok(EntropyChange {
        s_in,
        s_out,
        delta: s_out - s_in,
    })
}

/// `D(P‖Q) = Σ p_i ln(p_i / q_i)`.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(HoloError::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.0.iter().zip(&q.0).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(HoloError::SupportViolation { index: i });
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(acc)
}

/// `I(X;Y) = Σ J_ij ln(J_ij / (r_i c_j))` for a joint distribution `J`.
pub fn mutual_information(joint: &DMatrix<f64>) -> Result<f64> {
    if joint.is_empty() {
        return Err(HoloError::InvalidDistribution("empty joint distribution".into()));
    }
    if joint.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(HoloError::InvalidDistribution("joint entries must be finite and non-negative".into()));
    }
    let total = joint.sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(HoloError::InvalidDistribution(format!("joint sums to {total}")));
    }
    let rows: Vec<f64> = joint.row_iter().map(|r| r.sum()).collect();
    let cols: Vec<f64> = joint.column_iter().map(|c| c.sum()).collect();
    let mut acc = 0.0;
    for i in 0..joint.nrows() {
        for j in 0..joint.ncols() {
            let v = joint[(i, j)];
            if v > 0.0 {
                acc += v * (v / (rows[i] * cols[j])).ln();
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{matrix_to_operator, standard_gate, GateName};
    use crate::holostate::MultiIndex;
    use crate::C64;
    use std::f64::consts::LN_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn mono(d: usize, deg: u32, idx: &[u32]) -> HoloPoly {
        HoloPoly::monomial(d, deg, MultiIndex::new(idx.to_vec()), c(1.0)).unwrap()
    }

    fn basis_pair() -> ChannelEnsemble {
        let s = BargmannSpace::new(2, 1.0).unwrap();
        ChannelEnsemble::new(s, vec![mono(2, 1, &[1, 0]), mono(2, 1, &[0, 1])]).unwrap()
    }

    #[test]
    fn probabilities() {
        assert_eq!(channel_probabilities(&basis_pair()).unwrap().as_slice(), &[0.5, 0.5]);
        let s1 = BargmannSpace::new(1, 1.0).unwrap();
        let single = ChannelEnsemble::new(s1, vec![mono(1, 2, &[1])]).unwrap();
        assert_eq!(channel_probabilities(&single).unwrap().as_slice(), &[1.0]);
        let with_zero = ChannelEnsemble::new(s1, vec![mono(1, 2, &[1]), HoloPoly::zero(1, 2)]).unwrap();
        assert_eq!(channel_probabilities(&with_zero).unwrap().as_slice(), &[1.0, 0.0]);
        let pair = ChannelEnsemble::new(s1, vec![mono(1, 2, &[1]), mono(1, 2, &[2])]).unwrap();
        let p = channel_probabilities(&pair).unwrap();
        assert!((p.as_slice()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.as_slice()[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!(ChannelEnsemble::new(s1, vec![HoloPoly::zero(1, 1)]).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon_entropy(&ProbVector::new(vec![1.0, 0.0]).unwrap()), 0.0);
        assert!((shannon_entropy(&ProbVector::new(vec![0.5, 0.5]).unwrap()) - LN_2).abs() < 1e-15);
        let p = ProbVector::from_weights(&[1.0, 2.0]).unwrap();
        assert!((shannon_entropy(&p) - 0.6365).abs() < 1e-4);
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn entropy_change_examples() {
        let ens = basis_pair();
        let id = standard_gate(&GateName::I).unwrap();
        assert_eq!(entropy_change(&ens, &id).unwrap().delta, 0.0);
        let x = standard_gate(&GateName::X).unwrap();
        assert_eq!(entropy_change(&ens, &x).unwrap().delta, 0.0);
        let diag = nalgebra::DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(2.0)]);
        let d = entropy_change(&ens, &matrix_to_operator(&diag).unwrap()).unwrap();
        let expected = shannon_entropy(&ProbVector::new(vec![0.2, 0.8]).unwrap()) - LN_2;
        assert!((d.delta - expected).abs() < 1e-15);
        assert!(d.delta < 0.0);
        let z = standard_gate(&GateName::Z).unwrap();
        let s = BargmannSpace::new(2, 1.0).unwrap();
        let ens = ChannelEnsemble::new(s, vec![mono(2, 2, &[1, 1])]).unwrap();
        assert_eq!(entropy_change(&ens, &z), Err(HoloError::ZeroState));
    }

    #[test]
    fn kl_examples() {
        let half = ProbVector::new(vec![0.5, 0.5]).unwrap();
        let det = ProbVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(kl_divergence(&half, &half).unwrap(), 0.0);
        assert!((kl_divergence(&det, &half).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(kl_divergence(&half, &det), Err(HoloError::SupportViolation { index: 1 }));
    }

    #[test]
    fn mutual_information_examples() {
        let r = [0.3, 0.7];
        let cc = [0.6, 0.4];
        let prod = DMatrix::from_fn(2, 2, |i, j| r[i] * cc[j]);
        assert!(mutual_information(&prod).unwrap().abs() < 1e-15);
        let diag = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert!((mutual_information(&diag).unwrap() - LN_2).abs() < 1e-15);
        let j = DMatrix::from_row_slice(2, 2, &[1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0]);
        assert!((mutual_information(&j).unwrap() - 0.0566).abs() < 1e-3);
        assert!(mutual_information(&DMatrix::from_row_slice(1, 2, &[0.5, 0.6])).is_err());
    }
}
