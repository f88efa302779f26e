//! Logic gates as differential operators `Σ c_{αβ} z^α ∂^β`.
//!
//! Operators live in the Weyl algebra and are always stored in normal order
//! (every multiplication left of every derivative), which makes the stored
//! form canonical. Composition re-normal-orders using
//! `∂_i z_j = z_j ∂_i + δ_ij`.

mod cauchy;
mod standard;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::bargmann::BargmannSpace;
use crate::error::{HoloError, Result};
use crate::holostate::{binomial, factorial, format_coefficient, HoloPoly, MultiIndex};
use crate::{C64, COEFF_TOL};

pub use cauchy::{apply_via_cauchy, MIN_CONTOUR_NODES};
pub use standard::{
    hamiltonian, jordan_schwinger, matrix_to_operator, spin_generator, standard_gate, GateName, SpinComponent,
};

/// Normal-ordered element of the Weyl algebra on `d` variables.
#[derive(Clone, Debug)]
pub struct DiffOp {
    dim: usize,
    // (creation α, annihilation β) → coefficient of z^α ∂^β
    terms: BTreeMap<(MultiIndex, MultiIndex), C64>,
}

impl DiffOp {
    pub fn zero(dim: usize) -> Self {
        DiffOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by the constant `c`.
    pub fn scalar(dim: usize, c: C64) -> Self {
        let mut op = Self::zero(dim);
        op.accumulate(MultiIndex::zeros(dim), MultiIndex::zeros(dim), c);
        op
    }

    /// The single term `c z^α ∂^β`.
    pub fn term(dim: usize, creation: MultiIndex, annihilation: MultiIndex, c: C64) -> Result<Self> {
        for idx in [&creation, &annihilation] {
            if idx.dim() != dim {
                return Err(HoloError::DimensionMismatch {
                    expected: dim,
                    found: idx.dim(),
                });
            }
        }
        let mut op = Self::zero(dim);
        op.accumulate(creation, annihilation, c);
        Ok(op)
    }

    /// `c z_j ∂_k` (0-based indices).
    pub fn hop(dim: usize, j: usize, k: usize, c: C64) -> Result<Self> {
        for i in [j, k] {
            if i >= dim {
                return Err(HoloError::IndexOutOfRange { index: i, dim });
            }
        }
        Self::term(dim, MultiIndex::unit(dim, j), MultiIndex::unit(dim, k), c)
    }

    /// Multiplication by `z_i`.
    pub fn multiplication(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(HoloError::IndexOutOfRange { index: i, dim });
        }
        Self::term(dim, MultiIndex::unit(dim, i), MultiIndex::zeros(dim), C64::new(1.0, 0.0))
    }

    /// `∂/∂z_i`.
    pub fn derivative(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(HoloError::IndexOutOfRange { index: i, dim });
        }
        Self::term(dim, MultiIndex::zeros(dim), MultiIndex::unit(dim, i), C64::new(1.0, 0.0))
    }

    fn accumulate(&mut self, creation: MultiIndex, annihilation: MultiIndex, c: C64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry((creation, annihilation)) {
            Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                if c != C64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &C64)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coefficient(&self, creation: &MultiIndex, annihilation: &MultiIndex) -> C64 {
        self.terms
            .get(&(creation.clone(), annihilation.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order, 0 for multiplication operators.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, b)| b.degree()).max().unwrap_or(0)
    }

    /// Every term is `c z_j ∂_k`.
    pub fn is_first_order(&self) -> bool {
        self.terms.keys().all(|(a, b)| a.degree() == 1 && b.degree() == 1)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: other,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), v) in &self.terms {
            out.accumulate(a.clone(), b.clone(), v * c);
        }
        out
    }

    pub fn checked_add(&self, other: &DiffOp) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for ((a, b), v) in &other.terms {
            out.accumulate(a.clone(), b.clone(), *v);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &DiffOp) -> Result<Self> {
        self.checked_add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Sum of operators sharing one dimension.
    pub fn sum<'a>(dim: usize, ops: impl IntoIterator<Item = &'a DiffOp>) -> Result<Self> {
        ops.into_iter().try_fold(Self::zero(dim), |acc, op| acc.checked_add(op))
    }

    /// Action on a state. For a monomial `z^γ`, the term `c z^α ∂^β`
    /// contributes `c γ!/(γ−β)! z^{γ−β+α}`. The image keeps `f`'s degree bound.
    pub fn apply(&self, f: &HoloPoly) -> Result<HoloPoly> {
        self.check_dim(f.dim())?;
        let mut out = Vec::new();
        for ((alpha, beta), c) in &self.terms {
            for (gamma, g) in f.terms() {
                let Some(rest) = gamma.checked_sub(beta) else {
                    continue;
                };
                let falling: f64 = gamma
                    .exponents()
                    .iter()
                    .zip(beta.exponents())
                    .map(|(&gi, &bi)| factorial(gi) / factorial(gi - bi))
                    .product();
                out.push((rest.add(alpha), c * g * falling));
            }
        }
        HoloPoly::from_terms(f.dim(), f.max_degree(), out)
    }

    /// `self ∘ other`, normal ordered.
    ///
    /// Per variable, `∂^b z^a = Σ_k C(b,k) C(a,k) k! z^{a−k} ∂^{b−k}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_dim(other.dim)?;
        let d = self.dim;
        let mut out = DiffOp::zero(d);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // Per-variable contraction choices k_i ∈ 0..=min(b1_i, a2_i).
                let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(d), 1.0)];
                for i in 0..d {
                    let (bi, ai) = (b1.exponents()[i], a2.exponents()[i]);
                    let mut next = Vec::with_capacity(partial.len() * (bi.min(ai) as usize + 1));
                    for (ks, w) in &partial {
                        for k in 0..=bi.min(ai) {
                            let weight = binomial(bi, k) * binomial(ai, k) * factorial(k);
                            let mut ks2 = ks.clone();
                            ks2.push(k);
                            next.push((ks2, w * weight));
                        }
                    }
                    partial = next;
                }
                for (ks, w) in partial {
                    let k = MultiIndex::new(ks);
                    let creation = a1.add(&a2.checked_sub(&k).expect("k ≤ a2"));
                    let annihilation = b1.checked_sub(&k).expect("k ≤ b1").add(b2);
                    out.accumulate(creation, annihilation, c1 * c2 * w);
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.checked_sub(&other.compose(self)?)
    }

    /// `n`-fold composition, `power(0)` being the identity map (scalar 1).
    pub fn power(&self, n: u32) -> DiffOp {
        let mut acc = DiffOp::scalar(self.dim, C64::new(1.0, 0.0));
        for _ in 0..n {
            acc = acc.compose(self).expect("same dimension");
        }
        acc
    }

    /// Matrix `M` with `M_jk` the coefficient of `z_j ∂_k`; inverse of
    /// [`matrix_to_operator`]. Only defined for first-order operators.
    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        if !self.is_first_order() {
            return Err(HoloError::NotFirstOrder);
        }
        let mut m = DMatrix::from_element(self.dim, self.dim, C64::new(0.0, 0.0));
        for ((a, b), c) in &self.terms {
            let j = a.exponents().iter().position(|&e| e == 1).expect("degree 1");
            let k = b.exponents().iter().position(|&e| e == 1).expect("degree 1");
            m[(j, k)] = *c;
        }
        Ok(m)
    }

    pub fn approx_eq(&self, other: &DiffOp, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        self.terms
            .keys()
            .chain(other.terms.keys())
            .all(|(a, b)| (self.coefficient(a, b) - other.coefficient(a, b)).norm() <= tol)
    }

    /// Drop coefficients with magnitude at or below `tol`.
    pub fn pruned(&self, tol: f64) -> DiffOp {
        DiffOp {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, COEFF_TOL)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((a, b), c)) in self.terms.iter().enumerate() {
            let mut body = String::new();
            for (v, &e) in a.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => body.push_str(&format!("z{}", v + 1)),
                    _ => body.push_str(&format!("z{}^{}", v + 1, e)),
                }
            }
            for (v, &e) in b.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => body.push_str(&format!("∂{}", v + 1)),
                    _ => body.push_str(&format!("∂{}^{}", v + 1, e)),
                }
            }
            let (neg, mag) = format_coefficient(*c);
            if neg {
                write!(f, "-")?;
            } else if n > 0 {
                write!(f, "+")?;
            }
            match (body.is_empty(), mag.as_str()) {
                (true, _) => write!(f, "{mag}")?,
                (false, "1") => write!(f, "{body}")?,
                (false, _) => write!(f, "{mag}*{body}")?,
            }
        }
        Ok(())
    }
}

/// How an expectation value is normalized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// `⟨f|Lf⟩ / √⟨f|f⟩`, as written for arbitrary input functions.
    Paper,
    /// `⟨f|Lf⟩ / ⟨f|f⟩`, invariant under rescaling of `f`.
    #[default]
    Normalized,
}

impl std::str::FromStr for Normalization {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Normalization::Paper),
            "normalized" => Ok(Normalization::Normalized),
            other => Err(HoloError::InvalidParameter(format!("unknown normalization '{other}'"))),
        }
    }
}

/// `⟨bra|L ket⟩`.
pub fn matrix_element(space: &BargmannSpace, op: &DiffOp, bra: &HoloPoly, ket: &HoloPoly) -> Result<C64> {
    space.inner_product(bra, &op.apply(ket)?)
}

pub fn expectation(space: &BargmannSpace, op: &DiffOp, f: &HoloPoly, mode: Normalization) -> Result<C64> {
    if f.is_zero() {
        return Err(HoloError::ZeroState);
    }
    let numerator = matrix_element(space, op, f, f)?;
    let norm_sq = space.norm_sq(f)?;
    Ok(match mode {
        Normalization::Paper => numerator / norm_sq.sqrt(),
        Normalization::Normalized => numerator / norm_sq,
    })
}
