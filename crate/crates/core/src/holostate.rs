//! Sparse truncated multivariate power series over complex coefficients.
//!
//! A [`HoloPoly`] carries its ambient dimension `d` and a total-degree bound
//! `D`. Every operation that would produce a term above `D` fails with
//! [`HoloError::DegreeOverflow`] instead of dropping the term.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::{C64, COEFF_TOL};

/// Exponent vector of a monomial `z₁^{α₁}⋯z_d^{α_d}`.
///
/// Ordering is lexicographic on the exponents, which is the order used for
/// serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The exponent vector of `z_i` (0-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `α! = α₁!⋯α_d!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` when some component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Keep only the listed variables, in the listed order.
    pub fn restrict(&self, vars: &[usize]) -> MultiIndex {
        MultiIndex(vars.iter().map(|&v| self.0[v]).collect())
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut e = self.0.clone();
        e.extend_from_slice(&other.0);
        MultiIndex(e)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// A truncated power series `Σ c_α z^α` with `|α| ≤ max_degree`.
///
/// Equality is coefficient-wise within [`COEFF_TOL`]; the degree bound is not
/// part of the value.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "HoloPolyRepr", into = "HoloPolyRepr")]
pub struct HoloPoly {
    dim: usize,
    max_degree: u32,
    terms: BTreeMap<MultiIndex, C64>,
}

impl HoloPoly {
    pub fn zero(dim: usize, max_degree: u32) -> Self {
        HoloPoly {
            dim,
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, max_degree: u32, c: C64) -> Self {
        let mut p = Self::zero(dim, max_degree);
        p.accumulate(MultiIndex::zeros(dim), c);
        p
    }

    /// The coordinate function `z_i` (0-based).
    pub fn variable(dim: usize, max_degree: u32, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(HoloError::IndexOutOfRange { index: i, dim });
        }
        Self::from_terms(dim, max_degree, [(MultiIndex::unit(dim, i), C64::new(1.0, 0.0))])
    }

    pub fn monomial(dim: usize, max_degree: u32, index: MultiIndex, c: C64) -> Result<Self> {
        Self::from_terms(dim, max_degree, [(index, c)])
    }

    /// Build from `(index, coefficient)` pairs; duplicates are summed and zeros dropped.
    pub fn from_terms<I>(dim: usize, max_degree: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        if dim == 0 {
            return Err(HoloError::InvalidParameter("dimension must be positive".into()));
        }
        let mut p = Self::zero(dim, max_degree);
        for (idx, c) in entries {
            p.check_index(&idx)?;
            p.accumulate(idx, c);
        }
        Ok(p)
    }

    fn check_index(&self, idx: &MultiIndex) -> Result<()> {
        if idx.dim() != self.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: idx.dim(),
            });
        }
        if idx.degree() > self.max_degree {
            return Err(HoloError::DegreeOverflow {
                index: idx.0.clone(),
                max_degree: self.max_degree,
            });
        }
        Ok(())
    }

    // Caller guarantees the index is valid.
    fn accumulate(&mut self, idx: MultiIndex, c: C64) {
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                if c != C64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> C64 {
        self.terms.get(idx).copied().unwrap_or_default()
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

    /// Highest total degree present, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Highest exponent of each variable over all terms.
    pub fn partial_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim];
        for idx in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(idx.exponents()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    /// Same terms under a different degree bound.
    pub fn with_max_degree(&self, max_degree: u32) -> Result<Self> {
        Self::from_terms(self.dim, max_degree, self.terms.iter().map(|(k, v)| (k.clone(), *v)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.dim, self.max_degree);
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), v * c);
        }
        out
    }

    fn check_compatible(&self, other: &HoloPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.max_degree != other.max_degree {
            return Err(HoloError::DegreeBoundMismatch {
                expected: self.max_degree,
                found: other.max_degree,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &HoloPoly) -> Result<Self> {
        Self::linear_combine(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], &[self.clone(), other.clone()])
    }

    pub fn checked_sub(&self, other: &HoloPoly) -> Result<Self> {
        Self::linear_combine(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)], &[self.clone(), other.clone()])
    }

    /// `Σ a_k p_k`. All polynomials must share dimension and degree bound.
    pub fn linear_combine(coeffs: &[C64], polys: &[HoloPoly]) -> Result<Self> {
        if coeffs.len() != polys.len() {
            return Err(HoloError::InvalidParameter(format!(
                "{} coefficients for {} polynomials",
                coeffs.len(),
                polys.len()
            )));
        }
        let Some(first) = polys.first() else {
            return Err(HoloError::InvalidParameter("empty linear combination".into()));
        };
        let mut out = Self::zero(first.dim, first.max_degree);
        for (a, p) in coeffs.iter().zip(polys) {
            first.check_compatible(p)?;
            for (k, v) in &p.terms {
                out.accumulate(k.clone(), a * v);
            }
        }
        Ok(out)
    }

    /// `∂f/∂z_i` (0-based `i`).
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(HoloError::IndexOutOfRange { index: i, dim: self.dim });
        }
        let mut out = Self::zero(self.dim, self.max_degree);
        for (k, v) in &self.terms {
            let a = k.0[i];
            if a == 0 {
                continue;
            }
            let mut e = k.0.clone();
            e[i] -= 1;
            out.accumulate(MultiIndex(e), v * f64::from(a));
        }
        Ok(out)
    }

    /// `z_i · f`; fails when any term would exceed the degree bound.
    pub fn multiply_by_variable(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(HoloError::IndexOutOfRange { index: i, dim: self.dim });
        }
        let mut out = Self::zero(self.dim, self.max_degree);
        for (k, v) in &self.terms {
            let mut e = k.0.clone();
            e[i] += 1;
            let idx = MultiIndex(e);
            out.check_index(&idx)?;
            out.accumulate(idx, *v);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        // Power tables per variable, then one product per term.
        let degs = self.partial_degrees();
        let powers: Vec<Vec<C64>> = point
            .iter()
            .zip(&degs)
            .map(|(&z, &n)| {
                let mut row = Vec::with_capacity(n as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                row.push(acc);
                for _ in 0..n {
                    acc *= z;
                    row.push(acc);
                }
                row
            })
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(k, c)| {
                k.0.iter()
                    .enumerate()
                    .fold(*c, |acc, (v, &e)| acc * powers[v][e as usize])
            })
            .sum())
    }

    /// Product `f(z_A) g(z_B)` with `g`'s variables appended after `f`'s.
    pub fn tensor(&self, other: &HoloPoly) -> Self {
        let mut out = Self::zero(self.dim + other.dim, self.max_degree + other.max_degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.accumulate(ka.concat(kb), va * vb);
            }
        }
        out
    }

    /// `g(w) = f(w + shift)`, re-expanded around the shifted origin.
    pub fn translated(&self, shift: &[C64]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: shift.len(),
            });
        }
        let mut out = Self::zero(self.dim, self.max_degree);
        for (k, c) in &self.terms {
            // Π_v (w_v + s_v)^{k_v} = Σ_{j ≤ k} Π_v C(k_v, j_v) s_v^{k_v − j_v} w_v^{j_v}
            let mut partial: Vec<(Vec<u32>, C64)> = vec![(Vec::with_capacity(self.dim), *c)];
            for (v, &kv) in k.0.iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (kv as usize + 1));
                for (e, coef) in &partial {
                    for j in 0..=kv {
                        let w = coef * binomial(kv, j) * shift[v].powu(kv - j);
                        let mut e2 = e.clone();
                        e2.push(j);
                        next.push((e2, w));
                    }
                }
                partial = next;
            }
            for (e, w) in partial {
                out.accumulate(MultiIndex(e), w);
            }
        }
        Ok(out)
    }

    /// Drop coefficients with magnitude at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        HoloPoly {
            dim: self.dim,
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    /// Coefficient-wise comparison; dimensions must agree.
    pub fn approx_eq(&self, other: &HoloPoly, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let keys: BTreeSet<&MultiIndex> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| (self.coefficient(k) - other.coefficient(k)).norm() <= tol)
    }

    /// Largest coefficient difference against `other` (same dimension assumed).
    pub fn max_coefficient_diff(&self, other: &HoloPoly) -> f64 {
        let keys: BTreeSet<&MultiIndex> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Coefficients arranged by (restriction to `A`, restriction to `B`).
    pub fn coefficient_matrix(&self, partition: &Partition) -> Result<CoefficientMatrix> {
        if partition.dim() != self.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found: partition.dim(),
            });
        }
        let rows: Vec<MultiIndex> = self
            .terms
            .keys()
            .map(|k| k.restrict(&partition.a))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cols: Vec<MultiIndex> = self
            .terms
            .keys()
            .map(|k| k.restrict(&partition.b))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut matrix = DMatrix::from_element(rows.len(), cols.len(), C64::new(0.0, 0.0));
        for (k, c) in &self.terms {
            let r = rows.binary_search(&k.restrict(&partition.a)).expect("row present");
            let s = cols.binary_search(&k.restrict(&partition.b)).expect("col present");
            matrix[(r, s)] = *c;
        }
        Ok(CoefficientMatrix { rows, cols, matrix })
    }

    /// Rank-one test on the coefficient matrix: the second singular value must
    /// not exceed `tol` times the largest.
    pub fn is_product_state(&self, partition: &Partition, tol: f64) -> Result<bool> {
        if self.is_zero() {
            return Err(HoloError::ZeroState);
        }
        let cm = self.coefficient_matrix(partition)?;
        let s = cm.singular_values();
        Ok(s.len() < 2 || s[1] <= tol * s[0])
    }
}

impl PartialEq for HoloPoly {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, COEFF_TOL)
    }
}

/// Split of the variables `0..d` into two non-empty disjoint groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Partition {
    pub fn new(dim: usize, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(HoloError::InvalidPartition("both groups must be non-empty".into()));
        }
        let mut seen = vec![false; dim];
        for &v in a.iter().chain(&b) {
            if v >= dim {
                return Err(HoloError::InvalidPartition(format!(
                    "variable {v} out of range for dimension {dim}"
                )));
            }
            if seen[v] {
                return Err(HoloError::InvalidPartition(format!("variable {v} listed twice")));
            }
            seen[v] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(HoloError::InvalidPartition(format!("variable {missing} not covered")));
        }
        Ok(Partition { a, b })
    }

    /// `{0..split}` against `{split..dim}`.
    pub fn split_at(dim: usize, split: usize) -> Result<Self> {
        Self::new(dim, (0..split).collect(), (split..dim).collect())
    }

    pub fn dim(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }
}

#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub matrix: DMatrix<C64>,
}

impl CoefficientMatrix {
    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.matrix.clone().svd(true, true);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s
    }

    /// Numerical rank relative to the largest singular value.
    pub fn rank(&self, tol: f64) -> usize {
        let s = self.singular_values();
        match s.first() {
            None => 0,
            Some(&0.0) => 0,
            Some(&top) => s.iter().filter(|&&x| x > tol * top).count(),
        }
    }

    /// Leading left and right singular vectors, scaled so that their outer
    /// product reproduces the rank-one part of the matrix.
    pub fn leading_factors(&self) -> (Vec<C64>, Vec<C64>) {
        let svd = self.matrix.clone().svd(true, true);
        let (k, &s0) = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("non-empty matrix");
        let u = svd.u.as_ref().expect("u computed");
        let vt = svd.v_t.as_ref().expect("v_t computed");
        let left = u.column(k).iter().map(|c| c * s0).collect();
        let right = vt.row(k).iter().copied().collect();
        (left, right)
    }
}

/// Shortest round-trip decimal, with negative zero printed as `0`. Magnitudes
/// below `1e-5` or from `1e16` up use exponent notation.
pub fn format_f64(x: f64) -> String {
    let x = x + 0.0;
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `a`, `bi`, `a+bi` or `a-bi`.
pub fn format_complex(c: C64) -> String {
    if c.im == 0.0 {
        format_f64(c.re)
    } else if c.re == 0.0 {
        format!("{}i", format_f64(c.im))
    } else if c.im < 0.0 {
        format!("{}-{}i", format_f64(c.re), format_f64(-c.im))
    } else {
        format!("{}+{}i", format_f64(c.re), format_f64(c.im))
    }
}

fn format_monomial(idx: &MultiIndex) -> String {
    let mut s = String::new();
    for (v, &e) in idx.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("z{}", v + 1)),
            _ => s.push_str(&format!("z{}^{}", v + 1, e)),
        }
    }
    s
}

// (negative?, magnitude text) for one coefficient.
pub(crate) fn format_coefficient(c: C64) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, format_f64(c.re.abs()))
    } else if c.re == 0.0 {
        let mag = c.im.abs();
        let body = if mag == 1.0 { "i".to_string() } else { format!("{}i", format_f64(mag)) };
        (c.im < 0.0, body)
    } else {
        (false, format!("({})", format_complex(c)))
    }
}

/// Terms in graded order (total degree ascending, then exponents descending),
/// e.g. `z1^2+z2^2` or `-i*z1^2+i*z2^2`.
impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| y.cmp(x)));
        for (n, k) in keys.into_iter().enumerate() {
            let (neg, mag) = format_coefficient(self.terms[k]);
            let mono = format_monomial(k);
            if neg {
                write!(f, "-")?;
            } else if n > 0 {
                write!(f, "+")?;
            }
            match (mono.is_empty(), mag.as_str()) {
                (true, _) => write!(f, "{mag}")?,
                (false, "1") => write!(f, "{mono}")?,
                (false, _) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    idx: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct HoloPolyRepr {
    dim: usize,
    max_degree: u32,
    terms: Vec<TermRepr>,
}

impl From<HoloPoly> for HoloPolyRepr {
    fn from(p: HoloPoly) -> Self {
        HoloPolyRepr {
            dim: p.dim,
            max_degree: p.max_degree,
            terms: p
                .terms
                .into_iter()
                .map(|(k, c)| TermRepr { idx: k.0, re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl TryFrom<HoloPolyRepr> for HoloPoly {
    type Error = HoloError;

    fn try_from(r: HoloPolyRepr) -> Result<Self> {
        HoloPoly::from_terms(
            r.dim,
            r.max_degree,
            r.terms.into_iter().map(|t| (MultiIndex(t.idx), C64::new(t.re, t.im))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn poly(d: usize, deg: u32, terms: &[(&[u32], C64)]) -> HoloPoly {
        HoloPoly::from_terms(d, deg, terms.iter().map(|(i, v)| (MultiIndex::new(i.to_vec()), *v))).unwrap()
    }

    #[test]
    fn from_terms_examples() {
        let p = poly(2, 2, &[(&[1, 1], c(1.0))]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "z1z2");
        assert!(poly(1, 3, &[]).is_zero());
        assert!(poly(2, 2, &[(&[1, 0], c(1.0)), (&[1, 0], c(-1.0))]).is_zero());
    }

    #[test]
    fn from_terms_rejects_bad_indices() {
        let e = HoloPoly::from_terms(2, 2, [(MultiIndex::from([1, 0, 0]), c(1.0))]).unwrap_err();
        assert_eq!(e, HoloError::DimensionMismatch { expected: 2, found: 3 });
        let e = HoloPoly::from_terms(2, 2, [(MultiIndex::from([2, 1]), c(1.0))]).unwrap_err();
        assert_eq!(e, HoloError::DegreeOverflow { index: vec![2, 1], max_degree: 2 });
    }

    #[test]
    fn linear_combine_examples() {
        let z1 = HoloPoly::variable(2, 1, 0).unwrap();
        let z2 = HoloPoly::variable(2, 1, 1).unwrap();
        let s = HoloPoly::linear_combine(&[c(1.0), c(1.0)], &[z1.clone(), z2.clone()]).unwrap();
        assert_eq!(s.to_string(), "z1+z2");
        assert!(HoloPoly::linear_combine(&[c(1.0), c(-1.0)], &[s.clone(), s]).unwrap().is_zero());

        // Hadamard image of z1, computed by hand from H = (z1∂1 + z1∂2 + z2∂1 − z2∂2)/√2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = HoloPoly::linear_combine(&[c(r), c(r)], &[z1.clone(), z2.clone()]).unwrap();
        assert!(h.approx_eq(&poly(2, 1, &[(&[1, 0], c(r)), (&[0, 1], c(r))]), 1e-15));

        let other = HoloPoly::variable(2, 2, 0).unwrap();
        assert!(matches!(
            HoloPoly::linear_combine(&[c(1.0), c(1.0)], &[z1, other]),
            Err(HoloError::DegreeBoundMismatch { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let p = poly(2, 3, &[(&[1, 1], c(1.0))]);
        assert_eq!(p.partial_derivative(0).unwrap(), poly(2, 3, &[(&[0, 1], c(1.0))]));
        assert!(poly(2, 3, &[(&[2, 0], c(1.0))]).partial_derivative(1).unwrap().is_zero());
        let cube = poly(1, 3, &[(&[3], c(1.0))]);
        assert_eq!(cube.partial_derivative(0).unwrap(), poly(1, 3, &[(&[2], c(3.0))]));
        assert!(matches!(cube.partial_derivative(1), Err(HoloError::IndexOutOfRange { .. })));
    }

    #[test]
    fn multiply_examples() {
        let z2 = HoloPoly::variable(2, 2, 1).unwrap();
        assert_eq!(z2.multiply_by_variable(0).unwrap(), poly(2, 2, &[(&[1, 1], c(1.0))]));
        let one = HoloPoly::constant(2, 2, c(1.0));
        assert_eq!(one.multiply_by_variable(0).unwrap(), HoloPoly::variable(2, 2, 0).unwrap());
        let z2 = HoloPoly::variable(2, 1, 1).unwrap();
        assert_eq!(
            z2.multiply_by_variable(1).unwrap_err(),
            HoloError::DegreeOverflow { index: vec![0, 2], max_degree: 1 }
        );
    }

    #[test]
    fn evaluate_examples() {
        let p = poly(2, 2, &[(&[1, 1], c(1.0))]);
        assert_eq!(p.evaluate(&[c(2.0), c(3.0)]).unwrap(), c(6.0));
        assert_eq!(HoloPoly::zero(2, 2).evaluate(&[c(2.0), C64::i()]).unwrap(), c(0.0));
        let q = poly(2, 2, &[(&[2, 0], c(1.0)), (&[0, 2], c(1.0))]);
        assert!(q.evaluate(&[c(1.0), C64::i()]).unwrap().norm() < 1e-15);
        assert!(q.evaluate(&[c(1.0)]).is_err());
    }

    #[test]
    fn coefficient_matrix_examples() {
        let part = Partition::new(2, vec![0], vec![1]).unwrap();
        let m = poly(2, 2, &[(&[1, 1], c(1.0))]).coefficient_matrix(&part).unwrap();
        assert_eq!(m.matrix.shape(), (1, 1));
        assert_eq!(m.rows, vec![MultiIndex::from([1])]);
        assert_eq!(m.matrix[(0, 0)], c(1.0));

        let m = poly(2, 2, &[(&[2, 0], c(1.0)), (&[0, 2], c(1.0))]).coefficient_matrix(&part).unwrap();
        assert_eq!(m.matrix.shape(), (2, 2));
        // rows (0),(2); cols (0),(2): entries at ((2),(0)) and ((0),(2)) only.
        assert_eq!(m.matrix[(1, 0)], c(1.0));
        assert_eq!(m.matrix[(0, 1)], c(1.0));
        assert_eq!(m.matrix[(0, 0)], c(0.0));
        assert_eq!(m.matrix[(1, 1)], c(0.0));

        let m = poly(2, 1, &[(&[1, 0], c(1.0)), (&[0, 1], c(1.0))]).coefficient_matrix(&part).unwrap();
        assert_eq!(m.rank(1e-12), 2);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(2, vec![0], vec![0]).is_err());
        assert!(Partition::new(3, vec![0], vec![1]).is_err());
        assert!(Partition::new(2, vec![0], vec![2]).is_err());
        assert!(Partition::new(2, vec![], vec![0, 1]).is_err());
    }

    #[test]
    fn product_state_examples() {
        let part = Partition::new(2, vec![0], vec![1]).unwrap();
        assert!(poly(2, 4, &[(&[1, 1], c(1.0))]).is_product_state(&part, 1e-10).unwrap());
        let ent = poly(2, 4, &[(&[1, 1], c(1.0)), (&[2, 2], c(1.0))]);
        assert!(!ent.is_product_state(&part, 1e-10).unwrap());
        let scaled = poly(2, 4, &[(&[1, 1], C64::new(-2.5, 0.3))]);
        assert!(scaled.is_product_state(&part, 1e-10).unwrap());
        assert_eq!(HoloPoly::zero(2, 2).is_product_state(&part, 1e-10), Err(HoloError::ZeroState));
    }

    #[test]
    fn translation_recenters() {
        // f = z², g(w) = (w+1)² = 1 + 2w + w²
        let f = poly(1, 2, &[(&[2], c(1.0))]);
        let g = f.translated(&[c(1.0)]).unwrap();
        assert_eq!(g, poly(1, 2, &[(&[0], c(1.0)), (&[1], c(2.0)), (&[2], c(1.0))]));
    }

    #[test]
    fn display_formats() {
        let y = poly(2, 2, &[(&[2, 0], C64::new(0.0, -1.0)), (&[0, 2], C64::new(0.0, 1.0))]);
        assert_eq!(y.to_string(), "-i*z1^2+i*z2^2");
        let mixed = poly(2, 2, &[(&[0, 0], c(-0.5)), (&[1, 0], C64::new(1.0, 2.0))]);
        assert_eq!(mixed.to_string(), "-0.5+(1+2i)*z1");
        assert_eq!(HoloPoly::zero(1, 1).to_string(), "0");
    }

    #[test]
    fn json_is_sorted_and_round_trips() {
        let p = poly(2, 2, &[(&[2, 0], c(1.0)), (&[0, 2], C64::new(0.5, -1.0))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"max_degree":2,"terms":[{"idx":[0,2],"re":0.5,"im":-1.0},{"idx":[2,0],"re":1.0,"im":0.0}]}"#
        );
        let back: HoloPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"dim":2,"max_degree":1,"terms":[{"idx":[2,0],"re":1.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<HoloPoly>(bad).is_err());
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_f64(-0.0), "0");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(2.0), "2");
        assert_eq!(format_f64(2.5e-15), "2.5e-15");
        assert_eq!(format_f64(1e20), "1e20");
        for x in [0.1 + 0.2, 1.0 / 3.0, 7.484747839595928e-15, -123456.789] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_complex(C64::new(1.0, -2.0)), "1-2i");
        assert_eq!(format_complex(C64::new(0.0, 0.5)), "0.5i");
    }
}
