//! The Segal-Bargmann space `HL²(ℂ^d, μ_t)`.
//!
//! The exact inner product uses `⟨z^α|z^β⟩ = δ_{αβ} α! t^{|α|}`. Everything
//! numerical in this module (polar quadrature, the reproducing-kernel and
//! semigroup integrals, the Segal-Bargmann transform of sampled data) exists
//! to cross-check that rule or to lift real-line data into the space.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{HoloError, Result};
use crate::holostate::{factorial, HoloPoly, MultiIndex};
use crate::C64;

/// Dimension `d` and scale `t` of the Gaussian measure `e^{−|z|²/t}/(πt)^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BargmannSpace {
    dim: usize,
    t: f64,
}

impl BargmannSpace {
    pub fn new(dim: usize, t: f64) -> Result<Self> {
        if dim == 0 {
            return Err(HoloError::InvalidParameter("dimension must be positive".into()));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(HoloError::InvalidParameter(format!("scale t must be positive, got {t}")));
        }
        Ok(BargmannSpace { dim, t })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(HoloError::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    /// `⟨z^α|z^α⟩ = α! t^{|α|}`.
    pub fn monomial_norm_sq(&self, idx: &MultiIndex) -> f64 {
        idx.factorial() * self.t.powi(idx.degree() as i32)
    }

    /// `⟨f|g⟩`, conjugate-linear in `f`.
    pub fn inner_product(&self, f: &HoloPoly, g: &HoloPoly) -> Result<C64> {
        self.check_dim(f.dim())?;
        self.check_dim(g.dim())?;
        let (small, large, flip) = if f.len() <= g.len() { (f, g, false) } else { (g, f, true) };
        let mut acc = C64::new(0.0, 0.0);
        for (idx, a) in small.terms() {
            let b = large.coefficient(idx);
            if b == C64::new(0.0, 0.0) {
                continue;
            }
            let (cf, cg) = if flip { (b, *a) } else { (*a, b) };
            acc += cf.conj() * cg * self.monomial_norm_sq(idx);
        }
        Ok(acc)
    }

    /// `⟨f|f⟩ = Σ |c_α|² α! t^{|α|}`.
    pub fn norm_sq(&self, f: &HoloPoly) -> Result<f64> {
        self.check_dim(f.dim())?;
        Ok(f.terms().map(|(idx, c)| c.norm_sqr() * self.monomial_norm_sq(idx)).sum())
    }

    /// Reproducing kernel `K(z, w) = e^{z·w̄/t}`.
    pub fn kernel_eval(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        self.check_dim(z.len())?;
        self.check_dim(w.len())?;
        let s: C64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
        Ok((s / self.t).exp())
    }

    /// `⟨f|g⟩` by tensor-product polar quadrature.
    ///
    /// The measure factorizes over coordinates, so each pair of monomials is
    /// integrated as a product of one-variable plane integrals.
    pub fn inner_product_quadrature(&self, f: &HoloPoly, g: &HoloPoly, grid: &QuadratureGrid) -> Result<C64> {
        self.check_dim(f.dim())?;
        self.check_dim(g.dim())?;
        let rule = PlaneRule::new(self.t, grid);
        let mut cache: HashMap<(u32, u32), C64> = HashMap::new();
        let mut moment = |a: u32, b: u32| {
            *cache
                .entry((a, b))
                .or_insert_with(|| rule.integrate(|u| u.conj().powu(a) * u.powu(b)))
        };
        let mut acc = C64::new(0.0, 0.0);
        for (ia, ca) in f.terms() {
            for (ib, cb) in g.terms() {
                let factor: C64 = ia
                    .exponents()
                    .iter()
                    .zip(ib.exponents())
                    .map(|(&a, &b)| moment(a, b))
                    .product();
                acc += ca.conj() * cb * factor;
            }
        }
        Ok(acc)
    }

    /// Quadrature of `∫ K(z, w) f(w) dμ_t(w)`; should reproduce `f(z)`.
    pub fn kernel_reproduce(&self, f: &HoloPoly, z: &[C64], grid: &QuadratureGrid) -> Result<C64> {
        self.check_dim(f.dim())?;
        self.check_dim(z.len())?;
        let rule = PlaneRule::new(self.t, grid);
        let t = self.t;
        let mut cache: HashMap<(usize, u32), C64> = HashMap::new();
        let mut acc = C64::new(0.0, 0.0);
        for (idx, c) in f.terms() {
            let mut factor = C64::new(1.0, 0.0);
            for (v, &a) in idx.exponents().iter().enumerate() {
                factor *= *cache
                    .entry((v, a))
                    .or_insert_with(|| rule.integrate(|u| (z[v] * u.conj() / t).exp() * u.powu(a)));
            }
            acc += c * factor;
        }
        Ok(acc)
    }

    /// Quadrature of `∫ K(z, u) K(u, w) dμ_t(u)`; should equal `K(z, w)`.
    pub fn kernel_semigroup(&self, z: &[C64], w: &[C64], grid: &QuadratureGrid) -> Result<C64> {
        self.check_dim(z.len())?;
        self.check_dim(w.len())?;
        let rule = PlaneRule::new(self.t, grid);
        let t = self.t;
        Ok(z.iter()
            .zip(w)
            .map(|(&zk, &wk)| rule.integrate(|u| (zk * u.conj() / t).exp() * (u * wk.conj() / t).exp()))
            .product())
    }

    /// `⟨(z − z₀)ⁿ|f⟩` with the Gaussian centred at `z₀`, i.e. `⟨wⁿ|f(w + z₀)⟩`.
    ///
    /// Equals `n! tⁿ` times the `n`-th Taylor coefficient at `z₀`, so for
    /// `t = 1` it is exactly `f⁽ⁿ⁾(z₀)`.
    pub fn derivative_at(&self, f: &HoloPoly, n: u32, z0: C64) -> Result<C64> {
        if self.dim != 1 || f.dim() != 1 {
            return Err(HoloError::DimensionMismatch {
                expected: 1,
                found: f.dim().max(self.dim),
            });
        }
        if n > f.max_degree() {
            return Err(HoloError::DegreeOverflow {
                index: vec![n],
                max_degree: f.max_degree(),
            });
        }
        let centred = f.translated(&[z0])?;
        let probe = HoloPoly::monomial(1, f.max_degree(), MultiIndex::new(vec![n]), C64::new(1.0, 0.0))?;
        self.inner_product(&probe, &centred)
    }

    fn check_single_variable(&self) -> Result<()> {
        if self.dim != 1 {
            return Err(HoloError::DimensionMismatch {
                expected: 1,
                found: self.dim,
            });
        }
        Ok(())
    }

    fn sb_kernel(&self, z: C64, x: f64) -> C64 {
        ((-z * z + 2.0 * 2f64.sqrt() * z * x - x * x) / (2.0 * self.t)).exp()
    }

    /// `B_t f(z) = (πt)^{-1/4} ∫ e^{(−z² + 2√2 z x − x²)/2t} f(x) dx` on the
    /// sample rule. Applies to one real variable at a time.
    pub fn sb_transform(&self, samples: &SampledFunction, z: C64) -> Result<C64> {
        self.check_single_variable()?;
        let n = samples.len();
        if n == 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let envelope = [0, n - 1]
            .iter()
            .map(|&j| (self.sb_kernel(z, samples.nodes[j]) * samples.values[j]).norm())
            .fold(0.0, f64::max);
        if envelope > SB_TAIL_TOL {
            return Err(HoloError::TruncatedTails { envelope });
        }
        let sum: C64 = samples
            .nodes
            .iter()
            .zip(&samples.weights)
            .zip(&samples.values)
            .map(|((&x, &w), &v)| self.sb_kernel(z, x) * v * w)
            .sum();
        Ok(sum * (PI * self.t).powf(-0.25))
    }

    /// Taylor coefficients of `B_t f` up to `degree`, as a one-variable state.
    ///
    /// Uses the Hermite generating function
    /// `e^{(−z² + 2√2 z x)/2t} = Σ Hₙ(x/√t) (z/√(2t))ⁿ / n!`, so each coefficient
    /// is a single quadrature over the samples.
    pub fn sb_taylor(&self, samples: &SampledFunction, degree: u32) -> Result<HoloPoly> {
        self.check_single_variable()?;
        let t = self.t;
        let pref = (PI * t).powf(-0.25);
        let mut coeffs = vec![C64::new(0.0, 0.0); degree as usize + 1];
        for ((&x, &w), &v) in samples.nodes.iter().zip(&samples.weights).zip(&samples.values) {
            let y = x / t.sqrt();
            let base = v * w * (-x * x / (2.0 * t)).exp();
            let (mut h_prev, mut h) = (0.0, 1.0);
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c += base * h;
                let next = 2.0 * y * h - 2.0 * n as f64 * h_prev;
                h_prev = h;
                h = next;
            }
        }
        let scale = (2.0 * t).sqrt();
        let terms = coeffs.into_iter().enumerate().map(|(n, c)| {
            let norm = pref / (scale.powi(n as i32) * factorial(n as u32));
            (MultiIndex::new(vec![n as u32]), c * norm)
        });
        let p = HoloPoly::from_terms(1, degree, terms)?;
        let top = p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        Ok(p.pruned(SB_COEFF_FLOOR * top.max(1.0)))
    }
}

/// Endpoint envelope above which a sampled transform is rejected.
pub const SB_TAIL_TOL: f64 = 1e-12;

// Relative floor below which lifted Taylor coefficients are treated as quadrature noise.
const SB_COEFF_FLOOR: f64 = 1e-14;

/// Node counts and radial cutoff for the polar quadrature oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid {
    radial: usize,
    angular: usize,
    cutoff: f64,
}

impl QuadratureGrid {
    pub fn new(radial: usize, angular: usize, cutoff: f64) -> Result<Self> {
        if radial < 4 || angular < 4 {
            return Err(HoloError::InvalidParameter(format!(
                "quadrature node counts must be at least 4, got {radial}x{angular}"
            )));
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(HoloError::InvalidParameter(format!("radial cutoff must be positive, got {cutoff}")));
        }
        Ok(QuadratureGrid { radial, angular, cutoff })
    }

    /// 128 × 128 nodes with cutoff `10√t`.
    pub fn for_space(space: &BargmannSpace) -> Self {
        QuadratureGrid {
            radial: 128,
            angular: 128,
            cutoff: 10.0 * space.t().sqrt(),
        }
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }
}

/// One-variable rule for `∫_ℂ h(u) e^{−|u|²/t} du / (πt)`: Gauss-Legendre in
/// the radius, trapezoidal in the angle.
struct PlaneRule {
    points: Vec<(C64, f64)>,
}

impl PlaneRule {
    fn new(t: f64, grid: &QuadratureGrid) -> Self {
        let gl = GaussLegendre::new(NonZeroUsize::new(grid.radial).expect("radial ≥ 4"));
        let half = grid.cutoff / 2.0;
        let dtheta = 2.0 * PI / grid.angular as f64;
        let mut points = Vec::with_capacity(grid.radial * grid.angular);
        for (x, wr) in gl.iter() {
            let r = half * (x + 1.0);
            let radial_w = wr * half * r * (-r * r / t).exp() / (PI * t);
            for j in 0..grid.angular {
                let theta = j as f64 * dtheta;
                points.push((C64::from_polar(r, theta), radial_w * dtheta));
            }
        }
        PlaneRule { points }
    }

    fn integrate(&self, h: impl Fn(C64) -> C64) -> C64 {
        self.points.iter().map(|&(u, w)| h(u) * w).sum()
    }
}

/// Values of a real-line function on a quadrature rule.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<C64>,
}

impl SampledFunction {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.len() != values.len() {
            return Err(HoloError::InvalidParameter(format!(
                "sample rule lengths differ: {} nodes, {} weights, {} values",
                nodes.len(),
                weights.len(),
                values.len()
            )));
        }
        if nodes.iter().chain(&weights).any(|v| !v.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(HoloError::InvalidParameter("non-finite sample".into()));
        }
        Ok(SampledFunction { nodes, weights, values })
    }

    /// Trapezoidal rule over `n ≥ 2` equally spaced nodes on `[x_min, x_max]`.
    pub fn uniform(x_min: f64, x_max: f64, n: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        if n < 2 || x_max.partial_cmp(&x_min) != Some(std::cmp::Ordering::Greater) {
            return Err(HoloError::InvalidParameter(format!(
                "uniform rule needs n ≥ 2 and x_max > x_min, got n={n} on [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|j| x_min + j as f64 * dx).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, trapezoid_weights(n, dx), values)
    }

    /// Real grid data starting at `x_min` with spacing `dx` (e.g. PDE output).
    pub fn from_grid(x_min: f64, dx: f64, values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 || dx.is_nan() || dx <= 0.0 {
            return Err(HoloError::InvalidParameter("grid needs at least 2 cells and dx > 0".into()));
        }
        let nodes = (0..n).map(|j| x_min + j as f64 * dx).collect();
        let values = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        Self::new(nodes, trapezoid_weights(n, dx), values)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Same rule, values scaled by `c`.
    pub fn scaled(&self, c: C64) -> Self {
        SampledFunction {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

fn trapezoid_weights(n: usize, dx: f64) -> Vec<f64> {
    let mut w = vec![dx; n];
    w[0] = dx / 2.0;
    w[n - 1] = dx / 2.0;
    w
}

/// First- or second-order forward difference of `f` at `z0` with step `h`.
pub fn forward_difference(f: impl Fn(C64) -> C64, z0: C64, h: C64, order: u32) -> Result<C64> {
    if h == C64::new(0.0, 0.0) {
        return Err(HoloError::InvalidParameter("step h must be nonzero".into()));
    }
    match order {
        1 => Ok((f(z0 + h) - f(z0)) / h),
        2 => Ok((f(z0 + 2.0 * h) - 2.0 * f(z0 + h) + f(z0)) / (h * h)),
        other => Err(HoloError::InvalidOrder(other)),
    }
}

/// Rising factorial `(x)_n`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).map(|k| x + f64::from(k)).product()
}

/// The `n`-th coefficient ratio `Π(a_i)_n / Π(b_j)_n` of `ₚF_q`, computed twice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeometricCoefficient {
    /// Product of Pochhammer symbols.
    pub direct: f64,
    /// `⟨zⁿ|ₚF_q⟩` in `HL²(ℂ, μ₁)` against the series truncated at degree `n`.
    pub via_inner_product: f64,
}

/// Relative agreement required between the two hypergeometric routes.
pub const HYPERGEOMETRIC_TOL: f64 = 1e-10;

pub fn hypergeometric_coefficient(upper: &[f64], lower: &[f64], n: u32) -> Result<HypergeometricCoefficient> {
    for &b in lower {
        // (b)_k vanishes for some k ≤ n exactly when b ∈ {0, −1, …, −(n−1)}.
        if b <= 0.0 && b.fract() == 0.0 && b > -f64::from(n) {
            return Err(HoloError::Pole { param: b, n });
        }
    }
    let direct = upper.iter().map(|&a| pochhammer(a, n)).product::<f64>()
        / lower.iter().map(|&b| pochhammer(b, n)).product::<f64>();

    // Series coefficients by term ratio: c_{k+1} = c_k Π(a+k) / (Π(b+k) (k+1)).
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c = 1.0;
    for k in 0..=n {
        coeffs.push(c);
        let kf = f64::from(k);
        c *= upper.iter().map(|a| a + kf).product::<f64>() / lower.iter().map(|b| b + kf).product::<f64>() / (kf + 1.0);
    }
    let series = HoloPoly::from_terms(
        1,
        n,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (MultiIndex::new(vec![k as u32]), C64::new(c, 0.0))),
    )?;
    let probe = HoloPoly::monomial(1, n, MultiIndex::new(vec![n]), C64::new(1.0, 0.0))?;
    let via_inner_product = BargmannSpace::new(1, 1.0)?.inner_product(&probe, &series)?.re;

    let scale = direct.abs().max(via_inner_product.abs());
    if (direct - via_inner_product).abs() > HYPERGEOMETRIC_TOL * scale {
        return Err(HoloError::Reconciliation { direct, via_inner_product });
    }
    Ok(HypergeometricCoefficient { direct, via_inner_product })
}
