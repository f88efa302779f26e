//! First-order gates through the Cauchy integral formula.
//!
//! `∂_j f(z) = (1/2πi) ∮ f(…, ξ_j, …) / (ξ_j − z_j)² dξ_j` is evaluated by the
//! trapezoidal rule on a circle around each point of a roots-of-unity lattice;
//! the lattice values are turned back into coefficients by an inverse discrete
//! Fourier transform along every axis.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use super::DiffOp;
use crate::error::{HoloError, Result};
use crate::holostate::{HoloPoly, MultiIndex};
use crate::C64;

pub const MIN_CONTOUR_NODES: usize = 16;

// Relative floor below which reconstructed coefficients are rounding noise.
const NOISE_FLOOR: f64 = 1e-12;

/// Apply a first-order operator (`|β| = 1` in every term) with all
/// derivatives taken as contour integrals of radius `radius` with `nodes`
/// trapezoidal points.
pub fn apply_via_cauchy(op: &DiffOp, f: &HoloPoly, radius: f64, nodes: usize) -> Result<HoloPoly> {
    if op.dim() != f.dim() {
        return Err(HoloError::DimensionMismatch {
            expected: op.dim(),
            found: f.dim(),
        });
    }
    if op.terms().any(|(_, beta, _)| beta.degree() != 1) {
        return Err(HoloError::NotFirstOrder);
    }
    let required = MIN_CONTOUR_NODES.max(2 * (f.max_degree() as usize + 2));
    if nodes < required {
        return Err(HoloError::InsufficientNodes { nodes, required });
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(HoloError::InvalidParameter(format!("contour radius must be positive, got {radius}")));
    }

    let vars: BTreeSet<usize> = op
        .terms()
        .map(|(_, beta, _)| beta.exponents().iter().position(|&e| e == 1).expect("|β| = 1"))
        .collect();
    let derivatives: Vec<(usize, HoloPoly)> = vars
        .into_iter()
        .map(|j| Ok((j, contour_derivative(f, j, radius, nodes)?)))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (alpha, beta, c) in op.terms() {
        let j = beta.exponents().iter().position(|&e| e == 1).expect("|β| = 1");
        let (_, df) = derivatives.iter().find(|(v, _)| *v == j).expect("computed above");
        for (gamma, g) in df.terms() {
            out.push((gamma.add(alpha), c * g));
        }
    }
    let image = HoloPoly::from_terms(f.dim(), f.max_degree(), out)?;
    let top = image.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    Ok(image.pruned(NOISE_FLOOR * top.max(1.0)))
}

/// `∂_j f` reconstructed from contour-integral values on a lattice.
fn contour_derivative(f: &HoloPoly, j: usize, radius: f64, nodes: usize) -> Result<HoloPoly> {
    let dim = f.dim();
    // Per-axis lattice sizes large enough for the exponents of f, which bound those of ∂_j f.
    let sizes: Vec<usize> = f.partial_degrees().iter().map(|&p| p as usize + 1).collect();
    let total: usize = sizes.iter().product();

    let shifts: Vec<C64> = (0..nodes)
        .map(|q| C64::from_polar(radius, 2.0 * PI * q as f64 / nodes as f64))
        .collect();

    let mut values = Vec::with_capacity(total);
    let mut point = vec![C64::new(0.0, 0.0); dim];
    for flat in 0..total {
        let mut rem = flat;
        for (k, &m) in sizes.iter().enumerate() {
            let s = rem % m;
            rem /= m;
            point[k] = C64::from_polar(1.0, 2.0 * PI * s as f64 / m as f64);
        }
        let centre = point[j];
        let mut acc = C64::new(0.0, 0.0);
        for &h in &shifts {
            point[j] = centre + h;
            acc += f.evaluate(&point)? / h;
        }
        point[j] = centre;
        values.push(acc / nodes as f64);
    }

    // Inverse DFT along each axis; the lattice radius is 1 so no rescaling.
    let mut stride = 1;
    for &m in &sizes {
        if m > 1 {
            let mut line = vec![C64::new(0.0, 0.0); m];
            for base in 0..total {
                if (base / stride) % m != 0 {
                    continue;
                }
                for (n, slot) in line.iter_mut().enumerate() {
                    *slot = (0..m)
                        .map(|s| values[base + s * stride] * C64::from_polar(1.0, -2.0 * PI * (s * n) as f64 / m as f64))
                        .sum::<C64>()
                        / m as f64;
                }
                for (n, v) in line.iter().enumerate() {
                    values[base + n * stride] = *v;
                }
            }
        }
        stride *= m;
    }

    let terms = values.into_iter().enumerate().filter_map(|(flat, v)| {
        let mut rem = flat;
        let exps: Vec<u32> = sizes
            .iter()
            .map(|&m| {
                let e = rem % m;
                rem /= m;
                e as u32
            })
            .collect();
        let idx = MultiIndex::new(exps);
        // Aliased slots above the degree bound carry only rounding noise.
        (idx.degree() < f.max_degree().max(1)).then_some((idx, v))
    });
    HoloPoly::from_terms(dim, f.max_degree(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{standard_gate, GateName};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn poly(d: usize, deg: u32, terms: &[(&[u32], C64)]) -> HoloPoly {
        HoloPoly::from_terms(d, deg, terms.iter().map(|(i, v)| (MultiIndex::new(i.to_vec()), *v))).unwrap()
    }

    #[test]
    fn x_on_product_state() {
        let x = standard_gate(&GateName::X).unwrap();
        let f = poly(2, 2, &[(&[1, 1], c(1.0))]);
        let img = apply_via_cauchy(&x, &f, 1.0, 64).unwrap();
        assert!(img.approx_eq(&poly(2, 2, &[(&[2, 0], c(1.0)), (&[0, 2], c(1.0))]), 1e-8));
    }

    #[test]
    fn identity_and_y_on_z1() {
        let z1 = poly(2, 1, &[(&[1, 0], c(1.0))]);
        let id = standard_gate(&GateName::I).unwrap();
        assert!(apply_via_cauchy(&id, &z1, 1.0, 16).unwrap().approx_eq(&z1, 1e-10));
        let y = standard_gate(&GateName::Y).unwrap();
        let img = apply_via_cauchy(&y, &z1, 1.0, 16).unwrap();
        assert!(img.approx_eq(&poly(2, 1, &[(&[0, 1], C64::i())]), 1e-8));
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = standard_gate(&GateName::X).unwrap();
        let f = poly(2, 10, &[(&[1, 1], c(1.0))]);
        assert_eq!(
            apply_via_cauchy(&x, &f, 1.0, 16),
            Err(HoloError::InsufficientNodes { nodes: 16, required: 24 })
        );
        assert_eq!(
            apply_via_cauchy(&crate::gates::hamiltonian(), &poly(1, 1, &[(&[1], c(1.0))]), 1.0, 64),
            Err(HoloError::NotFirstOrder)
        );
        assert!(apply_via_cauchy(&x, &f, 0.0, 64).is_err());
    }
}
