use nalgebra::DMatrix;

use crate::bargmann::BargmannSpace;
use crate::error::{HoloError, Result};
use crate::gates::{expectation, GateName, Normalization};
use crate::holostate::{HoloPoly, MultiIndex};
use crate::C64;

/// Eigenvalues of `ω²` below `−INSTABILITY_TOL` are reported as unstable.
pub const INSTABILITY_TOL: f64 = 1e-10;

/// Two pendulums of equal length coupled by a spring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendulumParams {
    omega0: f64,
    coupling: f64,
    pub alpha: C64,
    pub beta: C64,
    pub phi: f64,
    pub varphi: f64,
}

impl PendulumParams {
    /// Unit amplitudes and zero phases.
    pub fn new(omega0: f64, coupling: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(HoloError::InvalidParameter(format!("omega0 must be positive, got {omega0}")));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(HoloError::InvalidParameter(format!("coupling must be non-negative, got {coupling}")));
        }
        Ok(PendulumParams {
            omega0,
            coupling,
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(1.0, 0.0),
            phi: 0.0,
            varphi: 0.0,
        })
    }

    pub fn with_amplitudes(mut self, alpha: C64, beta: C64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn with_phases(mut self, phi: f64, varphi: f64) -> Self {
        self.phi = phi;
        self.varphi = varphi;
        self
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Antisymmetric mode frequency `√(ω₀² + 2s/M)`.
    pub fn omega(&self) -> f64 {
        (self.omega0 * self.omega0 + 2.0 * self.coupling).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PendulumState {
    /// `αβ z₁z₂`.
    pub state: HoloPoly,
    /// `(e^{i(ω₀t+φ)}, e^{i(ωt+ϕ)})`.
    pub z: [C64; 2],
    pub omega0: f64,
    pub omega: f64,
}

impl PendulumState {
    /// The state evaluated at its phase point.
    pub fn value(&self) -> C64 {
        self.state.evaluate(&self.z).expect("two variables")
    }
}

pub fn pendulum_state(params: &PendulumParams, time: f64) -> PendulumState {
    let omega = params.omega();
    let state = HoloPoly::monomial(2, 2, MultiIndex::new(vec![1, 1]), params.alpha * params.beta)
        .expect("degree 2 fits");
    PendulumState {
        state,
        z: [
            C64::from_polar(1.0, params.omega0 * time + params.phi),
            C64::from_polar(1.0, omega * time + params.varphi),
        ],
        omega0: params.omega0,
        omega,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateRow {
    pub gate: GateName,
    pub image: HoloPoly,
    pub expectation: C64,
}

/// X, Y, Z, I and H applied to the pendulum state, with normalized expectations.
pub fn pendulum_gate_table(params: &PendulumParams) -> Result<Vec<GateRow>> {
    let f = pendulum_state(params, 0.0).state;
    if f.is_zero() {
        return Err(HoloError::ZeroState);
    }
    let space = BargmannSpace::new(2, 1.0)?;
    [GateName::X, GateName::Y, GateName::Z, GateName::I, GateName::H]
        .into_iter()
        .map(|gate| {
            let op = gate.operator()?;
            Ok(GateRow {
                image: op.apply(&f)?,
                expectation: expectation(&space, &op, &f, Normalization::Normalized)?,
                gate,
            })
        })
        .collect()
}

/// Eigenfrequencies of `ẍ + ω² x = 0`, ascending.
pub fn normal_modes(freq_sq: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (rows, cols) = freq_sq.shape();
    if rows != cols {
        return Err(HoloError::NotSquare { rows, cols });
    }
    let scale = freq_sq.amax().max(1.0);
    if (freq_sq - freq_sq.transpose()).amax() > 1e-12 * scale {
        return Err(HoloError::InvalidParameter("frequency matrix is not symmetric".into()));
    }
    if rows == 0 {
        return Ok(Vec::new());
    }
    let eig = freq_sq.clone().symmetric_eigen();
    let mut out = Vec::with_capacity(rows);
    for &ev in eig.eigenvalues.iter() {
        if ev < -INSTABILITY_TOL {
            return Err(HoloError::Instability { eigenvalue: ev });
        }
        out.push(ev.max(0.0).sqrt());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn poly(terms: &[(&[u32], C64)]) -> HoloPoly {
        HoloPoly::from_terms(2, 2, terms.iter().map(|(i, v)| (MultiIndex::new(i.to_vec()), *v))).unwrap()
    }

    #[test]
    fn mode_frequencies() {
        assert_eq!(PendulumParams::new(1.3, 0.0).unwrap().omega(), 1.3);
        assert_eq!(PendulumParams::new(1.0, 1.5).unwrap().omega(), 2.0);
        let weak = PendulumParams::new(1.0, 1e-8).unwrap().omega();
        assert!(weak >= 1.0 && weak - 1.0 < 1e-7);
        assert!(PendulumParams::new(0.0, 1.0).is_err());
        assert!(PendulumParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn state_and_norm() {
        let p = PendulumParams::new(1.0, 1.5).unwrap();
        let s = pendulum_state(&p, 0.0);
        assert_eq!(s.state, poly(&[(&[1, 1], C64::new(1.0, 0.0))]));
        assert_eq!(BargmannSpace::new(2, 1.0).unwrap().norm_sq(&s.state).unwrap(), 1.0);
        assert_eq!(s.value(), C64::new(1.0, 0.0));
        let later = pendulum_state(&p, 0.5);
        assert!((later.z[1] - C64::from_polar(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn gate_table() {
        let rows = pendulum_gate_table(&PendulumParams::new(1.0, 1.5).unwrap()).unwrap();
        let one = C64::new(1.0, 0.0);
        let x_img = poly(&[(&[2, 0], one), (&[0, 2], one)]);
        assert_eq!(rows[0].gate, GateName::X);
        assert_eq!(rows[0].image, x_img);
        assert_eq!(rows[1].image, poly(&[(&[2, 0], -C64::i()), (&[0, 2], C64::i())]));
        assert!(rows[2].image.is_zero());
        assert_eq!(rows[3].image, poly(&[(&[1, 1], C64::new(2.0, 0.0))]));
        assert_eq!(rows[4].image, x_img.scale(C64::new(FRAC_1_SQRT_2, 0.0)));
        for r in &rows {
            let expected = if r.gate == GateName::I { 2.0 } else { 0.0 };
            assert!((r.expectation - expected).norm() < 1e-12, "{}", r.gate);
        }
    }

    #[test]
    fn normal_mode_examples() {
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]);
        assert_eq!(normal_modes(&d).unwrap(), vec![1.0, 2.0]);
        let m = DMatrix::from_row_slice(2, 2, &[2.5, -1.5, -1.5, 2.5]);
        let w = normal_modes(&m).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 2.0).abs() < 1e-12);
        assert_eq!(normal_modes(&DMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
        let unstable = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(normal_modes(&unstable), Err(HoloError::Instability { .. })));
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(normal_modes(&skew).is_err());
    }
}
