use std::str::FromStr;

use crate::bargmann::{BargmannSpace, SampledFunction};
use crate::error::{HoloError, Result};
use crate::holostate::HoloPoly;
use crate::C64;

/// FitzHugh-Nagumo reaction-diffusion on a periodic 1-D grid.
///
/// `ȧ = Da ∇²a + a − a³ − b + α`, `ḃ = Db ∇²b + β(a − b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RdConfig {
    n: usize,
    dx: f64,
    da: f64,
    db: f64,
    alpha: f64,
    beta: f64,
    dt: f64,
    steps: usize,
}

impl RdConfig {
    /// Rejects `dt > dx² / (4 max(Da, Db))`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(n: usize, dx: f64, da: f64, db: f64, alpha: f64, beta: f64, dt: f64, steps: usize) -> Result<Self> {
        let bad = |what: &str| Err(HoloError::InvalidParameter(what.to_string()));
        if n == 0 {
            return bad("grid needs at least one cell");
        }
        if !(dx.is_finite() && dx > 0.0) || !(dt.is_finite() && dt > 0.0) {
            return bad("dx and dt must be positive");
        }
        if !(da.is_finite() && da >= 0.0 && db.is_finite() && db >= 0.0) {
            return bad("diffusion constants must be non-negative");
        }
        if !(alpha.is_finite() && beta.is_finite()) {
            return bad("reaction constants must be finite");
        }
        let d = da.max(db);
        if d > 0.0 && dt > dx * dx / (4.0 * d) {
            return Err(HoloError::InvalidParameter(format!(
                "dt = {dt} exceeds the stability bound dx²/(4·max(Da,Db)) = {}",
                dx * dx / (4.0 * d)
            )));
        }
        Ok(RdConfig {
            n,
            dx,
            da,
            db,
            alpha,
            beta,
            dt,
            steps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn da(&self) -> f64 {
        self.da
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// `key = value` lines with keys `n dx da db alpha beta dt steps`; `#` starts a comment.
impl FromStr for RdConfig {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        let mut vals: [Option<f64>; 8] = [None; 8];
        const KEYS: [&str; 8] = ["n", "dx", "da", "db", "alpha", "beta", "dt", "steps"];
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HoloError::InvalidParameter(format!("line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().to_ascii_lowercase();
            let slot = KEYS
                .iter()
                .position(|&name| name == key)
                .ok_or_else(|| HoloError::InvalidParameter(format!("line {}: unknown key `{}`", lineno + 1, k.trim())))?;
            let parsed: f64 = v
                .trim()
                .parse()
                .map_err(|_| HoloError::InvalidParameter(format!("line {}: bad number `{}`", lineno + 1, v.trim())))?;
            vals[slot] = Some(parsed);
        }
        let get = |i: usize| vals[i].ok_or_else(|| HoloError::InvalidParameter(format!("missing key `{}`", KEYS[i])));
        let count = |i: usize| -> Result<usize> {
            let v = get(i)?;
            if v < 0.0 || v.fract() != 0.0 || v > usize::MAX as f64 {
                return Err(HoloError::InvalidParameter(format!("`{}` must be a non-negative integer", KEYS[i])));
            }
            Ok(v as usize)
        };
        RdConfig::new(count(0)?, get(1)?, get(2)?, get(3)?, get(4)?, get(5)?, get(6)?, count(7)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fields {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Explicit Euler in time with the three-point Laplacian and periodic wrap.
pub fn simulate_fhn(config: &RdConfig, a0: &[f64], b0: &[f64]) -> Result<Fields> {
    let n = config.n;
    for field in [a0, b0] {
        if field.len() != n {
            return Err(HoloError::DimensionMismatch {
                expected: n,
                found: field.len(),
            });
        }
    }
    if a0.iter().chain(b0).any(|v| !v.is_finite()) {
        return Err(HoloError::Divergence { step: 0 });
    }
    let inv_dx2 = 1.0 / (config.dx * config.dx);
    let (mut a, mut b) = (a0.to_vec(), b0.to_vec());
    let (mut na, mut nb) = (vec![0.0; n], vec![0.0; n]);
    for step in 1..=config.steps {
        for i in 0..n {
            let (l, r) = ((i + n - 1) % n, (i + 1) % n);
            let lap_a = (a[l] + a[r] - 2.0 * a[i]) * inv_dx2;
            let lap_b = (b[l] + b[r] - 2.0 * b[i]) * inv_dx2;
            let f = a[i] - a[i] * a[i] * a[i] - b[i] + config.alpha;
            let g = config.beta * (a[i] - b[i]);
            na[i] = a[i] + config.dt * (config.da * lap_a + f);
            nb[i] = b[i] + config.dt * (config.db * lap_b + g);
        }
        if na.iter().chain(&nb).any(|v| !v.is_finite()) {
            return Err(HoloError::Divergence { step });
        }
        std::mem::swap(&mut a, &mut na);
        std::mem::swap(&mut b, &mut nb);
    }
    Ok(Fields { a, b })
}

/// `â(z₁) b̂(z₂)`, the product of the per-field transforms.
pub fn fields_to_state(
    space: &BargmannSpace,
    a: &SampledFunction,
    b: &SampledFunction,
    z1: C64,
    z2: C64,
) -> Result<C64> {
    Ok(space.sb_transform(a, z1)? * space.sb_transform(b, z2)?)
}

/// Truncated Taylor form of the joint state, `â ⊗ b̂`, in two variables.
pub fn fields_to_poly(space: &BargmannSpace, a: &SampledFunction, b: &SampledFunction, degree: u32) -> Result<HoloPoly> {
    Ok(space.sb_taylor(a, degree)?.tensor(&space.sb_taylor(b, degree)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holostate::Partition;
    use std::f64::consts::PI;

    fn config(n: usize, d: f64, alpha: f64, beta: f64, dt: f64, steps: usize) -> RdConfig {
        RdConfig::new(n, 1.0, d, d, alpha, beta, dt, steps).unwrap()
    }

    #[test]
    fn zero_stays_zero() {
        let c = config(16, 0.1, 0.0, 1.0, 0.1, 1000);
        let out = simulate_fhn(&c, &[0.0; 16], &[0.0; 16]).unwrap();
        assert!(out.a.iter().chain(&out.b).all(|&v| v == 0.0));
    }

    #[test]
    fn homogeneous_fixed_point() {
        let alpha = 0.3;
        let star = f64::cbrt(alpha);
        assert!((star - 0.6694).abs() < 1e-4);
        let c = config(8, 0.2, alpha, 1.0, 0.01, 10_000);
        let out = simulate_fhn(&c, &[star; 8], &[star; 8]).unwrap();
        assert!(out.a.iter().chain(&out.b).all(|v| (v - star).abs() < 1e-10));
    }

    #[test]
    fn stability_bound_enforced() {
        assert!(RdConfig::new(4, 1.0, 1.0, 0.5, 0.0, 1.0, 0.25, 1).is_ok());
        assert!(RdConfig::new(4, 1.0, 1.0, 0.5, 0.0, 1.0, 0.26, 1).is_err());
        assert!(RdConfig::new(4, 1.0, 0.0, 0.0, 0.0, 1.0, 5.0, 1).is_ok());
    }

    #[test]
    fn config_from_text() {
        let text = "# demo\nn = 4\ndx=1\nda=0.1\ndb = 0.1\nalpha=0\nbeta=1\ndt=0.5\nsteps=3\n";
        let c: RdConfig = text.parse().unwrap();
        assert_eq!(c, RdConfig::new(4, 1.0, 0.1, 0.1, 0.0, 1.0, 0.5, 3).unwrap());
        assert!("n=4".parse::<RdConfig>().is_err());
        assert!("n=4\nfoo=1".parse::<RdConfig>().is_err());
        assert!("n=4.5\ndx=1\nda=0\ndb=0\nalpha=0\nbeta=1\ndt=1\nsteps=1".parse::<RdConfig>().is_err());
    }

    #[test]
    fn length_mismatch() {
        let c = config(4, 0.0, 0.0, 1.0, 0.1, 1);
        assert!(simulate_fhn(&c, &[0.0; 3], &[0.0; 4]).is_err());
    }

    fn gaussian_samples() -> SampledFunction {
        SampledFunction::uniform(-12.0, 12.0, 2401, |x| C64::new(PI.powf(-0.25) * (-x * x / 2.0).exp(), 0.0)).unwrap()
    }

    #[test]
    fn gaussian_fields_give_unit_state() {
        let s = BargmannSpace::new(1, 1.0).unwrap();
        let g = gaussian_samples();
        for (z1, z2) in [(C64::new(0.0, 0.0), C64::new(0.3, -0.2)), (C64::new(1.0, 0.5), C64::new(-0.7, 0.1))] {
            let v = fields_to_state(&s, &g, &g, z1, z2).unwrap();
            assert!((v - 1.0).norm() < 1e-8, "{v}");
        }
        let zero = g.scaled(C64::new(0.0, 0.0));
        assert_eq!(fields_to_state(&s, &zero, &g, C64::new(0.2, 0.0), C64::new(0.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn joint_poly_is_product() {
        let s = BargmannSpace::new(1, 1.0).unwrap();
        let a = SampledFunction::uniform(-12.0, 12.0, 2401, |x| C64::new((1.0 + x) * (-x * x / 2.0).exp(), 0.0)).unwrap();
        let b = gaussian_samples();
        let p = fields_to_poly(&s, &a, &b, 4).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(p.is_product_state(&Partition::split_at(2, 1).unwrap(), 1e-10).unwrap());
    }
}
