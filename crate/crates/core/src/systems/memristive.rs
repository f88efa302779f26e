use crate::error::{HoloError, Result};

/// One row of a memristive trajectory. In the machine reading the input is
/// the stimulus `S`, the state is the memory `Q` and the readout the response `R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemristiveSample {
    pub step: usize,
    pub t: f64,
    pub u: f64,
    pub x: f64,
    pub y: f64,
}

impl MemristiveSample {
    pub fn stimulus(&self) -> f64 {
        self.u
    }

    pub fn memory(&self) -> f64 {
        self.x
    }

    pub fn response(&self) -> f64 {
        self.y
    }
}

/// Integrate `ẋ = f(x, u, t)` by classical RK4 and read out `y = g(x, u, t)·u`.
///
/// `u[k]` is the input at `t = k·dt`, held constant across step `k`; it must
/// hold at least `steps + 1` samples. The trajectory has `steps + 1` rows.
pub fn simulate_memristive<F, G>(f: F, g: G, x0: f64, u: &[f64], dt: f64, steps: usize) -> Result<Vec<MemristiveSample>>
where
    F: Fn(f64, f64, f64) -> f64,
    G: Fn(f64, f64, f64) -> f64,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(HoloError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if u.len() < steps + 1 {
        return Err(HoloError::InvalidParameter(format!(
            "input has {} samples, need {} for {steps} steps",
            u.len(),
            steps + 1
        )));
    }
    if !x0.is_finite() {
        return Err(HoloError::Divergence { step: 0 });
    }
    let sample = |k: usize, x: f64| -> Result<MemristiveSample> {
        let t = k as f64 * dt;
        let y = g(x, u[k], t) * u[k];
        if !y.is_finite() {
            return Err(HoloError::Divergence { step: k });
        }
        Ok(MemristiveSample { step: k, t, u: u[k], x, y })
    };

    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(sample(0, x)?);
    for (k, &uk) in u.iter().enumerate().take(steps) {
        let t = k as f64 * dt;
        let k1 = f(x, uk, t);
        let k2 = f(x + 0.5 * dt * k1, uk, t + 0.5 * dt);
        let k3 = f(x + 0.5 * dt * k2, uk, t + 0.5 * dt);
        let k4 = f(x + dt * k3, uk, t + dt);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !x.is_finite() {
            return Err(HoloError::Divergence { step: k + 1 });
        }
        out.push(sample(k + 1, x)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_state() {
        let traj = simulate_memristive(|_, _, _| 0.0, |_, _, _| 1.0, 5.0, &[2.0; 11], 0.1, 10).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.iter().all(|s| s.memory() == 5.0 && s.response() == 2.0 && s.stimulus() == 2.0));
    }

    #[test]
    fn linear_decay() {
        let traj = simulate_memristive(|x, _, _| -x, |_, _, _| 1.0, 1.0, &[0.0; 101], 0.01, 100).unwrap();
        let last = traj.last().unwrap();
        assert!((last.t - 1.0).abs() < 1e-12);
        assert!((last.x - (-1.0f64).exp()).abs() < 1e-6);
        assert!(traj.iter().all(|s| s.y == 0.0));
    }

    #[test]
    fn errors() {
        let f = |x: f64, _: f64, _: f64| x * x;
        assert_eq!(
            simulate_memristive(f, |_, _, _| 1.0, 1e100, &[0.0; 20], 1.0, 10),
            Err(HoloError::Divergence { step: 1 })
        );
        assert!(simulate_memristive(f, |_, _, _| 1.0, 1.0, &[0.0; 2], 0.1, 10).is_err());
        assert!(simulate_memristive(f, |_, _, _| 1.0, 1.0, &[0.0; 2], 0.0, 1).is_err());
    }
}
