use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::DiffOp;
use crate::error::{HoloError, Result};
use crate::holostate::MultiIndex;
use crate::C64;

/// Named gates. Multi-qubit gates use the one-hot encoding
/// `|b₁…b_k⟩ ↔ z_{1 + Σ b_i 2^{k−i}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateName {
    X,
    Y,
    Z,
    I,
    H,
    S,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cnot,
    Swap,
    Toffoli,
    Fredkin,
    IdentityN(usize),
}

impl GateName {
    /// Number of variables the gate acts on.
    pub fn dim(&self) -> usize {
        match self {
            GateName::Cnot | GateName::Swap => 4,
            GateName::Toffoli | GateName::Fredkin => 8,
            GateName::IdentityN(n) => *n,
            _ => 2,
        }
    }

    pub fn operator(&self) -> Result<DiffOp> {
        standard_gate(self)
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::X => write!(f, "X"),
            GateName::Y => write!(f, "Y"),
            GateName::Z => write!(f, "Z"),
            GateName::I => write!(f, "I"),
            GateName::H => write!(f, "H"),
            GateName::S => write!(f, "S"),
            GateName::Rx(t) => write!(f, "Rx:{t}"),
            GateName::Ry(t) => write!(f, "Ry:{t}"),
            GateName::Rz(t) => write!(f, "Rz:{t}"),
            GateName::Cnot => write!(f, "CNOT"),
            GateName::Swap => write!(f, "SWAP"),
            GateName::Toffoli => write!(f, "TOFFOLI"),
            GateName::Fredkin => write!(f, "FREDKIN"),
            GateName::IdentityN(n) => write!(f, "IDENTITY_N:{n}"),
        }
    }
}

/// Case-insensitive; rotations take the angle in radians after a colon
/// (`Rx:0.7853981633974483`), the N-variable identity its size (`IDENTITY_N:4`).
impl FromStr for GateName {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let lower = trimmed.to_ascii_lowercase();
        let (head, arg) = match lower.split_once(':') {
            Some((h, a)) => (h, Some(a.trim())),
            None => (lower.as_str(), None),
        };
        let unknown = || HoloError::UnknownGate(trimmed.to_string());
        let angle = || -> Result<f64> {
            let a: f64 = arg.ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
            if a.is_finite() {
                Ok(a)
            } else {
                Err(unknown())
            }
        };
        let gate = match (head, arg) {
            ("x" | "not", None) => GateName::X,
            ("y", None) => GateName::Y,
            ("z", None) => GateName::Z,
            ("i", None) => GateName::I,
            ("h", None) => GateName::H,
            ("s", None) => GateName::S,
            ("rx", Some(_)) => GateName::Rx(angle()?),
            ("ry", Some(_)) => GateName::Ry(angle()?),
            ("rz", Some(_)) => GateName::Rz(angle()?),
            ("cnot", None) => GateName::Cnot,
            ("swap", None) => GateName::Swap,
            ("toffoli", None) => GateName::Toffoli,
            ("fredkin", None) => GateName::Fredkin,
            ("identity_n" | "identity", Some(n)) => {
                let n: usize = n.parse().map_err(|_| unknown())?;
                if n == 0 {
                    return Err(unknown());
                }
                GateName::IdentityN(n)
            }
            _ => return Err(unknown()),
        };
        Ok(gate)
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

// Σ coefficient · z_j ∂_k over 1-based (j, k) pairs.
fn hops(dim: usize, entries: &[(usize, usize, C64)]) -> DiffOp {
    let mut op = DiffOp::zero(dim);
    for &(j, k, coef) in entries {
        op.accumulate(MultiIndex::unit(dim, j - 1), MultiIndex::unit(dim, k - 1), coef);
    }
    op
}

// Identity on the listed 1-based variables plus the listed exchanges.
fn permutation(dim: usize, fixed: &[usize], swaps: &[(usize, usize)]) -> DiffOp {
    let mut entries: Vec<(usize, usize, C64)> = fixed.iter().map(|&i| (i, i, c(1.0))).collect();
    for &(a, b) in swaps {
        entries.push((a, b, c(1.0)));
        entries.push((b, a, c(1.0)));
    }
    hops(dim, &entries)
}

pub fn standard_gate(name: &GateName) -> Result<DiffOp> {
    let i = C64::i();
    let op = match *name {
        GateName::X => hops(2, &[(1, 2, c(1.0)), (2, 1, c(1.0))]),
        GateName::Y => hops(2, &[(1, 2, -i), (2, 1, i)]),
        GateName::Z => hops(2, &[(1, 1, c(1.0)), (2, 2, c(-1.0))]),
        GateName::I => hops(2, &[(1, 1, c(1.0)), (2, 2, c(1.0))]),
        GateName::H => {
            let r = c(FRAC_1_SQRT_2);
            hops(2, &[(1, 1, r), (1, 2, r), (2, 1, r), (2, 2, -r)])
        }
        GateName::S => hops(2, &[(1, 1, c(1.0)), (2, 2, i)]),
        GateName::Rx(theta) => {
            let (s, co) = (theta / 2.0).sin_cos();
            hops(2, &[(1, 1, c(co)), (1, 2, -i * s), (2, 1, -i * s), (2, 2, c(co))])
        }
        GateName::Ry(theta) => {
            let (s, co) = (theta / 2.0).sin_cos();
            hops(2, &[(1, 1, c(co)), (1, 2, c(-s)), (2, 1, c(s)), (2, 2, c(co))])
        }
        GateName::Rz(theta) => {
            let half = theta / 2.0;
            hops(2, &[(1, 1, C64::from_polar(1.0, -half)), (2, 2, C64::from_polar(1.0, half))])
        }
        GateName::Cnot => permutation(4, &[1, 2], &[(3, 4)]),
        GateName::Swap => permutation(4, &[1, 4], &[(2, 3)]),
        GateName::Toffoli => permutation(8, &[1, 2, 3, 4, 5, 6], &[(7, 8)]),
        // z6∂6 completes the displayed operator to a permutation of the basis.
        GateName::Fredkin => permutation(8, &[1, 2, 3, 4, 6, 8], &[(5, 7)]),
        GateName::IdentityN(n) => {
            if n == 0 {
                return Err(HoloError::InvalidParameter("identity needs at least one variable".into()));
            }
            permutation(n, &(1..=n).collect::<Vec<_>>(), &[])
        }
    };
    if let GateName::Rx(t) | GateName::Ry(t) | GateName::Rz(t) = *name {
        if !t.is_finite() {
            return Err(HoloError::InvalidParameter(format!("rotation angle must be finite, got {t}")));
        }
    }
    Ok(op)
}

/// `Σ_{jk} M_jk z_j ∂_k`: row index multiplies, column index differentiates.
pub fn matrix_to_operator(m: &DMatrix<C64>) -> Result<DiffOp> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(HoloError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(HoloError::InvalidParameter("empty matrix".into()));
    }
    let mut op = DiffOp::zero(rows);
    for j in 0..rows {
        for k in 0..cols {
            op.accumulate(MultiIndex::unit(rows, j), MultiIndex::unit(rows, k), m[(j, k)]);
        }
    }
    Ok(op)
}

/// Harmonic-oscillator Hamiltonian `z ∂ + 1/2` on one variable.
pub fn hamiltonian() -> DiffOp {
    let mut op = hops(1, &[(1, 1, c(1.0))]);
    op.accumulate(MultiIndex::zeros(1), MultiIndex::zeros(1), c(0.5));
    op
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinComponent {
    X,
    Y,
    Z,
    /// `J² = Σ_i J_i∘J_i` with `J_i = σ_i / 2`.
    SquaredTotal,
}

/// Two-mode (Jordan-Schwinger) spin operators in Bargmann form.
///
/// The unhalved `σ_i` close with structure constant `2i`; `J_i = σ_i/2` close
/// with `i` and have Casimir `(N/2)(N/2 + 1)`.
pub fn jordan_schwinger(component: SpinComponent) -> DiffOp {
    match component {
        SpinComponent::X => standard_gate(&GateName::X).expect("fixed gate"),
        SpinComponent::Y => standard_gate(&GateName::Y).expect("fixed gate"),
        SpinComponent::Z => standard_gate(&GateName::Z).expect("fixed gate"),
        SpinComponent::SquaredTotal => {
            let mut total = DiffOp::zero(2);
            for axis in [SpinComponent::X, SpinComponent::Y, SpinComponent::Z] {
                let j = spin_generator(axis);
                total = total
                    .checked_add(&j.compose(&j).expect("dimension 2"))
                    .expect("dimension 2");
            }
            total
        }
    }
}

/// `J_i = σ_i / 2`; for [`SpinComponent::SquaredTotal`] the same as
/// [`jordan_schwinger`].
pub fn spin_generator(component: SpinComponent) -> DiffOp {
    match component {
        SpinComponent::SquaredTotal => jordan_schwinger(component),
        axis => jordan_schwinger(axis).scale(c(0.5)),
    }
}
