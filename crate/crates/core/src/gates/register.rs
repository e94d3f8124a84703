use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::CMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralRole {
    Control,
    Target,
    Auxiliary,
}

/// A plaquette of `size` two-level qubits around one central atom.
///
/// Basis index = plaquette_configuration * central_levels + central_state,
/// so the central atom is the last (fastest) factor. Plaquette qubit 0 is the
/// most significant bit of the configuration. Central states are |0>, |1>
/// and, with three levels, the Rydberg state |r> = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlaquetteRegister {
    pub size: usize,
    pub central: CentralRole,
    pub central_levels: usize,
}

pub const RYDBERG: usize = 2;

impl PlaquetteRegister {
    pub fn new(size: usize, central: CentralRole, central_levels: usize) -> Result<Self> {
        if ![3, 4, 6].contains(&size) {
            return Err(Error::config("gate.plaquette_size", "must be 3, 4 or 6"));
        }
        if ![2, 3].contains(&central_levels) {
            return Err(Error::config("central_levels", "must be 2 or 3"));
        }
        Ok(Self {
            size,
            central,
            central_levels,
        })
    }

    /// Three-level central atom, as used by every protocol.
    pub fn with_rydberg(size: usize, central: CentralRole) -> Result<Self> {
        Self::new(size, central, 3)
    }

    pub fn configurations(&self) -> usize {
        1 << self.size
    }

    pub fn dim(&self) -> usize {
        self.configurations() * self.central_levels
    }

    /// Dimension without the Rydberg level.
    pub fn qubit_dim(&self) -> usize {
        self.configurations() * 2
    }

    pub fn index(&self, config: usize, central: usize) -> usize {
        config * self.central_levels + central
    }

    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.central_levels, index % self.central_levels)
    }

    /// Value of plaquette qubit `q` in `config`.
    pub fn bit(&self, config: usize, q: usize) -> usize {
        (config >> (self.size - 1 - q)) & 1
    }

    pub fn ones(&self, config: usize) -> usize {
        config.count_ones() as usize
    }

    /// e.g. "0110|1" or "0110|r".
    pub fn label(&self, index: usize) -> String {
        let (config, c) = self.split(index);
        let bits: String = (0..self.size)
            .map(|q| if self.bit(config, q) == 1 { '1' } else { '0' })
            .collect();
        let central = match c {
            0 => '0',
            1 => '1',
            _ => 'r',
        };
        format!("{bits}|{central}")
    }

    /// Indices of the qubit subspace (central atom in |0> or |1>), in order.
    pub fn qubit_indices(&self) -> Vec<usize> {
        (0..self.configurations())
            .flat_map(|s| [self.index(s, 0), self.index(s, 1)])
            .collect()
    }

    pub fn check_dim(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        Ok(())
    }

    /// Diagonal operator with entries f(config, central).
    pub fn diagonal(&self, f: impl Fn(usize, usize) -> Complex64) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            let (s, c) = self.split(i);
            m[(i, i)] = f(s, c);
        }
        m
    }

    /// Single-qubit operator `u` (2x2) on plaquette qubit `q`.
    pub fn plaquette_operator(&self, q: usize, u: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        let mask = 1 << (self.size - 1 - q);
        for i in 0..n {
            let (s, c) = self.split(i);
            let b = self.bit(s, q);
            for b2 in 0..2 {
                let s2 = if b2 == b { s } else { s ^ mask };
                m[(self.index(s2, c), i)] += u[(b2, b)];
            }
        }
        m
    }

    /// Operator `u` (central_levels square) on the central atom.
    pub fn central_operator(&self, u: &CMatrix) -> CMatrix {
        let n = self.dim();
        let d = self.central_levels;
        let mut m = CMatrix::zeros(n, n);
        for s in 0..self.configurations() {
            for a in 0..d {
                for b in 0..d {
                    m[(self.index(s, a), self.index(s, b))] = u[(a, b)];
                }
            }
        }
        m
    }

    /// Restriction of an operator to the qubit subspace.
    pub fn restrict(&self, m: &CMatrix) -> CMatrix {
        let idx = self.qubit_indices();
        CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
    }
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The 2x2 Hadamard.
pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

/// Embed a 2x2 operator on {|0>, |1>} into `d` levels, identity elsewhere.
pub fn embed_qubit(u: &CMatrix, d: usize) -> CMatrix {
    let mut m = CMatrix::identity(d, d);
    for a in 0..2 {
        for b in 0..2 {
            m[(a, b)] = u[(a, b)];
        }
    }
    m
}
