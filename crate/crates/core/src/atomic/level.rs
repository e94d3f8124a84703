use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

use super::defects::QuantumDefectTable;

/// Atomic species hosting the Rydberg electron (or acting as scatterer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    H,
    Rb,
    Cs,
}

impl Species {
    pub fn as_str(self) -> &'static str {
        match self {
            Species::H => "H",
            Species::Rb => "Rb",
            Species::Cs => "Cs",
        }
    }

    /// Nuclear charge.
    pub fn charge(self) -> u32 {
        match self {
            Species::H => 1,
            Species::Rb => 37,
            Species::Cs => 55,
        }
    }

    pub fn mass_amu(self) -> f64 {
        match self {
            Species::H => 1.007_825_032,
            Species::Rb => units::RB87_MASS_AMU,
            Species::Cs => units::CS133_MASS_AMU,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "hydrogen" => Ok(Species::H),
            "rb" | "rb87" | "rubidium" => Ok(Species::Rb),
            "cs" | "cs133" | "caesium" | "cesium" => Ok(Species::Cs),
            other => Err(Error::config(
                "species",
                format!("unknown species `{other}`"),
            )),
        }
    }
}

/// A fine-structure Rydberg level |n l j m_j>.
///
/// Half-integer quantum numbers are stored doubled so that equality and hashing
/// stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RydbergLevel {
    pub species: Species,
    pub n: u32,
    pub l: u32,
    two_j: u32,
    two_mj: i32,
}

impl RydbergLevel {
    /// Build a level from half-integer `j` and `m_j` given as floats.
    pub fn new(species: Species, n: u32, l: u32, j: f64, mj: f64) -> Result<Self> {
        let two_j = to_doubled(j, "j")?;
        let two_mj = to_doubled(mj, "m_j")?;
        if two_j < 0 {
            return Err(Error::InvalidQuantumNumbers(format!("j = {j} is negative")));
        }
        Self::from_doubled(species, n, l, two_j as u32, two_mj)
    }

    pub fn from_doubled(species: Species, n: u32, l: u32, two_j: u32, two_mj: i32) -> Result<Self> {
        validate_l_j_mj(l, two_j, two_mj)?;
        if n < 1 || l >= n {
            return Err(Error::InvalidQuantumNumbers(format!(
                "need 0 <= l < n, got n = {n}, l = {l}"
            )));
        }
        Ok(Self {
            species,
            n,
            l,
            two_j,
            two_mj,
        })
    }

    /// The stretched state |n l, j = l + 1/2, m_j = j>.
    pub fn stretched(species: Species, n: u32, l: u32) -> Result<Self> {
        let two_j = 2 * l + 1;
        Self::from_doubled(species, n, l, two_j, two_j as i32)
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn mj(&self) -> f64 {
        f64::from(self.two_mj) / 2.0
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn two_mj(&self) -> i32 {
        self.two_mj
    }

    /// Spectroscopic label, e.g. `46D5/2 mj=5/2`.
    pub fn label(&self) -> String {
        format!(
            "{}{}{}/2 mj={}/2",
            self.n,
            orbital_letter(self.l),
            self.two_j,
            self.two_mj
        )
    }

    /// Effective principal quantum number n - delta.
    pub fn effective_n(&self, defects: &QuantumDefectTable) -> f64 {
        f64::from(self.n) - defects.defect(self.species, self.l, self.two_j)
    }
}

impl fmt::Display for RydbergLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.species, self.label())
    }
}

pub(crate) fn orbital_letter(l: u32) -> char {
    const LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUVWXYZ";
    LETTERS.get(l as usize).map(|&b| b as char).unwrap_or('?')
}

fn to_doubled(x: f64, name: &str) -> Result<i32> {
    let doubled = 2.0 * x;
    if !doubled.is_finite() || (doubled - doubled.round()).abs() > 1e-9 || doubled.abs() > 1e6 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "{name} = {x} is not a half-integer"
        )));
    }
    Ok(doubled.round() as i32)
}

/// Check l, j and m_j (j, m_j doubled) for a single electron with s = 1/2.
pub(crate) fn validate_l_j_mj(l: u32, two_j: u32, two_mj: i32) -> Result<()> {
    let two_l = 2 * l as i64;
    let tj = two_j as i64;
    if tj != two_l + 1 && tj != two_l - 1 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "j = {}/2 incompatible with l = {l}",
            two_j
        )));
    }
    if two_mj.unsigned_abs() > two_j || (two_mj.rem_euclid(2)) != 1 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "m_j = {two_mj}/2 invalid for j = {two_j}/2"
        )));
    }
    Ok(())
}

/// Binding energy -1/(2 (n - delta)^2) in Hartree.
pub fn level_energy(level: &RydbergLevel, defects: &QuantumDefectTable) -> f64 {
    let nu = level.effective_n(defects);
    -0.5 / (nu * nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hydrogen_ground_state_energy() {
        let t = QuantumDefectTable::empty();
        let lvl = RydbergLevel::new(Species::H, 1, 0, 0.5, 0.5).unwrap();
        assert_eq!(level_energy(&lvl, &t), -0.5);
    }

    #[test]
    fn n46_without_defect() {
        let t = QuantumDefectTable::empty();
        let lvl = RydbergLevel::new(Species::Rb, 46, 2, 2.5, 2.5).unwrap();
        let e = level_energy(&lvl, &t);
        assert!((e - (-2.3629489603024575e-4)).abs() < 1e-16);
    }

    #[test]
    fn rb_46d_matches_closed_form_with_configured_defect() {
        let t = QuantumDefectTable::parse("Rb 2 5/2 1.3464622\n").unwrap();
        let lvl = RydbergLevel::new(Species::Rb, 46, 2, 2.5, 2.5).unwrap();
        let nu: f64 = 46.0 - 1.3464622;
        assert_eq!(level_energy(&lvl, &t), -1.0 / (2.0 * nu * nu));
    }

    #[test]
    fn energy_increases_with_n() {
        let t = QuantumDefectTable::default();
        let mut prev = f64::NEG_INFINITY;
        for n in 5..80 {
            let e = level_energy(&RydbergLevel::stretched(Species::Rb, n, 2).unwrap(), &t);
            assert!(e < 0.0 && e > prev);
            prev = e;
        }
    }

    #[test]
    fn rejects_bad_quantum_numbers() {
        assert!(RydbergLevel::new(Species::Rb, 3, 3, 3.5, 0.5).is_err());
        assert!(RydbergLevel::new(Species::Rb, 5, 0, 1.5, 0.5).is_err());
        assert!(RydbergLevel::new(Species::Rb, 5, 2, 2.5, 3.5).is_err());
        assert!(RydbergLevel::new(Species::Rb, 5, 2, 2.5, 1.0).is_err());
        assert!(RydbergLevel::new(Species::Rb, 5, 2, 2.3, 0.5).is_err());
        assert!(RydbergLevel::new(Species::Rb, 0, 0, 0.5, 0.5).is_err());
    }

    #[test]
    fn species_parsing() {
        assert_eq!("cs".parse::<Species>().unwrap(), Species::Cs);
        assert_eq!("Rb87".parse::<Species>().unwrap(), Species::Rb);
        assert!("K".parse::<Species>().is_err());
    }
}
