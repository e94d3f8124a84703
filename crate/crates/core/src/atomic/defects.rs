use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

use super::level::{validate_l_j_mj, Species};

const DEFAULT_TABLE: &str = include_str!("../../data/quantum_defects.dat");

/// Quantum defects keyed by (species, l, 2j).
///
/// Lookups that miss resolve to zero, i.e. the hydrogenic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDefectTable {
    entries: BTreeMap<(Species, u32, u32), f64>,
}

impl Default for QuantumDefectTable {
    /// The shipped Rb/Cs defaults.
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("shipped quantum defect table is valid")
    }
}

impl QuantumDefectTable {
    /// A table with no entries: every level is hydrogenic.
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn defect(&self, species: Species, l: u32, two_j: u32) -> f64 {
        self.entries
            .get(&(species, l, two_j))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn insert(&mut self, species: Species, l: u32, two_j: u32, defect: f64) -> Result<()> {
        if !defect.is_finite() {
            return Err(Error::config("defect", "quantum defect must be finite"));
        }
        validate_l_j_mj(l, two_j, 1)?;
        self.entries.insert((species, l, two_j), defect);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Species, u32, u32, f64)> + '_ {
        self.entries.iter().map(|(&(s, l, tj), &d)| (s, l, tj, d))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parse the text format: one `species l j defect` record per line,
    /// `#` starts a comment, `j` may be written `5/2` or `2.5`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Self::empty();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "expected `species l j defect`, found {} fields",
                        fields.len()
                    ),
                ));
            }
            let species: Species = fields[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("unknown species `{}`", fields[0])))?;
            let l: u32 = fields[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad l `{}`", fields[1])))?;
            if l > 1000 {
                return Err(Error::parse(line_no, "l out of range"));
            }
            let two_j = parse_doubled_half_integer(fields[2])
                .ok_or_else(|| Error::parse(line_no, format!("bad j `{}`", fields[2])))?;
            let defect: f64 = fields[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad defect `{}`", fields[3])))?;
            if !defect.is_finite() {
                return Err(Error::parse(line_no, "defect must be finite"));
            }
            if validate_l_j_mj(l, two_j, 1).is_err() {
                return Err(Error::parse(
                    line_no,
                    format!("j = {} incompatible with l = {l}", fields[2]),
                ));
            }
            table.entries.insert((species, l, two_j), defect);
        }
        Ok(table)
    }

    /// Serialize back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# species l j defect\n");
        for (s, l, tj, d) in self.iter() {
            out.push_str(&format!("{s} {l} {tj}/2 {d:.10}\n"));
        }
        out
    }
}

/// Parse `5/2`, `2.5` or `3` into 2j.
fn parse_doubled_half_integer(s: &str) -> Option<u32> {
    if let Some((num, den)) = s.split_once('/') {
        if den.trim() != "2" {
            return None;
        }
        let num: u32 = num.trim().parse().ok()?;
        return (num % 2 == 1).then_some(num);
    }
    let x: f64 = s.parse().ok()?;
    let doubled = 2.0 * x;
    if !(0.0..=2001.0).contains(&doubled) || (doubled - doubled.round()).abs() > 1e-9 {
        return None;
    }
    Some(doubled.round() as u32)
}
