//! Read-through cache of radial wavefunctions, in memory and optionally on disk.
//!
//! On-disk records use the RWF1 text format:
//!
//! ```text
//! RWF1 <species> <n> <l> <j> <r_min> <r_max> <step>
//! <u(r_min)>
//! <u(r_min + step)>
//! ...
//! ```
//!
//! Amplitudes are written with 17 significant digits so a cached wavefunction
//! is bit-identical to a freshly computed one.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

use super::defects::QuantumDefectTable;
use super::level::{level_energy, RydbergLevel, Species};
use super::radial::{
    hydrogenic_wavefunction, radial_wavefunction, trapezoid_sq, RadialGrid, RadialWavefunction,
};

/// Environment variable naming the on-disk cache directory.
pub const CACHE_DIR_ENV: &str = "RYDFERMI_CACHE_DIR";

/// Header of an RWF1 record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rwf1Header {
    pub species: Species,
    pub n: u32,
    pub l: u32,
    pub two_j: u32,
    pub grid: RadialGrid,
}

/// Serialize `wf` as an RWF1 record.
pub fn write_rwf1(wf: &RadialWavefunction) -> String {
    let lvl = &wf.level;
    let mut out = String::with_capacity(24 * wf.values.len() + 64);
    let _ = writeln!(
        out,
        "RWF1 {} {} {} {} {:e} {:e} {:e}",
        lvl.species,
        lvl.n,
        lvl.l,
        lvl.j(),
        wf.grid.r_min,
        wf.grid.r_max,
        wf.grid.step
    );
    for v in &wf.values {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

/// Parse an RWF1 record into its header and amplitudes.
pub fn parse_rwf1(text: &str) -> Result<(Rwf1Header, Vec<f64>)> {
    let mut lines = text.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty RWF1 record"))?;
    let f: Vec<&str> = head.split_whitespace().collect();
    if f.len() != 8 || f[0] != "RWF1" {
        return Err(Error::parse(
            1,
            "expected `RWF1 species n l j r_min r_max step`",
        ));
    }
    let species: Species = f[1].parse().map_err(|_| Error::parse(1, "bad species"))?;
    let n: u32 = f[2].parse().map_err(|_| Error::parse(1, "bad n"))?;
    let l: u32 = f[3].parse().map_err(|_| Error::parse(1, "bad l"))?;
    let j: f64 = f[4].parse().map_err(|_| Error::parse(1, "bad j"))?;
    let num = |s: &str, what: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::parse(1, format!("bad {what}")))
    };
    let (r_min, r_max, step) = (num(f[5], "r_min")?, num(f[6], "r_max")?, num(f[7], "step")?);
    let level =
        RydbergLevel::new(species, n, l, j, j).map_err(|e| Error::parse(1, e.to_string()))?;
    let grid = RadialGrid::new(r_min, r_max, step).map_err(|e| Error::parse(1, e.to_string()))?;

    let expected = grid.len();
    let mut values = Vec::with_capacity(expected.min(1 << 16));
    for (idx, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if values.len() == expected {
            return Err(Error::parse(idx + 2, "more amplitudes than grid points"));
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::parse(idx + 2, format!("bad amplitude `{line}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(idx + 2, "non-finite amplitude"));
        }
        values.push(v);
    }
    if values.len() != expected {
        return Err(Error::parse(
            expected + 1,
            format!("expected {expected} amplitudes, found {}", values.len()),
        ));
    }
    Ok((
        Rwf1Header {
            species,
            n,
            l,
            two_j: level.two_j(),
            grid,
        },
        values,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    species: Species,
    n: u32,
    l: u32,
    two_j: u32,
    energy_bits: u64,
    grid_bits: [u64; 3],
    coulomb: bool,
}

impl Key {
    fn file_name(&self) -> String {
        // FNV-1a over everything that is not in the RWF1 header
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for word in [self.energy_bits, u64::from(self.coulomb)] {
            for b in word.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        format!(
            "{}_{}_{}_{}_{h:016x}.rwf1",
            self.species, self.n, self.l, self.two_j
        )
    }
}

type Slot = Arc<Mutex<Option<Arc<RadialWavefunction>>>>;

/// Radial wavefunctions keyed by level (m_j does not enter the radial part),
/// energy, grid and potential.
///
/// Lookups behave as if the cache were absent: a miss computes the
/// wavefunction, and only one thread computes any given key.
#[derive(Debug, Default)]
pub struct WavefunctionCache {
    dir: Option<PathBuf>,
    slots: Mutex<HashMap<Key, Slot>>,
}

impl WavefunctionCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
            slots: Mutex::default(),
        }
    }

    /// Disk-backed when `RYDFERMI_CACHE_DIR` is set, memory-only otherwise.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::with_dir(PathBuf::from(d)),
            _ => Self::in_memory(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// The radial function of `level`. Levels without a quantum defect are
    /// integrated in the bare Coulomb potential.
    pub fn get(
        &self,
        level: &RydbergLevel,
        defects: &QuantumDefectTable,
        grid: Option<&RadialGrid>,
    ) -> Result<Arc<RadialWavefunction>> {
        let coulomb = defects.defect(level.species, level.l, level.two_j()) == 0.0;
        let grid = match grid {
            Some(g) => *g,
            None if coulomb => RadialGrid::for_hydrogenic(level.n, level.l)?,
            None => RadialGrid::for_level(level, defects)?,
        };
        let energy = level_energy(level, defects);
        let key = Key {
            species: level.species,
            n: level.n,
            l: level.l,
            two_j: level.two_j(),
            energy_bits: energy.to_bits(),
            grid_bits: [
                grid.r_min.to_bits(),
                grid.r_max.to_bits(),
                grid.step.to_bits(),
            ],
            coulomb,
        };
        let slot = {
            let mut slots = self.slots.lock().unwrap_or_else(|p| p.into_inner());
            slots.entry(key).or_default().clone()
        };
        let mut guard = slot.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(wf) = guard.as_ref() {
            return Ok(wf.clone());
        }
        let canonical = RydbergLevel::from_doubled(
            level.species,
            level.n,
            level.l,
            level.two_j(),
            level.two_j() as i32,
        )?;
        let wf = match self.read_disk(&key, &canonical, energy) {
            Some(wf) => wf,
            None => {
                let wf = if coulomb {
                    hydrogenic_wavefunction(&canonical, &grid)?
                } else {
                    radial_wavefunction(&canonical, defects, &grid)?
                };
                self.write_disk(&key, &wf);
                wf
            }
        };
        let wf = Arc::new(wf);
        *guard = Some(wf.clone());
        Ok(wf)
    }

    fn read_disk(
        &self,
        key: &Key,
        level: &RydbergLevel,
        energy: f64,
    ) -> Option<RadialWavefunction> {
        let path = self.dir.as_ref()?.join(key.file_name());
        let text = std::fs::read_to_string(path).ok()?;
        let (head, values) = parse_rwf1(&text).ok()?;
        let grid_bits = [
            head.grid.r_min.to_bits(),
            head.grid.r_max.to_bits(),
            head.grid.step.to_bits(),
        ];
        if head.species != key.species
            || head.n != key.n
            || head.l != key.l
            || head.two_j != key.two_j
            || grid_bits != key.grid_bits
        {
            return None;
        }
        let norm_checked = (trapezoid_sq(&values, head.grid.step) - 1.0).abs() < 1e-6;
        Some(RadialWavefunction {
            level: *level,
            grid: head.grid,
            energy,
            values,
            norm_checked,
        })
    }

    fn write_disk(&self, key: &Key, wf: &RadialWavefunction) {
        // best effort: a failed write only costs a recomputation later
        let Some(dir) = self.dir.as_ref() else { return };
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
        let path = dir.join(key.file_name());
        let tmp = dir.join(format!(
            ".{}.{}.{:?}.tmp",
            key.file_name(),
            std::process::id(),
            std::thread::current().id()
        ));
        if std::fs::write(&tmp, write_rwf1(wf)).is_ok() && std::fs::rename(&tmp, &path).is_err() {
            let _ = std::fs::remove_file(&tmp);
        }
    }
}
