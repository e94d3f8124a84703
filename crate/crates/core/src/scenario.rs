//! Scenario files.
//!
//! A scenario is a TOML document with the sections `atom`, `scattering`,
//! `lattice`, `gate`, `output` and `sweep`, plus a top-level
//! `schema_version`. Units are part of the key names. Frequencies in the
//! `gate` section are quoted as f = omega / 2pi.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use toml::{Table, Value};

use crate::atomic::{
    superposition_from_polarizations, QuantumDefectTable, RadialGrid, RydbergLevel,
    RydbergSuperposition, Species,
};
use crate::error::{Error, Result};
use crate::gates::{
    from_ghz, from_khz, from_mhz, CentralRole, GateScenario, PlaquetteRegister, StabilizerTones,
};
use crate::lattice::LatticeConfig;
use crate::scattering::{MapPlane, ScatteringModel};
use crate::units;

pub const SCHEMA_VERSION: i64 = 1;

const SECTIONS: [&str; 6] = ["atom", "scattering", "lattice", "gate", "output", "sweep"];

/// Numeric keys a sweep may vary.
pub const SWEEPABLE: [&str; 16] = [
    "gate.V_RF_1_MHz",
    "gate.V_RF_0_MHz",
    "gate.omega_eff_kHz",
    "gate.omega_ry_MHz",
    "gate.delta_MHz",
    "gate.delta_prime_MHz",
    "gate.gamma_ry_kHz",
    "gate.delta_r_GHz",
    "gate.theta_rad",
    "gate.rydberg_detuning_MHz",
    "lattice.wavelength_nm",
    "lattice.depth_over_2pi_Hz",
    "lattice.theta_rad",
    "lattice.qubit_separation_nm",
    "lattice.intermediate_center_nm",
    "lattice.intermediate_trap_over_2pi_kHz",
];

/// One problem found in a scenario, keyed by `section.key`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{} (line {}): {}", self.key, l, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl Diagnostic {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            line: None,
            message: message.into(),
        }
    }

    pub fn into_error(self) -> Error {
        if self.key == "syntax" {
            Error::Parse {
                line: self.line.unwrap_or(0),
                message: self.message,
            }
        } else {
            Error::ConfigInvalid {
                key: self.key,
                message: self.message,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSection {
    pub species: Species,
    pub n: u32,
    pub l: u32,
    pub j: f64,
    pub mj: f64,
    /// (theta_R, theta_B): the state is the polarization superposition of nD levels.
    pub polarization: Option<(f64, f64)>,
    pub defects: QuantumDefectTable,
    pub grid: Option<RadialGrid>,
}

impl AtomSection {
    pub fn level(&self) -> Result<RydbergLevel> {
        RydbergLevel::new(self.species, self.n, self.l, self.j, self.mj)
    }

    pub fn state(&self) -> Result<RydbergSuperposition> {
        match self.polarization {
            Some((tr, tb)) => superposition_from_polarizations(tr, tb, self.species, self.n),
            None => Ok(RydbergSuperposition::single(self.level()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSettings {
    pub plane: MapPlane,
    pub extent_nm: f64,
    pub resolution: usize,
    pub crop_radius_nm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PecSettings {
    pub r_min_nm: f64,
    pub r_max_nm: f64,
    pub points: usize,
    /// Basis states within this energy window of the target, GHz.
    pub max_gap_ghz: f64,
    pub max_l: u32,
    pub truncation: usize,
    /// Ground atoms placed symmetrically around the z axis in the z = 0 plane.
    pub atoms: usize,
}

impl PecSettings {
    pub fn separations_au(&self) -> Vec<f64> {
        let (a, b) = (
            units::nm_to_bohr(self.r_min_nm),
            units::nm_to_bohr(self.r_max_nm),
        );
        linspace(a, b, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSection {
    pub model: ScatteringModel,
    pub map: MapSettings,
    pub pec: PecSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSection {
    pub config: LatticeConfig,
    pub qubit_separation_nm: Option<f64>,
    pub intermediate_center_nm: Option<f64>,
    /// Intermediate trap frequency f = omega/2pi, kHz.
    pub intermediate_trap_over_2pi_khz: Option<f64>,
    pub n_levels: Option<usize>,
    pub z_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// The parallelized controlled flip of every plaquette qubit.
    Parallel,
    /// Multi-controlled Z on the central atom.
    CkZ,
    /// Multi-controlled NOT on the central atom.
    CkNot,
    /// exp(i theta prod Z) with a single detuned excitation of the central atom.
    StabilizerDirect,
    /// exp(i theta prod X) built from two parallelized gates.
    StabilizerParallel,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Parallel => "parallel",
            Protocol::CkZ => "ck-z",
            Protocol::CkNot => "ck-not",
            Protocol::StabilizerDirect => "stabilizer-direct",
            Protocol::StabilizerParallel => "stabilizer-parallel",
        }
    }

    pub fn central_role(self) -> CentralRole {
        match self {
            Protocol::Parallel | Protocol::StabilizerParallel => CentralRole::Control,
            Protocol::CkZ | Protocol::CkNot => CentralRole::Target,
            Protocol::StabilizerDirect => CentralRole::Auxiliary,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            Protocol::Parallel,
            Protocol::CkZ,
            Protocol::CkNot,
            Protocol::StabilizerDirect,
            Protocol::StabilizerParallel,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSection {
    pub protocol: Protocol,
    pub plaquette_size: usize,
    pub scenario: GateScenario,
    pub tones: StabilizerTones,
    /// Hadamards on the plaquette qubits around the stabilizer-parallel sequence.
    pub plaquette_hadamard: bool,
}

impl GateSection {
    pub fn register(&self) -> Result<PlaquetteRegister> {
        PlaquetteRegister::with_rydberg(self.plaquette_size, self.protocol.central_role())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSection {
    pub directory: Option<PathBuf>,
    /// Prepended to every emitted file name.
    pub prefix: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Also run the full gate simulation at every point.
    pub simulate: bool,
}

impl SweepSection {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub schema_version: i64,
    pub atom: Option<AtomSection>,
    pub scattering: Option<ScatteringSection>,
    pub lattice: Option<LatticeSection>,
    pub gate: Option<GateSection>,
    pub output: OutputSection,
    pub sweep: Option<SweepSection>,
    raw: Table,
    base_dir: Option<PathBuf>,
}

fn missing(section: &str) -> Error {
    Error::config(section, "section required by this command is missing")
}

impl Scenario {
    /// Parse and validate; the first diagnostic becomes the error.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_in(text, None)
    }

    /// Like [`Scenario::parse`]; relative paths in the file resolve against
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse_in(&text, path.parent())
    }

    fn parse_in(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        analyze(text, base_dir).map_err(|d| {
            d.into_iter()
                .next()
                .expect("nonempty diagnostics")
                .into_error()
        })
    }

    pub fn atom(&self) -> Result<&AtomSection> {
        self.atom.as_ref().ok_or_else(|| missing("atom"))
    }

    pub fn scattering(&self) -> Result<&ScatteringSection> {
        self.scattering
            .as_ref()
            .ok_or_else(|| missing("scattering"))
    }

    pub fn lattice(&self) -> Result<&LatticeSection> {
        self.lattice.as_ref().ok_or_else(|| missing("lattice"))
    }

    pub fn gate(&self) -> Result<&GateSection> {
        self.gate.as_ref().ok_or_else(|| missing("gate"))
    }

    pub fn sweep(&self) -> Result<&SweepSection> {
        self.sweep.as_ref().ok_or_else(|| missing("sweep"))
    }

    /// The scattering model: the configured one, or the species default of
    /// the atom section.
    pub fn scattering_model(&self) -> Result<ScatteringModel> {
        match (&self.scattering, &self.atom) {
            (Some(s), _) => Ok(s.model.clone()),
            (None, Some(a)) => Ok(ScatteringModel::default_for(a.species)),
            (None, None) => Err(missing("scattering")),
        }
    }

    /// The same scenario with one numeric `section.key` replaced, revalidated.
    pub fn with_value(&self, key: &str, value: f64) -> Result<Self> {
        let (section, name) = key
            .split_once('.')
            .ok_or_else(|| Error::config(key, "expected `section.key`"))?;
        let mut raw = self.raw.clone();
        let table = raw
            .entry(section.to_string())
            .or_insert_with(|| Value::Table(Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::config(section, "not a table"))?;
        table.insert(name.to_string(), Value::Float(value));
        build(&raw, self.base_dir.as_deref()).map_err(|d| {
            d.into_iter()
                .next()
                .expect("nonempty diagnostics")
                .into_error()
        })
    }
}

/// Every problem in `text`; empty when the scenario is valid.
pub fn validate_str(text: &str) -> Vec<Diagnostic> {
    validate_in(text, None)
}

pub fn validate_file(path: impl AsRef<Path>) -> Result<Vec<Diagnostic>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    Ok(validate_in(&text, path.parent()))
}

fn validate_in(text: &str, base_dir: Option<&Path>) -> Vec<Diagnostic> {
    match analyze(text, base_dir) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

fn analyze(text: &str, base_dir: Option<&Path>) -> std::result::Result<Scenario, Vec<Diagnostic>> {
    let raw: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| line_of_offset(text, s.start));
        vec![Diagnostic {
            key: "syntax".into(),
            line,
            message: e.message().trim().to_string(),
        }]
    })?;
    build(&raw, base_dir).map_err(|mut diags| {
        for d in &mut diags {
            d.line = locate(text, &d.key);
        }
        diags
    })
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    let offset = offset.min(text.len());
    text.as_bytes()[..offset]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

/// Line of `section.key` in the source, or of the section header when the
/// key is absent.
fn locate(text: &str, dotted: &str) -> Option<usize> {
    let (section, key) = match dotted.split_once('.') {
        Some((s, k)) => (s, Some(k)),
        None if SECTIONS.contains(&dotted) => (dotted, None),
        None => ("", Some(dotted)),
    };
    let mut current = String::new();
    let mut header = None;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.split(']').next()) {
            current = name.trim().to_string();
            if current == section {
                header = Some(i + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(k) = key {
            if let Some(rest) = t.strip_prefix(k) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

struct Reader<'a> {
    section: &'static str,
    table: Option<&'a Table>,
    used: BTreeSet<String>,
    diags: Vec<Diagnostic>,
}

impl<'a> Reader<'a> {
    fn new(section: &'static str, table: Option<&'a Table>) -> Self {
        Self {
            section,
            table,
            used: BTreeSet::new(),
            diags: Vec::new(),
        }
    }

    fn key(&self, k: &str) -> String {
        if self.section.is_empty() {
            k.to_string()
        } else {
            format!("{}.{}", self.section, k)
        }
    }

    fn error(&mut self, k: &str, message: impl Into<String>) {
        let key = self.key(k);
        self.diags.push(Diagnostic::new(key, message));
    }

    fn raw(&mut self, k: &str) -> Option<&'a Value> {
        self.used.insert(k.to_string());
        self.table.and_then(|t| t.get(k))
    }

    fn missing(&mut self, k: &str) {
        self.error(k, "required key is missing");
    }

    fn f64(&mut self, k: &str) -> Option<f64> {
        match self.raw(k)? {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Float(_) => {
                self.error(k, "must be finite");
                None
            }
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.error(k, "expected a number");
                None
            }
        }
    }

    fn req_f64(&mut self, k: &str) -> Option<f64> {
        let present = self.table.is_some_and(|t| t.contains_key(k));
        let v = self.f64(k);
        if !present {
            self.missing(k);
        }
        v
    }

    fn uint(&mut self, k: &str) -> Option<u64> {
        match self.raw(k)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            _ => {
                self.error(k, "expected a non-negative integer");
                None
            }
        }
    }

    fn req_uint(&mut self, k: &str) -> Option<u64> {
        let present = self.table.is_some_and(|t| t.contains_key(k));
        let v = self.uint(k);
        if !present {
            self.missing(k);
        }
        v
    }

    fn string(&mut self, k: &str) -> Option<&'a str> {
        match self.raw(k)? {
            Value::String(s) => Some(s.as_str()),
            _ => {
                self.error(k, "expected a string");
                None
            }
        }
    }

    fn boolean(&mut self, k: &str) -> Option<bool> {
        match self.raw(k)? {
            Value::Boolean(b) => Some(*b),
            _ => {
                self.error(k, "expected true or false");
                None
            }
        }
    }

    fn f64_list(&mut self, k: &str) -> Option<Vec<f64>> {
        let items = match self.raw(k)? {
            Value::Array(a) => a,
            _ => {
                self.error(k, "expected an array of numbers");
                return None;
            }
        };
        let mut out = Vec::with_capacity(items.len());
        for v in items {
            match v {
                Value::Float(x) if x.is_finite() => out.push(*x),
                Value::Integer(i) => out.push(*i as f64),
                _ => {
                    self.error(k, "expected an array of finite numbers");
                    return None;
                }
            }
        }
        Some(out)
    }

    fn positive(&mut self, k: &str, v: Option<f64>) -> Option<f64> {
        match v {
            Some(x) if x <= 0.0 => {
                self.error(k, "must be > 0");
                None
            }
            other => other,
        }
    }

    fn lib<T>(&mut self, k: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::ConfigInvalid { message, .. }) => {
                self.error(k, message);
                None
            }
            Err(e) => {
                self.error(k, e.to_string());
                None
            }
        }
    }

    fn finish(self, out: &mut Vec<Diagnostic>) {
        let mut diags = self.diags;
        if let Some(t) = self.table {
            for k in t.keys() {
                if !self.used.contains(k) {
                    let key = if self.section.is_empty() {
                        k.clone()
                    } else {
                        format!("{}.{}", self.section, k)
                    };
                    diags.push(Diagnostic::new(key, "unknown key"));
                }
            }
        }
        out.extend(diags);
    }
}

fn section<'a>(
    raw: &'a Table,
    name: &'static str,
    diags: &mut Vec<Diagnostic>,
) -> Option<&'a Table> {
    match raw.get(name)? {
        Value::Table(t) => Some(t),
        _ => {
            diags.push(Diagnostic::new(name, "expected a table"));
            None
        }
    }
}

fn build(raw: &Table, base_dir: Option<&Path>) -> std::result::Result<Scenario, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    for k in raw.keys() {
        if k != "schema_version" && !SECTIONS.contains(&k.as_str()) {
            diags.push(Diagnostic::new(k.clone(), "unknown section or key"));
        }
    }
    let schema_version = match raw.get("schema_version") {
        None => {
            diags.push(Diagnostic::new("schema_version", "required key is missing"));
            SCHEMA_VERSION
        }
        Some(Value::Integer(v)) if *v == SCHEMA_VERSION => *v,
        Some(_) => {
            diags.push(Diagnostic::new(
                "schema_version",
                format!("unsupported schema version (this build reads {SCHEMA_VERSION})"),
            ));
            SCHEMA_VERSION
        }
    };

    let atom = section(raw, "atom", &mut diags).map(|t| atom_section(t, base_dir, &mut diags));
    let atom = atom.flatten();
    let species_hint = atom.as_ref().map(|a| a.species);
    let scattering = section(raw, "scattering", &mut diags)
        .and_then(|t| scattering_section(t, species_hint, &mut diags));
    let lattice = section(raw, "lattice", &mut diags)
        .and_then(|t| lattice_section(t, species_hint, &mut diags));
    let gate = section(raw, "gate", &mut diags).and_then(|t| gate_section(t, &mut diags));
    let output = section(raw, "output", &mut diags)
        .map(|t| output_section(t, base_dir, &mut diags))
        .unwrap_or_default();
    let sweep = section(raw, "sweep", &mut diags).and_then(|t| sweep_section(t, raw, &mut diags));

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(Scenario {
        schema_version,
        atom,
        scattering,
        lattice,
        gate,
        output,
        sweep,
        raw: raw.clone(),
        base_dir: base_dir.map(Path::to_path_buf),
    })
}

fn resolve(base_dir: Option<&Path>, p: &str) -> PathBuf {
    let p = PathBuf::from(p);
    match base_dir {
        Some(b) if p.is_relative() => b.join(p),
        _ => p,
    }
}

fn atom_section(
    t: &Table,
    base_dir: Option<&Path>,
    out: &mut Vec<Diagnostic>,
) -> Option<AtomSection> {
    let mut r = Reader::new("atom", Some(t));
    let species = match r.string("species") {
        Some(s) => {
            let parsed = s.parse::<Species>();
            r.lib("species", parsed)
        }
        None => {
            if !t.contains_key("species") {
                r.missing("species");
            }
            None
        }
    };
    let n = r.req_uint("n");
    let theta_r = r.f64("theta_r_rad");
    let theta_b = r.f64("theta_b_rad");
    let polarization = match (theta_r, theta_b) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        (Some(_), None) => {
            r.error(
                "theta_b_rad",
                "theta_r_rad and theta_b_rad must be given together",
            );
            None
        }
        (None, Some(_)) => {
            r.error(
                "theta_r_rad",
                "theta_r_rad and theta_b_rad must be given together",
            );
            None
        }
    };
    let l = r.uint("l");
    let j = r.f64("j");
    let mj = r.f64("mj");
    if polarization.is_none() && l.is_none() && !t.contains_key("l") {
        r.missing("l");
    }
    let defects = match r.string("defects_file") {
        Some(p) => {
            let loaded = QuantumDefectTable::load(resolve(base_dir, p));
            r.lib("defects_file", loaded)
        }
        None => Some(QuantumDefectTable::default()),
    };
    let r_min = r.f64("grid_r_min_au");
    let r_max = r.f64("grid_r_max_au");
    let step = r.f64("grid_step_au");
    let grid = match (r_min, r_max, step) {
        (None, None, None) => Some(None),
        (Some(a), Some(b), Some(s)) => {
            let g = RadialGrid::new(a, b, s);
            r.lib("grid_step_au", g).map(Some)
        }
        _ => {
            r.error(
                "grid_step_au",
                "grid_r_min_au, grid_r_max_au and grid_step_au must be given together",
            );
            None
        }
    };

    let mut section = None;
    if let (Some(species), Some(n), Some(defects), Some(grid)) = (species, n, defects, grid) {
        let l = l.unwrap_or(2) as u32;
        let j = j.unwrap_or(l as f64 + 0.5);
        let mj = mj.unwrap_or(j);
        let candidate = AtomSection {
            species,
            n: n as u32,
            l,
            j,
            mj,
            polarization,
            defects,
            grid,
        };
        let checked = if polarization.is_some() {
            candidate.state().map(|_| ())
        } else {
            candidate.level().map(|_| ())
        };
        let key = match &checked {
            Err(Error::UnsupportedPolarization { .. }) => "theta_b_rad",
            _ => "n",
        };
        if r.lib(key, checked).is_some() {
            section = Some(candidate);
        }
    }
    r.finish(out);
    section
}

fn scattering_section(
    t: &Table,
    hint: Option<Species>,
    out: &mut Vec<Diagnostic>,
) -> Option<ScatteringSection> {
    let mut r = Reader::new("scattering", Some(t));
    let species = match r.string("species") {
        Some(s) => {
            let parsed = s.parse::<Species>();
            r.lib("species", parsed)
        }
        None if t.contains_key("species") => None,
        None => {
            if hint.is_none() {
                r.error("species", "required when there is no atom section");
            }
            hint
        }
    };
    let mut model = species.map(ScatteringModel::default_for);
    let a_s = r.f64("a_s");
    let coeffs = r.f64_list("s_range_coeffs");
    let p_background = r.f64("p_background");
    let p_res_k = r.f64("p_res_k");
    let p_res_gamma = r.f64("p_res_gamma");
    if let Some(m) = model.as_mut() {
        if let Some(v) = a_s {
            m.a_s = v;
        }
        if let Some(v) = coeffs {
            m.s_range_coeffs = v;
        }
        if let Some(v) = p_background {
            m.p_background = v;
        }
        if let Some(v) = p_res_k {
            m.p_res_k = v;
        }
        if let Some(v) = p_res_gamma {
            m.p_res_gamma = v;
        }
        if let Err(Error::ConfigInvalid { key, message }) = m.validate() {
            let k = key.strip_prefix("scattering.").unwrap_or("a_s").to_string();
            r.error(&k, message);
        }
    }

    let plane = match r.string("map_plane").unwrap_or("xy") {
        "xy" => Some(MapPlane::XY),
        "rho-z" => Some(MapPlane::RhoZ),
        _ => {
            r.error("map_plane", "expected \"xy\" or \"rho-z\"");
            None
        }
    };
    let extent = r.f64("map_extent_nm");
    let extent = r.positive("map_extent_nm", extent).unwrap_or(300.0);
    let resolution = r.uint("map_resolution").unwrap_or(64) as usize;
    if resolution < 16 {
        r.error("map_resolution", "must be >= 16");
    }
    let crop = r.f64("crop_radius_nm").unwrap_or(0.0);
    if crop < 0.0 {
        r.error("crop_radius_nm", "must be >= 0");
    }

    let r_min = r.f64("pec_r_min_nm");
    let r_min = r.positive("pec_r_min_nm", r_min).unwrap_or(50.0);
    let r_max = r.f64("pec_r_max_nm").unwrap_or(300.0);
    if r_max <= r_min {
        r.error("pec_r_max_nm", "must exceed pec_r_min_nm");
    }
    let points = r.uint("pec_points").unwrap_or(101) as usize;
    if points < 2 {
        r.error("pec_points", "must be >= 2");
    }
    let gap = r.f64("pec_max_gap_GHz");
    let max_gap_ghz = r.positive("pec_max_gap_GHz", gap).unwrap_or(50.0);
    let max_l = r.uint("pec_max_l").unwrap_or(3) as u32;
    let truncation = r.uint("pec_truncation").unwrap_or(400) as usize;
    if truncation == 0 {
        r.error("pec_truncation", "must be >= 1");
    }
    let atoms = r.uint("pec_atoms").unwrap_or(1) as usize;
    if atoms == 0 {
        r.error("pec_atoms", "must be >= 1");
    }
    let ok = r.diags.is_empty();
    r.finish(out);
    if !ok {
        return None;
    }
    Some(ScatteringSection {
        model: model?,
        map: MapSettings {
            plane: plane?,
            extent_nm: extent,
            resolution,
            crop_radius_nm: crop,
        },
        pec: PecSettings {
            r_min_nm: r_min,
            r_max_nm: r_max,
            points,
            max_gap_ghz,
            max_l,
            truncation,
            atoms,
        },
    })
}

fn lattice_section(
    t: &Table,
    hint: Option<Species>,
    out: &mut Vec<Diagnostic>,
) -> Option<LatticeSection> {
    let mut r = Reader::new("lattice", Some(t));
    let wavelength = r.req_f64("wavelength_nm");
    let depth = r.req_f64("depth_over_2pi_Hz");
    let theta = r.req_f64("theta_rad");
    let mass = match r.f64("mass_amu") {
        Some(m) => Some(m),
        None if t.contains_key("mass_amu") => None,
        None => match hint {
            Some(s) => Some(s.mass_amu()),
            None => {
                r.error("mass_amu", "required when there is no atom section");
                None
            }
        },
    };
    let separation = r.f64("qubit_separation_nm");
    let center = r.f64("intermediate_center_nm");
    let trap = r.f64("intermediate_trap_over_2pi_kHz");
    let trap = r.positive("intermediate_trap_over_2pi_kHz", trap);
    let n_levels = r.uint("n_levels").map(|v| v as usize);
    if n_levels == Some(0) {
        r.error("n_levels", "must be >= 1");
    }
    let z_points = r.uint("z_points").unwrap_or(801) as usize;
    if z_points < 2 {
        r.error("z_points", "must be >= 2");
    }
    let mut section = None;
    if let (Some(w), Some(d), Some(th), Some(m)) = (wavelength, depth, theta, mass) {
        let config = LatticeConfig::new(w, d, th, m);
        let key = match &config {
            Err(Error::ConfigInvalid { key, .. }) => key
                .strip_prefix("lattice.")
                .unwrap_or("wavelength_nm")
                .to_string(),
            _ => "wavelength_nm".to_string(),
        };
        if let Some(config) = r.lib(&key, config) {
            if r.diags.is_empty() {
                section = Some(LatticeSection {
                    config,
                    qubit_separation_nm: separation,
                    intermediate_center_nm: center,
                    intermediate_trap_over_2pi_khz: trap,
                    n_levels,
                    z_points,
                });
            }
        }
    }
    r.finish(out);
    section
}

fn gate_section(t: &Table, out: &mut Vec<Diagnostic>) -> Option<GateSection> {
    let mut r = Reader::new("gate", Some(t));
    let protocol = match r.string("protocol") {
        Some(s) => {
            let p = Protocol::parse(s);
            if p.is_none() {
                r.error(
                    "protocol",
                    "expected one of parallel, ck-z, ck-not, stabilizer-direct, stabilizer-parallel",
                );
            }
            p
        }
        None if t.contains_key("protocol") => None,
        None => Some(Protocol::Parallel),
    };
    let size = r.uint("plaquette_size").unwrap_or(4) as usize;
    if ![3, 4, 6].contains(&size) {
        r.error("plaquette_size", "must be 3, 4 or 6");
    }
    let v1 = r.req_f64("V_RF_1_MHz");
    let v0 = r.f64("V_RF_0_MHz").unwrap_or(0.0);
    let needs_raman = matches!(
        protocol,
        Some(Protocol::Parallel | Protocol::StabilizerParallel)
    );
    let omega_eff = if needs_raman {
        r.req_f64("omega_eff_kHz")
    } else {
        r.f64("omega_eff_kHz").or(Some(0.0))
    };
    let omega_ry = r.req_f64("omega_ry_MHz");
    let delta = r.f64("delta_MHz");
    let delta_prime = r.f64("delta_prime_MHz").unwrap_or(0.0);
    let gamma = r.f64("gamma_ry_kHz").unwrap_or(0.0);
    let delta_r = r.req_f64("delta_r_GHz");
    let theta = r.f64("theta_rad").unwrap_or(0.0);
    if !(0.0..FRAC_PI_2).contains(&theta) {
        r.error("theta_rad", format!("{theta} is outside [0, pi/2)"));
    }
    let big_delta = r.f64("rydberg_detuning_MHz");
    let tones = match r.raw("stabilizer_tone") {
        None => Some(StabilizerTones::AllOdd),
        Some(Value::String(s)) if s == "all-odd" => Some(StabilizerTones::AllOdd),
        Some(Value::Integer(j)) if *j >= 1 && (*j as usize) <= size && j % 2 == 1 => {
            Some(StabilizerTones::Single(*j as usize))
        }
        Some(_) => {
            r.error(
                "stabilizer_tone",
                "expected \"all-odd\" or an odd sector index j <= plaquette_size",
            );
            None
        }
    };
    let plaquette_hadamard = r.boolean("plaquette_hadamard").unwrap_or(true);

    let mut section = None;
    if let (Some(protocol), Some(v1), Some(omega_eff), Some(omega_ry), Some(delta_r), Some(tones)) =
        (protocol, v1, omega_eff, omega_ry, delta_r, tones)
    {
        let scenario = GateScenario {
            v_rf_1: from_mhz(v1),
            v_rf_0: from_mhz(v0),
            omega_eff: from_khz(omega_eff),
            omega_ry: from_mhz(omega_ry),
            big_delta: big_delta.map(from_mhz),
            delta: from_mhz(delta.unwrap_or(-v1)),
            delta_prime: from_mhz(delta_prime),
            gamma_ry: gamma * 1e-3,
            delta_r: from_ghz(delta_r),
            theta,
        };
        if let Err(Error::ConfigInvalid { key, message }) = scenario.validate() {
            let k = key.strip_prefix("gate.").unwrap_or(&key).to_string();
            r.error(&k, message);
        }
        if r.diags.is_empty() {
            section = Some(GateSection {
                protocol,
                plaquette_size: size,
                scenario,
                tones,
                plaquette_hadamard,
            });
        }
    }
    r.finish(out);
    section
}

fn output_section(t: &Table, base_dir: Option<&Path>, out: &mut Vec<Diagnostic>) -> OutputSection {
    let mut r = Reader::new("output", Some(t));
    let directory = r.string("directory").map(|d| resolve(base_dir, d));
    let prefix = r.string("prefix").unwrap_or("").to_string();
    if prefix.contains(['/', '\\']) {
        r.error("prefix", "must not contain path separators");
    }
    r.finish(out);
    OutputSection { directory, prefix }
}

fn sweep_section(t: &Table, raw: &Table, out: &mut Vec<Diagnostic>) -> Option<SweepSection> {
    let mut r = Reader::new("sweep", Some(t));
    let key = r.string("key");
    if key.is_none() && !t.contains_key("key") {
        r.missing("key");
    }
    if let Some(k) = key {
        if !SWEEPABLE.contains(&k) {
            r.error(
                "key",
                format!(
                    "`{k}` cannot be swept; expected one of {}",
                    SWEEPABLE.join(", ")
                ),
            );
        } else if !raw.contains_key(k.split('.').next().unwrap_or_default()) {
            r.error("key", format!("`{k}` names a section that is not present"));
        }
    }
    let start = r.req_f64("start");
    let stop = r.req_f64("stop");
    let points = r.req_uint("points");
    if points.is_some_and(|p| p < 2) {
        r.error("points", "must be >= 2");
    }
    let simulate = r.boolean("simulate").unwrap_or(false);
    let ok = r.diags.is_empty();
    r.finish(out);
    if !ok {
        return None;
    }
    Some(SweepSection {
        key: key?.to_string(),
        start: start?,
        stop: stop?,
        points: points? as usize,
        simulate,
    })
}
