use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use rydfermi::atomic::{level_energy, RydbergLevel, WavefunctionCache};
use rydfermi::gates::{
    error_budget_parallel, error_budget_toffoli, excitation_phase, parallel_gate_unitary,
    rotation_probability, stabilizer_phase_direct_unitary, stabilizer_via_parallel_unitary,
    toffoli_gate_unitary, ErrorBudget, GateRun, GateScenario, PlaquetteRegister,
};
use rydfermi::lattice::{
    default_intermediate, default_n_levels, effective_franck_condon, franck_condon_table,
    qubit_modes, spin_potentials, FranckCondonTable, IntermediateTrap, WannierMode,
};
use rydfermi::scattering::{
    interaction_map, pec, qubit_site_interactions, CellStatus, MapPlane, PecBasis, RfEvaluator,
};
use rydfermi::scenario::{GateSection, LatticeSection, Protocol, Scenario};
use rydfermi::{units, Error, Result};

use crate::output::Artifact;

pub struct Context {
    pub cache: WavefunctionCache,
    pub strict: bool,
}

impl Context {
    pub fn new(strict: bool) -> Self {
        Self {
            cache: WavefunctionCache::from_env(),
            strict,
        }
    }
}

pub fn run(name: &str, s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    match name {
        "wavefunction" => wavefunction(s, ctx),
        "superposition-map" => superposition_map(s, ctx),
        "pec" => pec_curves(s, ctx),
        "lattice" => lattice(s),
        "franck-condon" => franck_condon(s, ctx),
        "site-interaction" => site_interaction(s, ctx),
        "gate" => gate(s),
        "budget" => budget(s),
        "sweep" => sweep(s, ctx),
        other => Err(Error::ConfigInvalid {
            key: "command".into(),
            message: format!("unknown command `{other}`"),
        }),
    }
}

fn row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.14e}")).collect();
    cells.join(",") + "\n"
}

fn file_tag(level: &RydbergLevel) -> String {
    const LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUV";
    let letter = LETTERS
        .get(level.l as usize)
        .map(|&b| b as char)
        .unwrap_or('X');
    format!("{}{}{}-2", level.n, letter, level.two_j())
}

fn to_mhz(hartree: f64) -> f64 {
    units::hartree_to_mhz(hartree)
}

#[derive(Serialize)]
struct WavefunctionSummary {
    level: String,
    file: String,
    energy_hartree: f64,
    nodes: usize,
    outermost_antinode_nm: f64,
    norm: f64,
    r_min_au: f64,
    r_max_au: f64,
    step_au: f64,
    points: usize,
}

fn wavefunction(s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    let atom = s.atom()?;
    let state = atom.state()?;
    let mut levels: Vec<RydbergLevel> = Vec::new();
    for (lvl, _) in &state.components {
        if !levels
            .iter()
            .any(|l| l.n == lvl.n && l.l == lvl.l && l.two_j() == lvl.two_j())
        {
            levels.push(*lvl);
        }
    }
    let mut artifacts = Vec::new();
    let mut summary = Vec::new();
    for lvl in levels {
        let wf = ctx.cache.get(&lvl, &atom.defects, atom.grid.as_ref())?;
        let name = format!("wavefunction_{}.csv", file_tag(&lvl));
        let mut csv = String::from("r_au,r_nm,u\n");
        for (i, u) in wf.values.iter().enumerate() {
            let r = wf.grid.r(i);
            csv.push_str(&row(&[r, units::bohr_to_nm(r), *u]));
        }
        summary.push(WavefunctionSummary {
            level: lvl.label(),
            file: name.clone(),
            energy_hartree: wf.energy,
            nodes: wf.node_count(),
            outermost_antinode_nm: units::bohr_to_nm(wf.outermost_antinode()),
            norm: wf.norm(),
            r_min_au: wf.grid.r_min,
            r_max_au: wf.grid.r_max,
            step_au: wf.grid.step,
            points: wf.values.len(),
        });
        artifacts.push(Artifact::new(name, csv));
    }
    artifacts.push(Artifact::json("wavefunction.json", &summary));
    Ok(artifacts)
}

#[derive(Serialize)]
struct Component {
    level: String,
    amplitude_re: f64,
    amplitude_im: f64,
}

fn components(state: &rydfermi::atomic::RydbergSuperposition) -> Vec<Component> {
    state
        .components
        .iter()
        .map(|(l, a)| Component {
            level: l.label(),
            amplitude_re: a.re,
            amplitude_im: a.im,
        })
        .collect()
}

#[derive(Serialize)]
struct MapSummary {
    state: Vec<Component>,
    plane: &'static str,
    extent_nm: f64,
    resolution: usize,
    crop_radius_nm: f64,
    cells_ok: usize,
    cells_cropped: usize,
    cells_failed: usize,
    cells_near_resonance: usize,
    min_total_mhz: f64,
    max_total_mhz: f64,
}

fn superposition_map(s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    let atom = s.atom()?;
    let sc = s.scattering()?;
    let state = atom.state()?;
    let eval = RfEvaluator::new(
        &state,
        &sc.model,
        &atom.defects,
        atom.grid.as_ref(),
        &ctx.cache,
        ctx.strict,
    )?;
    let map = interaction_map(
        &eval,
        sc.map.plane,
        units::nm_to_bohr(sc.map.extent_nm),
        sc.map.resolution,
        units::nm_to_bohr(sc.map.crop_radius_nm),
    )?;
    let count = |f: &dyn Fn(&CellStatus) -> bool| map.cells.iter().filter(|c| f(&c.status)).count();
    let totals = map
        .cells
        .iter()
        .filter_map(|c| c.sample.as_ref())
        .map(|x| x.total_mhz());
    let (min, max) = totals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if ctx.strict {
        if let Some(c) = map
            .cells
            .iter()
            .find(|c| matches!(c.status, CellStatus::Error(_)))
        {
            return Err(Error::NumericalError(format!(
                "map cell failed: {}",
                c.status.label()
            )));
        }
    }
    let summary = MapSummary {
        state: components(&state),
        plane: match sc.map.plane {
            MapPlane::XY => "xy",
            MapPlane::RhoZ => "rho-z",
        },
        extent_nm: sc.map.extent_nm,
        resolution: sc.map.resolution,
        crop_radius_nm: sc.map.crop_radius_nm,
        cells_ok: count(&|s| *s == CellStatus::Ok),
        cells_cropped: count(&|s| *s == CellStatus::Cropped),
        cells_failed: count(&|s| matches!(s, CellStatus::Error(_))),
        cells_near_resonance: map
            .cells
            .iter()
            .filter(|c| c.sample.as_ref().is_some_and(|x| x.near_resonance))
            .count(),
        min_total_mhz: min,
        max_total_mhz: max,
    };
    Ok(vec![
        Artifact::new("interaction_map.csv", map.to_csv()),
        Artifact::json("interaction_map.json", &summary),
    ])
}

#[derive(Serialize)]
struct PecState {
    level: String,
    energy_mhz: f64,
}

#[derive(Serialize)]
struct PecSummary {
    target: String,
    ground_atoms: usize,
    basis: Vec<PecState>,
    energies_relative_to: &'static str,
}

fn pec_curves(s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    let atom = s.atom()?;
    let sc = s.scattering()?;
    let target = atom.state()?.components[0].0;
    let basis = PecBasis::around(
        target,
        &atom.defects,
        units::mhz_to_hartree(sc.pec.max_gap_ghz * 1e3),
        sc.pec.max_l,
        &[],
        sc.pec.truncation,
    )?;
    let k = sc.pec.atoms;
    let directions: Vec<Vector3<f64>> = (0..k)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / k as f64;
            Vector3::new(phi.cos(), phi.sin(), 0.0)
        })
        .collect();
    let separations = sc.pec.separations_au();
    let curves = pec(
        &basis,
        &directions,
        &separations,
        &sc.model,
        &atom.defects,
        &ctx.cache,
        ctx.strict,
    )?;
    let e0 = level_energy(&target, &atom.defects);
    let n = basis.states.len();
    let mut csv = String::from("R_nm");
    for c in 0..n {
        let _ = write!(csv, ",curve_{c}_MHz");
    }
    csv.push('\n');
    for (i, r) in curves.separations.iter().enumerate() {
        let mut values = vec![units::bohr_to_nm(*r)];
        values.extend(curves.adiabatic[i].iter().map(|e| to_mhz(e - e0)));
        csv.push_str(&row(&values));
    }
    let summary = PecSummary {
        target: target.label(),
        ground_atoms: k,
        basis: basis
            .states
            .iter()
            .zip(&curves.unperturbed)
            .map(|(l, e)| PecState {
                level: l.label(),
                energy_mhz: to_mhz(e - e0),
            })
            .collect(),
        energies_relative_to: "target level",
    };
    Ok(vec![
        Artifact::new("pec.csv", csv),
        Artifact::json("pec.json", &summary),
    ])
}

#[derive(Serialize)]
struct ModeSummary {
    center_nm: f64,
    sigma_nm: f64,
    trap_frequency_over_2pi_khz: f64,
}

impl From<&WannierMode> for ModeSummary {
    fn from(m: &WannierMode) -> Self {
        Self {
            center_nm: m.center_nm,
            sigma_nm: m.sigma_nm,
            trap_frequency_over_2pi_khz: m.omega / (2.0 * PI) * 1e-3,
        }
    }
}

#[derive(Serialize)]
struct TrapSummary {
    center_nm: f64,
    trap_frequency_over_2pi_khz: f64,
}

impl From<IntermediateTrap> for TrapSummary {
    fn from(t: IntermediateTrap) -> Self {
        Self {
            center_nm: t.center_nm,
            trap_frequency_over_2pi_khz: t.omega / (2.0 * PI) * 1e-3,
        }
    }
}

#[derive(Serialize)]
struct LatticeSummary {
    displacement_nm: f64,
    qubit_separation_nm: f64,
    qubit0: ModeSummary,
    qubit1: ModeSummary,
    intermediate: TrapSummary,
    default_n_levels: usize,
}

struct Geometry {
    q0: WannierMode,
    q1: WannierMode,
    trap: IntermediateTrap,
    n_levels: usize,
}

fn geometry(lat: &LatticeSection) -> Result<Geometry> {
    let (q0, q1) = qubit_modes(&lat.config, lat.qubit_separation_nm)?;
    let mut trap = default_intermediate(&q0, &q1);
    if let Some(c) = lat.intermediate_center_nm {
        trap.center_nm = c;
    }
    if let Some(f) = lat.intermediate_trap_over_2pi_khz {
        trap.omega = 2.0 * PI * f * 1e3;
    }
    let n_levels = lat
        .n_levels
        .unwrap_or_else(|| default_n_levels(lat.config.depth, trap.omega));
    Ok(Geometry {
        q0,
        q1,
        trap,
        n_levels,
    })
}

fn lattice(s: &Scenario) -> Result<Vec<Artifact>> {
    let lat = s.lattice()?;
    let lambda = lat.config.wavelength_nm;
    let n = lat.z_points;
    let z: Vec<f64> = (0..n).map(|i| lambda * i as f64 / (n - 1) as f64).collect();
    let pot = spin_potentials(&lat.config, &z)?;
    let g = geometry(lat)?;
    let summary = LatticeSummary {
        displacement_nm: lat.config.displacement_nm(),
        qubit_separation_nm: g.q0.center_nm - g.q1.center_nm,
        qubit0: (&g.q0).into(),
        qubit1: (&g.q1).into(),
        intermediate: g.trap.into(),
        default_n_levels: default_n_levels(lat.config.depth, g.trap.omega),
    };
    Ok(vec![
        Artifact::new("lattice_potential.csv", pot.to_csv()),
        Artifact::json("lattice_modes.json", &summary),
    ])
}

/// The checked table, or the unchecked one (flagged) when the cutoff test
/// fails outside strict mode.
fn fc_table(g: &Geometry, strict: bool) -> Result<(FranckCondonTable, bool)> {
    match effective_franck_condon(&g.q0, &g.q1, g.trap, g.n_levels) {
        Ok(t) => Ok((t, true)),
        Err(Error::CutoffTooSmall { before, after }) if !strict => {
            eprintln!("warning: motional cutoff not converged (F {before:.6} -> {after:.6} with 5 more levels)");
            Ok((
                franck_condon_table(&g.q0, &g.q1, g.trap, g.n_levels)?,
                false,
            ))
        }
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct FcSummary {
    n_levels: usize,
    effective_f: f64,
    magnitude_f: f64,
    cutoff_converged: bool,
    qubit_separation_nm: f64,
    qubit0: ModeSummary,
    qubit1: ModeSummary,
    intermediate: TrapSummary,
}

fn franck_condon(s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    let g = geometry(s.lattice()?)?;
    let (table, converged) = fc_table(&g, ctx.strict)?;
    let mut csv = String::from("n,f0n,f1n,f0n_f1n\n");
    for i in 0..table.n_levels() {
        let (a, b) = (table.f0[i], table.f1[i]);
        let _ = writeln!(csv, "{i},{a:.14e},{b:.14e},{:.14e}", a * b);
    }
    let summary = FcSummary {
        n_levels: table.n_levels(),
        effective_f: table.effective_f,
        magnitude_f: table.magnitude_f,
        cutoff_converged: converged,
        qubit_separation_nm: g.q0.center_nm - g.q1.center_nm,
        qubit0: (&g.q0).into(),
        qubit1: (&g.q1).into(),
        intermediate: g.trap.into(),
    };
    Ok(vec![
        Artifact::new("franck_condon.csv", csv),
        Artifact::json("franck_condon.json", &summary),
    ])
}

#[derive(Serialize)]
struct SiteSummary {
    state: Vec<Component>,
    site_radius_nm: f64,
    qubit_separation_nm: f64,
    sigma1_nm: f64,
    sigma0_nm: f64,
    #[serde(rename = "V_RF_1_MHz")]
    v_rf_1_mhz: f64,
    #[serde(rename = "V_RF_0_MHz")]
    v_rf_0_mhz: f64,
    spin_contrast: f64,
}

fn site_interaction(s: &Scenario, ctx: &Context) -> Result<Vec<Artifact>> {
    let atom = s.atom()?;
    let g = geometry(s.lattice()?)?;
    let model = s.scattering_model()?;
    let state = atom.state()?;
    let eval = RfEvaluator::new(
        &state,
        &model,
        &atom.defects,
        atom.grid.as_ref(),
        &ctx.cache,
        ctx.strict,
    )?;
    let separation = g.q0.center_nm - g.q1.center_nm;
    let qi = qubit_site_interactions(&eval, g.q1.sigma_nm, g.q0.sigma_nm, separation)?;
    let summary = SiteSummary {
        state: components(&state),
        site_radius_nm: qi.site_nm,
        qubit_separation_nm: separation,
        sigma1_nm: g.q1.sigma_nm,
        sigma0_nm: g.q0.sigma_nm,
        v_rf_1_mhz: to_mhz(qi.v1),
        v_rf_0_mhz: to_mhz(qi.v0),
        spin_contrast: qi.v1 / qi.v0,
    };
    Ok(vec![Artifact::json("site_interaction.json", &summary)])
}

fn budget_for(g: &GateSection) -> Option<ErrorBudget> {
    match g.protocol {
        Protocol::Parallel => Some(error_budget_parallel(&g.scenario, g.plaquette_size)),
        Protocol::CkZ | Protocol::CkNot => {
            Some(error_budget_toffoli(&g.scenario, g.plaquette_size))
        }
        Protocol::StabilizerDirect | Protocol::StabilizerParallel => None,
    }
}

fn simulate(g: &GateSection) -> Result<GateRun> {
    let reg = g.register()?;
    let sc = &g.scenario;
    let mut run = match g.protocol {
        Protocol::Parallel => parallel_gate_unitary(&reg, sc)?,
        Protocol::CkZ => toffoli_gate_unitary(&reg, sc, false)?,
        Protocol::CkNot => toffoli_gate_unitary(&reg, sc, true)?,
        Protocol::StabilizerDirect => stabilizer_phase_direct_unitary(&reg, sc, sc.theta, g.tones)?,
        Protocol::StabilizerParallel => {
            stabilizer_via_parallel_unitary(&reg, sc, sc.theta, g.plaquette_hadamard)?
        }
    };
    run.report.error_budget = budget_for(g);
    Ok(run)
}

fn gate(s: &Scenario) -> Result<Vec<Artifact>> {
    let g = s.gate()?;
    let run = simulate(g)?;
    let u = run.qubit_unitary();
    let qubits = PlaquetteRegister::new(g.plaquette_size, g.protocol.central_role(), 2)?;
    let mut csv = String::from("state,fidelity,phase_error_rad\n");
    for i in 0..u.ncols() {
        let overlap = run.ideal.column(i).dotc(&u.column(i));
        let _ = writeln!(
            csv,
            "{},{:.14e},{:.14e}",
            qubits.label(i),
            overlap.norm_sqr(),
            overlap.im.atan2(overlap.re)
        );
    }
    Ok(vec![
        Artifact::new("gate_report.txt", run.report.to_key_value()),
        Artifact::json("gate_report.json", &run.report),
        Artifact::new("gate_states.csv", csv),
    ])
}

#[derive(Serialize)]
struct BudgetReport<'a> {
    protocol: &'static str,
    plaquette_size: usize,
    scenario: &'a GateScenario,
    error_budget: ErrorBudget,
}

fn budget(s: &Scenario) -> Result<Vec<Artifact>> {
    let g = s.gate()?;
    let b = budget_for(g).ok_or_else(|| Error::ConfigInvalid {
        key: "gate.protocol".into(),
        message: format!("no closed-form budget for `{}`", g.protocol.as_str()),
    })?;
    let mut text = format!(
        "protocol: {}\nplaquette_size: {}\n",
        g.protocol.as_str(),
        g.plaquette_size
    );
    for (k, v) in b.terms() {
        let _ = writeln!(text, "error_budget.{k}: {v:.12e}");
    }
    let report = BudgetReport {
        protocol: g.protocol.as_str(),
        plaquette_size: g.plaquette_size,
        scenario: &g.scenario,
        error_budget: b,
    };
    Ok(vec![
        Artifact::new("budget.txt", text),
        Artifact::json("budget.json", &report),
    ])
}

fn gate_point(s: &Scenario, full: bool) -> Result<Vec<f64>> {
    let g = s.gate()?;
    let sc = &g.scenario;
    let p_rot = if sc.omega_eff > 0.0 {
        rotation_probability(sc)?
    } else {
        f64::NAN
    };
    let phase = if sc.omega_ry > 0.0 {
        excitation_phase(sc.delta_prime / sc.omega_ry)
    } else {
        f64::NAN
    };
    let (total, fidelity) =
        budget_for(g).map_or((f64::NAN, f64::NAN), |b| (b.total_error, b.fidelity));
    let mut out = vec![p_rot, phase, total, fidelity];
    if full {
        let run = simulate(g)?;
        out.push(run.report.phase_fidelity);
        out.push(run.report.population_fidelity);
    }
    Ok(out)
}

fn lattice_point(s: &Scenario) -> Result<Vec<f64>> {
    let g = geometry(s.lattice()?)?;
    let t = franck_condon_table(&g.q0, &g.q1, g.trap, g.n_levels)?;
    Ok(vec![
        g.q1.sigma_nm,
        g.q0.sigma_nm,
        g.q0.center_nm - g.q1.center_nm,
        t.effective_f,
        t.magnitude_f,
    ])
}

fn sweep(s: &Scenario, _ctx: &Context) -> Result<Vec<Artifact>> {
    let sw = s.sweep()?;
    let is_gate = sw.key.starts_with("gate.");
    let mut header = vec![sw.key.clone()];
    let columns: &[&str] = if is_gate {
        &[
            "P_rot",
            "excitation_phase_rad",
            "budget_total_error",
            "budget_fidelity",
        ]
    } else {
        &[
            "sigma1_nm",
            "sigma0_nm",
            "qubit_separation_nm",
            "effective_F",
            "magnitude_F",
        ]
    };
    header.extend(columns.iter().map(|c| c.to_string()));
    if is_gate && sw.simulate {
        header.push("phase_fidelity".into());
        header.push("population_fidelity".into());
    }
    let rows = sw
        .values()
        .par_iter()
        .map(|&v| {
            let point = s.with_value(&sw.key, v)?;
            let mut values = vec![v];
            values.extend(if is_gate {
                gate_point(&point, sw.simulate)?
            } else {
                lattice_point(&point)?
            });
            Ok(row(&values))
        })
        .collect::<Result<Vec<String>>>()?;
    let mut csv = header.join(",") + "\n";
    for r in rows {
        csv.push_str(&r);
    }
    Ok(vec![Artifact::new("sweep.csv", csv)])
}
