//! The fuzz-target properties replayed over the checked-in corpus seeds.

use std::path::{Path, PathBuf};

use proptest::prelude::*;

use rydfermi::atomic::*;
use rydfermi::scenario::{validate_str, Scenario};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect()
}

fn check_defects(text: &str) -> bool {
    match QuantumDefectTable::parse(text) {
        Ok(t) => {
            assert!(t.iter().all(|(_, _, _, d)| d.is_finite()));
            true
        }
        Err(_) => false,
    }
}

fn check_rwf1(text: &str) -> bool {
    match parse_rwf1(text) {
        Ok((header, values)) => {
            assert_eq!(values.len(), header.grid.len());
            assert!(values.iter().all(|v| v.is_finite()));
            true
        }
        Err(_) => false,
    }
}

fn check_scenario(text: &str) -> bool {
    let ok = validate_str(text).is_empty();
    assert_eq!(ok, Scenario::parse(text).is_ok());
    ok
}

#[test]
fn defect_seeds() {
    for (name, text) in seeds("quantum_defects") {
        assert_eq!(check_defects(&text), !name.starts_with("bad"), "{name}");
    }
    let shipped = QuantumDefectTable::parse(include_str!("../data/quantum_defects.dat")).unwrap();
    assert_eq!(shipped, QuantumDefectTable::default());
}

#[test]
fn rwf1_seeds() {
    for (name, text) in seeds("rwf1") {
        assert_eq!(check_rwf1(&text), name == "h1s.rwf1", "{name}");
    }
}

#[test]
fn rwf1_round_trip() {
    let lvl = RydbergLevel::stretched(Species::H, 3, 1).unwrap();
    let grid = RadialGrid::for_hydrogenic(3, 1).unwrap();
    let wf = hydrogenic_wavefunction(&lvl, &grid).unwrap();
    let (header, values) = parse_rwf1(&write_rwf1(&wf)).unwrap();
    assert_eq!(
        (header.species, header.n, header.l, header.two_j),
        (Species::H, 3, 1, 3)
    );
    assert_eq!(header.grid, grid);
    assert_eq!(values, wf.values);
}

#[test]
fn scenario_seeds() {
    for (name, text) in seeds("scenario") {
        assert_eq!(check_scenario(&text), !name.starts_with("bad"), "{name}");
    }
}

proptest! {
    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        check_defects(&text);
        check_rwf1(&text);
        check_scenario(&text);
    }

    #[test]
    fn mutated_seeds_never_panic(pick in 0usize..3, at in any::<prop::sample::Index>(), junk in "[ -~\n]{0,12}") {
        let pool: Vec<String> = ["quantum_defects", "rwf1", "scenario"]
            .iter()
            .flat_map(|t| seeds(t).into_iter().map(|(_, s)| s))
            .collect();
        let base = &pool[at.index(pool.len())];
        let mut cut = at.index(base.len() + 1);
        while !base.is_char_boundary(cut) {
            cut -= 1;
        }
        let text = format!("{}{junk}{}", &base[..cut], &base[cut..]);
        match pick {
            0 => { check_defects(&text); }
            1 => { check_rwf1(&text); }
            _ => { check_scenario(&text); }
        }
    }
}
