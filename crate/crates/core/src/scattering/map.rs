//! Two-dimensional V_RF maps over a plane through the Rydberg core.

use std::fmt::Write as _;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::units;

use super::potential::{InteractionSample, RfEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapPlane {
    /// x-y plane at z = 0.
    XY,
    /// x-z half plane at phi = 0 (rho along x, may be negative).
    RhoZ,
}

impl MapPlane {
    fn point(self, a: f64, b: f64) -> Vector3<f64> {
        match self {
            MapPlane::XY => Vector3::new(a, b, 0.0),
            MapPlane::RhoZ => Vector3::new(a, 0.0, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Cropped,
    Error(String),
}

impl CellStatus {
    pub fn label(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::Cropped => "cropped".into(),
            CellStatus::Error(e) => format!("error: {}", e.replace([',', '\n'], ";")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapCell {
    /// In-plane coordinates (a, b) of the cell center, a.u.
    pub a: f64,
    pub b: f64,
    /// None for cropped or failed cells.
    pub sample: Option<InteractionSample>,
    pub status: CellStatus,
}

/// Square map of `resolution` x `resolution` cells covering [-extent, extent]^2.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMap {
    pub plane: MapPlane,
    pub extent: f64,
    pub resolution: usize,
    /// Row-major: index = i_b * resolution + i_a.
    pub cells: Vec<MapCell>,
}

/// Cell-center coordinate; symmetric about zero by construction.
pub fn cell_center(i: usize, resolution: usize, extent: f64) -> f64 {
    (2.0 * i as f64 + 1.0 - resolution as f64) * (extent / resolution as f64)
}

/// Evaluate V_RF at every cell center. Cells with in-plane distance from the
/// axis (rho for x-y, |x| for rho-z) below `crop_radius` are marked cropped.
pub fn interaction_map(
    eval: &RfEvaluator,
    plane: MapPlane,
    extent: f64,
    resolution: usize,
    crop_radius: f64,
) -> Result<InteractionMap> {
    if resolution < 16 {
        return Err(Error::config("map.resolution", "must be >= 16"));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::config("map.extent", "must be positive"));
    }
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let (ia, ib) = (idx % resolution, idx / resolution);
            let a = cell_center(ia, resolution, extent);
            let b = cell_center(ib, resolution, extent);
            let rho = match plane {
                MapPlane::XY => a.hypot(b),
                MapPlane::RhoZ => a.abs(),
            };
            if rho < crop_radius {
                return MapCell {
                    a,
                    b,
                    sample: None,
                    status: CellStatus::Cropped,
                };
            }
            match eval.sample(&plane.point(a, b)) {
                Ok(s) => MapCell {
                    a,
                    b,
                    sample: Some(s),
                    status: CellStatus::Ok,
                },
                Err(e) => MapCell {
                    a,
                    b,
                    sample: None,
                    status: CellStatus::Error(e.to_string()),
                },
            }
        })
        .collect();
    Ok(InteractionMap {
        plane,
        extent,
        resolution,
        cells,
    })
}

impl InteractionMap {
    pub fn cell(&self, ia: usize, ib: usize) -> &MapCell {
        &self.cells[ib * self.resolution + ia]
    }

    /// CSV with coordinates in nm and energies in MHz.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y_or_z,s_term_MHz,p_term_MHz,total_MHz,status\n");
        for c in &self.cells {
            let (s, p, t) = match &c.sample {
                Some(x) => (x.s_term_mhz(), x.p_term_mhz(), x.total_mhz()),
                None => (0.0, 0.0, 0.0),
            };
            let _ = writeln!(
                out,
                "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{}",
                units::bohr_to_nm(c.a),
                units::bohr_to_nm(c.b),
                s,
                p,
                t,
                c.status.label()
            );
        }
        out
    }
}
