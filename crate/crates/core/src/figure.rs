//! Torsion, ground-state energy and the Kohler–Jobin product `T₂^{2/3}·λ₀`
//! for paths and stars with `E` edges, as a function of `E`.

use crate::error::Result;
use crate::generators::{make_path, make_star, MassMode};
use crate::graph::ProblemSpec;
use crate::spectral::{lambda0, SpectralOptions};
use crate::torsion::solve_torsion_p2;

pub const COLUMNS: [&str; 13] = [
    "E",
    "T2_path_unit",
    "lam_path_unit",
    "kj_path_unit",
    "T2_path_deg",
    "lam_path_deg",
    "kj_path_deg",
    "T2_star_unit",
    "lam_star_unit",
    "kj_star_unit",
    "T2_star_deg",
    "lam_star_deg",
    "kj_star_deg",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub rigidity: f64,
    pub lambda0: f64,
    pub product: f64,
}

impl Sample {
    pub fn of(spec: &ProblemSpec<f64>) -> Result<Self> {
        let rigidity = solve_torsion_p2(spec)?.rigidity;
        let lambda0 = lambda0(spec, &SpectralOptions::default())?.lambda0;
        Ok(Self {
            rigidity,
            lambda0,
            product: rigidity.powf(2.0 / 3.0) * lambda0,
        })
    }
}

/// One row per edge count; the star has a single Dirichlet leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub edges: usize,
    pub path_unit: Sample,
    pub path_deg: Sample,
    pub star_unit: Sample,
    pub star_deg: Sample,
}

impl Row {
    pub fn values(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, s) in [self.path_unit, self.path_deg, self.star_unit, self.star_deg].iter().enumerate() {
            out[3 * k] = s.rigidity;
            out[3 * k + 1] = s.lambda0;
            out[3 * k + 2] = s.product;
        }
        out
    }
}

pub fn row(edges: usize) -> Result<Row> {
    Ok(Row {
        edges,
        path_unit: Sample::of(&make_path(edges, MassMode::Unit, 1.0)?)?,
        path_deg: Sample::of(&make_path(edges, MassMode::Degree, 1.0)?)?,
        star_unit: Sample::of(&make_star(edges, MassMode::Unit)?)?,
        star_deg: Sample::of(&make_star(edges, MassMode::Degree)?)?,
    })
}

pub fn rows(emax: usize) -> Result<Vec<Row>> {
    (1..=emax).map(row).collect()
}

/// Limit of the path product with `m = deg`.
pub fn path_degree_limit() -> f64 {
    let c = std::f64::consts::PI / 12f64.cbrt();
    c * c / 2f64.cbrt()
}

/// Limit of the path product with unit masses.
pub fn path_unit_limit() -> f64 {
    let c = std::f64::consts::PI / 24f64.cbrt();
    c * c
}
