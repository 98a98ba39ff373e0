//! Torsional rigidity and the bottom of the spectrum of p-Schrödinger
//! operators on finite weighted graphs.
//!
//! The core types are generic over the scalar: [`Scalar`] for anything that
//! only needs field arithmetic (exact rationals work there), [`Real`] for
//! code that takes fractional powers. The `f64` aliases below are what most
//! callers want.

pub mod bounds;
pub mod closed_form;
pub mod energy;
pub mod document;
pub mod error;
pub mod figure;
pub mod generators;
pub mod geometry;
pub mod graph;
mod linalg;
mod quotient;
pub mod scalar;
pub mod spectral;
pub mod surgery;
pub mod torsion;

pub use bounds::{BoundCheck, BoundId, BoundReport};
pub use energy::VertexFunction;
pub use error::{Error, Result};
pub use generators::MassMode;
pub use geometry::Reach;
pub use graph::{EdgeRecord, ProblemSpec, VertexId, VertexRecord, WeightedGraph};
pub use scalar::{Real, Scalar};
pub use spectral::{Evidence, SpectralMethod, SpectralOptions, SpectralSolution};
pub use torsion::{Method, SolverOptions, TorsionSolution};

pub type Graph = WeightedGraph<f64>;
pub type Spec = ProblemSpec<f64>;
pub type Function = VertexFunction<f64>;
pub type Torsion = TorsionSolution<f64>;
pub type Spectrum = SpectralSolution<f64>;
pub type Report = BoundReport<f64>;
