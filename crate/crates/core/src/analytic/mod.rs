//! Closed-form manifolds (tori, spheres), evaluable maps between them, and
//! cohomology models computed without triangulating.

pub mod expr;
pub mod manifold;
pub mod maps;
pub mod models;
pub mod poly;

use thiserror::Error;

pub use expr::{parse_expressions, Expr, ParseError};
pub use manifold::{Chart, ChartPoint, ManifoldDescriptor};
pub use maps::{parse_map_expr, rational_degree, MapFamily, SmoothMapSpec};
pub use models::{exterior_power, sphere_cohomology_model, sphere_map_degree, torus_cohomology_model, torus_pairing};
pub use poly::RatPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("expected {expected} coordinate expressions, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("map is not well defined on the quotient: {0}")]
    NotWellDefinedOnQuotient(String),
    #[error("chart domain error: {0}")]
    ChartDomain(String),
    #[error("map family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical degree {raw} does not snap to an integer (residual {residual:.3e})")]
    DegreeUnresolved { raw: f64, residual: f64 },
}
