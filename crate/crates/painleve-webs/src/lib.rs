//! Exact-arithmetic engine for the geometry of Painlevé character varieties:
//! sparse rational polynomial arithmetic, the function algebra of a cubic
//! surface `{P = 0}`, Blaschke curvature of coordinate 3-webs, Hess-connection
//! curvature of bi-Lagrangian coordinate pairs, parameter-ideal extraction with
//! a reduced Buchberger engine, and the surface automorphism dynamics.

pub mod context;
pub mod dynamics;
pub mod error;
pub mod gcd;
pub mod hess;
pub mod ideal;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod report;
pub mod surface;
pub mod testing;
pub mod verify;
pub mod web;

pub use context::VariableContext;
pub use dynamics::{
    compose_maps, involution_map, non_periodicity_probe, periodicity_check, phi_affine_form,
    verify_surface_symmetries, AffinePlaneMap, PolyMap,
};
pub use error::{EngineError, Result};
pub use ideal::{flat_locus, CurvatureKind, GroebnerBasis, IdealGens, IdealKind};
pub use poly::{MonomialOrder, Polynomial};
pub use ratfun::RationalFunction;
pub use report::{Report, ReportEntry, Status};
pub use surface::{Chart, SurfaceAlgebra, SurfaceAlgebraElement, SurfaceSpec};
pub use verify::{verify_pi_web, verify_table};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
