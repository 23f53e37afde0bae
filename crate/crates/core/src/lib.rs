//! Geometry of ropelength-filtered spaces of polygonal knots.
//!
//! Static functionals (length, turning, areas, sizes) live in [`knot`];
//! polygonal thickness and admissibility in [`thickness`]; keyframed
//! isotopies and their swept area in [`isotopy`]; projected-area lower
//! bounds and closed-form reference values in [`calibration`]; numerical
//! upper bounds in [`optimizer`]; diagrams and swept-area weighted
//! Reidemeister graphs in [`reidemeister`]. [`corpus`] generates the knot
//! families used throughout the tests and the CLI.

// NaN must fail these guards, so `!(x > 0.0)` is written on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod corpus;
pub mod error;
pub mod isotopy;
pub mod knot;
pub mod meb;
pub mod optimizer;
pub mod quadrature;
pub mod reidemeister;
pub mod segment;
pub mod thickness;
pub mod vec3;

pub use calibration::{Bound, BoundKind};
pub use corpus::{generate, CorpusSpec, Family};
pub use error::{Error, Result};
pub use isotopy::{infinitesimal_seminorm, segment_area_integral, swept_area, IsotopyPath, SweptAreaResult};
pub use optimizer::{
    lambda_sweep, loop_cost, merge_cost, merge_scale_upper, minimize_sweep, optimize_from, LevelBound, OptimizeConfig,
    OptimizeResult,
};
pub use knot::{OrientedPlane, PolygonalKnot, SizeFunctionalKind};
pub use reidemeister::{
    build_graph, detect_events, diagram_distance, project, Diagram, DiagramGraph, GaussCode, MoveKind, ReidemeisterEvent,
};
pub use thickness::{check_admissible, dcsd, ropelength, thickness, vertex_radius, AdmissibilityReport, ThicknessBreakdown};
pub use vec3::{RigidMotion, Vec3};
