//! Exact computation of the invariants attached to a plane divisorial
//! valuation on a smooth projective surface: multiplicity sequences, dual
//! graphs, maximal contact values and volumes; Zariski decompositions along
//! the segment `D* - t E_r` and the chamber walk it induces; Newton-Okounkov
//! polygons of flag valuations on the last exceptional divisor; and certified
//! bound intervals for the valuative Seshadri constant and the Seshadri-type
//! constant, with minimality verdicts.
//!
//! All arithmetic is exact: arbitrary-precision rationals plus quadratic
//! surds `a + b*sqrt(n)`. No floating point participates in any decision;
//! floats appear only when rendering SVG coordinates.

pub mod error;
pub mod lattice;
pub mod nok;
pub mod parser;
pub mod proximity;
pub mod rat;
pub mod report;
pub mod scene;
pub mod seshadri;
pub mod surd;
pub mod svg;
pub mod zariski;

pub use serde_json;

pub use error::{CoreError, Diagnostic, Severity};
pub use nok::Flag;
pub use scene::{Model, Scene};
pub use lattice::{CurveRecord, NumericalClass, SurfaceKind, SurfaceModel};
pub use proximity::{PointDecl, ProximityStructure, ValuationInvariants};
pub use rat::Rat;

pub use surd::Surd;
