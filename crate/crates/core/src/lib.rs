// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cayley;
pub mod contour;
pub mod curve;
pub mod envelope;
pub mod gallery;
pub mod geom;
pub mod intersect;
pub mod offset;
pub mod poly;
pub mod polyline;
pub mod request;
pub mod roots;
pub mod scenario;
pub mod service;
pub mod singular;
pub mod svg;
pub mod tol;
