//! Layered, area-proportional rectangle contact representations.
//!
//! Every vertex of a layered, internally triangulated planar graph becomes a
//! unit-height rectangle of prescribed width on its layer. Solvers in this crate
//! place the rectangles without false adjacencies while either
//!
//! * minimizing the total gap width ([`flow::minimize_area`], with the bounding-box
//!   variant [`flow::minimize_bounding_box`]),
//! * maximizing realized contacts on two layers ([`twolayer::maximize_contacts_2layer`]),
//! * or maximizing realized contacts on any number of layers
//!   ([`exact::maximize_contacts`]).
//!
//! All arithmetic is exact ([`Q`] is a 64-bit rational). [`oracle`] holds
//! brute-force reference solvers for small integer instances.

pub mod cli;
pub mod error;
pub mod exact;
pub mod flow;
pub mod io;
pub mod model;
pub mod oracle;
pub mod twolayer;

pub use error::{Error, Result};
pub use model::{
    contact_report, false_adjacency_pairs, validate_graph, ContactReport, Edge, EdgeKind, Interval,
    LayeredGraph, Representation, VertexId, Violation,
};

/// Exact rational number used for widths, coordinates and epsilon.
pub type Q = num_rational::Rational64;
