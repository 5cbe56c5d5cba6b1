//! Redrawing graph drawings so that every pair of edges crosses at most once.
//!
//! Starting from an arbitrary drawing, [`untangler::untangle`] splits the
//! crossing edges with a balanced separator of their intersection graph,
//! untangles both sides recursively and then removes repeated crossings with
//! two surgery moves ([`transforms::reduce_crossings`] and
//! [`transforms::remove_self_crossings`]) whose progress is tracked by a
//! lexicographic potential. The run reports the measured separator constant
//! and checks the resulting crossing count against
//! `4·ĉ·k^{3/2}·log₂ l`, where `k` is the number of crossing pairs and `l`
//! the number of crossing edges.
//!
//! Modules:
//! - [`drawing`]: combinatorial drawings, validation by face tracing, counts
//! - [`geometry`]: exact polyline drawings, ingestion, random generation
//! - [`render`]: SVG output
//! - [`transforms`]: the surgery moves and the normalization loop
//! - [`separator`]: string graphs and balanced vertex separators
//! - [`untangler`]: the recursion and its bound report

pub mod drawing;
pub mod error;
pub mod geometry;
pub mod render;
pub mod separator;
pub mod transforms;
pub mod untangler;

pub use drawing::{Drawing, EdgeId, EdgeSet};
pub use error::{Error, Result};
