//! Exact monotone cylindrical drawings of complete graphs and algorithms
//! for finding large sets of pairwise disjoint edges in them.

pub mod bounds;
pub mod cyl;
pub mod faults;
pub mod flag;
pub mod generate;
pub mod oracle;
pub mod geometry;
pub mod io;
pub mod lemmas;
pub mod rational;

pub use geometry::{
    crossings, point_relation, recut, relation, validate, CrossingTable, Drawing, EdgeCurve, EdgeKey,
    Point, RelationResult, ValidationReport, Vertex, VertexId, ViolationKind, Wrap,
};
pub use rational::{q, Rational};
