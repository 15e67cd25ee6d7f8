#![no_std]

extern crate alloc;

pub mod builders;
pub mod geometry;
pub mod instances;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod seed;
pub mod verify;

pub use builders::{BasisChoice, Builder, RigidityMatrix};
pub use geometry::{Params, PointConfig, Position};
pub use graph::{Bipartition, Edge, Graph};
pub use linalg::{Matrix, Rational};
pub use matroid::{CompareMode, LinearMatroid};
