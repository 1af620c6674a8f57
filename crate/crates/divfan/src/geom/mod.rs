//! Exact rational convex geometry.

pub mod complex;
pub mod cone;
pub mod dd;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;
pub mod rational;

pub use complex::{common_refinement, covers_space, is_polyhedral_complex};
pub use cone::Cone;
pub use polyhedron::{Extended, TailedPolyhedron};
pub use rational::{q, qi, qvec, Q, QVec};
