//! Exact Dirichlet spectra of spherical lunes and half-lune triangles, the
//! deformation geometry of the 90° equilateral triangle, its first-variation
//! gap functional, and an independent finite-element eigensolver for the
//! deformed triangles.

pub mod deformation;
pub mod eigensolver;
pub mod error;
pub mod quadrature;
pub mod special_functions;
pub mod spectra;
pub mod variation;

pub use deformation::{CoordPoint, DeformationParams, Direction, MetricTensor};
pub use eigensolver::{DiscreteEigenproblem, SolverConfig};
pub use error::{Error, Result};
pub use special_functions::LegendreParams;
pub use spectra::{Domain, LuneSpec, ModeIndex, SectorDomain, SpectrumEntry, TriangleSpec};
pub use variation::{BilinearTermTable, PairingSpec, TriangleMode};
