//! Numerical toolkit for periodic monopoles on `R² × S¹`: the periodic
//! Green's function, singular abelian background fields, the lift to `R⁴`
//! via the Hopf map, spectral data on `S³`, model elliptic solvers and
//! configuration bookkeeping.

pub mod abelian;
pub mod cli;
pub mod config;
pub mod exec;
pub mod geometry;
pub mod green;
pub mod hopf;
pub mod modelsolve;
pub mod quad;
pub mod specfn;
pub mod spectral;
pub mod verify;

pub use exec::Exec;
pub use geometry::CirclePoint3;
