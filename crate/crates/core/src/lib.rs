//! Isotropic lines of the lattice `Z_d^2`.
//!
//! An isotropic line is a set of `d` points of `Z_d^2` whose pairwise
//! symplectic products all vanish. These are exactly the Lagrangian
//! submodules `M = M^ω`. This crate enumerates them exactly, evaluates the
//! closed-form counts (total, through a point, per `SL(2, Z_d)` orbit) and
//! checks each count against an exhaustive scan. It also realizes the group
//! `Σ_D(M)` of basis changes that fix a Lagrangian submodule, together with
//! the unit actions on it.
//!
//! Everything is exact integer arithmetic. Exhaustive scans run through
//! [`exec::Execution`], which is data-parallel when the `parallel` feature
//! (on by default) is enabled and sequential otherwise.
//!
//! ```
//! use isolines::{lines, zring::RingCtx};
//!
//! let ctx = RingCtx::new(12).unwrap();
//! let all = lines::enumerate_lines(&ctx).unwrap();
//! assert_eq!(all.len(), 28);
//! assert_eq!(lines::count_lines_formula(&ctx), 28);
//! ```

pub mod cli;
pub mod dsu;
pub mod error;
pub mod exec;
pub mod lines;
pub mod orbits;
pub mod sigma;
pub mod submodule;
pub mod symplectic;
pub mod verify;
pub mod zring;

pub use error::{Error, Result};
pub use exec::Execution;
pub use lines::LineSet;
pub use orbits::OrbitDescriptor;
pub use sigma::{EPartition, SigmaContext, SigmaGroup};
pub use submodule::Submodule;
pub use symplectic::{Mat2, Vec2};
pub use zring::{PrimePower, RingCtx};
