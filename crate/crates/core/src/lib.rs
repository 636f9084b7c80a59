//! Exact weighted k-center on a line.
//!
//! Points are reduced to half-planes, the half-planes to dual paths, and the
//! paths to a segment tree of lower hulls. That index answers the 1-center
//! cost `α(i, j)` of any run of consecutive points, and the optimizer searches
//! those costs for the smallest radius `k` centers can achieve.
//!
//! ```
//! use weighted_kcenter::{model::ProblemInstance, solver::solve};
//!
//! let inst = ProblemInstance::normalize([(0.0, 1.0), (2.0, 3.0), (5.0, 2.0), (6.0, 1.0)])?;
//! let sol = solve(&inst, 2)?;
//! assert!((sol.radius - 1.5).abs() < 1e-12);
//! assert_eq!(sol.breakpoints, vec![2, 4]);
//! # Ok::<(), weighted_kcenter::Error>(())
//! ```

pub mod error;
pub mod gen;
pub mod hull;
pub mod io;
pub mod lp;
pub mod model;
pub mod oracles;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use model::ProblemInstance;
pub use solver::{solve, Solution};
