//! Algebra of grafted and exotic aromatic forests, and the order conditions
//! for sampling the invariant measure of ergodic SDE integrators.
//!
//! The crate is organized around canonical [`forest::Forest`] values:
//! [`text`] parses and prints them, [`enumerate`] lists whole families,
//! [`series`] provides the linear algebra (grafting, coproduct, composition
//! products), [`stochastic`] relates grafted and exotic forests through
//! expectation, [`order`] rewrites forests into order conditions,
//! [`weights`] evaluates them on Runge-Kutta tableaus, and [`oracle`]
//! verifies the whole pipeline analytically on polynomial test problems.
//! [`suite`] bundles the verification criteria run by the CLI and tests.

pub mod enumerate;
pub mod error;
pub mod forest;
pub mod oracle;
pub mod order;
pub mod rational;
pub mod series;
pub mod stochastic;
pub mod suite;
pub mod tables;
pub mod text;
pub mod weights;

pub use error::{ForestError, Result};
pub use forest::{concat, sigma, validate, Deco, Forest, IsoWitness, RawForest, Size};
pub use series::{ck_coproduct, dual_ck, gl_product, graft, FormalSum};
pub use text::{parse, print_canonical, print_latex};
