//! Exact symbolic kernel for graded manifolds.
//!
//! Functions on a split graded manifold are modeled by a free
//! graded-commutative algebra over a polynomial base ring with rational
//! coefficients. On top of that sit derivations, the bracket dictionary for
//! split Lie n-algebroids, the geometric description of split Lie
//! 2-algebroids, representations up to homotopy, the Weil algebra, the
//! Schouten calculus and Courant algebroids.

pub mod algebra;
pub mod courant;
pub mod derivation;
pub mod error;
pub mod linalg;
pub mod lie2;
pub mod nq;
pub mod poisson;
mod parse;
pub mod report;
pub mod ruth;
pub mod vops;
pub mod weil;

pub use algebra::{koszul_sign, Degree, Element, GeneratorTable, Monomial, Scalar, Table};
pub use derivation::{is_homological, Derivation};
pub use error::{Error, Result};
pub use report::{Check, VerificationReport};
