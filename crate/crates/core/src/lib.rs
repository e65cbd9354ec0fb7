//! Exact computer algebra for partially-symmetric Macdonald polynomials.
//!
//! Everything is computed over the fraction field Q(q,t) with arbitrary
//! precision integer coefficients; there is no floating point anywhere.
//! The main objects are
//!
//! - nonsymmetric Macdonald polynomials E_mu and their integral forms,
//! - partially-symmetric Macdonald polynomials P_(lambda|gamma),
//!   symmetric in x_1..x_{n-k}, together with integral forms J and the
//!   proportionality constants j,
//! - Knop--Sahi interpolation polynomials E*_nu with the operator calculus
//!   (Delta, Phi, Xi, Z, Psi) acting on them,
//! - Pieri expansions of e_1[x_1..x_{n-k}] * P and x_j * P in the P basis,
//!   computed by closed formulas, by fully cancelled formulas, and by a
//!   brute-force linear-solve oracle that adjudicates both.

pub mod qtfield;
pub mod multipoly;
pub mod shapes;
pub mod linalg;
pub mod hecke;
pub mod nonsym;
pub mod interpolation;
pub mod partial;
pub mod pieri;
pub mod verify;

pub use qtfield::{BivariatePoly, FieldError, QtRational};
pub use multipoly::{Monomial, SparsePolynomial};
pub use shapes::{Composition, SplitComposition};

use std::collections::HashMap;
use std::sync::Mutex;

/// Shared caches for the expensive constructions (E, E-dagger, E*, P).
/// All values are immutable once inserted; insertion of the same key twice
/// always writes an identical value, so cache state never depends on call
/// order.
#[derive(Default)]
pub struct Ctx {
    pub(crate) e_cache: Mutex<HashMap<Vec<u32>, SparsePolynomial>>,
    pub(crate) edag_cache: Mutex<HashMap<Vec<u32>, SparsePolynomial>>,
    pub(crate) estar_cache: Mutex<HashMap<Vec<u32>, SparsePolynomial>>,
    pub(crate) p_cache: Mutex<HashMap<(Vec<u32>, Vec<u32>), SparsePolynomial>>,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx::default()
    }
}

/// Library-level errors: precondition violations and internal theory
/// violations (the latter mean a formula identity failed where the theory
/// guarantees it, and are reported with a distinct CLI exit code).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Field(FieldError),
    Input(String),
    TheoryViolation(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::Field(e) => write!(f, "{}", e),
            Error::Input(msg) => write!(f, "invalid input: {}", msg),
            Error::TheoryViolation(msg) => write!(f, "internal consistency violation: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

impl From<FieldError> for Error {
    fn from(e: FieldError) -> Self {
        Error::Field(e)
    }
}
