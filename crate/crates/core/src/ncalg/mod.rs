//! Exact free noncommutative differential algebra.
//!
//! Polynomials are finite Gaussian-rational combinations of words in the jet
//! letters `U_{kS}`, `W_{kS}` and the diagonal variable `S`. The derivation
//! `d` acts on jets by raising the order and sends `S` to the identity.

mod antiderive;
mod coeff;
mod eval;
mod poly;
mod serial;
mod word;

pub use antiderive::antiderive;
pub use coeff::GaussianRational;
pub use eval::{evaluate, CompiledPoly, JetPoint};
pub use poly::NcPoly;
pub use serial::{from_json, to_json, to_latex, JsonTerm};
pub use word::{words_of_weight, Letter, LetterKind, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("polynomial is not a total derivative (weight {weight} component)")]
    NotATotalDerivative { weight: u32 },
    #[error("polynomial contains the letter S")]
    SContamination,
    #[error("letter {0} has no assigned matrix")]
    UnassignedLetter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
