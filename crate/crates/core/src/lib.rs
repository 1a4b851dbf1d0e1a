//! Good filtrations of `St_r (x) L(lambda)` for simple algebraic groups,
//! checked with Weyl characters and the Jantzen sum formula.

pub mod chars;
pub mod criteria;
pub mod error;
pub mod jantzen;
pub mod prfilt;
pub mod rootsys;
pub mod verifier;
pub mod weyl;

pub use chars::{WeightMultiset, WeylCombo};
pub use criteria::GuaranteeReason;
pub use error::{Error, Result};
pub use jantzen::{FactorMap, Jantzen, JsfOutput, SimpleCharCache};
pub use prfilt::PrDecomposition;
pub use rootsys::{build, Root, RootSystemData, TypeLabel, Weight};
pub use verifier::{CaseReport, CounterexampleReport, Verdict, Verifier};
pub use weyl::{WeylElement, WeylGroup};
