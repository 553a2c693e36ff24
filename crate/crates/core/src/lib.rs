//! Quaternionic slice-function calculus with numerical checks of bilaplacian Riesz measures
//! and four-dimensional Jensen formulas.
//!
//! Functions enter the integral identities in factored form ([`FactoredSlicePreserving`],
//! [`PqlFunction`], Blaschke factors or ordered [`MixedProduct`]s of those), so every zero and
//! pole is known exactly and recorded in a [`ZeroPoleLedger`].

mod complex;
pub mod blaschke;
pub mod diffops;
pub mod error;
pub mod jensen;
pub mod ledger;
pub mod mixed;
pub mod numeric;
pub mod pql;
pub mod quadrature;
pub mod quaternion;
pub mod riesz;
pub mod slice;

pub use blaschke::{BlaschkeKind, BlaschkeSpec};
pub use error::{Error, Result};
pub use ledger::{EntryKind, LedgerEntry, Role, ZeroPoleLedger};
pub use mixed::{MixedPart, MixedProduct};
pub use pql::PqlFunction;
pub use quaternion::{Quaternion, SliceCoords};
pub use slice::{
    Eval, FactoredSlicePreserving, LogAtom, LogModulus, QuatCoeffSeries, RealCoeffSeries, RealFactor,
    SphereFactor,
};
