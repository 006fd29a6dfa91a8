//! Flag-transitive symmetric designs with unitary socle.

pub mod arith;
pub mod catalog;
pub mod design;
pub mod elimination;
pub mod hermitian;
pub mod permgroup;
pub mod sieve;

use num_bigint::BigUint;

pub use sieve::DesignParams;

/// Arbitrary-precision natural number used for group orders and parameters.
pub type Nat = BigUint;
/// Design parameters over [`Nat`].
pub type Params = DesignParams<Nat>;
