//! Exact ternary Kloosterman sums over GF(3^n) and their classification
//! modulo 2, 9, 18, 27 and 54.
//!
//! * [`field`]: GF(3^n) arithmetic with log tables, trace, squareness.
//! * [`traces`]: the exponent sets `X`, `Y`, `Z` and generalized traces.
//! * [`kloosterman`]: `K(a)` by direct summation and by a radix-3 transform.
//! * [`congruence`]: closed-form residues and exhaustive verification sweeps.
//! * [`padic`]: Teichmüller lifts, Gauss sums and the 3-adic Gamma function,
//!   used to check the congruences that underlie the classifiers.
//!
//! ```
//! use ternary_kloosterman::{field::FieldContext, kloosterman, par::Execution};
//!
//! let gf9 = FieldContext::new(2).unwrap();
//! let table = kloosterman::kloosterman_all_fast(&gf9, Execution::Sequential).unwrap();
//! assert_eq!(table.values[1], 6);
//! ```

pub mod congruence;
pub mod eisenstein;
pub mod error;
pub mod field;
pub mod kloosterman;
pub mod padic;
pub mod par;
pub mod traces;

pub use error::{Error, Result};
