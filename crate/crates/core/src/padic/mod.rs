//! 3-adic verification engine.
//!
//! Works in the unramified extension of Z_3 of degree `n`, truncated mod
//! `3^k`, and its ramified quadratic extension by `pi` with `pi^2 = -3`.
//! All arithmetic is exact modular integer arithmetic.

pub mod checks;
pub mod gamma;
pub mod gauss;
pub mod ring;

pub use checks::{
    cong3_check, gross_koblitz_check, gross_koblitz_sweep, stickelberger_check, stickelberger_sweep, valuation_check,
    wt1lem_check, CheckReport, FourierCheck, FourierChecker, GaussCheck,
};
pub use gamma::{gamma3, gamma3_fractional};
pub use gauss::{teichmuller, GaussEngine, GaussSumRecord};
pub use ring::{PiValuation, RamifiedElem, UnramifiedElem, UnramifiedRing, MAX_PRECISION};
