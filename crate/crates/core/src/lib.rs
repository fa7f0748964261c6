//! Differential spectrum of the Ness-Helleseth binomial
//! `f_u(x) = u x^((q-1)/2 - 1) + x^(q-2)` over GF(3^n), `n` odd.
//!
//! The crate computes the spectrum three ways and cross-checks them:
//! exhaustive DDT histograms ([`ness`]), the per-pair solution census driven
//! by quadratic-character conditions on `z = ab` ([`census`]), and the closed
//! form in terms of the character sums Γ3, Γ4 and the indicator ε
//! ([`closed_form`]). [`char_sums`] holds the character-sum machinery the
//! closed form rests on.

pub mod census;
pub mod char_sums;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod field;
pub mod ness;
mod poly3;
pub mod sampling;

pub use error::{Error, Result};
pub use field::{Chi, FieldCtx, FieldElem};
