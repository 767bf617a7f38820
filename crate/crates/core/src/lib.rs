//! Exact and empirical tools for expansive symbolic dynamics.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`shiftspace`]: alphabets, finite windows of bi-infinite points and the
//!   λ-adic shift metric, with distances kept as integer exponents.
//! - [`sft`]: edge-graph presentations of subshifts of finite type, parsing,
//!   higher-block recoding, entropy and asymptotic / homoclinic pair search.
//! - [`gamma`]: the exact separation exponent `m(N)` of `σᴺ` and the decay
//!   fit of `γ(σᴺ)·λ^{N/2}`.
//! - [`iet`]: an exactly computed three-interval exchange and its coding.
//! - [`empirical`]: horizon-limited brackets on `m(N)` for subshifts known
//!   only through their language.

pub mod empirical;
pub mod error;
pub mod gamma;
pub mod iet;
pub mod sft;
pub mod shiftspace;

pub use error::{Error, Result};
