//! Exact-arithmetic library for hypergeometric mirror maps and their p-adic
//! congruence machinery.
//!
//! The crate is organized around eight subsystems:
//!
//! - [`padic`]: exact rationals, p-adic valuations, factorial and harmonic
//!   primitives, and the p-adic gamma function on positive integers.
//! - [`series`]: truncated formal power series over exact rationals, with
//!   ring, transcendental, substitution and reversion operations, plus the
//!   log-extended series needed for Picard–Fuchs checks.
//! - [`coeffs`]: coefficient families — factorial ratios B_N, their vector
//!   products, Zudilin's integer coefficients in both representations, the
//!   associated harmonic weights, and the Landau step function Δ.
//! - [`maps`]: builders for every mirror map (canonical coordinates q_N,
//!   q_{L,N} and their Zudilin analogues), plus Picard–Fuchs annihilation
//!   and the product identity relating q_N to q_{N,N} and q_{1,N}.
//! - [`certify`]: the constants Θ_L, Ξ_N, Ω_N, M_N and finite-order
//!   certification of root-integrality statements, with sharpness witnesses.
//! - [`dwork`]: executable instances of the congruence lemmas, the C/S sums,
//!   Dwork's three formal-congruence conditions, and the Dieudonné–Dwork
//!   ratio test, with a seeded randomized suite.
//! - [`scan`]: high-throughput fixed-prime scans of v_p(H_N) and v_p(H_N − 1)
//!   and the Wolstenholme-prime search.
//! - [`yukawa`]: the Yukawa coupling, its Lambert decomposition, and
//!   instanton numbers.
//!
//! All values are immutable after construction and safe to move across
//! threads; the few internal caches are lock-protected with single-writer
//! initialization.

pub mod certify;
pub mod coeffs;
pub mod dwork;
mod error;
pub mod maps;
pub mod padic;
pub mod report;
pub mod scan;
pub mod series;
pub mod yukawa;

pub use error::{Error, Result};
pub use padic::{Rat, Valuation};
pub use report::CertReport;
pub use series::{LogSeries, TruncSeries};
