//! The maps `κ₂`, `κ_n` and their dynamics, certified on exact cylinders
//! and on constructed points.

mod base_n;
mod cylinder;
mod fixed;
mod horseshoe;
mod liyorke;
mod probe;

pub use base_n::{a2n_member, kappa_n_upper_bound, kappa_sup_truncated, A2nMembership, KappaSup};
pub use cylinder::{cylinder, closed_cylinder, Cylinder, DyadicRational};
pub use fixed::{fixed_point_candidates, FixedPointCandidate};
pub use horseshoe::{horseshoe_certificate, HorseshoeCertificate, HorseshoeInterval};
pub use liyorke::{liyorke_witnesses, LiYorkeReport, OrbitStep};
pub use probe::{measure_probe, probability_of_triple_run, ProbeEstimate, ProbeStats};

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::exponent::{critical_exponent, ExponentValue};
use crate::expansion::expand;
use crate::word::{thue_morse_prefix, FiniteWord};

/// `1/E(w)` for a nonempty prefix `w` of an expansion; an upper bound on the
/// `κ` value of every point whose expansion starts with `w`.
pub fn kappa_bound_of_prefix(w: &FiniteWord) -> Result<BigRational> {
    match critical_exponent(w).0 {
        ExponentValue::Finite(e) if !w.is_empty() => Ok(e.recip()),
        _ => Err(Error::EmptyWord),
    }
}

/// `1/E` of the first `depth` binary digits of `x`; nonincreasing in depth.
pub fn kappa2_upper_bound(x: &BigRational, depth: usize) -> Result<BigRational> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    kappa_bound_of_prefix(&expand(x, 2, depth)?)
}

/// Bracket `[(0.τ_k)_2, (0.τ_k)_2 + 2^{-k}]` of `x_τ = (0.τ)_2`.
pub fn x_tau(k: usize) -> Result<(DyadicRational, DyadicRational)> {
    if k == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let p = thue_morse_prefix(k);
    let lo = DyadicRational::from_word(&p);
    let hi = lo.add_ulp(k);
    Ok((lo, hi))
}

/// `κ₂(x_τ) = 1/E(τ) = 1/2`.
pub fn kappa2_of_x_tau() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}
