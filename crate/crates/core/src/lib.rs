//! Exact critical exponents of words, constructions of infinite binary words
//! with a prescribed critical exponent, searches over word extensions, and
//! certified dynamics of the map `κ₂(x) = 1/E(w_x)`.
//!
//! Everything is exact: exponents are reduced fractions, points of `[0,1]`
//! are rationals or constructed streams compared through dyadic brackets.

pub mod construct;
pub mod error;
pub mod expansion;
pub mod explore;
pub mod exponent;
pub mod kappa;
pub mod stream;
pub mod word;

pub use construct::{
    build_cr, build_near_zero, build_with_tm_prefix, extend_word, make_schedule, Certification, ConstructedPoint,
    Provenance, Real, Schedule, Stage, Target,
};
pub use error::{Error, Result};
pub use expansion::{expand, format_rational, parse_rational, word_value};
pub use explore::{
    achievable_exponents, counterexample_search, ew_bounds, min_exponent_at_depth, min_exponent_search,
    Achievability, BoundsReport, CounterexampleRecord, SearchConfig,
};
pub use exponent::{
    critical_exponent, critical_exponent_oracle, is_power, max_prefix_exponent, ExponentValue, ExtensionState,
    PowerWitness,
};
pub use stream::StreamWord;
pub use word::{delete_prefix, find_subword, mu_power, negate, thue_morse_prefix, FiniteWord, Morphism};

pub use num::rational::BigRational;
