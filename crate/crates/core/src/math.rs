//! Float helpers that work without `std`.

pub(crate) use libm::{atan2, cos, exp, fabs, log, pow, sin, sqrt};

pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

#[inline]
pub(crate) fn cube(x: f64) -> f64 {
    x * x * x
}

/// Binary entropy in bits of a Bernoulli(q) variable.
pub(crate) fn binary_entropy(q: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * log(x) };
    (term(q) + term(1.0 - q)) / core::f64::consts::LN_2
}
