//! Float helpers that `core` does not provide.

pub(crate) const TWO_PI: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// `sin(2πx)`, reduced to `[-1/4, 1/4]` first so that values near
/// multiples of `1/2` keep their relative precision (and vanish exactly on
/// them).
#[inline]
pub(crate) fn sin_turns(x: f64) -> f64 {
    let r = x - round(x);
    if r > 0.25 {
        libm::sin(TWO_PI * (0.5 - r))
    } else if r < -0.25 {
        -libm::sin(TWO_PI * (0.5 + r))
    } else {
        libm::sin(TWO_PI * r)
    }
}

/// `cos(2πx)` with the same reduction as [`sin_turns`].
#[inline]
pub(crate) fn cos_turns(x: f64) -> f64 {
    cos(TWO_PI * (x - round(x)))
}

/// Fractional part in `[0, 1)`.
#[inline]
pub(crate) fn frac(x: f64) -> f64 {
    let f = x - floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
