//! Exact rational scalars and the handful of helpers built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// True when `x + k == 0` for some integer `k` in `0..=n`.
pub fn hits_nonpositive_integer(x: &Rational, n: u32) -> bool {
    if !x.is_integer() {
        return false;
    }
    let v = x.to_integer();
    v <= BigInt::zero() && v >= -BigInt::from(n)
}

/// Parses `"p"` or `"p/q"`; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders as `p` or `p/q` with a leading `-` when negative.
pub fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn render_abs(r: &Rational) -> String {
    render(&r.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_by_hand() {
        // (3)_2 = 12, (5)_2 = 30
        assert_eq!(pochhammer(&int(3), 2), int(12));
        assert_eq!(pochhammer(&int(5), 2), int(30));
        assert_eq!(pochhammer(&q(1, 2), 0), int(1));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(render(&q(-3, 2)), "-3/2");
        assert_eq!(render(&int(0)), "0");
    }

    #[test]
    fn nonpositive_integer_guard() {
        assert!(hits_nonpositive_integer(&int(-2), 3));
        assert!(hits_nonpositive_integer(&int(0), 0));
        assert!(!hits_nonpositive_integer(&int(-4), 3));
        assert!(!hits_nonpositive_integer(&q(-1, 2), 3));
        assert!(!hits_nonpositive_integer(&int(1), 3));
    }
}
