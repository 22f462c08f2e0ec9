//! Exact integer and rational helpers shared by the ring and cohomology modules.
//!
//! Everything here is exact: binomial coefficients are computed over the
//! integers (including the generalized `C(m, k)` for negative `m`), and the
//! Hilbert polynomial of a line bundle is evaluated as an exact rational that
//! must reduce to an integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Generalized binomial coefficient `C(m, k) = m(m-1)...(m-k+1) / k!` for any
/// integer `m` and non-negative `k`. Exact; always an integer.
pub fn binomial(m: i64, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if m >= 0 {
        let m = m as u64;
        if (k as u64) > m {
            return BigInt::zero();
        }
        // Multiply/divide stepwise; each partial quotient is integral.
        let mut acc = BigInt::one();
        for i in 0..k as u64 {
            acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
        }
        acc
    } else {
        // C(m, k) = (-1)^k C(k - m - 1, k) for m < 0.
        let flipped = binomial(k as i64 - m - 1, k);
        if k.is_multiple_of(2) {
            flipped
        } else {
            -flipped
        }
    }
}

/// `binomial` narrowed to `u64`; errors on overflow instead of wrapping.
pub fn binomial_u64(m: i64, k: u32) -> Result<u64> {
    let b = binomial(m, k);
    if b.is_negative() {
        return Err(Error::Internal(format!(
            "binomial({m}, {k}) is negative where a dimension was expected"
        )));
    }
    u64::try_from(&b).map_err(|_| Error::Internal(format!("binomial({m}, {k}) overflows u64")))
}

/// `k!` as a `BigInt`.
pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).map(BigInt::from).product()
}

/// Euler characteristic of `O(d)` on `P^n`: the binomial `C(n+d, n)` extended
/// as a polynomial in `d`, i.e. `(d+1)(d+2)...(d+n) / n!`.
pub fn hilbert_euler_pn(n: u32, d: i64) -> Result<i64> {
    let mut num = BigInt::one();
    for k in 1..=n as i64 {
        num *= BigInt::from(d + k);
    }
    let den = factorial(n);
    let q = BigRational::new(num, den);
    rational_to_i64(&q)
}

/// Convert an exact rational known to be an integer into `i64`.
pub fn rational_to_i64(q: &BigRational) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::NonIntegerValue(q.to_string()));
    }
    i64::try_from(q.numer()).map_err(|_| Error::Internal(format!("{q} overflows i64")))
}

/// Parse a rational from either a JSON-style integer string or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational component `{t}`")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Render a rational canonically: plain integer when integral, else `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(0, 1), BigInt::zero());
    }

    #[test]
    fn binomial_negative_top() {
        // C(-1, k) = (-1)^k
        assert_eq!(binomial(-1, 0), BigInt::from(1));
        assert_eq!(binomial(-1, 1), BigInt::from(-1));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
        // C(-3, 2) = (-3)(-4)/2 = 6
        assert_eq!(binomial(-3, 2), BigInt::from(6));
    }

    #[test]
    fn hilbert_polynomial_matches_binomial() {
        // For d >= 0 the polynomial equals C(n+d, n).
        for n in 1..=4u32 {
            for d in 0..=6i64 {
                let via_poly = hilbert_euler_pn(n, d).unwrap();
                let via_binom = binomial(n as i64 + d, n);
                assert_eq!(BigInt::from(via_poly), via_binom, "n={n} d={d}");
            }
        }
        // Known negative twists.
        assert_eq!(hilbert_euler_pn(2, -3).unwrap(), 1);
        assert_eq!(hilbert_euler_pn(2, -1).unwrap(), 0);
        assert_eq!(hilbert_euler_pn(3, -4).unwrap(), -1);
    }

    #[test]
    fn rational_parsing_round_trip() {
        let q = parse_rational("3/2").unwrap();
        assert_eq!(format_rational(&q), "3/2");
        let z = parse_rational("-7").unwrap();
        assert_eq!(format_rational(&z), "-7");
        assert!(parse_rational("1/0").is_err());
    }
}
