//! Exact rational coefficients. Every algebraic module works over `Q`;
//! floating point only appears in the quadrature oracle.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Accepts `p`, `-p`, or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from(n))
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64()
        .unwrap_or_else(|| x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap())
}

/// Sign-aware rendering helper used by the condition printers.
pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "1/2", "-5/3"] {
            let v = parse_q(s).unwrap();
            assert_eq!(format_q(&v), s);
        }
        assert_eq!(parse_q("4/2").map(|v| format_q(&v)).as_deref(), Some("2"));
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }
}
