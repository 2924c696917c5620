//! Exact rational arithmetic helpers.
//!
//! Every numeric quantity in this crate (distances, radii, LP values,
//! thresholds) is a [`Rat`]. `num_rational::BigRational` already keeps values
//! in lowest terms with a positive denominator, which is exactly the
//! representation invariant we need; this module adds the parsing/formatting
//! conventions used by the JSON interfaces ("p/q" strings or bare integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn int_u(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Nonnegative integer power, exact.
pub fn pow_u(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Parses "p/q", "p", or "-p/q". Whitespace is not accepted.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.parse::<BigInt>()
            .map_err(|_| format!("invalid integer `{t}` in rational `{s}`"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in rational `{s}`"));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Canonical text form: bare integer when the denominator is 1, else "p/q".
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff `value <= bound_sq.sqrt() * scale`, decided exactly by squaring:
/// the comparison `value - base*scale <= sqrt(extra_sq)*scale` for
/// `bound = base + sqrt(extra_sq)`.
///
/// Used for the irrational guarantees: `1 + 3*sqrt(3)` is `base=1,
/// extra_sq=27`; `2 + sqrt(5)` is `base=2, extra_sq=5`.
pub fn leq_base_plus_sqrt(value: &Rat, scale: &Rat, base: i64, extra_sq: i64) -> bool {
    debug_assert!(!scale.is_negative());
    let shifted = value - int(base) * scale;
    if !shifted.is_positive() {
        return true;
    }
    &shifted * &shifted <= int(extra_sq) * scale * scale
}

/// Serde adapter: emits a JSON integer when the value is integral and fits in
/// `i64`, otherwise a "p/q" string; accepts integers and strings.
pub mod rat_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_integer() {
            if let Ok(n) = i64::try_from(value.numer().clone()) {
                return ser.serialize_i64(n);
            }
        }
        ser.serialize_str(&format_rat(value))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        match Raw::deserialize(de)? {
            Raw::Int(n) => Ok(int(n)),
            Raw::Text(s) => parse_rat(&s).map_err(DeError::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "3/2", "-5/4", "1000000000000000000000/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // normalization to lowest terms, positive denominator
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/2").is_err());
    }

    #[test]
    fn squared_comparison_brackets_irrationals() {
        // 6 <= (1+3*sqrt(3)) * 1 but 6.2 is not
        assert!(leq_base_plus_sqrt(&int(6), &int(1), 1, 27));
        assert!(!leq_base_plus_sqrt(&rat(62, 10), &int(1), 1, 27));
        // 4.2 <= 2+sqrt(5) ~ 4.236, 4.3 is not
        assert!(leq_base_plus_sqrt(&rat(42, 10), &int(1), 2, 5));
        assert!(!leq_base_plus_sqrt(&rat(43, 10), &int(1), 2, 5));
        // degenerate scale: only zero passes
        assert!(leq_base_plus_sqrt(&int(0), &int(0), 1, 27));
        assert!(!leq_base_plus_sqrt(&rat(1, 100), &int(0), 1, 27));
    }

    #[test]
    fn pow_u_exact() {
        assert_eq!(pow_u(&rat(3, 2), 3), rat(27, 8));
        assert_eq!(pow_u(&int(4), 0), int(1));
    }
}
