use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(text: &str, line: usize) -> Result<Rational> {
    let syntax = |message: String| Error::Syntax { line, message };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| syntax(format!("bad rational `{text}`")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| syntax(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(syntax(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_integers_without_denominator() {
        assert_eq!(format_rational(&rat(-3)), "-3");
        assert_eq!(format_rational(&rat_frac(6, -4)), "-3/2");
    }

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("4/6", 1).unwrap(), rat_frac(2, 3));
        assert_eq!(parse_rational("-7", 1).unwrap(), rat(-7));
        assert!(parse_rational("1/0", 3).is_err());
        assert!(parse_rational("x", 3).is_err());
    }
}
