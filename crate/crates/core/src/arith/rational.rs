use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// A non-negative fraction kept in lowest terms.
///
/// Abundancy ratios σ(n)/n and the construction targets fit comfortably in
/// 64-bit numerators and denominators; wider sums use `BigRational`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<u64>);

impl Rational {
    pub fn new(numer: u64, denom: u64) -> Result<Self, ArithError> {
        if denom == 0 {
            return Err(ArithError::Zero);
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn from_integer(n: u64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

/// Always `num/den`, including integers (`1/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string(), "expected `num/den` or an integer".into());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let r = Rational::new(24, 15).unwrap();
        assert_eq!((r.numer(), r.denom()), (8, 5));
        assert_eq!(r.to_string(), "8/5");
        assert_eq!(Rational::from_integer(1).to_string(), "1/1");
    }

    #[test]
    fn parse_and_order() {
        let a: Rational = "35/12".parse().unwrap();
        let b: Rational = "3".parse().unwrap();
        assert!(a < b);
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }
}
