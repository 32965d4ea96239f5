//! Coefficient fields and the strategy for choosing them.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::KoszulError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Prime(u64),
    Rationals,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

/// How the fields of a computation are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldStrategy {
    /// Two distinct random 31-bit primes; `seed` makes the draw reproducible.
    TwoPrimes { seed: Option<u64> },
    Prime(u64),
    Exact,
}

impl Default for FieldStrategy {
    fn default() -> Self {
        FieldStrategy::TwoPrimes { seed: None }
    }
}

impl FieldStrategy {
    pub fn fields(&self) -> Result<Vec<Field>, KoszulError> {
        match *self {
            FieldStrategy::TwoPrimes { seed } => {
                let mut rng = match seed {
                    Some(s) => StdRng::seed_from_u64(s),
                    None => StdRng::from_entropy(),
                };
                let first = random_prime_31(&mut rng);
                let second = loop {
                    let candidate = random_prime_31(&mut rng);
                    if candidate != first {
                        break candidate;
                    }
                };
                Ok(vec![Field::Prime(first), Field::Prime(second)])
            }
            FieldStrategy::Prime(p) => {
                let field = Field::Prime(p);
                field.validate()?;
                Ok(vec![field])
            }
            FieldStrategy::Exact => Ok(vec![Field::Rationals]),
        }
    }
}

impl FromStr for FieldStrategy {
    type Err = KoszulError;

    /// `two-primes`, `two-primes:SEED`, `prime:P`, `exact` (alias `rationals`).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || KoszulError::BadField(format!("unknown field strategy `{text}`"));
        let (head, tail) = match text.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (text, None),
        };
        match (head, tail) {
            ("two-primes", None) => Ok(FieldStrategy::TwoPrimes { seed: None }),
            ("two-primes", Some(s)) => {
                Ok(FieldStrategy::TwoPrimes { seed: Some(s.parse().map_err(|_| bad())?) })
            }
            ("prime", Some(p)) => Ok(FieldStrategy::Prime(p.parse().map_err(|_| bad())?)),
            ("exact" | "rationals", None) => Ok(FieldStrategy::Exact),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FieldStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldStrategy::TwoPrimes { seed: None } => write!(f, "two-primes"),
            FieldStrategy::TwoPrimes { seed: Some(s) } => write!(f, "two-primes:{s}"),
            FieldStrategy::Prime(p) => write!(f, "prime:{p}"),
            FieldStrategy::Exact => write!(f, "exact"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform prime in `[2^30, 2^31)`.
pub fn random_prime_31<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

impl Field {
    /// Rejects moduli that are not primes below `2^32`.
    pub fn validate(&self) -> Result<(), KoszulError> {
        match *self {
            Field::Prime(p) if p >= 1 << 32 || !is_prime(p) => {
                Err(KoszulError::BadField(format!("{p} is not a prime below 2^32")))
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn strategies() {
        let f = FieldStrategy::TwoPrimes { seed: Some(7) }.fields().unwrap();
        assert_eq!(f.len(), 2);
        assert_ne!(f[0], f[1]);
        for field in &f {
            let Field::Prime(p) = field else { panic!() };
            assert!((1 << 30..1 << 31).contains(p));
        }
        assert_eq!(f, FieldStrategy::TwoPrimes { seed: Some(7) }.fields().unwrap());
        assert!(FieldStrategy::Prime(9).fields().is_err());
        assert_eq!(FieldStrategy::Prime(2).fields().unwrap(), vec![Field::Prime(2)]);
        assert_eq!(FieldStrategy::Exact.fields().unwrap(), vec![Field::Rationals]);
    }

    #[test]
    fn parsing() {
        for text in ["two-primes", "two-primes:42", "prime:101", "exact"] {
            assert_eq!(text.parse::<FieldStrategy>().unwrap().to_string(), text);
        }
        assert!("prime".parse::<FieldStrategy>().is_err());
        assert!("float".parse::<FieldStrategy>().is_err());
        assert_eq!(inv_mod(3, 7), 5);
    }
}
