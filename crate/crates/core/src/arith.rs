//! Exact number theory over unsigned integers.
//!
//! Every routine is generic over [`Natural`], implemented for the machine
//! widths and for [`BigUint`]. The elimination code works in `BigUint`
//! throughout; the machine widths are there for the property tests and for
//! callers that know their values are small.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Trial division runs up to this bound before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Unsigned integer types usable by the arithmetic routines.
pub trait Natural:
    Integer + Roots + Clone + Hash + Debug + Display + FromStr + ToPrimitive + Send + Sync + 'static
{
    fn from_u64(n: u64) -> Self;
    fn to_biguint(&self) -> BigUint;
    fn from_biguint(n: &BigUint) -> Option<Self>;
}

macro_rules! machine_natural {
    ($($t:ty),*) => {$(
        impl Natural for $t {
            fn from_u64(n: u64) -> Self {
                <$t>::try_from(n).expect("value does not fit the target width")
            }
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }
            fn from_biguint(n: &BigUint) -> Option<Self> {
                <$t>::try_from(n).ok()
            }
        }
    )*};
}

machine_natural!(u32, u64, u128);

impl Natural for BigUint {
    fn from_u64(n: u64) -> Self {
        BigUint::from(n)
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
    fn from_biguint(n: &BigUint) -> Option<Self> {
        Some(n.clone())
    }
}

/// Serde adapter writing integers as decimal strings.
pub mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(n: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let text = String::deserialize(d)?;
        text.parse()
            .map_err(|_| D::Error::custom(format!("not an integer: {text}")))
    }
}

/// Canonical prime factorization: primes strictly increasing, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    prime_powers: Vec<(T, u32)>,
}

impl<T: Natural> Factorization<T> {
    /// The factorization of 1.
    pub fn one() -> Self {
        Self {
            prime_powers: Vec::new(),
        }
    }

    /// Builds a factorization from arbitrary `(prime, exponent)` pairs,
    /// merging repeated primes and dropping zero exponents.
    pub fn from_prime_powers(mut pairs: Vec<(T, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(T, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match merged.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        Self {
            prime_powers: merged,
        }
    }

    pub fn prime_powers(&self) -> &[(T, u32)] {
        &self.prime_powers
    }

    pub fn is_one(&self) -> bool {
        self.prime_powers.is_empty()
    }

    /// The factored value.
    pub fn value(&self) -> T {
        self.prime_powers
            .iter()
            .fold(T::one(), |acc, (p, e)| acc * pow(p, *e))
    }

    /// Number of divisors, `prod (e_i + 1)`, as an unbounded integer.
    pub fn divisor_count(&self) -> BigUint {
        self.prime_powers
            .iter()
            .fold(BigUint::one(), |acc, (_, e)| acc * BigUint::from(*e + 1))
    }

    /// Factorization of the product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs = self.prime_powers.clone();
        pairs.extend(other.prime_powers.iter().cloned());
        Self::from_prime_powers(pairs)
    }

    /// Factorization of `self^e`.
    pub fn pow(&self, e: u32) -> Self {
        Self {
            prime_powers: self
                .prime_powers
                .iter()
                .map(|(p, k)| (p.clone(), k * e))
                .collect(),
        }
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<T> {
        let mut out = vec![T::one()];
        for (p, e) in &self.prime_powers {
            let len = out.len();
            let mut pk = T::one();
            for _ in 0..*e {
                pk = pk * p.clone();
                for i in 0..len {
                    let d = out[i].clone() * pk.clone();
                    out.push(d);
                }
            }
        }
        out.sort();
        out
    }
}

/// `base^exp` by repeated squaring.
pub fn pow<T: Natural>(base: &T, exp: u32) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd<T: Natural>(a: &T, b: &T) -> T {
    a.gcd(b)
}

/// True iff `n` is a perfect square (0 and 1 included).
pub fn is_perfect_square<T: Natural>(n: &T) -> bool {
    let r = n.sqrt();
    r.clone() * r == *n
}

/// Largest `e` with `p^e | n`. Panics on `n = 0` or `p < 2`.
pub fn p_valuation<T: Natural>(p: &T, n: &T) -> u32 {
    assert!(!n.is_zero(), "valuation of zero is undefined");
    assert!(*p > T::one(), "valuation base must exceed one");
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// If `q = p^a` for a prime `p`, returns `(p, a)`.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(&q);
    match f.prime_powers() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

/// Canonical factorization of `n >= 1` using a fixed Pollard-rho seed.
pub fn factorize<T: Natural>(n: &T) -> Factorization<T> {
    factorize_seeded(n, 0)
}

/// Canonical factorization of `n >= 1`. The seed only steers the rho
/// fallback; the result does not depend on it.
pub fn factorize_seeded<T: Natural>(n: &T, seed: u64) -> Factorization<T> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.to_biguint();
    let mut pairs: Vec<(BigUint, u32)> = Vec::new();

    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if let Some(small) = rest.to_u64() {
            // same loop in machine words once the cofactor fits
            let mut m = small;
            while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= m {
                let mut e = 0;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                if e > 0 {
                    pairs.push((BigUint::from(d), e));
                }
                d += if d == 2 { 1 } else { 2 };
            }
            rest = BigUint::from(m);
            if d.saturating_mul(d) > m {
                break;
            }
            continue;
        }
        let bd = BigUint::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            pairs.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }

    if !rest.is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                pairs.push((m, 1));
                continue;
            }
            let f = pollard_rho(&m, &mut rng);
            let other = &m / &f;
            stack.push(f);
            stack.push(other);
        }
    }

    let converted = pairs
        .into_iter()
        .map(|(p, e)| (T::from_biguint(&p).expect("factor exceeds input width"), e))
        .collect();
    Factorization::from_prime_powers(converted)
}

/// All divisors of `n >= 1`, increasing.
pub fn divisors<T: Natural>(n: &T) -> Vec<T> {
    factorize(n).divisors()
}

const MR_BASES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin on a fixed set of sixteen prime bases. Deterministic below
/// 3.3e24; a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let bb = BigUint::from(b);
        if *n == bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    loop {
        let c = BigUint::from(rng.gen_range(1u64..u64::MAX)) % n;
        let mut x = BigUint::from(rng.gen_range(2u64..u64::MAX)) % n;
        let mut y = x.clone();
        let mut d = BigUint::one();
        let step = |z: &BigUint| (z * z + &c) % n;
        while d.is_one() {
            x = step(&x);
            y = step(&step(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
}
