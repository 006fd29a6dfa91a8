//! The flag-transitive parameter sieve.
//!
//! A flag-transitive symmetric `(v, k, λ)` design with point stabilizer `H`
//! satisfies `k(k-1) = λ(v-1)`, `4λ(v-1)+1` square, `k | |H|`, `λv < k²`,
//! and `k | λd` for every subdegree `d`. The routines here generate the
//! candidates allowed by a divisor bound on `k` and then apply the extra
//! constraints one at a time, so a caller can record which predicate
//! removed what.

use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization, Natural};

/// A `(v, k, λ)` triple. Serializes as decimal strings, since the values
/// outgrow JSON's safe integer range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Natural", deserialize = "T: Natural"))]
pub struct DesignParams<T> {
    #[serde(with = "crate::arith::decimal")]
    pub v: T,
    #[serde(with = "crate::arith::decimal")]
    pub k: T,
    #[serde(with = "crate::arith::decimal")]
    pub lambda: T,
}

impl<T: Natural> DesignParams<T> {
    pub fn new(v: T, k: T, lambda: T) -> Self {
        Self { v, k, lambda }
    }

    /// Parameters of the complementary design, `(v, v-k, v-2k+λ)`.
    ///
    /// Only meaningful when `v >= 2k - λ`, which holds for every symmetric
    /// design.
    pub fn complement(&self) -> Self {
        let two_k = self.k.clone() + self.k.clone();
        Self {
            v: self.v.clone(),
            k: self.v.clone() - self.k.clone(),
            lambda: self.v.clone() + self.lambda.clone() - two_k,
        }
    }

    /// `2 < k < v - 1`.
    pub fn is_nontrivial(&self) -> bool {
        let two = T::from_u64(2);
        self.k > two && self.k.clone() + T::one() < self.v
    }
}

/// `k(k-1)/(v-1)` was not an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("k(k-1)/(v-1) is not integral")]
pub struct NonIntegral;

/// `λ = k(k-1)/(v-1)` when integral.
pub fn lambda_from<T: Natural>(v: &T, k: &T) -> Result<T, NonIntegral> {
    if *v <= T::one() || k.is_zero() {
        return Err(NonIntegral);
    }
    let num = k.clone() * (k.clone() - T::one());
    let (q, r) = num.div_rem(&(v.clone() - T::one()));
    if r.is_zero() && !q.is_zero() {
        Ok(q)
    } else {
        Err(NonIntegral)
    }
}

/// Identity `k(k-1) = λ(v-1)`, squareness of `4λ(v-1)+1`, and `λv < k²`.
pub fn basic_check<T: Natural>(p: &DesignParams<T>) -> bool {
    if p.v <= T::one() || p.k.is_zero() || p.lambda.is_zero() {
        return false;
    }
    let vm1 = p.v.clone() - T::one();
    let identity = p.k.clone() * (p.k.clone() - T::one()) == p.lambda.clone() * vm1.clone();
    let disc = T::from_u64(4) * p.lambda.clone() * vm1 + T::one();
    let square = arith::is_perfect_square(&disc);
    let fisher = p.lambda.clone() * p.v.clone() < p.k.clone() * p.k.clone();
    identity && square && fisher
}

/// Every nontrivial `(v, k, λ)` with `k | k_bound`, integral `λ` and
/// [`basic_check`] true, in increasing `k`.
pub fn k_candidates<T: Natural>(v: &T, k_bound: &T) -> Vec<DesignParams<T>> {
    k_candidates_factored(v, &arith::factorize(k_bound))
}

/// As [`k_candidates`], with the bound supplied already factored.
pub fn k_candidates_factored<T: Natural>(
    v: &T,
    k_bound: &Factorization<T>,
) -> Vec<DesignParams<T>> {
    let two = T::from_u64(2);
    let mut out = Vec::new();
    if *v <= two.clone() + T::one() {
        return out;
    }
    let upper = v.clone() - T::one();
    for k in k_bound.divisors() {
        if k <= two {
            continue;
        }
        if k >= upper {
            break;
        }
        if let Ok(lambda) = lambda_from(v, &k) {
            let p = DesignParams::new(v.clone(), k, lambda);
            if basic_check(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Keeps candidates with `k | λd`.
pub fn subdegree_filter<T: Natural>(cands: &[DesignParams<T>], d: &T) -> Vec<DesignParams<T>> {
    cands
        .iter()
        .filter(|c| (c.lambda.clone() * d.clone()).is_multiple_of(&c.k))
        .cloned()
        .collect()
}

/// Keeps candidates with `k | λ·p^e` where `p^e` is the `p`-part of `v-1`:
/// a parabolic action has a unique subdegree that is a power of `p`, and
/// that subdegree divides `v-1`.
pub fn parabolic_power_filter<T: Natural>(
    cands: &[DesignParams<T>],
    p: &T,
    v: &T,
) -> Vec<DesignParams<T>> {
    let e = arith::p_valuation(p, &(v.clone() - T::one()));
    let d = arith::pow(p, e);
    subdegree_filter(cands, &d)
}

/// Tits' lemma: for a non-parabolic point stabilizer in odd characteristic
/// `p`, `p` divides `v`, hence `gcd(p, v-1) = 1`.
pub fn tits_filter<T: Natural>(
    cands: &[DesignParams<T>],
    p: &T,
    v: &T,
    is_parabolic: bool,
    p_odd: bool,
) -> Vec<DesignParams<T>> {
    if is_parabolic || !p_odd {
        return cands.to_vec();
    }
    if (v.clone() - T::one()).is_multiple_of(p) {
        Vec::new()
    } else {
        cands.to_vec()
    }
}

/// Keeps candidates where at least one listed index divides `k`.
pub fn index_divisibility_filter<T: Natural>(
    cands: &[DesignParams<T>],
    indices: &[T],
) -> Vec<DesignParams<T>> {
    cands
        .iter()
        .filter(|c| indices.iter().any(|i| c.k.is_multiple_of(i)))
        .cloned()
        .collect()
}

/// Names of the sieve predicates, in the order [`SieveReport`] lists them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    KDividesBound,
    Nontrivial,
    IntegralLambda,
    SquareDiscriminant,
    FisherInequality,
    Subdegree(String),
    ParabolicPower(String),
    Tits,
    IndexDivisibility(String),
}

/// Result of running a sieve pipeline on one context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Natural", deserialize = "T: Natural"))]
pub struct SieveReport<T> {
    pub context: String,
    pub survivors: Vec<DesignParams<T>>,
    pub checks_applied: Vec<Check>,
}

impl<T: Natural> SieveReport<T> {
    /// Re-checks every survivor against the generic predicates.
    pub fn survivors_consistent(&self) -> bool {
        self.survivors.iter().all(|s| {
            s.is_nontrivial() && basic_check(s) && lambda_from(&s.v, &s.k).as_ref() == Ok(&s.lambda)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn p(v: u64, k: u64, l: u64) -> DesignParams<u64> {
        DesignParams::new(v, k, l)
    }

    /// Independent loop over every k in [3, v-2].
    fn naive(v: u64, bound: u64) -> Vec<DesignParams<u64>> {
        let mut out = Vec::new();
        if v < 5 {
            return out;
        }
        for k in 3..=v - 2 {
            if !bound.is_multiple_of(k) {
                continue;
            }
            let num = k * (k - 1);
            if num % (v - 1) != 0 {
                continue;
            }
            let l = num / (v - 1);
            let disc = 4 * l * (v - 1) + 1;
            let r = (disc as f64).sqrt().round() as u64;
            if l >= 1 && r * r == disc && l * v < k * k {
                out.push(p(v, k, l));
            }
        }
        out
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_from(&36u64, &21), Ok(12));
        assert_eq!(lambda_from(&45u64, &12), Ok(3));
        assert_eq!(lambda_from(&36u64, &16), Err(NonIntegral));
    }

    #[test]
    fn basic_check_examples() {
        assert!(basic_check(&p(36, 21, 12)));
        assert_eq!(12 * 36, 432);
        assert!(basic_check(&p(63, 32, 16)));
        assert_eq!(4 * 16 * 62 + 1, 63 * 63);
        assert!(!basic_check(&p(36, 15, 12)));
    }

    #[test]
    fn k_candidate_examples() {
        assert_eq!(k_candidates(&45u64, &1152), vec![p(45, 12, 3)]);
        assert_eq!(naive(45, 1152), vec![p(45, 12, 3)]);
        assert_eq!(k_candidates(&36u64, &336), vec![p(36, 21, 12)]);
        assert_eq!(naive(36, 336), vec![p(36, 21, 12)]);
        assert_eq!(k_candidates(&63u64, &192), vec![p(63, 32, 16)]);
        assert_eq!(naive(63, 192), vec![p(63, 32, 16)]);
    }

    #[test]
    fn trivial_k_are_excluded() {
        // k = v-1 always gives integral λ = v-2
        assert_eq!(k_candidates(&7u64, &6), vec![p(7, 3, 1)]);
        assert_eq!(k_candidates(&7u64, &12), vec![p(7, 3, 1), p(7, 4, 2)]);
    }

    #[test]
    fn subdegree_examples() {
        assert_eq!(subdegree_filter(&[p(36, 21, 12)], &14), vec![p(36, 21, 12)]);
        assert!(subdegree_filter(&[p(36, 21, 12)], &5).is_empty());
        assert!(subdegree_filter::<u64>(&[], &5).is_empty());
    }

    #[test]
    fn parabolic_examples() {
        // v-1 = 164 = 4·41: k must divide 4λ (filter inputs need not be designs)
        let v = 165u64;
        let keep = p(v, 8, 2);
        let drop = p(v, 9, 2);
        assert_eq!(
            parabolic_power_filter(&[keep.clone(), drop], &2, &v),
            vec![keep]
        );
        // v-1 odd: k | λ is impossible when λ < k
        assert!(parabolic_power_filter(&[p(36, 21, 12)], &2, &36).is_empty());
        assert!(parabolic_power_filter::<u64>(&[], &2, &165).is_empty());
    }

    #[test]
    fn tits_examples() {
        let c = [p(40, 27, 18)];
        assert!(tits_filter(&c, &3, &40, false, true).is_empty());
        assert_eq!(tits_filter(&c, &3, &40, true, true), c.to_vec());
        assert_eq!(tits_filter(&c, &2, &40, false, false), c.to_vec());
    }

    #[test]
    fn index_examples() {
        assert!(index_divisibility_filter(&[p(176, 28, 4)], &[9, 8]).is_empty());
        assert_eq!(
            index_divisibility_filter(&[p(176, 27, 4)], &[9, 8]).len(),
            1
        );
        assert_eq!(index_divisibility_filter(&[p(176, 28, 4)], &[1]).len(), 1);
    }

    #[test]
    fn bigint_sieve_matches_u64() {
        let big = k_candidates(&BigUint::from(63u32), &BigUint::from(192u32));
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].k, BigUint::from(32u32));
    }

    #[test]
    fn sieve_matches_naive_loop_small_v() {
        for v in 4..=400u64 {
            for bound in [720u64, 1152, 5040, 25920, 6048 * 2] {
                assert_eq!(
                    k_candidates(&v, &bound),
                    naive(v, bound),
                    "v={v} bound={bound}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn sieve_matches_naive_loop(v in 5u64..=100_000, bound in 1u64..=2_000_000) {
            prop_assert_eq!(k_candidates(&v, &bound), naive(v, bound));
        }

        #[test]
        fn complement_preserves_identity(v in 5u64..=3000, bound in prop::sample::select(vec![720u64, 5040, 40320, 362880, 3628800])) {
            for c in k_candidates(&v, &bound) {
                let comp = c.complement();
                prop_assert_eq!(comp.k * (comp.k - 1), comp.lambda * (v - 1));
            }
        }
    }
}
