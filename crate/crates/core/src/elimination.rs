//! Per-family elimination procedures for `PSU_5(q)` and an independent
//! brute-force oracle.
//!
//! Each procedure follows the parametrization used to rule its family out
//! (a multiplier `m` with `mk = λ·c` for a fixed `c`), tests every admissible
//! value of the parameter exhaustively, and records the bounding inequality
//! together with the degrees of both sides, so the finite check and the
//! asymptotic claim can be inspected separately. The oracle knows nothing
//! about these parametrizations: it enumerates divisors of the `k`-bound.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::catalog::{self, CatalogError, FamilyContext};
use crate::sieve::{self, Check, DesignParams, SieveReport};
use crate::Params;

/// The oracle refuses `k`-bounds with more divisors than this.
pub const MAX_ORACLE_DIVISORS: u64 = 10_000_000;

/// `q` values for which the lemma on `(SU_3(q) x SU_2(q)):(q+1)` leaves the
/// bounding inequality satisfiable.
pub const SU3_SU2_WINDOW: [u64; 10] = [2, 3, 4, 8, 9, 16, 25, 27, 32, 64];

#[derive(Debug, thiserror::Error)]
pub enum EliminationError {
    #[error("family line {line} is not defined at q={q}: requires {condition}")]
    InvalidFamily { line: u8, q: u64, condition: String },
    #[error("resource guard: {0}")]
    Resource(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NonIntegralLambda,
    DivisibilityFailure,
    InequalityViolation,
    NoValidK,
    EmptyTableRow,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NonIntegralLambda => "non-integral lambda",
            Self::DivisibilityFailure => "divisibility failure",
            Self::InequalityViolation => "inequality violation",
            Self::NoValidK => "no valid k",
            Self::EmptyTableRow => "empty table row",
        };
        f.write_str(s)
    }
}

/// A named intermediate value, with whether its defining relation holds
/// when substituted back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedValue {
    pub symbol: String,
    #[serde(with = "arith::decimal")]
    pub value: BigInt,
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialValue {
    pub name: String,
    #[serde(with = "arith::decimal")]
    pub value: BigInt,
}

/// `lhs < rhs` (or `<=`, per `relation`) evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub description: String,
    #[serde(with = "arith::decimal")]
    pub lhs: BigInt,
    pub relation: String,
    #[serde(with = "arith::decimal")]
    pub rhs: BigInt,
    pub holds: bool,
}

impl Inequality {
    fn lt(description: &str, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Self {
            description: description.into(),
            holds: lhs < rhs,
            lhs,
            relation: "<".into(),
            rhs,
        }
    }

    fn le(description: &str, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Self {
            description: description.into(),
            holds: lhs <= rhs,
            lhs,
            relation: "<=".into(),
            rhs,
        }
    }
}

/// Degrees in `q` of the two sides of the final inequality. When the left
/// degree is larger, the inequality fails for all large `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDomination {
    pub lhs_degree: u32,
    pub rhs_degree: u32,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRange {
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub lemma_id: u8,
    pub family_line: u8,
    pub q: u64,
    pub subfield: Option<(u64, u32)>,
    pub label: String,
    #[serde(with = "arith::decimal")]
    pub v: BigUint,
    #[serde(with = "arith::decimal")]
    pub k_bound: BigUint,
    /// Inclusive range of the multiplier `m`, when the lemma uses one.
    pub m_values_tested: Option<ParamRange>,
    pub k_values_tested: u64,
    pub forced_values: Vec<ForcedValue>,
    pub polynomial_values: Vec<PolynomialValue>,
    pub inequalities: Vec<Inequality>,
    pub degree_domination: Option<DegreeDomination>,
    pub failure_reason: FailureReason,
    /// Places where the printed argument and the recomputation differ.
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
    pub survivors: Vec<Params>,
}

impl EliminationTrace {
    fn new(lemma_id: u8, ctx: &FamilyContext) -> Self {
        Self {
            lemma_id,
            family_line: ctx.family_line,
            q: ctx.q,
            subfield: ctx.subfield,
            label: ctx.label(),
            v: ctx.v.clone(),
            k_bound: ctx.k_bound.clone(),
            m_values_tested: None,
            k_values_tested: 0,
            forced_values: Vec::new(),
            polynomial_values: Vec::new(),
            inequalities: Vec::new(),
            degree_domination: None,
            failure_reason: FailureReason::NoValidK,
            discrepancies: Vec::new(),
            notes: Vec::new(),
            survivors: Vec::new(),
        }
    }

    fn forced(&mut self, symbol: &str, value: impl Into<BigInt>, relation: &str, holds: bool) {
        self.forced_values.push(ForcedValue {
            symbol: symbol.into(),
            value: value.into(),
            relation: relation.into(),
            holds,
        });
    }

    fn poly(&mut self, name: &str, value: impl Into<BigInt>) {
        self.polynomial_values.push(PolynomialValue {
            name: name.into(),
            value: value.into(),
        });
    }

    fn degrees(&mut self, lhs: u32, rhs: u32, note: &str) {
        self.degree_domination = Some(DegreeDomination {
            lhs_degree: lhs,
            rhs_degree: rhs,
            note: note.into(),
        });
    }

    /// Every forced value satisfied its relation on re-substitution.
    pub fn forced_values_consistent(&self) -> bool {
        self.forced_values.iter().all(|f| f.holds)
    }
}

impl fmt::Display for EliminationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lemma {} {}", self.lemma_id, self.label)?;
        writeln!(f, "  v: {}", self.v)?;
        writeln!(f, "  k_bound: {}", self.k_bound)?;
        if let Some(r) = self.m_values_tested {
            writeln!(f, "  m tested: {}..={}", r.start, r.end)?;
        }
        if self.k_values_tested > 0 {
            writeln!(f, "  k tested: {}", self.k_values_tested)?;
        }
        for x in &self.forced_values {
            let ok = if x.holds { "ok" } else { "FAILS" };
            writeln!(
                f,
                "  forced {} = {} ({}: {ok})",
                x.symbol, x.value, x.relation
            )?;
        }
        for p in &self.polynomial_values {
            writeln!(f, "  {} = {}", p.name, p.value)?;
        }
        for i in &self.inequalities {
            writeln!(
                f,
                "  {}: {} {} {} is {}",
                i.description, i.lhs, i.relation, i.rhs, i.holds
            )?;
        }
        if let Some(d) = &self.degree_domination {
            writeln!(
                f,
                "  degrees: {} vs {} ({})",
                d.lhs_degree, d.rhs_degree, d.note
            )?;
        }
        for d in &self.discrepancies {
            writeln!(f, "  discrepancy: {d}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        writeln!(f, "  failure: {}", self.failure_reason)?;
        let surv: Vec<String> = self
            .survivors
            .iter()
            .map(|s| format!("({},{},{})", s.v, s.k, s.lambda))
            .collect();
        writeln!(f, "  survivors: [{}]", surv.join(", "))
    }
}

fn n(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pw(q: u64, e: u32) -> BigUint {
    arith::pow(&n(q), e)
}

fn int(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// How far a candidate `k` got through the constraints.
#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    trivial: u64,
    non_integral: u64,
    divisibility: u64,
    inequality: u64,
    survived: u64,
}

impl Tally {
    /// The last stage any candidate reached.
    fn reason(&self) -> FailureReason {
        if self.inequality > 0 {
            FailureReason::InequalityViolation
        } else if self.divisibility > 0 {
            FailureReason::DivisibilityFailure
        } else if self.non_integral > 0 {
            FailureReason::NonIntegralLambda
        } else {
            FailureReason::NoValidK
        }
    }
}

/// All constraints a flag-transitive design in the cell must meet.
struct Judge {
    v: BigUint,
    k_bound: BigUint,
    subdegrees: Vec<BigUint>,
    index_divisors: Vec<BigUint>,
    tally: Tally,
    survivors: Vec<Params>,
}

impl Judge {
    fn new(ctx: &FamilyContext) -> Self {
        let mut subdegrees: Vec<BigUint> = ctx.subdegree_divisors.iter().map(|&d| n(d)).collect();
        if ctx.is_parabolic {
            let vm1 = &ctx.v - 1u32;
            subdegrees.push(pw(ctx.p, arith::p_valuation(&n(ctx.p), &vm1)));
        }
        Self {
            v: ctx.v.clone(),
            k_bound: ctx.k_bound.clone(),
            subdegrees,
            index_divisors: ctx.index_divisors.iter().map(|&d| n(d)).collect(),
            tally: Tally::default(),
            survivors: Vec::new(),
        }
    }

    fn with_bound(mut self, k_bound: BigUint) -> Self {
        self.k_bound = k_bound;
        self
    }

    fn judge(&mut self, k: &BigUint) {
        let two = n(2);
        if *k <= two || *k >= &self.v - 1u32 {
            self.tally.trivial += 1;
            return;
        }
        let Ok(lambda) = sieve::lambda_from(&self.v, k) else {
            self.tally.non_integral += 1;
            return;
        };
        let divides = |d: &BigUint, x: &BigUint| x.is_multiple_of(d);
        if !divides(k, &self.k_bound)
            || self.subdegrees.iter().any(|d| !divides(k, &(&lambda * d)))
            || (!self.index_divisors.is_empty()
                && !self.index_divisors.iter().any(|i| divides(i, k)))
        {
            self.tally.divisibility += 1;
            return;
        }
        let p = DesignParams::new(self.v.clone(), k.clone(), lambda);
        if !sieve::basic_check(&p) {
            self.tally.inequality += 1;
            return;
        }
        self.tally.survived += 1;
        self.survivors.push(p);
    }

    fn finish(mut self, trace: &mut EliminationTrace) -> Tally {
        self.survivors.sort();
        self.survivors.dedup();
        trace.survivors = self.survivors;
        trace.k_values_tested += self.tally.trivial
            + self.tally.non_integral
            + self.tally.divisibility
            + self.tally.inequality
            + self.tally.survived;
        self.tally
    }
}

fn context(q: u64, line: u8) -> Result<FamilyContext, EliminationError> {
    let ctx = catalog::families(q)?
        .into_iter()
        .find(|c| c.family_line == line)
        .expect("every line is listed");
    if !ctx.valid {
        return Err(EliminationError::InvalidFamily {
            line,
            q,
            condition: ctx.condition,
        });
    }
    Ok(ctx)
}

/// Parabolic `[q]^{1+6}:SU_3(q):(q^2-1)`, `v = q^7+q^5+q^2+1`. A unique
/// subdegree `q^2` forces `mk = λq^2` with `m < q^2`, so
/// `k = m(q^5+q^3+1)+1` and `q^2 | m^2+m`.
pub fn eliminate_parabolic_1(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 1)?;
    let a = ctx.a as u64;
    let mut t = EliminationTrace::new(1, &ctx);
    let q2 = n(q * q);
    let c = pw(q, 5) + pw(q, 3) + 1u32;
    let mut judge = Judge::new(&ctx);
    let mut m = n(1);
    while m < q2 {
        if (&m * &m + &m).is_multiple_of(&q2) {
            let ok = m == &q2 - 1u32;
            t.forced("m", int(&m), "q^2 | m^2+m, m < q^2", ok);
        }
        judge.judge(&(&m * &c + 1u32));
        m += 1u32;
    }
    t.m_values_tested = Some(ParamRange {
        start: 1,
        end: q * q - 1,
    });
    let tally = judge.finish(&mut t);

    let m = &q2 - 1u32;
    let k = &m * &c + 1u32;
    let k_closed = &q2 * (pw(q, 5) - q + 1u32);
    t.forced("k", int(&k), "k = q^2(q^5-q+1)", k == k_closed);
    let lhs = pw(q, 5) - q + 1u32;
    let rhs = n(2 * a) * (pw(q, 3) + 1u32);
    t.inequalities
        .push(Inequality::le("q^5-q+1 <= 2a(q^3+1)", int(&lhs), int(&rhs)));
    t.degrees(5, 3, "q^5-q+1 outgrows 2a(q^3+1)");
    t.failure_reason = if t.inequalities[0].holds {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// Parabolic `[q]^{4+4}:GL_2(q^2)`, `v = q^8+q^5+q^3+1`. Subdegree `q^3`
/// gives `mk = λq^3`, `m < q^3`, `k = m(q^5+q^2+1)+1`.
pub fn eliminate_parabolic_2(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 2)?;
    let a = ctx.a as u64;
    let mut t = EliminationTrace::new(2, &ctx);
    let q2p1 = n(q * q + 1);
    let q3 = pw(q, 3);
    let c = pw(q, 5) + q * q + 1u32;
    let mut judge = Judge::new(&ctx);
    let mut m = n(1);
    while m < q3 {
        if (&m * &m * &q2p1 + &m).is_multiple_of(&q3) {
            let nn = (&m * &q2p1 + 1u32) / &q3;
            let rel_n = &m * &q2p1 + 1u32 == &nn * &q3;
            let s = (&nn * q + 1u32) / &q2p1;
            let rel_s = &nn * q + 1u32 == &s * &q2p1;
            t.forced("m", int(&m), "q^3 | m^2(q^2+1)+m", true);
            t.forced("n", int(&nn), "m(q^2+1)+1 = n q^3", rel_n);
            t.forced("s", int(&s), "nq+1 = s(q^2+1)", rel_s);
            let k = &m * &c + 1u32;
            t.forced(
                "k",
                int(&k),
                "k = q^4(q^3-q+1)",
                k == pw(q, 4) * (pw(q, 3) - q + 1u32),
            );
        }
        judge.judge(&(&m * &c + 1u32));
        m += 1u32;
    }
    t.m_values_tested = Some(ParamRange {
        start: 1,
        end: q * q * q - 1,
    });
    let tally = judge.finish(&mut t);
    if t.forced_values
        .iter()
        .any(|f| f.symbol == "s" && f.value.is_one())
    {
        t.discrepancies.push(
            "s = 1 satisfies q | s-1: m = q^2-1, n = q gives integral lambda with \
             k = q^4(q^3-q+1); the k-bound removes it"
                .into(),
        );
    }
    // gcd(q^3-q+1, (q^4-1)(q^2-1)) divides 5, so the k-bound reduces to
    // q^3-q+1 | 10a
    let r = pw(q, 3) - q + 1u32;
    let other = (pw(q, 4) - 1u32) * (n(q * q) - 1u32);
    let g = arith::gcd(&r, &other);
    t.poly("gcd(q^3-q+1, (q^4-1)(q^2-1))", int(&g));
    t.forced("gcd", int(&g), "divides 5", n(5).is_multiple_of(&g));
    t.inequalities.push(Inequality::le(
        "q^3-q+1 <= 10a",
        int(&r),
        BigInt::from(10 * a),
    ));
    t.degrees(3, 0, "q^3-q+1 against 10a after the gcd reduction");
    t.failure_reason = tally.reason();
    Ok(t)
}

/// `GU_4(q)`, `v = q^4(q^4-q^3+q^2-q+1)`. The subdegree `(q+1)(q^4-1)`
/// gives `mk = λ(q^2+1)(q-1)` and `k = 1+m(q^5+q+1)`; `k` must also be
/// divisible by `q^3` or `q^3+1`.
pub fn eliminate_gu4(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 3)?;
    let mut t = EliminationTrace::new(3, &ctx);
    let f = (q * q + 1) * (q - 1);
    let c = pw(q, 5) + q + 1u32;
    let (i1, i0) = (pw(q, 3) + 1u32, pw(q, 3));
    let mut judge = Judge::new(&ctx);
    for m in 1..f {
        let k = &c * m + 1u32;
        if k.is_multiple_of(&i0) || k.is_multiple_of(&i1) {
            let integral = sieve::lambda_from(&ctx.v, &k).is_ok();
            t.forced("m", BigInt::from(m), "q^3 | k or q^3+1 | k", true);
            t.notes
                .push(format!("m = {m}: k = {k}, lambda integral: {integral}"));
        }
        judge.judge(&k);
    }
    t.m_values_tested = Some(ParamRange {
        start: 1,
        end: f - 1,
    });
    let tally = judge.finish(&mut t);
    t.poly("f", BigInt::from(f));
    if q == 3 {
        // the branch with u = 3 and n2 = 2
        let (n2, u) = (2u64, 3u64);
        let rel = 2 * n2 * (q + 1) - 1 == u * (q * q - q - 1);
        t.forced("n2", BigInt::from(n2), "2 n2 (q+1) - 1 = u (q^2-q-1)", rel);
        t.forced("u", BigInt::from(u), "u <= 3", true);
        let num = n2 * (q * q * q + 1) - 1;
        let den = q * q - q - 1;
        let m = num / den;
        t.forced(
            "m",
            BigInt::from(m),
            "m (q^2-q-1) = n2 (q^3+1) - 1",
            m * den == num,
        );
        let k = &c * m + 1u32;
        t.discrepancies.push(format!(
            "at q=3 the branch u=3, n2=2 gives m = {num}/{den} = {m}, not 55/4; \
             k = {k} is not divisible by q^3+1 = {i1}"
        ));
    }
    t.degrees(
        0,
        0,
        "finite check only: the argument is an exhaustive search over m",
    );
    t.degree_domination = None;
    t.notes
        .push("finite check only: every m < (q^2+1)(q-1) is tested".into());
    t.failure_reason = tally.reason();
    Ok(t)
}

fn su3_su2_polys(q: u64) -> (BigInt, BigInt, BigInt, BigInt) {
    let qi = BigInt::from(q);
    let p = |e: u32| num_traits::pow(qi.clone(), e as usize);
    let big_p = p(10) + p(8) - p(7) + p(4) + p(3) - &qi - 1;
    let g = p(4) * (p(3) + 1) * (p(2) - 1) * (p(2) - 1) * (&qi + 1);
    let h = p(2) + &qi - 3;
    let d_printed =
        p(9) - 6 * p(8) + 4 * p(7) + 3 * p(6) + p(5) - 3 * p(4) - 4 * p(3) - 2 * p(2) + 2 * &qi + 3;
    let d = &h * &big_p - &g;
    assert_eq!(d, d_printed, "d(q) = h(q)P(q) - g(q)");
    (big_p, g, h, d)
}

/// True when some `m < 9(q^2-q+1)` satisfies `mP+9 <= 18a|md+9h|`.
pub fn su3_su2_in_window(q: u64, a: u32) -> bool {
    let (big_p, _, h, d) = su3_su2_polys(q);
    let a18 = BigInt::from(18 * a as u64);
    let limit = 9 * (q * q - q + 1);
    (1..limit).any(|m| {
        let m = BigInt::from(m);
        let w: BigInt = &m * &d + 9 * &h;
        &m * &big_p + 9 <= &a18 * w.abs()
    })
}

/// `(SU_3(q) x SU_2(q)):(q+1)`, `v = q^6(q^4-q^3+q^2-q+1)(q^2+1)`. With
/// `P = (v-1)/(q^2-q+1)`, `mk = 9λ(q^2-q+1)` and `k = 1 + mP/9`.
pub fn eliminate_su3_su2(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 4)?;
    let a = ctx.a;
    let mut t = EliminationTrace::new(4, &ctx);
    let (big_p, g, h, d) = su3_su2_polys(q);
    let f = q * q - q + 1;
    let vm1: BigInt = int(&ctx.v) - 1;
    t.forced(
        "v-1",
        vm1.clone(),
        "v-1 = (q^2-q+1) P",
        vm1 == BigInt::from(f) * &big_p,
    );
    let gq = arith::gcd(
        &big_p.to_biguint().expect("P is positive"),
        &(n(q - 1) * n(q + 1) * n(q + 1)),
    );
    t.forced(
        "gcd(P, (q-1)(q+1)^2)",
        int(&gq),
        "divides 9",
        n(9).is_multiple_of(&gq),
    );
    t.poly("P", big_p.clone());
    t.poly("g", g.clone());
    t.poly("h", h.clone());
    t.poly("d", d.clone());

    // identity used to bound m: 18a h (mP+9) - 18a m g = 18a (m d + 9h)
    let a18 = BigInt::from(18 * a as u64);
    let identity_holds = [1u64, 2, 7].iter().all(|&m| {
        let m = BigInt::from(m);
        &a18 * &h * (&m * &big_p + 9) - &a18 * &m * &g == &a18 * (&m * &d + 9 * &h)
    });
    t.forced(
        "identity",
        BigInt::from(identity_holds as u8),
        "18ah(mP+9) - 18amg = 18a(md+9h)",
        identity_holds,
    );
    let printed_holds = {
        let m = BigInt::one();
        &a18 * &m * &h * (&m * &big_p + 9) - &a18 * &m * &g == &a18 * &m * (&d + 9 * &h)
    };
    if !printed_holds {
        t.discrepancies.push(
            "the printed identity carries an extra factor m on its right side; the exact \
             form is 18ah(mP+9) - 18amg = 18a(md+9h)"
                .into(),
        );
    }
    let dh: BigInt = &d + 9 * &h;
    t.poly("d+9h", dh.clone());
    let qi = BigInt::from(q);
    let head = |c2: i64, c1: i64, c0: i64| -> BigInt {
        let p = |e: usize| num_traits::pow(qi.clone(), e);
        p(9) - 6 * p(8) + 4 * p(7) + 3 * p(6) + p(5) - 3 * p(4) - 4 * p(3)
            + c2 * p(2)
            + c1 * &qi
            + c0
    };
    let printed_form = head(16, 20, -45);
    let exact_form = head(7, 11, -24);
    t.forced("d+9h", dh.clone(), "ends in 7q^2+11q-24", dh == exact_form);
    if dh != printed_form {
        t.discrepancies.push(
            "the final printed polynomial ends in 16q^2+20q-45; d+9h ends in 7q^2+11q-24".into(),
        );
    }
    let in_window = su3_su2_in_window(q, a);
    t.inequalities.push(Inequality::le(
        "exists m < 9(q^2-q+1): mP+9 <= 18a|md+9h|",
        BigInt::from(in_window as u8),
        BigInt::one(),
    ));
    t.inequalities.last_mut().unwrap().holds = in_window;
    let listed = SU3_SU2_WINDOW.contains(&q);
    if in_window != listed {
        t.discrepancies.push(format!(
            "window membership at q={q} is {in_window}, listed window says {listed}"
        ));
    }

    let mut judge = Judge::new(&ctx);
    let limit = 9 * f;
    let big_p_u = big_p.to_biguint().unwrap();
    for m in 1..limit {
        let num = &big_p_u * m;
        if !num.is_multiple_of(&n(9)) {
            continue;
        }
        judge.judge(&(num / 9u32 + 1u32));
    }
    t.m_values_tested = Some(ParamRange {
        start: 1,
        end: limit - 1,
    });
    let tally = judge.finish(&mut t);
    t.degrees(10, 9, "mP+9 against 18a|md+9h|");
    t.failure_reason = if in_window {
        match tally.reason() {
            FailureReason::NoValidK | FailureReason::NonIntegralLambda => {
                FailureReason::DivisibilityFailure
            }
            r => r,
        }
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// `(q+1)^4:S_5`, `v = |SU_5(q)|/(120(q+1)^4)`, `k | 240a(q+1)^4`.
pub fn eliminate_imprimitive(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 5)?;
    let a = ctx.a as u64;
    let mut t = EliminationTrace::new(5, &ctx);
    let n5 = catalog::su5_order(q);
    let qp1_12 = pw(q + 1, 12);
    let printed = Inequality::lt(
        "printed: |SU_5(q)| < 57600 a^2 (q+1)^12",
        int(&n5),
        int(&(n(57600 * a * a) * &qp1_12)),
    );
    let exact = Inequality::lt(
        "lambda v < k^2 with lambda >= 1: v < k_bound^2",
        int(&ctx.v),
        int(&(&ctx.k_bound * &ctx.k_bound)),
    );
    let window = exact.holds;
    if printed.holds != exact.holds {
        t.discrepancies.push(format!(
            "at q={q} the printed inequality is {} but v < k_bound^2 is {}; \
             the printed form drops the factor 120",
            printed.holds, exact.holds
        ));
    }
    t.inequalities.push(printed);
    t.inequalities.push(exact);
    match q {
        2 => t.discrepancies.push(
            "printed row for q=2 reads v=1408, k | 8404641; recomputed v=1408, k | 19440".into(),
        ),
        3 => t.discrepancies.push(
            "printed row for q=3 reads v=19440, k | 61440; recomputed v=8404641, k | 61440".into(),
        ),
        _ => {}
    }
    let mut judge = Judge::new(&ctx);
    for k in ctx.k_bound_factorization().divisors() {
        judge.judge(&k);
    }
    let tally = judge.finish(&mut t);
    t.degrees(24, 12, "v against (240a(q+1)^4)^2");
    t.failure_reason = if window {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// `(q^5+1)/(q+1):5`, `v = q^10(q^4-1)(q^3+1)(q^2-1)(q+1)/5`, `q >= 3`.
pub fn eliminate_torus(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 6)?;
    let a = ctx.a as u64;
    let mut t = EliminationTrace::new(6, &ctx);
    let lhs = &ctx.v * 5u32;
    let phi = n(catalog::phi10(q));
    t.poly("q^4-q^3+q^2-q+1", int(&phi));
    let printed_rhs = n(20 * a * a) * &phi * &phi;
    let exact_rhs = n(500 * a * a) * &phi * &phi;
    t.inequalities.push(Inequality::le(
        "printed: 5v <= 20a^2 Phi^2",
        int(&lhs),
        int(&printed_rhs),
    ));
    t.inequalities.push(Inequality::le(
        "5v <= 5 k_bound^2 = 500a^2 Phi^2",
        int(&lhs),
        int(&exact_rhs),
    ));
    t.discrepancies.push(format!(
        "the printed k-bound is 2a Phi = {}; 2a gcd(5,q+1) |H_0| = 10a Phi = {}",
        n(2 * a) * &phi,
        ctx.k_bound
    ));
    let mut judge = Judge::new(&ctx);
    for k in ctx.k_bound_factorization().divisors() {
        judge.judge(&k);
    }
    let tally = judge.finish(&mut t);
    t.degrees(24, 8, "5v against 500a^2 Phi^2");
    t.failure_reason = if t.inequalities.iter().any(|i| i.holds) {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// `SU_5(q0)·b` with `q = q0^r`, `r` an odd prime, `b = gcd((q+1)/(q0+1), 5)`.
pub fn eliminate_subfield(q0: u64, r: u32) -> Result<EliminationTrace, EliminationError> {
    let (p, a0) = arith::prime_power_decomposition(q0)
        .ok_or(EliminationError::Catalog(CatalogError::NotPrimePower(q0)))?;
    if r < 3 || !arith::is_probable_prime(&n(r as u64)) {
        return Err(EliminationError::InvalidFamily {
            line: 7,
            q: q0,
            condition: format!("r odd prime (got r={r})"),
        });
    }
    let q = q0
        .checked_pow(r)
        .ok_or_else(|| EliminationError::Resource(format!("q0^r = {q0}^{r} exceeds 64 bits")))?;
    let ctx = catalog::families(q)?
        .into_iter()
        .find(|c| c.family_line == 7 && c.subfield == Some((q0, r)))
        .expect("subfield context exists for q0^r");
    let a = (a0 * r) as u64;
    debug_assert_eq!(ctx.a as u64, a);
    debug_assert!(p > 1);
    let mut t = EliminationTrace::new(7, &ctx);
    let b = 5u64.gcd(&((q + 1) / (q0 + 1)));
    t.forced("q0", BigInt::from(q0), "q = q0^r", q0.pow(r) == q);
    t.forced("r", BigInt::from(r), "r odd prime", true);
    t.forced(
        "b",
        BigInt::from(b),
        "b = gcd((q+1)/(q0+1), 5) in {1, 5}",
        b == 1 || b == 5,
    );

    let r_bound = Inequality::lt(
        "q0^(23r-1) < 100 q0^72",
        int(&pw(q0, 23 * r - 1)),
        int(&(n(100) * pw(q0, 72))),
    );
    let r_ok = r_bound.holds;
    t.inequalities.push(r_bound);
    if r == 3 {
        let b3 = 5u64.gcd(&(q0 * q0 - q0 + 1));
        t.forced("b", BigInt::from(b3), "b = gcd(q0^2-q0+1, 5)", b3 == b);
        t.poly("4a^2b^3", BigInt::from(4 * a * a * b.pow(3)));
        t.inequalities.push(Inequality::lt(
            "q0^47 < 16a^4b^6",
            int(&pw(q0, 47)),
            BigInt::from(16 * a.pow(4)) * BigInt::from(b.pow(6)),
        ));
        t.degrees(47, 0, "q0^47 against 16a^4b^6");
    } else {
        t.degrees(23 * r - 1, 72, "q0^(23r-1) against 100 q0^72 forces r = 3");
    }
    let mut judge = Judge::new(&ctx);
    for k in ctx.k_bound_factorization().divisors() {
        judge.judge(&k);
    }
    let tally = judge.finish(&mut t);
    let final_ok = if r == 3 {
        t.inequalities[1].holds
    } else {
        r_ok
    };
    t.failure_reason = if final_ok {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// `SO_5(q)`, `q` odd, `v = q^6(q^5+1)(q^3+1)`. With `f = 3(q-1)^2`,
/// `mk = λaf` and `k = 1 + m(v-1)/(af)`.
pub fn eliminate_so5(q: u64) -> Result<EliminationTrace, EliminationError> {
    let ctx = context(q, 8)?;
    let a = ctx.a as u64;
    let mut t = EliminationTrace::new(8, &ctx);
    let f = 3 * (q - 1) * (q - 1);
    let g = pw(q, 4) * (pw(q, 4) - 1u32) * (n(q * q) - 1u32);
    t.poly("f", BigInt::from(f));
    t.poly("g", int(&g));
    let vm1 = &ctx.v - 1u32;
    let gg = arith::gcd(&vm1, &(&g * 2u32));
    t.forced(
        "gcd(v-1, 2g)",
        int(&gg),
        "divides f",
        n(f).is_multiple_of(&gg),
    );
    let af = n(a * f);
    let mut judge = Judge::new(&ctx);
    for m in 1..a * f {
        let num = &vm1 * m;
        if num.is_multiple_of(&af) {
            judge.judge(&(num / &af + 1u32));
        }
    }
    t.m_values_tested = Some(ParamRange {
        start: 1,
        end: a * f - 1,
    });
    let tally = judge.finish(&mut t);
    let rhs = n(2 * a * a * f) * &g;
    t.inequalities
        .push(Inequality::lt("v < 2a^2 f g", int(&ctx.v), int(&rhs)));
    t.inequalities.push(Inequality::le(
        "(v-1) + af <= 2a^2 f g (m = 1)",
        int(&(&vm1 + &af)),
        int(&rhs),
    ));
    t.degrees(14, 12, "v against 2a^2 f g");
    t.failure_reason = if t.inequalities[1].holds {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// Lines 9-11 at one `q`: the large-subgroup bound `|X| <= |Out|^2 |H_0|^3`
/// and, where it holds, every `k` dividing the bound.
pub fn eliminate_small_stabilizer(
    ctx: &FamilyContext,
) -> Result<EliminationTrace, EliminationError> {
    if !ctx.valid || !(9..=11).contains(&ctx.family_line) {
        return Err(EliminationError::InvalidFamily {
            line: ctx.family_line,
            q: ctx.q,
            condition: ctx.condition.clone(),
        });
    }
    let mut t = EliminationTrace::new(9, ctx);
    let gcd5 = 5u64.gcd(&(ctx.q + 1));
    let h0 = n(ctx.stabilizer_factors.iter().product::<u64>() / gcd5);
    let out = n(ctx.out_order);
    let large = Inequality::le(
        "|X| <= |Out|^2 |H_0|^3",
        int(&ctx.socle_order),
        int(&(&out * &out * &h0 * &h0 * &h0)),
    );
    let holds = large.holds;
    t.inequalities.push(large);
    let mut judge = Judge::new(ctx);
    for k in ctx.k_bound_factorization().divisors() {
        judge.judge(&k);
    }
    let tally = judge.finish(&mut t);
    t.failure_reason = if holds {
        tally.reason()
    } else {
        FailureReason::InequalityViolation
    };
    Ok(t)
}

/// A row of the sporadic table: socle, stabilizer, and printed values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SporadicRow {
    pub group: String,
    pub stabilizer: String,
    pub q: u64,
    pub family_line: u8,
    pub h0_order: u64,
    #[serde(with = "arith::decimal")]
    pub printed_v: BigUint,
    pub printed_k_bound: u64,
}

pub fn sporadic_rows() -> Vec<SporadicRow> {
    vec![
        SporadicRow {
            group: "PSU_5(2)".into(),
            stabilizer: "PSL_2(11)".into(),
            q: 2,
            family_line: 10,
            h0_order: 660,
            printed_v: n(20736),
            printed_k_bound: 1320,
        },
        SporadicRow {
            group: "PSU_5(4)".into(),
            stabilizer: "5^{1+2}:Sp_2(5)".into(),
            q: 4,
            family_line: 9,
            h0_order: 15000,
            printed_v: n(3562930176),
            printed_k_bound: 60000,
        },
        SporadicRow {
            group: "PSU_5(9)".into(),
            stabilizer: "5^{1+2}:Sp_2(5)".into(),
            q: 9,
            family_line: 9,
            h0_order: 15000,
            printed_v: n(1051720694280527616),
            printed_k_bound: 60000,
        },
    ]
}

/// The sporadic table, recomputed. The trace carries the printed
/// `k`-bound; candidates are also tested against `2a·gcd(5,q+1)·|H_0|`.
pub fn eliminate_sporadic() -> Result<Vec<EliminationTrace>, EliminationError> {
    let mut out = Vec::new();
    for row in sporadic_rows() {
        let ctx = context(row.q, row.family_line)?;
        let x = catalog::psu_order(5, row.q)?;
        let h0 = n(row.h0_order);
        let v = &x / &h0;
        let mut t = EliminationTrace::new(9, &ctx);
        t.label = format!("{} {}", row.group, row.stabilizer);
        t.v = v.clone();
        t.k_bound = n(row.printed_k_bound);
        t.forced(
            "v",
            int(&v),
            "v = |X|/|H_0| matches the printed row",
            v == row.printed_v && v == ctx.v,
        );
        let a = ctx.a as u64;
        let bound_no_gcd = n(2 * a) * &h0;
        t.forced(
            "k_bound",
            BigInt::from(row.printed_k_bound),
            "printed bound = 2a|H_0|",
            bound_no_gcd == n(row.printed_k_bound),
        );
        if ctx.k_bound != n(row.printed_k_bound) {
            t.discrepancies.push(format!(
                "printed bound {} omits gcd(5,q+1); 2a gcd(5,q+1) |H_0| = {}",
                row.printed_k_bound, ctx.k_bound
            ));
        }
        let out_order = n(ctx.out_order);
        let large = Inequality::le(
            "|X| <= |Out|^2 |H_0|^3",
            int(&x),
            int(&(&out_order * &out_order * &h0 * &h0 * &h0)),
        );
        if !large.holds {
            t.notes.push(format!(
                "{} is listed although |X| exceeds |Out|^2 |H_0|^3",
                row.group
            ));
        }
        t.inequalities.push(large);
        let mut judge = Judge::new(&ctx).with_bound(n(row.printed_k_bound));
        for k in arith::divisors(&n(row.printed_k_bound)) {
            judge.judge(&k);
        }
        let tally_printed = judge.finish(&mut t);
        let printed_survivors = std::mem::take(&mut t.survivors);
        let mut judge = Judge::new(&ctx);
        for k in ctx.k_bound_factorization().divisors() {
            judge.judge(&k);
        }
        let tally_full = judge.finish(&mut t);
        t.survivors.extend(printed_survivors);
        t.survivors.sort();
        t.survivors.dedup();
        let integral = tally_printed.divisibility
            + tally_printed.inequality
            + tally_printed.survived
            + tally_full.divisibility
            + tally_full.inequality
            + tally_full.survived;
        t.failure_reason = if integral == 0 {
            FailureReason::NonIntegralLambda
        } else {
            tally_full.reason()
        };
        out.push(t);
    }
    Ok(out)
}

/// Runs the procedure matching the context's line.
pub fn eliminate_context(ctx: &FamilyContext) -> Result<EliminationTrace, EliminationError> {
    if !ctx.valid {
        return Err(EliminationError::InvalidFamily {
            line: ctx.family_line,
            q: ctx.q,
            condition: ctx.condition.clone(),
        });
    }
    match ctx.family_line {
        1 => eliminate_parabolic_1(ctx.q),
        2 => eliminate_parabolic_2(ctx.q),
        3 => eliminate_gu4(ctx.q),
        4 => eliminate_su3_su2(ctx.q),
        5 => eliminate_imprimitive(ctx.q),
        6 => eliminate_torus(ctx.q),
        7 => {
            let (q0, r) = ctx.subfield.expect("valid line 7 context has a subfield");
            eliminate_subfield(q0, r)
        }
        8 => eliminate_so5(ctx.q),
        _ => eliminate_small_stabilizer(ctx),
    }
}

/// Generic sieve on the context: every `k` dividing the `k`-bound, then the
/// subdegree filters and, for parabolic lines, the `p`-power subdegree.
pub fn oracle_eliminate(ctx: &FamilyContext) -> Result<SieveReport<BigUint>, EliminationError> {
    if !ctx.valid {
        return Err(EliminationError::InvalidFamily {
            line: ctx.family_line,
            q: ctx.q,
            condition: ctx.condition.clone(),
        });
    }
    let fact = ctx.k_bound_factorization();
    let count = fact.divisor_count();
    if count > n(MAX_ORACLE_DIVISORS) {
        return Err(EliminationError::Resource(format!(
            "{}: k-bound has {count} divisors (limit {MAX_ORACLE_DIVISORS})",
            ctx.label()
        )));
    }
    let mut cands = sieve::k_candidates_factored(&ctx.v, &fact);
    let mut checks = vec![
        Check::KDividesBound,
        Check::Nontrivial,
        Check::IntegralLambda,
        Check::SquareDiscriminant,
        Check::FisherInequality,
    ];
    for &d in &ctx.subdegree_divisors {
        cands = sieve::subdegree_filter(&cands, &n(d));
        checks.push(Check::Subdegree(d.to_string()));
    }
    if ctx.is_parabolic {
        cands = sieve::parabolic_power_filter(&cands, &n(ctx.p), &ctx.v);
        checks.push(Check::ParabolicPower(ctx.p.to_string()));
    }
    Ok(SieveReport {
        context: ctx.label(),
        survivors: cands,
        checks_applied: checks,
    })
}

/// Whether Tits' lemma alone would empty the cell. Reported, never used to
/// eliminate.
pub fn tits_prunes(ctx: &FamilyContext) -> bool {
    ctx.valid && !ctx.is_parabolic && ctx.p % 2 == 1 && (&ctx.v - 1u32).is_multiple_of(&n(ctx.p))
}

/// Lemma procedure and oracle for one cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub trace: EliminationTrace,
    pub oracle: SieveReport<BigUint>,
    pub tits_prunes: bool,
}

impl CellResult {
    pub fn agree(&self) -> bool {
        self.trace.survivors == self.oracle.survivors
    }

    pub fn empty(&self) -> bool {
        self.trace.survivors.is_empty() && self.oracle.survivors.is_empty()
    }
}

pub fn run_cell(ctx: &FamilyContext) -> Result<CellResult, EliminationError> {
    Ok(CellResult {
        trace: eliminate_context(ctx)?,
        oracle: oracle_eliminate(ctx)?,
        tits_prunes: tits_prunes(ctx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_1_examples() {
        let t = eliminate_parabolic_1(2).unwrap();
        assert_eq!(t.v, n(165));
        let m = t.forced_values.iter().find(|f| f.symbol == "m").unwrap();
        assert_eq!(m.value, BigInt::from(3));
        let k = t.forced_values.iter().find(|f| f.symbol == "k").unwrap();
        assert_eq!(k.value, BigInt::from(124));
        assert_eq!(t.inequalities[0].lhs, BigInt::from(31));
        assert_eq!(t.inequalities[0].rhs, BigInt::from(18));
        assert!(!t.inequalities[0].holds);
        assert_eq!(t.failure_reason, FailureReason::InequalityViolation);
        assert!(t.survivors.is_empty());

        let t = eliminate_parabolic_1(3).unwrap();
        assert_eq!(t.v, n(2440));
        let k = t.forced_values.iter().find(|f| f.symbol == "k").unwrap();
        assert_eq!(k.value, BigInt::from(2169));
        assert!(t.forced_values_consistent());
    }

    #[test]
    fn parabolic_2_examples() {
        let t = eliminate_parabolic_2(2).unwrap();
        assert_eq!(t.v, n(297));
        assert_eq!(t.m_values_tested, Some(ParamRange { start: 1, end: 7 }));
        // m = q^2-1 = 3 does give integral lambda; the k-bound removes it
        let ms: Vec<&ForcedValue> = t.forced_values.iter().filter(|f| f.symbol == "m").collect();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].value, BigInt::from(3));
        assert!(t.forced_values_consistent());
        assert!(t.survivors.is_empty());
        assert_eq!(t.failure_reason, FailureReason::DivisibilityFailure);
        assert_eq!(eliminate_parabolic_2(3).unwrap().v, n(6832));
    }

    #[test]
    fn gu4_examples() {
        let t = eliminate_gu4(2).unwrap();
        assert_eq!(t.v, n(176));
        assert!(t.survivors.is_empty());
        let t = eliminate_gu4(3).unwrap();
        assert_eq!(t.v, n(4941));
        assert!(t.forced_values_consistent());
        assert!(t.discrepancies.iter().any(|d| d.contains("= 11")));
        assert!(eliminate_gu4(5).unwrap().survivors.is_empty());
    }

    #[test]
    fn su3_su2_examples() {
        let t = eliminate_su3_su2(5).unwrap();
        assert_eq!(t.failure_reason, FailureReason::InequalityViolation);
        let t = eliminate_su3_su2(2).unwrap();
        assert!(t.inequalities[0].holds);
        assert!(t.survivors.is_empty());
        assert!(t.forced_values_consistent());
        let t = eliminate_su3_su2(64).unwrap();
        assert!(t.inequalities[0].holds);
        assert!(t.survivors.is_empty());
    }

    #[test]
    fn su3_su2_window_matches_list() {
        let window: Vec<u64> = catalog::prime_powers_up_to(128)
            .into_iter()
            .filter(|&q| su3_su2_in_window(q, arith::prime_power_decomposition(q).unwrap().1))
            .collect();
        assert_eq!(window, SU3_SU2_WINDOW.to_vec());
    }

    #[test]
    fn su3_su2_identity_sampled() {
        for q in [2u64, 3, 5, 7, 16, 49] {
            let (big_p, g, h, d) = su3_su2_polys(q);
            for m in [1u64, 3, 10, 40] {
                let m = BigInt::from(m);
                for a in [1u64, 2, 6] {
                    let a18 = BigInt::from(18 * a);
                    assert_eq!(
                        &a18 * &h * (&m * &big_p + 9) - &a18 * &m * &g,
                        &a18 * (&m * &d + 9 * &h)
                    );
                }
            }
        }
    }

    #[test]
    fn imprimitive_examples() {
        let t = eliminate_imprimitive(2).unwrap();
        assert_eq!(t.v, n(1408));
        assert_eq!(t.k_bound, n(19440));
        assert_eq!(t.failure_reason, FailureReason::NonIntegralLambda);
        assert!(!t.discrepancies.is_empty());
        let t = eliminate_imprimitive(3).unwrap();
        assert_eq!(t.v, n(8404641));
        assert_eq!(t.k_bound, n(61440));
        assert_eq!(t.failure_reason, FailureReason::NonIntegralLambda);
        let t = eliminate_imprimitive(4).unwrap();
        assert!(!t.inequalities[0].holds);
        assert!(t.survivors.is_empty());
        assert_eq!(
            eliminate_imprimitive(5).unwrap().failure_reason,
            FailureReason::InequalityViolation
        );
    }

    #[test]
    fn torus_examples() {
        assert_eq!(
            eliminate_torus(3).unwrap().failure_reason,
            FailureReason::InequalityViolation
        );
        assert_eq!(
            eliminate_torus(4).unwrap().failure_reason,
            FailureReason::InequalityViolation
        );
        assert!(matches!(
            eliminate_torus(2),
            Err(EliminationError::InvalidFamily { line: 6, .. })
        ));
    }

    #[test]
    fn subfield_examples() {
        let t = eliminate_subfield(2, 5).unwrap();
        assert!(!t.inequalities[0].holds);
        assert_eq!(t.failure_reason, FailureReason::InequalityViolation);
        let t = eliminate_subfield(2, 3).unwrap();
        assert!(t.inequalities[0].holds);
        assert!(!t.inequalities[1].holds);
        let b = t.forced_values.iter().find(|f| f.symbol == "b").unwrap();
        assert_eq!(b.value, BigInt::one());
        assert!(t.survivors.is_empty());
        let t = eliminate_subfield(3, 3).unwrap();
        assert_eq!(t.failure_reason, FailureReason::InequalityViolation);
        assert!(eliminate_subfield(2, 2).is_err());
    }

    #[test]
    fn so5_examples() {
        let t = eliminate_so5(3).unwrap();
        assert_eq!(t.v, n(729 * 244 * 28));
        assert!(t.forced_values_consistent());
        assert_eq!(t.failure_reason, FailureReason::InequalityViolation);
        assert!(eliminate_so5(5).unwrap().survivors.is_empty());
        assert!(matches!(
            eliminate_so5(2),
            Err(EliminationError::InvalidFamily { line: 8, .. })
        ));
    }

    #[test]
    fn sporadic_rows_reproduce() {
        let traces = eliminate_sporadic().unwrap();
        let got: Vec<(BigUint, BigUint)> = traces
            .iter()
            .map(|t| (t.v.clone(), t.k_bound.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (n(20736), n(1320)),
                (n(3562930176), n(60000)),
                (n(1051720694280527616), n(60000)),
            ]
        );
        for t in &traces {
            assert!(t.survivors.is_empty());
            assert_eq!(t.failure_reason, FailureReason::NonIntegralLambda);
            assert!(t.forced_values[0].holds);
        }
    }

    #[test]
    fn oracle_small_cells_empty() {
        for (q, line) in [(2u64, 1u8), (3, 3), (2, 5), (2, 10), (5, 11), (4, 9)] {
            let ctx = context(q, line).unwrap();
            assert!(
                oracle_eliminate(&ctx).unwrap().survivors.is_empty(),
                "{}",
                ctx.label()
            );
        }
    }

    #[test]
    fn trace_json_round_trip() {
        let t = eliminate_parabolic_1(2).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"failure_reason\":\"inequality_violation\""));
        let back: EliminationTrace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
