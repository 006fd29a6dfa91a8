//! Unitary group orders, the maximal-subgroup families of `PSU_5(q)`, and
//! the small groups whose designs are built explicitly.

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::permgroup::PermGroup;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("rank {0} not supported (expected 3, 4 or 5)")]
    UnsupportedRank(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("generator file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("generator file {path}: {source}")]
    Group {
        path: PathBuf,
        #[source]
        source: crate::permgroup::GroupError,
    },
    #[error("catalog line {line}: {message}")]
    Format { line: usize, message: String },
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn prime_power(q: u64) -> Result<(u64, u32), CatalogError> {
    arith::prime_power_decomposition(q).ok_or(CatalogError::NotPrimePower(q))
}

/// `q^10 (q^5+1)(q^4-1)(q^3+1)(q^2-1)`, the order of `SU_5(q)`.
pub fn su5_order(q: u64) -> BigUint {
    let q = big(q);
    let p = |e: u32| arith::pow(&q, e);
    p(10) * (p(5) + 1u32) * (p(4) - 1u32) * (p(3) + 1u32) * (p(2) - 1u32)
}

/// `|PSU_n(q)|` for `n` in 3..=5.
pub fn psu_order(n: u32, q: u64) -> Result<BigUint, CatalogError> {
    if !(3..=5).contains(&n) {
        return Err(CatalogError::UnsupportedRank(n));
    }
    prime_power(q)?;
    let qb = big(q);
    let mut order = arith::pow(&qb, n * (n - 1) / 2);
    for i in 2..=n {
        let qi = arith::pow(&qb, i);
        order *= if i % 2 == 0 { qi - 1u32 } else { qi + 1u32 };
    }
    let d = (n as u64).gcd(&(q + 1));
    Ok(order / big(d))
}

/// `|Out(PSU_5(q))| = 2a·gcd(5, q+1)`.
pub fn out_order(q: u64) -> Result<u64, CatalogError> {
    let (_, a) = prime_power(q)?;
    Ok(2 * a as u64 * 5u64.gcd(&(q + 1)))
}

/// `(q^5+1)/(q+1) = q^4 - q^3 + q^2 - q + 1`.
pub fn phi10(q: u64) -> u64 {
    q.pow(4) - q.pow(3) + q * q - q + 1
}

/// One line of the maximal-subgroup table at one `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyContext {
    pub family_line: u8,
    pub q: u64,
    pub p: u64,
    pub a: u32,
    /// `(q0, r)` with `q = q0^r` on line 7.
    pub subfield: Option<(u64, u32)>,
    #[serde(with = "arith::decimal")]
    pub socle_order: BigUint,
    pub out_order: u64,
    /// Index of the stabilizer in the socle; zero when the line is invalid.
    #[serde(with = "arith::decimal")]
    pub v: BigUint,
    /// `2a·gcd(5,q+1)·|H_0|`; zero when the line is invalid.
    #[serde(with = "arith::decimal")]
    pub k_bound: BigUint,
    /// Factors whose product is `gcd(5,q+1)·|H_0|`.
    pub stabilizer_factors: Vec<u64>,
    pub subdegree_divisors: Vec<u64>,
    /// Indices of which one must divide `k` (line 3 only).
    pub index_divisors: Vec<u64>,
    pub is_parabolic: bool,
    pub valid: bool,
    pub condition: String,
}

impl FamilyContext {
    /// Factorization of [`Self::k_bound`], assembled from the small factors.
    pub fn k_bound_factorization(&self) -> Factorization<BigUint> {
        let mut f = arith::factorize(&big(2 * self.a as u64));
        for &x in &self.stabilizer_factors {
            f = f.mul(&arith::factorize(&big(x)));
        }
        f
    }

    /// Short label such as `line 7 q=8 (q0=2, r=3)`.
    pub fn label(&self) -> String {
        match self.subfield {
            Some((q0, r)) => format!("line {} q={} (q0={q0}, r={r})", self.family_line, self.q),
            None => format!("line {} q={}", self.family_line, self.q),
        }
    }
}

impl fmt::Display for FamilyContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Odd primes `r` with `q = q0^r` for a prime power `q0`.
pub fn subfield_pairs(q: u64) -> Vec<(u64, u32)> {
    let Some((p, a)) = arith::prime_power_decomposition(q) else {
        return Vec::new();
    };
    arith::factorize(&(a as u64))
        .prime_powers()
        .iter()
        .filter(|(r, _)| *r > 2)
        .map(|&(r, _)| (p.pow(a / r as u32), r as u32))
        .collect()
}

/// Every line of the `PSU_5(q)` maximal-subgroup table at `q`, with the
/// line's condition evaluated. Line 7 yields one context per odd prime `r`
/// dividing `a`, or a single invalid context if there is none.
pub fn families(q: u64) -> Result<Vec<FamilyContext>, CatalogError> {
    let (p, a) = prime_power(q)?;
    let gcd5 = 5u64.gcd(&(q + 1));
    let n = su5_order(q);
    let socle = &n / big(gcd5);
    let out = out_order(q)?;

    let mk = |line: u8,
              subfield: Option<(u64, u32)>,
              factors: Vec<u64>,
              valid: bool,
              condition: &str| {
        let (v, k_bound) = if valid {
            let h: BigUint = factors.iter().map(|&x| big(x)).product();
            let (v, r) = n.div_rem(&h);
            assert!(
                r == BigUint::from(0u32),
                "index not integral on line {line} at q={q}"
            );
            (v, big(2 * a as u64) * h)
        } else {
            (BigUint::from(0u32), BigUint::from(0u32))
        };
        FamilyContext {
            family_line: line,
            q,
            p,
            a,
            subfield,
            socle_order: socle.clone(),
            out_order: out,
            v,
            k_bound,
            stabilizer_factors: if valid { factors } else { Vec::new() },
            subdegree_divisors: Vec::new(),
            index_divisors: Vec::new(),
            is_parabolic: line <= 2,
            valid,
            condition: condition.to_string(),
        }
    };

    let q2 = q * q;
    let q3 = q2 * q;
    let q4 = q3 * q;
    let q5 = q4 * q;
    let mut out_list = Vec::new();

    // stabilizer factors are chosen so that each is at most q^5+1
    out_list.push(mk(1, None, vec![q5, q5, q3 + 1, q2 - 1, q2 - 1], true, ""));
    out_list.push(mk(2, None, vec![q5, q5, q4 - 1, q2 - 1], true, ""));
    let mut l3 = mk(
        3,
        None,
        vec![q3, q3, q + 1, q2 - 1, q3 + 1, q4 - 1],
        true,
        "",
    );
    l3.subdegree_divisors = vec![(q + 1) * (q4 - 1)];
    l3.index_divisors = vec![q3 + 1, q3];
    out_list.push(l3);
    let mut l4 = mk(4, None, vec![q4, q3 + 1, q2 - 1, q2 - 1, q + 1], true, "");
    l4.subdegree_divisors = vec![(q2 - 1) * (q3 + 1)];
    out_list.push(l4);
    out_list.push(mk(5, None, vec![120, q + 1, q + 1, q + 1, q + 1], true, ""));
    out_list.push(mk(6, None, vec![5, phi10(q)], q >= 3, "q >= 3"));

    let pairs = subfield_pairs(q);
    if pairs.is_empty() {
        out_list.push(mk(7, None, Vec::new(), false, "q = q0^r, r odd prime"));
    }
    for (q0, r) in pairs {
        let b = 5u64.gcd(&((q + 1) / (q0 + 1)));
        let (a0, s2, s3, s4, s5) = (q0.pow(10), q0 * q0, q0.pow(3), q0.pow(4), q0.pow(5));
        let factors = vec![b, a0, s5 + 1, s4 - 1, s3 + 1, s2 - 1];
        out_list.push(mk(7, Some((q0, r)), factors, true, "q = q0^r, r odd prime"));
    }

    out_list.push(mk(8, None, vec![q4, q4 - 1, q2 - 1], q % 2 == 1, "q odd"));

    let l9 = (a == 1 && p % 5 == 4) || (a == 2 && matches!(p % 5, 2 | 3));
    out_list.push(mk(
        9,
        None,
        vec![gcd5, 15000],
        l9,
        "q = p = 4 mod 5, or q = p^2 with p = 2, 3 mod 5",
    ));
    let l10 = a == 1 && matches!(p % 11, 2 | 6 | 7 | 8 | 10);
    out_list.push(mk(
        10,
        None,
        vec![gcd5, 660],
        l10,
        "q = p = 2, 6, 7, 8, 10 mod 11",
    ));
    let l11 = a == 1 && p % 6 == 5;
    out_list.push(mk(11, None, vec![gcd5, 25920], l11, "q = p = 5 mod 6"));
    Ok(out_list)
}

/// Prime powers in `2..=qmax`.
pub fn prime_powers_up_to(qmax: u64) -> Vec<u64> {
    (2..=qmax)
        .filter(|&q| arith::prime_power_decomposition(q).is_some())
        .collect()
}

/// A named subgroup of a catalog group, with its order and the degree of
/// the action on its cosets (the design's `v`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerDescription {
    pub name: String,
    pub order: u64,
    pub expected_v: u64,
}

/// A permutation representation shipped as a generator file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub group_name: String,
    pub degree: usize,
    pub generator_file: PathBuf,
    pub expected_order: u64,
    /// `|Out(X)|`; 2 for both groups here.
    pub out_factor: u64,
    pub stabilizer_descriptions: Vec<StabilizerDescription>,
}

impl CatalogEntry {
    /// Loads the generators from `data_dir` and checks the group order.
    pub fn load(&self, data_dir: &Path) -> Result<PermGroup, CatalogError> {
        let path = data_dir.join(&self.generator_file);
        let text = std::fs::read_to_string(&path).map_err(|source| CatalogError::Io {
            path: path.clone(),
            source,
        })?;
        let g = PermGroup::from_text(&text).map_err(|source| CatalogError::Group {
            path: path.clone(),
            source,
        })?;
        if g.degree() != self.degree {
            return Err(CatalogError::Group {
                path,
                source: crate::permgroup::GroupError::DegreeMismatch {
                    expected: self.degree,
                    found: g.degree(),
                },
            });
        }
        Ok(g)
    }

    /// File holding generators of `X:2` on the same points: the generators
    /// of `X` followed by one outer automorphism.
    pub fn extension_file(&self) -> PathBuf {
        let stem = self
            .generator_file
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("group");
        self.generator_file
            .with_file_name(format!("{stem}_ext.txt"))
    }

    /// Loads the `X:2` generators and checks that they extend `x`.
    pub fn load_extension(
        &self,
        data_dir: &Path,
        x: &PermGroup,
    ) -> Result<PermGroup, CatalogError> {
        let path = data_dir.join(self.extension_file());
        let text = std::fs::read_to_string(&path).map_err(|source| CatalogError::Io {
            path: path.clone(),
            source,
        })?;
        let g = PermGroup::from_text(&text).map_err(|source| CatalogError::Group {
            path: path.clone(),
            source,
        })?;
        let n = x.generators().len();
        if g.degree() != x.degree()
            || g.generators().len() != n + 1
            || g.generators()[..n] != *x.generators()
        {
            return Err(CatalogError::Format {
                line: 1,
                message: format!(
                    "{} does not extend {}",
                    path.display(),
                    self.generator_file.display()
                ),
            });
        }
        Ok(g)
    }

    /// One catalog-file record per stabilizer.
    pub fn records(&self) -> Vec<CatalogRecord> {
        self.stabilizer_descriptions
            .iter()
            .map(|s| CatalogRecord {
                name: self.group_name.clone(),
                degree: self.degree,
                order: self.expected_order,
                file: self.generator_file.clone(),
                stab_order: s.order,
                expected_v: s.expected_v,
            })
            .collect()
    }
}

fn stab(name: &str, order: u64, group_order: u64) -> StabilizerDescription {
    StabilizerDescription {
        name: name.into(),
        order,
        expected_v: group_order / order,
    }
}

pub const PSU33: &str = "PSU_3(3)";
pub const PSU42: &str = "PSU_4(2)";

/// The permutation representations of `PSU_3(3)` and `PSU_4(2)` used for
/// the explicit constructions.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let e =
        |name: &str, degree: usize, file: &str, order: u64, stabs: Vec<StabilizerDescription>| {
            CatalogEntry {
                group_name: name.into(),
                degree,
                generator_file: file.into(),
                expected_order: order,
                out_factor: 2,
                stabilizer_descriptions: stabs,
            }
        };
    let (u3, u4) = (6048, 25920);
    vec![
        e(
            PSU33,
            28,
            "psu3_3_deg28.txt",
            u3,
            vec![
                stab("PSL_2(7)", 168, u3),
                stab("4.S_4", 96, u3),
                stab("4^2:S_3", 96, u3),
            ],
        ),
        e(
            PSU33,
            36,
            "psu3_3_deg36.txt",
            u3,
            vec![stab("PSL_2(7)", 168, u3)],
        ),
        e(
            PSU33,
            63,
            "psu3_3_deg63.txt",
            u3,
            vec![stab("4.S_4", 96, u3)],
        ),
        e(
            PSU33,
            63,
            "psu3_3_deg63b.txt",
            u3,
            vec![stab("4^2:S_3", 96, u3)],
        ),
        e(
            PSU42,
            45,
            "psu4_2_deg45.txt",
            u4,
            vec![
                stab("S_6", 720, u4),
                stab("3^{1+2}:2A_4", 648, u4),
                stab("3^3:S_4", 648, u4),
                stab("2.(A_4xA_4).2", 576, u4),
            ],
        ),
        e(
            PSU42,
            40,
            "psu4_2_deg40.txt",
            u4,
            vec![stab("3^{1+2}:2A_4", 648, u4)],
        ),
        e(
            PSU42,
            40,
            "psu4_2_deg40b.txt",
            u4,
            vec![stab("3^3:S_4", 648, u4)],
        ),
        e(
            PSU42,
            36,
            "psu4_2_deg36.txt",
            u4,
            vec![stab("S_6", 720, u4)],
        ),
    ]
}

/// One line of a catalog file: `name degree order file stab_order expected_v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub degree: usize,
    pub order: u64,
    pub file: PathBuf,
    pub stab_order: u64,
    pub expected_v: u64,
}

impl fmt::Display for CatalogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.name,
            self.degree,
            self.order,
            self.file.display(),
            self.stab_order,
            self.expected_v
        )
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogRecord>, CatalogError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CatalogError::Format {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<u64, CatalogError> {
            fields[i]
                .parse::<u64>()
                .map_err(|e| err(format!("field {}: {e}", i + 1)))
        };
        out.push(CatalogRecord {
            name: fields[0].to_string(),
            degree: num(1)? as usize,
            order: num(2)?,
            file: PathBuf::from(fields[3]),
            stab_order: num(4)?,
            expected_v: num(5)?,
        });
    }
    Ok(out)
}

pub fn write_catalog(records: &[CatalogRecord]) -> String {
    let mut s = String::from("# name degree order file stab_order expected_v\n");
    for r in records {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

/// `v` and `k`-bound check for a catalog stabilizer: `v = |X|/|H|` and the
/// bound `|Out|·|H|`.
pub fn entry_sieve_inputs(entry: &CatalogEntry) -> Vec<(StabilizerDescription, u64)> {
    entry
        .stabilizer_descriptions
        .iter()
        .map(|s| (s.clone(), entry.out_factor * s.order))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psu_orders() {
        assert_eq!(psu_order(3, 3).unwrap(), big(6048));
        assert_eq!(psu_order(4, 2).unwrap(), big(25920));
        assert_eq!(psu_order(5, 2).unwrap(), big(13685760));
        assert!(matches!(
            psu_order(6, 2),
            Err(CatalogError::UnsupportedRank(6))
        ));
        assert!(matches!(
            psu_order(5, 6),
            Err(CatalogError::NotPrimePower(6))
        ));
    }

    #[test]
    fn out_orders() {
        assert_eq!(out_order(2).unwrap(), 2);
        assert_eq!(out_order(4).unwrap(), 20);
        assert_eq!(out_order(3).unwrap(), 2);
    }

    #[test]
    fn psu5_times_center_is_su5() {
        for q in prime_powers_up_to(64) {
            let g = 5u64.gcd(&(q + 1));
            assert_eq!(psu_order(5, q).unwrap() * big(g), su5_order(q));
        }
    }

    fn line(q: u64, l: u8) -> FamilyContext {
        families(q)
            .unwrap()
            .into_iter()
            .find(|c| c.family_line == l)
            .unwrap()
    }

    #[test]
    fn validity_columns() {
        assert!(!line(2, 6).valid);
        assert!(!line(2, 8).valid);
        assert!(line(2, 10).valid);
        assert!(!line(3, 10).valid);
        assert!(line(9, 9).valid);
        assert!(line(4, 9).valid);
        assert!(line(19, 9).valid);
        assert!(!line(5, 9).valid);
        assert!(line(5, 11).valid);
        assert!(!line(7, 11).valid);
        assert!(!line(4, 7).valid);
        assert_eq!(line(8, 7).subfield, Some((2, 3)));
    }

    #[test]
    fn lemma_v_formulas() {
        for q in prime_powers_up_to(64) {
            let qb = big(q);
            let p = |e: u32| arith::pow(&qb, e);
            let phi = big(phi10(q));
            assert_eq!(line(q, 1).v, p(7) + p(5) + p(2) + 1u32);
            assert_eq!(line(q, 2).v, p(8) + p(5) + p(3) + 1u32);
            assert_eq!(line(q, 3).v, p(4) * &phi);
            assert_eq!(line(q, 4).v, p(6) * &phi * (p(2) + 1u32));
            assert_eq!(
                line(q, 5).v,
                su5_order(q) / (big(120) * arith::pow(&(&qb + 1u32), 4))
            );
            if q >= 3 {
                let v6 =
                    p(10) * (p(4) - 1u32) * (p(3) + 1u32) * (p(2) - 1u32) * (&qb + 1u32) / big(5);
                assert_eq!(line(q, 6).v, v6);
            }
            if q % 2 == 1 {
                assert_eq!(line(q, 8).v, p(6) * (p(5) + 1u32) * (p(3) + 1u32));
            }
        }
        assert_eq!(line(2, 5).v, big(1408));
        assert_eq!(line(3, 5).v, big(8404641));
        assert_eq!(line(2, 5).k_bound, big(19440));
        assert_eq!(line(3, 5).k_bound, big(61440));
    }

    #[test]
    fn index_times_stabilizer_is_su5() {
        for q in prime_powers_up_to(64) {
            for c in families(q).unwrap().into_iter().filter(|c| c.valid) {
                let h: BigUint = c.stabilizer_factors.iter().map(|&x| big(x)).product();
                assert_eq!(&c.v * h, su5_order(q), "{c}");
                assert_eq!(c.k_bound_factorization().value(), c.k_bound, "{c}");
                assert_eq!(c.out_order, 2 * c.a as u64 * 5u64.gcd(&(q + 1)));
            }
        }
    }

    #[test]
    fn subfield_v_matches_lemma() {
        // q = 8 = 2^3: v = N(8)/(b·N(2)) with b = gcd(9/3, 5) = 1
        let c = line(8, 7);
        assert_eq!(c.v, su5_order(8) / su5_order(2));
        let c = line(64, 7);
        assert_eq!(c.subfield, Some((4, 3)));
        let b = 5u64.gcd(&(65 / 5));
        assert_eq!(c.v, su5_order(64) / (su5_order(4) * big(b)));
    }

    #[test]
    fn builtin_catalog_orders() {
        let cat = builtin_catalog();
        let first = &cat[0];
        assert_eq!(first.expected_order, 6048);
        assert_eq!(first.stabilizer_descriptions[0].order, 168);
        assert_eq!(first.stabilizer_descriptions[0].expected_v, 36);
        let u4 = cat.iter().find(|e| e.degree == 45).unwrap();
        let vs: Vec<u64> = u4
            .stabilizer_descriptions
            .iter()
            .map(|s| s.expected_v)
            .collect();
        assert_eq!(vs, vec![36, 40, 40, 45]);
        for e in &cat {
            let x = if e.group_name == PSU33 {
                psu_order(3, 3)
            } else {
                psu_order(4, 2)
            };
            assert_eq!(big(e.expected_order), x.unwrap());
        }
    }

    #[test]
    fn catalog_file_round_trip() {
        let recs: Vec<CatalogRecord> = builtin_catalog().iter().flat_map(|e| e.records()).collect();
        let text = write_catalog(&recs);
        assert_eq!(parse_catalog(&text).unwrap(), recs);
        assert_eq!(write_catalog(&parse_catalog(&text).unwrap()), text);
        let e = parse_catalog("a 1 2 f 3\n").unwrap_err();
        assert!(matches!(e, CatalogError::Format { line: 1, .. }));
    }

    #[test]
    fn missing_file_names_path() {
        let e = builtin_catalog()[0]
            .load(Path::new("/nonexistent"))
            .unwrap_err();
        assert!(e.to_string().contains("/nonexistent/psu3_3_deg28.txt"));
    }
}
