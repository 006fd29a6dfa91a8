//! Incidence structures and symmetric designs.
//!
//! Points are `0..v` in memory and `1..=v` in files and messages. Blocks are
//! sorted point lists.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::permgroup::{GroupError, PermGroup};
use crate::sieve::DesignParams;

/// Default node budget for [`isomorphic`].
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;
/// Largest block orbit [`from_base_block`] follows before giving up.
pub const MAX_BLOCK_ORBIT: usize = 1_000_000;
/// Largest number of helper-orbit unions [`find_base_blocks`] tries.
pub const MAX_UNIONS: u64 = 1 << 22;

/// The first symmetric-design axiom a structure violates. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    PointOutOfRange {
        block: usize,
        point: u64,
    },
    RepeatedPoint {
        block: usize,
        point: u64,
    },
    BlockCount {
        expected: usize,
        found: usize,
    },
    BlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },
    Replication {
        point: usize,
        expected: usize,
        found: usize,
    },
    PairCoverage {
        points: (usize, usize),
        expected: usize,
        found: usize,
    },
    BlockIntersection {
        blocks: (usize, usize),
        expected: usize,
        found: usize,
    },
    Degenerate {
        v: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PointOutOfRange { block, point } => {
                write!(
                    f,
                    "block {block} contains point {point} outside the point set"
                )
            }
            Self::RepeatedPoint { block, point } => {
                write!(f, "block {block} repeats point {point}")
            }
            Self::BlockCount { expected, found } => {
                write!(f, "{found} blocks, expected {expected}")
            }
            Self::BlockSize {
                block,
                expected,
                found,
            } => {
                write!(f, "block {block} has {found} points, expected {expected}")
            }
            Self::Replication {
                point,
                expected,
                found,
            } => {
                write!(
                    f,
                    "point {point} lies on {found} blocks, expected {expected}"
                )
            }
            Self::PairCoverage {
                points: (a, b),
                expected,
                found,
            } => {
                write!(
                    f,
                    "points {a} and {b} lie on {found} common blocks, expected {expected}"
                )
            }
            Self::BlockIntersection {
                blocks: (a, b),
                expected,
                found,
            } => {
                write!(
                    f,
                    "blocks {a} and {b} meet in {found} points, expected {expected}"
                )
            }
            Self::Degenerate { v } => write!(f, "v = {v} is too small"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DesignError {
    #[error("not a symmetric design: {0}")]
    NotSymmetric(Violation),
    #[error("generator {generator} maps block {block:?} outside the block set")]
    NotAutomorphism { generator: usize, block: Vec<u64> },
    #[error("block orbit has length {found}, expected {expected}")]
    OrbitLength { expected: usize, found: usize },
    #[error("group degree {group} does not match v = {v}")]
    DegreeMismatch { v: usize, group: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("resource guard: {0}")]
    Resource(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<u32>>,
}

impl IncidenceStructure {
    /// Blocks are sorted on construction; out-of-range points are kept so
    /// that [`verify_symmetric`](Self::verify_symmetric) can report them.
    pub fn new(v: usize, blocks: Vec<Vec<u32>>) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Self { v, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Block list in lexicographic order, for set comparison.
    pub fn sorted_blocks(&self) -> Vec<Vec<u32>> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    pub fn same_blocks(&self, other: &Self) -> bool {
        self.v == other.v && self.sorted_blocks() == other.sorted_blocks()
    }

    fn incidence(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.v]; self.blocks.len()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                m[i][p as usize] = true;
            }
        }
        m
    }

    /// Checks every axiom of a symmetric design and returns `(v, k, λ)`.
    pub fn verify_symmetric(&self) -> Result<DesignParams<u64>, Violation> {
        let v = self.v;
        if v < 2 {
            return Err(Violation::Degenerate { v });
        }
        for (i, b) in self.blocks.iter().enumerate() {
            for w in b.windows(2) {
                if w[0] == w[1] {
                    return Err(Violation::RepeatedPoint {
                        block: i + 1,
                        point: w[0] as u64 + 1,
                    });
                }
            }
            if let Some(&p) = b.iter().find(|&&p| p as usize >= v) {
                return Err(Violation::PointOutOfRange {
                    block: i + 1,
                    point: p as u64 + 1,
                });
            }
        }
        if self.blocks.len() != v {
            return Err(Violation::BlockCount {
                expected: v,
                found: self.blocks.len(),
            });
        }
        let k = self.blocks[0].len();
        if let Some(i) = self.blocks.iter().position(|b| b.len() != k) {
            return Err(Violation::BlockSize {
                block: i + 1,
                expected: k,
                found: self.blocks[i].len(),
            });
        }
        let mut rep = vec![0usize; v];
        let mut pairs = vec![0usize; v * v];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                rep[x as usize] += 1;
                for &y in &b[i + 1..] {
                    pairs[x as usize * v + y as usize] += 1;
                }
            }
        }
        if let Some(p) = rep.iter().position(|&r| r != k) {
            return Err(Violation::Replication {
                point: p + 1,
                expected: k,
                found: rep[p],
            });
        }
        let lambda = pairs[1];
        for x in 0..v {
            for y in x + 1..v {
                let c = pairs[x * v + y];
                if c != lambda {
                    return Err(Violation::PairCoverage {
                        points: (x + 1, y + 1),
                        expected: lambda,
                        found: c,
                    });
                }
            }
        }
        let inc = self.incidence();
        for i in 0..v {
            for j in i + 1..v {
                let c = self.blocks[j]
                    .iter()
                    .filter(|&&p| inc[i][p as usize])
                    .count();
                if c != lambda {
                    return Err(Violation::BlockIntersection {
                        blocks: (i + 1, j + 1),
                        expected: lambda,
                        found: c,
                    });
                }
            }
        }
        Ok(DesignParams::new(v as u64, k as u64, lambda as u64))
    }

    /// Replaces every block by its complement in the point set.
    pub fn complement(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let inside: HashSet<u32> = b.iter().copied().collect();
                (0..self.v as u32).filter(|p| !inside.contains(p)).collect()
            })
            .collect();
        Self { v: self.v, blocks }
    }

    /// The dual structure: blocks become points.
    pub fn dual(&self) -> Self {
        let mut blocks = vec![Vec::new(); self.v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                blocks[p as usize].push(i as u32);
            }
        }
        Self {
            v: self.blocks.len(),
            blocks,
        }
    }

    /// Design file text: `v k lambda`, then one line of 1-based points per
    /// block.
    pub fn to_text(&self, params: &DesignParams<u64>) -> String {
        let mut s = format!("{} {} {}\n", params.v, params.k, params.lambda);
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|p| (p + 1).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses a design file. The header must agree with the block lines;
    /// the design axioms themselves are left to `verify_symmetric`.
    pub fn from_text(text: &str) -> Result<(Self, DesignParams<u64>), DesignError> {
        let mut lines = text.lines().enumerate();
        let err = |line: usize, message: String| DesignError::Format { line, message };
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|e| err(1, format!("{t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        let [v, k, lambda] = nums[..] else {
            return Err(err(
                1,
                format!("expected `v k lambda`, found {} fields", nums.len()),
            ));
        };
        let mut blocks = Vec::with_capacity(v as usize);
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            if blocks.len() as u64 == v {
                return Err(err(line, format!("more than v = {v} blocks")));
            }
            let mut block = Vec::with_capacity(k as usize);
            for t in raw.split_whitespace() {
                let p: u64 = t.parse().map_err(|e| err(line, format!("{t:?}: {e}")))?;
                if p == 0 || p > v {
                    return Err(err(line, format!("point {p} outside 1..{v}")));
                }
                block.push((p - 1) as u32);
            }
            if block.len() as u64 != k {
                return Err(err(
                    line,
                    format!("{} points, header says k = {k}", block.len()),
                ));
            }
            blocks.push(block);
        }
        if blocks.len() as u64 != v {
            return Err(err(
                text.lines().count(),
                format!("{} blocks, header says v = {v}", blocks.len()),
            ));
        }
        Ok((
            Self::new(v as usize, blocks),
            DesignParams::new(v, k, lambda),
        ))
    }
}

/// Orbit of `block` under `action`, as a structure with sorted block list.
pub fn from_base_block(
    action: &PermGroup,
    block: &[u32],
) -> Result<IncidenceStructure, DesignError> {
    let v = action.degree();
    let mut start = block.to_vec();
    start.sort_unstable();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(start.clone());
    let mut orbit = vec![start];
    let mut head = 0;
    while head < orbit.len() {
        let b = orbit[head].clone();
        head += 1;
        for g in action.generators() {
            let img = g.apply_set(&b);
            if seen.insert(img.clone()) {
                if orbit.len() >= MAX_BLOCK_ORBIT {
                    return Err(DesignError::Resource(format!(
                        "block orbit longer than {MAX_BLOCK_ORBIT}"
                    )));
                }
                orbit.push(img);
            }
        }
    }
    if orbit.len() != v {
        return Err(DesignError::OrbitLength {
            expected: v,
            found: orbit.len(),
        });
    }
    orbit.sort();
    Ok(IncidenceStructure { v, blocks: orbit })
}

/// Every union of `helper`-orbits of total size `k` whose `action`-orbit is
/// a symmetric design, deduplicated by block set.
pub fn find_base_blocks(
    action: &PermGroup,
    helper: &PermGroup,
    k: usize,
) -> Result<Vec<IncidenceStructure>, DesignError> {
    let v = action.degree();
    if helper.degree() != v {
        return Err(DesignError::DegreeMismatch {
            v,
            group: helper.degree(),
        });
    }
    if k <= 2 || k + 1 >= v {
        return Ok(Vec::new());
    }
    let orbits = helper.orbits();
    let mut unions: Vec<Vec<usize>> = Vec::new();
    let mut budget = MAX_UNIONS;
    subset_sums(&orbits, 0, k, &mut Vec::new(), &mut unions, &mut budget);
    if budget == 0 {
        return Err(DesignError::Resource(format!(
            "more than {MAX_UNIONS} helper-orbit unions for k = {k}"
        )));
    }
    let mut found: Vec<IncidenceStructure> = Vec::new();
    let mut keys: HashSet<Vec<Vec<u32>>> = HashSet::new();
    for u in unions {
        let block: Vec<u32> = u.iter().flat_map(|&i| orbits[i].iter().copied()).collect();
        let d = match from_base_block(action, &block) {
            Ok(d) => d,
            Err(DesignError::OrbitLength { .. }) => continue,
            Err(e) => return Err(e),
        };
        if d.verify_symmetric().is_ok() && keys.insert(d.blocks.clone()) {
            found.push(d);
        }
    }
    Ok(found)
}

fn subset_sums(
    orbits: &[Vec<u32>],
    from: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: &mut u64,
) {
    if *budget == 0 {
        return;
    }
    if remaining == 0 {
        out.push(current.clone());
        *budget -= 1;
        return;
    }
    for i in from..orbits.len() {
        let len = orbits[i].len();
        if len <= remaining {
            current.push(i);
            subset_sums(orbits, i + 1, remaining - len, current, out, budget);
            current.pop();
        }
    }
}

/// Whether `g` acts transitively on flags. Every generator must map blocks
/// to blocks.
pub fn flag_transitive(d: &IncidenceStructure, g: &PermGroup) -> Result<bool, DesignError> {
    if g.degree() != d.v {
        return Err(DesignError::DegreeMismatch {
            v: d.v,
            group: g.degree(),
        });
    }
    let index: HashMap<&[u32], usize> = d
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let mut tables = Vec::with_capacity(g.generators().len());
    for (gi, x) in g.generators().iter().enumerate() {
        let mut t = Vec::with_capacity(d.blocks.len());
        for b in &d.blocks {
            let img = x.apply_set(b);
            match index.get(img.as_slice()) {
                Some(&j) => t.push(j),
                None => {
                    return Err(DesignError::NotAutomorphism {
                        generator: gi + 1,
                        block: b.iter().map(|&p| p as u64 + 1).collect(),
                    })
                }
            }
        }
        tables.push(t);
    }
    let flags: usize = d.blocks.iter().map(Vec::len).sum();
    let Some(first) = d.blocks.iter().position(|b| !b.is_empty()) else {
        return Ok(true);
    };
    let nb = d.blocks.len();
    let mut seen = vec![false; d.v * nb];
    let start = (d.blocks[first][0] as usize, first);
    seen[start.0 * nb + start.1] = true;
    let mut queue = vec![start];
    let mut head = 0;
    while head < queue.len() {
        let (p, b) = queue[head];
        head += 1;
        for (x, t) in g.generators().iter().zip(&tables) {
            let next = (x.apply(p as u32) as usize, t[b]);
            if !seen[next.0 * nb + next.1] {
                seen[next.0 * nb + next.1] = true;
                queue.push(next);
            }
        }
    }
    Ok(queue.len() == flags)
}

/// Summary of a constructed design under its group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignCertificate {
    pub params: DesignParams<u64>,
    pub group_order: u64,
    pub flag_transitive: bool,
    pub point_primitive: bool,
    pub stabilizer_order: u64,
}

impl DesignCertificate {
    pub fn issue(d: &IncidenceStructure, g: &PermGroup) -> Result<Self, DesignError> {
        let params = d.verify_symmetric().map_err(DesignError::NotSymmetric)?;
        let group_order = g.order()? as u64;
        let flag_transitive = flag_transitive(d, g)?;
        let point_primitive = g.is_primitive()?;
        let stabilizer_order = g.stabilizer(0)?.order()? as u64;
        let cert = Self {
            params,
            group_order,
            flag_transitive,
            point_primitive,
            stabilizer_order,
        };
        debug_assert!(
            !cert.flag_transitive
                || cert
                    .group_order
                    .is_multiple_of(cert.params.v * cert.params.k)
        );
        Ok(cert)
    }

    pub fn passes(&self) -> bool {
        self.flag_transitive && self.point_primitive
    }
}

impl fmt::Display for DesignCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{}) group order {} point stabilizer {} flag-transitive {} point-primitive {}",
            self.params.v,
            self.params.k,
            self.params.lambda,
            self.group_order,
            self.stabilizer_order,
            self.flag_transitive,
            self.point_primitive
        )
    }
}

/// Number of blocks through each triple of points, indexed `a*v*v + b*v + c`.
fn triple_counts(d: &IncidenceStructure) -> Vec<u16> {
    let v = d.v;
    let mut t = vec![0u16; v * v * v];
    for b in &d.blocks {
        for &x in b {
            for &y in b {
                for &z in b {
                    t[(x as usize * v + y as usize) * v + z as usize] += 1;
                }
            }
        }
    }
    t
}

/// Per point, the sorted histogram of triple counts over pairs of other
/// points.
fn point_fingerprints(d: &IncidenceStructure, t: &[u16]) -> Vec<Vec<(u16, u32)>> {
    let v = d.v;
    (0..v)
        .map(|p| {
            let mut h: HashMap<u16, u32> = HashMap::new();
            for x in 0..v {
                for y in x + 1..v {
                    if x != p && y != p {
                        *h.entry(t[(p * v + x) * v + y]).or_default() += 1;
                    }
                }
            }
            let mut h: Vec<(u16, u32)> = h.into_iter().collect();
            h.sort_unstable();
            h
        })
        .collect()
}

/// Invariant of a design up to isomorphism: sorted point fingerprints of
/// the design and of its dual.
pub fn fingerprint(d: &IncidenceStructure) -> Vec<Vec<(u16, u32)>> {
    let mut out = point_fingerprints(d, &triple_counts(d));
    out.sort();
    let dual = d.dual();
    let mut dual_fp = point_fingerprints(&dual, &triple_counts(&dual));
    dual_fp.sort();
    out.push(Vec::new());
    out.extend(dual_fp);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Isomorphism {
    /// `witness[p]` is the image of point `p`.
    Isomorphic {
        witness: Vec<u32>,
    },
    NonIsomorphic {
        reason: String,
    },
}

impl Isomorphism {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Self::Isomorphic { .. })
    }
}

/// Applies a point map to every block and compares block sets.
pub fn is_isomorphism(d1: &IncidenceStructure, d2: &IncidenceStructure, map: &[u32]) -> bool {
    if d1.v != d2.v || map.len() != d1.v {
        return false;
    }
    let mut image: Vec<Vec<u32>> = d1
        .blocks
        .iter()
        .map(|b| {
            let mut x: Vec<u32> = b.iter().map(|&p| map[p as usize]).collect();
            x.sort_unstable();
            x
        })
        .collect();
    image.sort();
    image == d2.sorted_blocks()
}

/// Isomorphism test for symmetric designs. Invariants are compared first;
/// when they agree, a backtracking search over point bijections that
/// preserve triple counts either returns a witness or exhausts.
pub fn isomorphic(
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
    node_budget: u64,
) -> Result<Isomorphism, DesignError> {
    let p1 = d1.verify_symmetric().map_err(DesignError::NotSymmetric)?;
    let p2 = d2.verify_symmetric().map_err(DesignError::NotSymmetric)?;
    if p1 != p2 {
        return Ok(Isomorphism::NonIsomorphic {
            reason: "parameters differ".into(),
        });
    }
    if fingerprint(d1) != fingerprint(d2) {
        return Ok(Isomorphism::NonIsomorphic {
            reason: "triple-count fingerprints differ".into(),
        });
    }
    let v = d1.v;
    let (t1, t2) = (triple_counts(d1), triple_counts(d2));
    let (f1, f2) = (point_fingerprints(d1, &t1), point_fingerprints(d2, &t2));
    let mut search = Search {
        v,
        t1: &t1,
        t2: &t2,
        candidates: (0..v)
            .map(|p| (0..v as u32).filter(|&c| f2[c as usize] == f1[p]).collect())
            .collect(),
        map: Vec::with_capacity(v),
        used: vec![false; v],
        nodes: 0,
        budget: node_budget,
        d1,
        d2,
    };
    match search.extend()? {
        true => Ok(Isomorphism::Isomorphic {
            witness: search.map,
        }),
        false => Ok(Isomorphism::NonIsomorphic {
            reason: format!("backtracking exhausted after {} nodes", search.nodes),
        }),
    }
}

struct Search<'a> {
    v: usize,
    t1: &'a [u16],
    t2: &'a [u16],
    candidates: Vec<Vec<u32>>,
    map: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    d1: &'a IncidenceStructure,
    d2: &'a IncidenceStructure,
}

impl Search<'_> {
    fn consistent(&self, c: usize, img: usize) -> bool {
        let v = self.v;
        let t1 = |a: usize, b: usize, c: usize| self.t1[(a * v + b) * v + c];
        let t2 = |a: usize, b: usize, c: usize| self.t2[(a * v + b) * v + c];
        for a in 0..c {
            let fa = self.map[a] as usize;
            for b in a + 1..c {
                if t1(a, b, c) != t2(fa, self.map[b] as usize, img) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self) -> Result<bool, DesignError> {
        let c = self.map.len();
        if c == self.v {
            return Ok(is_isomorphism(self.d1, self.d2, &self.map));
        }
        for i in 0..self.candidates[c].len() {
            let img = self.candidates[c][i] as usize;
            if self.used[img] || !self.consistent(c, img) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(DesignError::Resource(format!(
                    "isomorphism search exceeded {} nodes",
                    self.budget
                )));
            }
            self.used[img] = true;
            self.map.push(img as u32);
            if self.extend()? {
                return Ok(true);
            }
            self.map.pop();
            self.used[img] = false;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Permutation;

    /// Fano plane as the orbit of {0,1,3} under x -> x+1 mod 7.
    fn fano() -> (IncidenceStructure, PermGroup) {
        let shift = Permutation::from_images((0..7).map(|i| (i + 1) % 7).collect()).unwrap();
        let g = PermGroup::new(7, vec![shift]).unwrap();
        (from_base_block(&g, &[0, 1, 3]).unwrap(), g)
    }

    #[test]
    fn fano_verifies() {
        let (d, g) = fano();
        assert_eq!(d.verify_symmetric().unwrap(), DesignParams::new(7, 3, 1));
        assert_eq!(
            d.complement().verify_symmetric().unwrap(),
            DesignParams::new(7, 4, 2)
        );
        assert!(d.complement().complement().same_blocks(&d));
        // the cyclic group has 7 elements but there are 21 flags
        assert!(!flag_transitive(&d, &g).unwrap());
        let frob = Permutation::from_images((0..7).map(|i| (2 * i) % 7).collect()).unwrap();
        let g2 = g.with_generator(frob).unwrap();
        assert!(flag_transitive(&d, &g2).unwrap());
        assert!(!flag_transitive(&d, &PermGroup::trivial(7)).unwrap());
    }

    #[test]
    fn violations_are_named() {
        let (d, _) = fano();
        let mut blocks = d.blocks().to_vec();
        blocks.pop();
        let short = IncidenceStructure::new(7, blocks.clone());
        assert_eq!(
            short.verify_symmetric(),
            Err(Violation::BlockCount {
                expected: 7,
                found: 6
            })
        );
        blocks.push(vec![0, 1, 2]);
        let bad = IncidenceStructure::new(7, blocks);
        assert!(matches!(
            bad.verify_symmetric(),
            Err(Violation::Replication { .. })
        ));
    }

    #[test]
    fn whole_point_set_has_orbit_one() {
        let (_, g) = fano();
        let all: Vec<u32> = (0..7).collect();
        assert!(matches!(
            from_base_block(&g, &all),
            Err(DesignError::OrbitLength {
                expected: 7,
                found: 1
            })
        ));
    }

    #[test]
    fn text_round_trip() {
        let (d, _) = fano();
        let p = d.verify_symmetric().unwrap();
        let text = d.to_text(&p);
        let (back, hp) = IncidenceStructure::from_text(&text).unwrap();
        assert_eq!(hp, p);
        assert_eq!(back, d);
        assert_eq!(back.to_text(&hp), text);
        let bad = text.replacen("7 3 1", "7 4 1", 1);
        assert!(matches!(
            IncidenceStructure::from_text(&bad),
            Err(DesignError::Format { line: 2, .. })
        ));
    }

    #[test]
    fn isomorphism_with_witness() {
        let (d, _) = fano();
        let perm: Vec<u32> = vec![3, 5, 0, 6, 1, 2, 4];
        let relabeled = IncidenceStructure::new(
            7,
            d.blocks()
                .iter()
                .map(|b| b.iter().map(|&p| perm[p as usize]).collect())
                .collect(),
        );
        match isomorphic(&d, &relabeled, DEFAULT_NODE_BUDGET).unwrap() {
            Isomorphism::Isomorphic { witness } => {
                assert!(is_isomorphism(&d, &relabeled, &witness))
            }
            other => panic!("{other:?}"),
        }
        match isomorphic(&d, &d, DEFAULT_NODE_BUDGET).unwrap() {
            Isomorphism::Isomorphic { witness } => assert!(is_isomorphism(&d, &d, &witness)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn find_base_blocks_rejects_trivial_k() {
        let (_, g) = fano();
        assert!(find_base_blocks(&g, &PermGroup::trivial(7), 7)
            .unwrap()
            .is_empty());
        let found = find_base_blocks(&g, &PermGroup::trivial(7), 3).unwrap();
        assert!(found.iter().all(|d| d.verify_symmetric().is_ok()));
        // {0,1,3} and {0,1,5} give the two Fano planes on Z_7
        assert_eq!(found.len(), 2);
    }
}
