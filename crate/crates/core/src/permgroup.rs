//! Permutation groups of moderate degree.
//!
//! Permutations act on the right: `p^(gh) = (p^g)^h`, and `g * h` is the
//! permutation "apply `g`, then `h`". Points are 0-based in memory and
//! 1-based in the text format.
//!
//! Orders, membership and stabilizers go through a Schreier-Sims
//! stabilizer chain. The chain is seeded with a randomized phase (sifting
//! random products) and then completed by a deterministic sweep over every
//! Schreier generator, so the result does not depend on the seed.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest degree the chain construction accepts.
pub const MAX_DEGREE: usize = 10_000;
/// Largest group order the chain construction accepts.
pub const MAX_ORDER: u128 = 100_000_000;
/// Largest group that may be listed element by element.
pub const MAX_ENUMERATION: usize = 2_000_000;
/// Largest coset space [`coset_action`] builds.
pub const MAX_INDEX: u128 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("images do not form a permutation of 1..{degree}")]
    NotBijective { degree: usize },
    #[error("generator has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} outside 1..{degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("generator {index} of the proposed subgroup is not in the group")]
    NotSubgroup { index: usize },
    #[error("no subgroup of order {order} found after {attempts} attempts")]
    NotFound { order: u128, attempts: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A bijection of `{0, .., degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(GroupError::NotBijective { degree: n });
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// From 1-based images, as written in generator files.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GroupError> {
        let n = images.len();
        let zero: Option<Vec<u32>> = images
            .iter()
            .map(|&i| (1..=n).contains(&i).then(|| (i - 1) as u32))
            .collect();
        match zero {
            Some(z) => Self::from_images(z),
            None => Err(GroupError::NotBijective { degree: n }),
        }
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for c in cycles {
            for (i, &p) in c.iter().enumerate() {
                let next = c[(i + 1) % c.len()];
                if p as usize >= degree || next as usize >= degree {
                    return Err(GroupError::NotBijective { degree });
                }
                images[p as usize] = next;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Self { images: inv }
    }

    /// `self^e` for `e >= 0`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &p)| *i as u32 != p)
            .map(|(i, _)| i as u32)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start as u32];
            seen[start] = true;
            let mut p = self.images[start];
            while p as usize != start {
                seen[p as usize] = true;
                c.push(p);
                p = self.images[p as usize];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Element order: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Image of a point set, sorted.
    pub fn apply_set(&self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&p| self.apply(p)).collect();
        out.sort_unstable();
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Apply `self` first, then `rhs`.
    fn mul(self, rhs: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&p| rhs.images[p as usize])
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct Level {
    orbit: Vec<u32>,
    /// `transversal[b]` maps the level's base point to `b`.
    transversal: Vec<Option<Permutation>>,
}

/// Base and strong generating set with per-level transversals.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    base: Vec<u32>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a chain whose base begins with `base_prefix`.
    pub fn build(
        degree: usize,
        generators: &[Permutation],
        base_prefix: &[u32],
        seed: u64,
    ) -> Result<Self, GroupError> {
        if degree > MAX_DEGREE {
            return Err(GroupError::Resource(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let mut chain = StabChain {
            degree,
            base: base_prefix.to_vec(),
            strong: generators
                .iter()
                .filter(|g| !g.is_identity())
                .cloned()
                .collect(),
            levels: Vec::new(),
        };
        for g in chain.strong.clone() {
            chain.ensure_moved_by_base(&g);
        }
        for i in 0..chain.base.len() {
            chain.recompute_level(i);
        }
        chain.check_guard()?;
        if chain.strong.is_empty() {
            return Ok(chain);
        }

        // randomized phase: sift random products until a run of them
        // sifts to the identity
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool = ProductReplacement::new(&chain.strong, &mut rng);
        let mut quiet = 0;
        while quiet < 24 {
            let r = pool.next(&mut rng);
            let (h, j) = chain.sift(&r, 0);
            if h.is_identity() {
                quiet += 1;
            } else {
                quiet = 0;
                chain.add_strong(h, j);
                chain.check_guard()?;
            }
        }

        // deterministic completion: every Schreier generator must sift
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match chain.first_failing_schreier(lvl) {
                Some((h, j)) => {
                    chain.add_strong(h, j);
                    chain.check_guard()?;
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        Ok(chain)
    }

    fn check_guard(&self) -> Result<(), GroupError> {
        let o = self.order_unchecked();
        if o > MAX_ORDER {
            return Err(GroupError::Resource(format!(
                "group order exceeds {MAX_ORDER}"
            )));
        }
        Ok(())
    }

    fn ensure_moved_by_base(&mut self, g: &Permutation) {
        if self.base.iter().all(|&b| g.apply(b) == b) {
            let p = g.first_moved_point().expect("identity has no moved point");
            self.base.push(p);
        }
    }

    fn add_strong(&mut self, h: Permutation, level: usize) {
        if level == self.base.len() {
            let p = h
                .first_moved_point()
                .expect("sift residue is not the identity");
            self.base.push(p);
        }
        self.strong.push(h);
        // h fixes every earlier base point too, so lower orbits may grow
        for l in 0..self.base.len() {
            self.recompute_level(l);
        }
    }

    fn level_generators(&self, i: usize) -> Vec<&Permutation> {
        let fixed = &self.base[..i];
        self.strong
            .iter()
            .filter(|s| fixed.iter().all(|&b| s.apply(b) == b))
            .collect()
    }

    fn recompute_level(&mut self, i: usize) {
        let b = self.base[i];
        let gens: Vec<Permutation> = self.level_generators(i).into_iter().cloned().collect();
        let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
        transversal[b as usize] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![b];
        let mut head = 0;
        while head < orbit.len() {
            let beta = orbit[head];
            head += 1;
            for s in &gens {
                let gamma = s.apply(beta);
                if transversal[gamma as usize].is_none() {
                    let u = transversal[beta as usize].as_ref().unwrap() * s;
                    transversal[gamma as usize] = Some(u);
                    orbit.push(gamma);
                }
            }
        }
        let level = Level { orbit, transversal };
        if i < self.levels.len() {
            self.levels[i] = level;
        } else {
            debug_assert_eq!(i, self.levels.len());
            self.levels.push(level);
        }
    }

    fn first_failing_schreier(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        let gens = self.level_generators(i);
        for &beta in &level.orbit {
            let u_beta = level.transversal[beta as usize].as_ref().unwrap();
            for s in &gens {
                let gamma = s.apply(beta);
                let u_gamma = level.transversal[gamma as usize].as_ref().unwrap();
                let sg = &(u_beta * s) * &u_gamma.inverse();
                if sg.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(&sg, i + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Strips `g` through the levels starting at `from`. Returns the residue
    /// and the level at which stripping stopped.
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for i in from..self.levels.len() {
            let beta = h.apply(self.base[i]);
            match &self.levels[i].transversal[beta as usize] {
                Some(u) => h = &h * &u.inverse(),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    fn order_unchecked(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn order(&self) -> u128 {
        self.order_unchecked()
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Generators of the pointwise stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        self.level_generators(depth).into_iter().cloned().collect()
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = &g * level.transversal[beta as usize].as_ref().unwrap();
        }
        g
    }
}

struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
}

impl ProductReplacement {
    fn new<R: Rng>(gens: &[Permutation], rng: &mut R) -> Self {
        let mut slots: Vec<Permutation> = gens.to_vec();
        while slots.len() < 10 {
            slots.push(gens[slots.len() % gens.len()].clone());
        }
        let mut pr = Self {
            acc: Permutation::identity(gens[0].degree()),
            slots,
        };
        for _ in 0..50 {
            pr.next(rng);
        }
        pr
    }

    fn next<R: Rng>(&mut self, rng: &mut R) -> Permutation {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        self.slots[i] = if rng.gen_bool(0.5) {
            &self.slots[i] * &self.slots[j]
        } else {
            &self.slots[i] * &self.slots[j].inverse()
        };
        self.acc = &self.acc * &self.slots[i];
        self.acc.clone()
    }
}

/// A finitely generated permutation group. Immutable; the stabilizer chain
/// is built on first use and cached.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    seed: u64,
    chain: OnceLock<Result<StabChain, GroupError>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        Self {
            degree: self.degree,
            generators: self.generators.clone(),
            seed: self.seed,
            chain,
        }
    }
}

impl PartialEq for PermGroup {
    /// Equality of generator lists, not of groups.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        Ok(Self {
            degree,
            generators,
            seed: 0,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("identity has the right degree")
    }

    /// Cyclic group generated by `(1 2 .. n)`.
    pub fn cyclic(n: usize) -> Self {
        let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::new(n, vec![Permutation { images }]).unwrap()
    }

    /// Symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return Self::trivial(n);
        }
        let cycle = Permutation {
            images: (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
        };
        let swap = Permutation::from_cycles(n, &[&[0, 1]]).unwrap();
        Self::new(n, vec![cycle, swap]).unwrap()
    }

    /// Seed for the randomized phase of the chain construction.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.chain = OnceLock::new();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> Result<&StabChain, GroupError> {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[], self.seed))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<u128, GroupError> {
        Ok(self.chain()?.order())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, GroupError> {
        Ok(self.chain()?.contains(g))
    }

    fn check_point(&self, point: u32) -> Result<(), GroupError> {
        if point as usize >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point: point as usize + 1,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Orbit of `point`, sorted.
    pub fn orbit(&self, point: u32) -> Result<Vec<u32>, GroupError> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut orbit = vec![point];
        let mut head = 0;
        while head < orbit.len() {
            let b = orbit[head];
            head += 1;
            for g in &self.generators {
                let c = g.apply(b);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    orbit.push(c);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// Orbit partition, each orbit sorted, orbits ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree as u32 {
            if seen[p as usize] {
                continue;
            }
            let o = self.orbit(p).expect("point in range");
            for &x in &o {
                seen[x as usize] = true;
            }
            out.push(o);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1
            || self
                .orbit(0)
                .map(|o| o.len() == self.degree)
                .unwrap_or(false)
    }

    /// Stabilizer of `point`.
    pub fn stabilizer(&self, point: u32) -> Result<PermGroup, GroupError> {
        self.check_point(point)?;
        let chain = StabChain::build(self.degree, &self.generators, &[point], self.seed)?;
        let gens = chain.stabilizer_generators(1);
        let mut h = PermGroup::new(self.degree, gens)?;
        h.seed = self.seed;
        Ok(h)
    }

    /// Orbits of the stabilizer of `point`: `(least point, size)`, ordered by
    /// size and then by representative.
    pub fn suborbits(&self, point: u32) -> Result<Vec<(u32, usize)>, GroupError> {
        if !self.is_transitive() {
            return Err(GroupError::NotTransitive);
        }
        let h = self.stabilizer(point)?;
        let mut out: Vec<(u32, usize)> = h.orbits().iter().map(|o| (o[0], o.len())).collect();
        out.sort_by_key(|&(r, s)| (s, r));
        Ok(out)
    }

    /// Finest block system in which `0` and `beta` share a block, as a
    /// class label per point.
    pub fn minimal_block(&self, beta: u32) -> Vec<u32> {
        let mut uf = UnionFind::new(self.degree);
        let mut queue = VecDeque::new();
        if uf.union(0, beta as usize) {
            queue.push_back((0u32, beta));
        }
        while let Some((a, b)) = queue.pop_front() {
            for g in &self.generators {
                let (ga, gb) = (g.apply(a), g.apply(b));
                if uf.union(ga as usize, gb as usize) {
                    queue.push_back((ga, gb));
                }
            }
        }
        (0..self.degree).map(|p| uf.find(p) as u32).collect()
    }

    /// True iff the group preserves no nontrivial partition.
    pub fn is_primitive(&self) -> Result<bool, GroupError> {
        if !self.is_transitive() {
            return Err(GroupError::NotTransitive);
        }
        if self.degree <= 2 {
            return Ok(true);
        }
        for beta in 1..self.degree as u32 {
            let labels = self.minimal_block(beta);
            if labels.iter().any(|&l| l != labels[0]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All elements, by closure under right multiplication by generators.
    /// Independent of the stabilizer chain.
    pub fn elements(&self) -> Result<Vec<Permutation>, GroupError> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            let x = out[head].clone();
            head += 1;
            for g in &self.generators {
                let y = &x * g;
                if !seen.contains(&y) {
                    if out.len() >= MAX_ENUMERATION {
                        return Err(GroupError::Resource(format!(
                            "more than {MAX_ENUMERATION} elements"
                        )));
                    }
                    seen.insert(y.clone());
                    out.push(y);
                }
            }
        }
        Ok(out)
    }

    /// Set of element orders.
    pub fn element_order_spectrum(&self) -> Result<Vec<u64>, GroupError> {
        let mut orders: Vec<u64> = self.elements()?.iter().map(Permutation::order).collect();
        orders.sort_unstable();
        orders.dedup();
        Ok(orders)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a * b == b * a))
    }

    /// The subgroup generated by this group's generators and `extra`.
    pub fn with_generator(&self, extra: Permutation) -> Result<PermGroup, GroupError> {
        let mut gens = self.generators.clone();
        gens.push(extra);
        Ok(PermGroup::new(self.degree, gens)?.with_seed(self.seed))
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Result<Permutation, GroupError> {
        Ok(self.chain()?.random_element(rng))
    }

    /// Largest normal `p`-subgroup: the subgroup generated by all
    /// `p`-elements whose normal closure is a `p`-group.
    pub fn p_core(&self, p: u64) -> Result<PermGroup, GroupError> {
        let elements = self.elements()?;
        let mut core = PermGroup::trivial(self.degree);
        let mut core_order = 1u128;
        for x in &elements {
            let o = x.order();
            if o == 1 || !is_power_of(o, p) || core.contains(x)? {
                continue;
            }
            let closure = self.normal_closure(x)?;
            if !is_power_of_u128(closure.order()?, p) {
                continue;
            }
            let joined = {
                let mut gens = core.generators.clone();
                gens.extend(closure.generators.iter().cloned());
                PermGroup::new(self.degree, gens)?
            };
            let jo = joined.order()?;
            if jo > core_order {
                core = joined;
                core_order = jo;
            }
        }
        Ok(core)
    }

    /// Smallest normal subgroup containing `x`.
    pub fn normal_closure(&self, x: &Permutation) -> Result<PermGroup, GroupError> {
        let mut n = PermGroup::new(self.degree, vec![x.clone()])?;
        loop {
            let mut grew = false;
            let gens = n.generators.clone();
            'scan: for y in &gens {
                for g in &self.generators {
                    let conj = &(&g.inverse() * y) * g;
                    if !n.contains(&conj)? {
                        n = n.with_generator(conj)?;
                        grew = true;
                        break 'scan;
                    }
                }
            }
            if !grew {
                return Ok(n);
            }
        }
    }

    /// Text form: `degree n` then one 1-based generator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for g in &self.generators {
            let line: Vec<String> = g.images.iter().map(|&p| (p + 1).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<PermGroup, GroupError> {
        let mut degree: Option<usize> = None;
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fmt_err = |message: String| GroupError::Format {
                line: line_no,
                message,
            };
            match degree {
                None => {
                    let mut parts = line.split_whitespace();
                    if parts.next() != Some("degree") {
                        return Err(fmt_err("expected `degree n`".into()));
                    }
                    let n = parts
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| fmt_err("bad degree".into()))?;
                    if parts.next().is_some() {
                        return Err(fmt_err("trailing tokens after degree".into()));
                    }
                    degree = Some(n);
                }
                Some(n) => {
                    let imgs: Result<Vec<usize>, _> =
                        line.split_whitespace().map(str::parse::<usize>).collect();
                    let imgs = imgs.map_err(|e| fmt_err(format!("bad image: {e}")))?;
                    if imgs.len() != n {
                        return Err(fmt_err(format!(
                            "expected {n} images, found {}",
                            imgs.len()
                        )));
                    }
                    let g =
                        Permutation::from_one_based(&imgs).map_err(|e| fmt_err(e.to_string()))?;
                    gens.push(g);
                }
            }
        }
        let degree = degree.ok_or(GroupError::Format {
            line: 1,
            message: "empty file".into(),
        })?;
        PermGroup::new(degree, gens)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn is_power_of_u128(mut n: u128, p: u64) -> bool {
    let p = p as u128;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; false if they were already equal.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The action of a group on the right cosets of a subgroup.
#[derive(Debug, Clone)]
pub struct ActionHomomorphism {
    pub source: PermGroup,
    pub target_degree: usize,
    pub generator_images: Vec<Permutation>,
    coset_reps: Vec<Permutation>,
    subgroup_elements: Vec<Permutation>,
    index_of: HashMap<Vec<u32>, u32>,
}

impl ActionHomomorphism {
    fn coset_key(&self, x: &Permutation) -> Vec<u32> {
        coset_key(&self.subgroup_elements, x)
    }

    /// Image of an arbitrary element of the source group.
    pub fn image(&self, x: &Permutation) -> Permutation {
        let images = self
            .coset_reps
            .iter()
            .map(|r| self.index_of[&self.coset_key(&(r * x))])
            .collect();
        Permutation { images }
    }

    /// The permutation group on cosets.
    pub fn target(&self) -> PermGroup {
        PermGroup::new(self.target_degree, self.generator_images.clone())
            .expect("images share the coset degree")
            .with_seed(self.source.seed)
    }

    /// Image of a subgroup given by generators in the source representation.
    pub fn image_group(&self, h: &PermGroup) -> PermGroup {
        let gens = h.generators().iter().map(|g| self.image(g)).collect();
        PermGroup::new(self.target_degree, gens).expect("images share the coset degree")
    }

    /// The coset index of the trivial coset is 0.
    pub fn coset_representatives(&self) -> &[Permutation] {
        &self.coset_reps
    }
}

/// Lexicographically least image vector among the elements of `Hx`.
fn coset_key(h_elements: &[Permutation], x: &Permutation) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for h in h_elements {
        let cand: Vec<u32> = h.images.iter().map(|&p| x.images[p as usize]).collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.expect("subgroup has at least the identity")
}

/// Action of `g` on the right cosets of `h`.
pub fn coset_action(g: &PermGroup, h: &PermGroup) -> Result<ActionHomomorphism, GroupError> {
    if g.degree() != h.degree() {
        return Err(GroupError::DegreeMismatch {
            expected: g.degree(),
            found: h.degree(),
        });
    }
    for (index, x) in h.generators().iter().enumerate() {
        if !g.contains(x)? {
            return Err(GroupError::NotSubgroup { index });
        }
    }
    let go = g.order()?;
    let ho = h.order()?;
    let index = go / ho;
    if index > MAX_INDEX {
        return Err(GroupError::Resource(format!(
            "index {index} exceeds {MAX_INDEX}"
        )));
    }
    let subgroup_elements = h.elements()?;
    let id = Permutation::identity(g.degree());
    let mut index_of: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut reps = vec![id.clone()];
    index_of.insert(coset_key(&subgroup_elements, &id), 0);
    let mut head = 0;
    while head < reps.len() {
        let r = reps[head].clone();
        head += 1;
        for s in g.generators() {
            let y = &r * s;
            let key = coset_key(&subgroup_elements, &y);
            if let std::collections::hash_map::Entry::Vacant(e) = index_of.entry(key) {
                e.insert(reps.len() as u32);
                reps.push(y);
            }
        }
    }
    debug_assert_eq!(reps.len() as u128, index);
    let mut hom = ActionHomomorphism {
        source: g.clone(),
        target_degree: reps.len(),
        generator_images: Vec::new(),
        coset_reps: reps,
        subgroup_elements,
        index_of,
    };
    hom.generator_images = g.generators().iter().map(|s| hom.image(s)).collect();
    Ok(hom)
}

/// Randomized subgroup search: grows a subgroup one random element at a
/// time, keeping an element only if the new order still divides the
/// target. `accept` decides whether a subgroup of the target order is the
/// one wanted. Deterministic for a fixed seed.
pub fn find_subgroup_where<F>(
    g: &PermGroup,
    target_order: u128,
    seed: u64,
    attempts: usize,
    mut accept: F,
) -> Result<PermGroup, GroupError>
where
    F: FnMut(&PermGroup) -> Result<bool, GroupError>,
{
    let go = g.order()?;
    if target_order == 0 || go % target_order != 0 {
        return Err(GroupError::NotFound {
            order: target_order,
            attempts: 0,
        });
    }
    if target_order == go && accept(g)? {
        return Ok(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain = g.chain()?;
    for _ in 0..attempts {
        let x = chain.random_element(&mut rng);
        if x.is_identity() || !target_order.is_multiple_of(x.order() as u128) {
            continue;
        }
        let mut current = PermGroup::new(g.degree(), vec![x])?.with_seed(seed);
        let mut order = current.order()?;
        let mut misses = 0;
        while order < target_order && misses < 40 {
            let y = chain.random_element(&mut rng);
            if current.contains(&y)? {
                misses += 1;
                continue;
            }
            let cand = current.with_generator(y)?;
            let co = cand.order()?;
            if target_order.is_multiple_of(co) {
                current = cand;
                order = co;
                misses = 0;
            } else {
                misses += 1;
            }
        }
        if order == target_order && accept(&current)? {
            return Ok(current);
        }
    }
    Err(GroupError::NotFound {
        order: target_order,
        attempts,
    })
}

/// Subgroup of the given order, optionally with a prescribed set of
/// element orders. `NotFound` does not prove nonexistence.
pub fn find_subgroup(
    g: &PermGroup,
    target_order: u128,
    spectrum_hint: Option<&[u64]>,
    seed: u64,
    attempts: usize,
) -> Result<PermGroup, GroupError> {
    find_subgroup_where(g, target_order, seed, attempts, |h| match spectrum_hint {
        None => Ok(true),
        Some(hint) => Ok(h.element_order_spectrum()? == hint),
    })
}

/// An element of the coset `g·t` normalizing `h`, by scanning the elements
/// of `g`. `None` when no element of the coset normalizes `h`.
pub fn normalizing_element(
    g: &PermGroup,
    h: &PermGroup,
    t: &Permutation,
) -> Result<Option<Permutation>, GroupError> {
    for x in g.elements()? {
        let y = &x * t;
        let inv = y.inverse();
        let mut normalizes = true;
        for s in h.generators() {
            if !h.contains(&(&(&inv * s) * &y))? {
                normalizes = false;
                break;
            }
        }
        if normalizes {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// Random permutation of `degree` points; test helper.
pub fn random_permutation<R: Rng>(degree: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    images.shuffle(rng);
    Permutation { images }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, c).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let a = cyc(4, &[&[0, 1, 2, 3]]);
        let b = cyc(4, &[&[0, 1]]);
        assert_eq!(a.order(), 4);
        assert!((&a * &a.inverse()).is_identity());
        // apply a then b
        assert_eq!((&a * &b).apply(0), b.apply(a.apply(0)));
        assert_eq!(a.pow(4), Permutation::identity(4));
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn symmetric_and_cyclic_orders() {
        for n in 1..=7 {
            let f: u128 = (1..=n as u128).product();
            assert_eq!(PermGroup::symmetric(n).order().unwrap(), f);
            assert_eq!(PermGroup::cyclic(n).order().unwrap(), n as u128);
        }
        assert_eq!(PermGroup::trivial(5).order().unwrap(), 1);
    }

    #[test]
    fn identity_orbit_is_singleton() {
        let g = PermGroup::trivial(8);
        assert_eq!(g.orbit(4).unwrap(), vec![4]);
        assert_eq!(g.orbits().len(), 8);
    }

    #[test]
    fn stabilizer_of_symmetric() {
        let g = PermGroup::symmetric(6);
        let h = g.stabilizer(2).unwrap();
        assert_eq!(h.order().unwrap(), 120);
        assert_eq!(h.orbit(2).unwrap(), vec![2]);
        let one = PermGroup::symmetric(1);
        assert_eq!(one.stabilizer(0).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn regular_cyclic_is_imprimitive() {
        assert!(!PermGroup::cyclic(4).is_primitive().unwrap());
        assert!(PermGroup::cyclic(5).is_primitive().unwrap());
        assert!(PermGroup::symmetric(6).is_primitive().unwrap());
        let split = PermGroup::new(4, vec![cyc(4, &[&[0, 1]])]).unwrap();
        assert_eq!(split.is_primitive(), Err(GroupError::NotTransitive));
    }

    #[test]
    fn regular_suborbits_are_singletons() {
        let g = PermGroup::cyclic(7);
        let s = g.suborbits(0).unwrap();
        assert_eq!(s.len(), 7);
        assert!(s.iter().all(|&(_, n)| n == 1));
    }

    #[test]
    fn coset_action_of_whole_group_has_degree_one() {
        let g = PermGroup::symmetric(4);
        let hom = coset_action(&g, &g).unwrap();
        assert_eq!(hom.target_degree, 1);
        assert_eq!(hom.target().order().unwrap(), 1);
    }

    #[test]
    fn coset_action_on_point_stabilizer_is_natural_degree() {
        let g = PermGroup::symmetric(5);
        let h = g.stabilizer(0).unwrap();
        let hom = coset_action(&g, &h).unwrap();
        assert_eq!(hom.target_degree, 5);
        assert_eq!(hom.target().order().unwrap(), 120);
        // homomorphism on products
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = g.random_element(&mut rng).unwrap();
            let y = g.random_element(&mut rng).unwrap();
            assert_eq!(hom.image(&(&x * &y)), &hom.image(&x) * &hom.image(&y));
        }
    }

    #[test]
    fn coset_action_rejects_non_subgroup() {
        let g = PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2]])]).unwrap();
        let h = PermGroup::new(5, vec![cyc(5, &[&[3, 4]])]).unwrap();
        assert!(matches!(
            coset_action(&g, &h),
            Err(GroupError::NotSubgroup { index: 0 })
        ));
    }

    #[test]
    fn find_whole_group() {
        let g = PermGroup::symmetric(4);
        let h = find_subgroup(&g, 24, None, 0, 10).unwrap();
        assert_eq!(h.order().unwrap(), 24);
    }

    #[test]
    fn find_a4_in_s5() {
        let g = PermGroup::symmetric(5);
        let h = find_subgroup(&g, 60, Some(&[1, 2, 3, 5]), 7, 200).unwrap();
        assert_eq!(h.order().unwrap(), 60);
        let h = find_subgroup(&g, 12, None, 7, 200).unwrap();
        assert_eq!(h.order().unwrap(), 12);
    }

    #[test]
    fn p_core_of_s4_is_klein() {
        let g = PermGroup::symmetric(4);
        let core = g.p_core(2).unwrap();
        assert_eq!(core.order().unwrap(), 4);
        assert!(core.is_abelian());
        assert_eq!(g.p_core(3).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn text_round_trip() {
        let g = PermGroup::symmetric(5);
        let text = g.to_text();
        assert_eq!(text, "degree 5\n2 3 4 5 1\n2 1 3 4 5\n");
        let back = PermGroup::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
        let commented = "# S5\ndegree 5\n\n2 3 4 5 1 # 5-cycle\n2 1 3 4 5\n";
        assert_eq!(PermGroup::from_text(commented).unwrap(), g);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let e = PermGroup::from_text("degree 3\n1 2\n").unwrap_err();
        assert_eq!(
            e,
            GroupError::Format {
                line: 2,
                message: "expected 3 images, found 2".into()
            }
        );
        let e = PermGroup::from_text("degree 3\n1 1 2\n").unwrap_err();
        assert!(matches!(e, GroupError::Format { line: 2, .. }));
        let e = PermGroup::from_text("deg 3\n").unwrap_err();
        assert!(matches!(e, GroupError::Format { line: 1, .. }));
    }

    #[test]
    fn order_guard() {
        let g = PermGroup::symmetric(14);
        assert!(matches!(g.order(), Err(GroupError::Resource(_))));
    }
}
