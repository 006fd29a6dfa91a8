//! Checks shared by the property tests and the acceptance harness. Each
//! returns `Err` with a description of the first failure.

use std::collections::BTreeSet;

use psu_designs::design::IncidenceStructure;
use psu_designs::permgroup::{random_permutation, PermGroup, Permutation};
use psu_designs::sieve::{k_candidates, DesignParams};
use rand::seq::SliceRandom;
use rand::Rng;

/// `|G| = |x^G| * |G_x|` at every point.
pub fn orbit_stabilizer(g: &PermGroup) -> Result<(), String> {
    let order = g.order().map_err(|e| e.to_string())?;
    for x in 0..g.degree() as u32 {
        let orbit = g.orbit(x).map_err(|e| e.to_string())?.len() as u128;
        let stab = g
            .stabilizer(x)
            .and_then(|s| s.order())
            .map_err(|e| e.to_string())?;
        if orbit * stab != order {
            return Err(format!("point {x}: {orbit} * {stab} != {order}"));
        }
    }
    Ok(())
}

/// Primitivity straight from the definition: transitive, and no subset
/// through 0 of proper size whose images are pairwise equal or disjoint.
pub fn primitive_by_definition(g: &PermGroup) -> bool {
    let n = g.degree();
    if n <= 1 || !g.is_transitive() {
        return n == 1;
    }
    for mask in 0u32..(1 << (n - 1)) {
        let block: Vec<u32> = std::iter::once(0)
            .chain((1..n as u32).filter(|i| mask >> (i - 1) & 1 == 1))
            .collect();
        let size = block.len();
        if size == 1 || size == n || !n.is_multiple_of(size) {
            continue;
        }
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([block.clone()]);
        let mut todo = vec![block];
        while let Some(b) = todo.pop() {
            for s in g.generators() {
                let img = s.apply_set(&b);
                if seen.insert(img.clone()) {
                    todo.push(img);
                }
            }
        }
        let imgs: Vec<&Vec<u32>> = seen.iter().collect();
        let pairwise = imgs.iter().enumerate().all(|(i, a)| {
            imgs[i + 1..]
                .iter()
                .all(|b| a.iter().all(|x| b.binary_search(x).is_err()))
        });
        if pairwise {
            return false;
        }
    }
    true
}

pub fn primitivity_agrees(g: &PermGroup) -> Result<(), String> {
    // intransitive groups are reported as an error rather than `false`
    let fast = g.is_primitive().unwrap_or(false);
    let slow = primitive_by_definition(g);
    if fast != slow {
        return Err(format!(
            "degree {}: is_primitive {fast}, definition {slow}",
            g.degree()
        ));
    }
    Ok(())
}

/// A random group on `n` points: either free random generators or
/// generators preserving a random partition into equal parts.
pub fn random_group<R: Rng>(n: usize, rng: &mut R) -> PermGroup {
    let count = rng.gen_range(1..=3);
    let divisors: Vec<usize> = (2..n).filter(|d| n.is_multiple_of(*d)).collect();
    let gens: Vec<Permutation> = if divisors.is_empty() || rng.gen_bool(0.4) {
        (0..count).map(|_| random_permutation(n, rng)).collect()
    } else {
        let d = *divisors.choose(rng).unwrap();
        let parts = n / d;
        (0..count)
            .map(|_| {
                let mut outer: Vec<usize> = (0..parts).collect();
                outer.shuffle(rng);
                let mut images = vec![0u32; n];
                for (p, &target) in outer.iter().enumerate() {
                    let mut inner: Vec<usize> = (0..d).collect();
                    inner.shuffle(rng);
                    for (i, &j) in inner.iter().enumerate() {
                        images[p * d + i] = (target * d + j) as u32;
                    }
                }
                Permutation::from_images(images).unwrap()
            })
            .collect()
    };
    PermGroup::new(n, gens).unwrap()
}

/// Block design from the quadratic residues mod a prime `p = 3 mod 4`.
pub fn paley_design(p: u32) -> IncidenceStructure {
    let qr: BTreeSet<u32> = (1..p).map(|x| x * x % p).collect();
    let blocks = (0..p)
        .map(|i| qr.iter().map(|r| (r + i) % p).collect())
        .collect();
    IncidenceStructure::new(p as usize, blocks)
}

/// Counting flags and incident pairs two ways, the parameter identity, and
/// the complement and dual being symmetric designs with the right parameters.
pub fn design_identities(d: &IncidenceStructure) -> Result<(), String> {
    let p = d.verify_symmetric().map_err(|e| e.to_string())?;
    let (v, k, l) = (p.v, p.k, p.lambda);
    if k * (k - 1) != l * (v - 1) {
        return Err(format!("k(k-1) != lambda(v-1) for ({v},{k},{l})"));
    }
    let flags: u64 = d.blocks().iter().map(|b| b.len() as u64).sum();
    let mut rep = vec![0u64; v as usize];
    for b in d.blocks() {
        for &x in b {
            rep[x as usize] += 1;
        }
    }
    if flags != rep.iter().sum::<u64>() || flags != v * k {
        return Err(format!("flag count {flags} vs v*k = {}", v * k));
    }
    let pairs: u64 = d
        .blocks()
        .iter()
        .map(|b| (b.len() * (b.len() - 1) / 2) as u64)
        .sum();
    if pairs != l * v * (v - 1) / 2 {
        return Err(format!("pair count {pairs} vs lambda*C(v,2)"));
    }
    let c = d.complement();
    if !c.complement().same_blocks(d) {
        return Err("complement is not an involution".into());
    }
    if v - k > 2 {
        let cp = c
            .verify_symmetric()
            .map_err(|e| format!("complement: {e}"))?;
        if cp != p.complement() {
            return Err(format!(
                "complement parameters ({},{},{})",
                cp.v, cp.k, cp.lambda
            ));
        }
    }
    if p.complement().complement() != p {
        return Err("parameter complement is not an involution".into());
    }
    let dp = d
        .dual()
        .verify_symmetric()
        .map_err(|e| format!("dual: {e}"))?;
    if dp != p {
        return Err("dual has different parameters".into());
    }
    Ok(())
}

/// Every nontrivial `k | bound` with integral `λ`, by a plain loop.
pub fn naive_candidates(v: u64, bound: u64) -> Vec<DesignParams<u64>> {
    (3..v.saturating_sub(1))
        .filter(|k| bound.is_multiple_of(*k) && (k * (k - 1)) % (v - 1) == 0)
        .map(|k| DesignParams::new(v, k, k * (k - 1) / (v - 1)))
        .filter(|p| {
            let disc = 4 * p.lambda * (v - 1) + 1;
            let r = (disc as f64).sqrt().round() as u64;
            p.lambda >= 1 && r * r == disc && p.lambda * v < p.k * p.k
        })
        .collect()
}

pub fn sieve_matches_naive(v: u64, bound: u64) -> Result<(), String> {
    let fast = k_candidates(&v, &bound);
    let slow = naive_candidates(v, bound);
    if fast != slow {
        return Err(format!(
            "v={v} bound={bound}: sieve {fast:?} naive {slow:?}"
        ));
    }
    Ok(())
}
