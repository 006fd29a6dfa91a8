//! Hermitian geometry over `GF(q^2)` for `q ∈ {2, 3}`.
//!
//! `GF(4) = GF(2)[x]/(x^2+x+1)` and `GF(9) = GF(3)[x]/(x^2+1)`. The form is
//! `h(x, y) = Σ x_i y_i^q`. Matrices act on row vectors, `x ↦ xM`, so the
//! permutation of a product is the product of the permutations in the
//! right-action convention of [`crate::permgroup`].

use std::collections::HashMap;
use std::fmt;

use crate::catalog::{self, CatalogError};
use crate::design::IncidenceStructure;
use crate::permgroup::{GroupError, PermGroup, Permutation};

#[derive(Debug, thiserror::Error)]
pub enum HermitianError {
    #[error("unsupported dimension and field: n={n}, q={q}")]
    Unsupported { n: usize, q: u64 },
    #[error("generators reach order {achieved}, expected {expected}")]
    OrderMismatch { expected: u64, achieved: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// `c0 + c1·x` in the fixed basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub c0: u8,
    pub c1: u8,
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0, self.c1) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "x"),
            (0, b) => write!(f, "{b}x"),
            (a, 1) => write!(f, "{a}+x"),
            (a, b) => write!(f, "{a}+{b}x"),
        }
    }
}

/// `GF(q^2)` for prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    q: u8,
    /// `x^2 = r0 + r1·x`.
    r0: u8,
    r1: u8,
}

impl Field {
    pub fn new(q: u64) -> Result<Self, HermitianError> {
        match q {
            2 => Ok(Self { q: 2, r0: 1, r1: 1 }),
            3 => Ok(Self { q: 3, r0: 2, r1: 0 }),
            _ => Err(HermitianError::Unsupported { n: 0, q }),
        }
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn size(&self) -> usize {
        (self.q as usize).pow(2)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { c0: 0, c1: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { c0: 1, c1: 0 }
    }

    /// All elements in index order, `c0 + q·c1`.
    pub fn elements(&self) -> Vec<FieldElement> {
        let q = self.q;
        (0..q)
            .flat_map(|c1| (0..q).map(move |c0| FieldElement { c0, c1 }))
            .collect()
    }

    pub fn index(&self, a: FieldElement) -> usize {
        a.c0 as usize + self.q as usize * a.c1 as usize
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement {
            c0: (a.c0 + b.c0) % self.q,
            c1: (a.c1 + b.c1) % self.q,
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement {
            c0: (self.q - a.c0) % self.q,
            c1: (self.q - a.c1) % self.q,
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let q = self.q as u32;
        let (a0, a1, b0, b1) = (a.c0 as u32, a.c1 as u32, b.c0 as u32, b.c1 as u32);
        let hi = a1 * b1;
        let c0 = a0 * b0 + hi * self.r0 as u32;
        let c1 = a0 * b1 + a1 * b0 + hi * self.r1 as u32;
        FieldElement {
            c0: (c0 % q) as u8,
            c1: (c1 % q) as u8,
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut base, mut acc) = (a, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(q^2-2)`; zero maps to zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.size() as u64 - 2)
    }

    /// `a ↦ a^q`.
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.q as u64)
    }

    /// `a + a^q`.
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        self.add(a, self.conj(a))
    }
}

pub type Vector = Vec<FieldElement>;
/// Row-major square matrix.
pub type Matrix = Vec<Vector>;

pub fn hermitian_form(f: &Field, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    x.iter()
        .zip(y)
        .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, f.conj(b))))
}

/// `h(x, x)`; lies in `GF(q)`.
pub fn hermitian_norm(f: &Field, x: &[FieldElement]) -> FieldElement {
    hermitian_form(f, x, x)
}

/// Scales so that the first nonzero coordinate is 1. `None` for zero.
pub fn normalize(f: &Field, x: &[FieldElement]) -> Option<Vector> {
    let lead = *x.iter().find(|&&c| c != f.zero())?;
    let s = f.inv(lead);
    Some(x.iter().map(|&c| f.mul(c, s)).collect())
}

/// All projective points of `GF(q^2)^n`, normalized, in lexicographic order
/// of coordinate indices.
pub fn projective_points(f: &Field, n: usize) -> Vec<Vector> {
    let els = f.elements();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = els.len().pow(free as u32);
        for mut code in 0..total {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            for i in (lead + 1..n).rev() {
                v[i] = els[code % els.len()];
                code /= els.len();
            }
            out.push(v);
        }
    }
    out.sort_by_key(|v| v.iter().map(|&c| f.index(c)).collect::<Vec<_>>());
    out
}

fn supported(n: usize, q: u64) -> bool {
    matches!((n, q), (3, 2) | (3, 3) | (4, 2) | (4, 3))
}

/// Isotropic and nonisotropic projective points.
pub fn point_orbits(n: usize, q: u64) -> Result<(Vec<Vector>, Vec<Vector>), HermitianError> {
    if !supported(n, q) {
        return Err(HermitianError::Unsupported { n, q });
    }
    let f = Field::new(q)?;
    Ok(projective_points(&f, n)
        .into_iter()
        .partition(|p| hermitian_norm(&f, p) == f.zero()))
}

pub fn apply_matrix(f: &Field, x: &[FieldElement], m: &Matrix) -> Vector {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).fold(f.zero(), |acc, i| f.add(acc, f.mul(x[i], m[i][j]))))
        .collect()
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().map(|row| apply_matrix(f, row, b)).collect()
}

pub fn determinant(f: &Field, m: &Matrix) -> FieldElement {
    let n = m.len();
    let mut a = m.clone();
    let mut det = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != f.zero()) else {
            return f.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = f.neg(det);
        }
        det = f.mul(det, a[col][col]);
        let inv = f.inv(a[col][col]);
        for r in col + 1..n {
            let factor = f.mul(a[r][col], inv);
            for c in col..n {
                let t = f.mul(factor, a[col][c]);
                a[r][c] = f.sub(a[r][c], t);
            }
        }
    }
    det
}

/// True iff `h(eᵢM, eⱼM) = h(eᵢ, eⱼ)` for all basis vectors.
pub fn preserves_form(f: &Field, m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j { f.one() } else { f.zero() };
            hermitian_form(f, &m[i], &m[j]) == want
        })
    })
}

/// `x ↦ x + c·h(x, v)·v`, as the matrix whose rows are the basis images.
pub fn transvection(f: &Field, v: &[FieldElement], c: FieldElement) -> Matrix {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            let s = f.mul(c, hermitian_form(f, &e, v));
            e.iter()
                .zip(v)
                .map(|(&a, &b)| f.add(a, f.mul(s, b)))
                .collect()
        })
        .collect()
}

/// Permutation of `points` induced by `m`.
pub fn induced_permutation(
    f: &Field,
    points: &[Vector],
    index: &HashMap<Vector, u32>,
    m: &Matrix,
) -> Permutation {
    let images = points
        .iter()
        .map(|p| {
            let img = normalize(f, &apply_matrix(f, p, m)).expect("invertible matrix");
            index[&img]
        })
        .collect();
    Permutation::from_images(images).expect("invertible matrix permutes points")
}

fn point_index(points: &[Vector]) -> HashMap<Vector, u32> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect()
}

/// Unitary transvections generating `SU_n(q)`: added one at a time until the
/// image on isotropic points reaches `|PSU_n(q)|`.
pub fn su_generators(n: usize, q: u64) -> Result<Vec<Matrix>, HermitianError> {
    if !matches!((n, q), (3, 3) | (4, 2)) {
        return Err(HermitianError::Unsupported { n, q });
    }
    let f = Field::new(q)?;
    let expected: u64 = catalog::psu_order(n as u32, q)?
        .try_into()
        .expect("small group");
    let (iso, _) = point_orbits(n, q)?;
    let index = point_index(&iso);
    let scalars: Vec<FieldElement> = f
        .elements()
        .into_iter()
        .filter(|&c| c != f.zero() && f.trace(c) == f.zero())
        .collect();
    let mut gens: Vec<Matrix> = Vec::new();
    let mut perms: Vec<Permutation> = Vec::new();
    let mut achieved = 1u64;
    for v in &iso {
        let m = transvection(&f, v, scalars[0]);
        let p = induced_permutation(&f, &iso, &index, &m);
        if perms.contains(&p) {
            continue;
        }
        let mut trial = perms.clone();
        trial.push(p.clone());
        let order = PermGroup::new(iso.len(), trial)?.order()? as u64;
        if order > achieved {
            achieved = order;
            perms.push(p);
            gens.push(m);
        }
        if achieved == expected {
            return Ok(gens);
        }
    }
    Err(HermitianError::OrderMismatch { expected, achieved })
}

/// Actions of `PSU_n(q)` on isotropic and on nonisotropic points, with a
/// common generator list.
pub fn natural_actions(n: usize, q: u64) -> Result<Vec<(usize, PermGroup)>, HermitianError> {
    let f = Field::new(q)?;
    let gens = su_generators(n, q)?;
    let (iso, non) = point_orbits(n, q)?;
    let mut out = Vec::new();
    for pts in [iso, non] {
        let index = point_index(&pts);
        let perms = gens
            .iter()
            .map(|m| induced_permutation(&f, &pts, &index, m))
            .collect();
        out.push((pts.len(), PermGroup::new(pts.len(), perms)?));
    }
    Ok(out)
}

/// The field automorphism `x ↦ x^q` applied to every coordinate, as a
/// permutation of `points`. It preserves isotropy and, with `SU_n(q)`,
/// generates the full automorphism group of `PSU_n(q)` for the two groups
/// here.
pub fn frobenius_permutation(f: &Field, points: &[Vector]) -> Permutation {
    let index = point_index(points);
    let images = points
        .iter()
        .map(|p| {
            let img: Vector = p.iter().map(|&c| f.conj(c)).collect();
            index[&normalize(f, &img).expect("nonzero")]
        })
        .collect();
    Permutation::from_images(images).expect("conjugation permutes points")
}

/// The Frobenius permutation on isotropic and nonisotropic points, in the
/// order of [`natural_actions`].
pub fn frobenius_actions(n: usize, q: u64) -> Result<Vec<(usize, Permutation)>, HermitianError> {
    let f = Field::new(q)?;
    let (iso, non) = point_orbits(n, q)?;
    Ok([iso, non]
        .iter()
        .map(|pts| (pts.len(), frobenius_permutation(&f, pts)))
        .collect())
}

/// Points versus hyperplanes of `PG(3, q)`, `q` prime.
pub fn pg3_design(q: u64) -> IncidenceStructure {
    let points: Vec<[u64; 4]> = (0..q.pow(4))
        .map(|mut c| {
            let mut v = [0u64; 4];
            for x in v.iter_mut().rev() {
                *x = c % q;
                c /= q;
            }
            v
        })
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let blocks = points
        .iter()
        .map(|a| {
            (0..points.len() as u32)
                .filter(|&i| {
                    let x = &points[i as usize];
                    a.iter().zip(x).map(|(s, t)| s * t).sum::<u64>() % q == 0
                })
                .collect()
        })
        .collect();
    IncidenceStructure::new(points.len(), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::DesignParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_axioms() {
        for q in [2, 3] {
            let f = Field::new(q).unwrap();
            let els = f.elements();
            for &a in &els {
                assert_eq!(f.conj(f.conj(a)), a);
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a)), f.one());
                }
                for &b in &els {
                    assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
                    assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
                }
            }
            let fixed = els.iter().filter(|&&a| f.conj(a) == a).count();
            assert_eq!(fixed as u64, q);
        }
    }

    #[test]
    fn norms() {
        let f = Field::new(3).unwrap();
        assert_eq!(hermitian_norm(&f, &[f.zero(); 3]), f.zero());
        assert_eq!(hermitian_norm(&f, &[f.one(), f.zero(), f.zero()]), f.one());
        for p in projective_points(&f, 3) {
            assert_eq!(hermitian_norm(&f, &p).c1, 0);
        }
    }

    #[test]
    fn orbit_sizes() {
        let sizes = |n, q| {
            let (a, b) = point_orbits(n, q).unwrap();
            (a.len(), b.len())
        };
        assert_eq!(sizes(4, 2), (45, 40));
        assert_eq!(sizes(3, 3), (28, 63));
        assert_eq!(sizes(3, 2), (9, 12));
        assert!(point_orbits(5, 2).is_err());
    }

    #[test]
    fn generators_are_special_unitary() {
        for (n, q, order) in [(3, 3, 6048u128), (4, 2, 25920)] {
            let f = Field::new(q).unwrap();
            let gens = su_generators(n, q).unwrap();
            for m in &gens {
                assert!(preserves_form(&f, m));
                assert_eq!(determinant(&f, m), f.one());
            }
            let acts = natural_actions(n, q).unwrap();
            for (_, g) in &acts {
                assert_eq!(g.order().unwrap(), order);
                assert!(g.is_transitive());
                assert!(g.is_primitive().unwrap());
            }
        }
    }

    #[test]
    fn matrix_products_map_to_permutation_products() {
        let f = Field::new(2).unwrap();
        let gens = su_generators(4, 2).unwrap();
        let (iso, _) = point_orbits(4, 2).unwrap();
        let index = point_index(&iso);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = &gens[rng.gen_range(0..gens.len())];
            let b = &gens[rng.gen_range(0..gens.len())];
            let ab = mat_mul(&f, a, b);
            let pa = induced_permutation(&f, &iso, &index, a);
            let pb = induced_permutation(&f, &iso, &index, b);
            assert_eq!(induced_permutation(&f, &iso, &index, &ab), &pa * &pb);
        }
    }

    #[test]
    fn frobenius_extends_by_two() {
        for (n, q, order) in [(3, 3, 6048u128), (4, 2, 25920)] {
            let acts = natural_actions(n, q).unwrap();
            let frob = frobenius_actions(n, q).unwrap();
            for ((d, g), (fd, x)) in acts.iter().zip(&frob) {
                assert_eq!(d, fd);
                assert!(!g.contains(x).unwrap());
                assert_eq!(
                    g.with_generator(x.clone()).unwrap().order().unwrap(),
                    2 * order
                );
            }
        }
    }

    #[test]
    fn pg3_parameters() {
        let d = pg3_design(3);
        assert_eq!(d.verify_symmetric().unwrap(), DesignParams::new(40, 13, 4));
        assert_eq!(
            d.complement().verify_symmetric().unwrap(),
            DesignParams::new(40, 27, 18)
        );
        let mut on = [0; 40];
        for b in d.blocks() {
            for &p in b {
                on[p as usize] += 1;
            }
        }
        assert!(on.iter().all(|&c| c == 13));
    }
}
