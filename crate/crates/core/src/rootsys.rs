//! Irreducible crystallographic root systems in exact ε-coordinates.
//!
//! Simple roots follow Bourbaki's tables. In particular `D4` is
//! `e1-e2, e2-e3, e3-e4, e3+e4`, and `E6`/`E7` sit inside the eight
//! dimensional `E8` model.
//!
//! Roots are stored in a fixed order: the positive roots first (simple
//! roots in index order, then by height, then lexicographically by ambient
//! coordinates), followed by their negatives in the same order, so that root
//! `i + N` is `-root i` for `N` positive roots.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{frac, q, Rational, RationalMatrix, RationalVector};

/// Largest rank accepted for the classical families.
pub const MAX_RANK: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A Cartan type such as `D4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemSpec {
    family: Family,
    rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidSpec(format!(
                "rank {rank} is out of range for family {}",
                family.letter()
            )));
        }
        if rank > MAX_RANK {
            return Err(Error::InvalidSpec(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        Ok(RootSystemSpec { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for RootSystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown type {s:?}")))?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad rank in {s:?}")))?;
        RootSystemSpec::new(family, rank)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    spec: RootSystemSpec,
    ambient_dim: usize,
    simple_roots: Vec<RationalVector>,
    roots: Vec<RationalVector>,
    coefficients: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    form: RationalMatrix,
    num_positive: usize,
    index: HashMap<Vec<i64>, usize>,
    // Columns: simple roots, then a basis of their orthogonal complement.
    basis_inverse: RationalMatrix,
    complement: Vec<RationalVector>,
    coweights: Vec<RationalVector>,
}

fn e(n: usize, i: usize) -> RationalVector {
    RationalVector::unit(n, i)
}

fn simple_roots_for(spec: RootSystemSpec) -> (usize, Vec<RationalVector>) {
    let n = spec.rank;
    match spec.family {
        Family::A => {
            let dim = n + 1;
            (dim, (0..n).map(|i| e(dim, i).sub(&e(dim, i + 1))).collect())
        }
        Family::B | Family::C | Family::D => {
            let mut s: Vec<_> = (0..n - 1).map(|i| e(n, i).sub(&e(n, i + 1))).collect();
            s.push(match spec.family {
                Family::B => e(n, n - 1),
                Family::C => e(n, n - 1).scale(&q(2)),
                _ => e(n, n - 2).add(&e(n, n - 1)),
            });
            (n, s)
        }
        Family::E => {
            let h = frac(1, 2);
            let mut a1 = RationalVector::zeros(8);
            for i in 0..8 {
                a1[i] = if i == 0 || i == 7 { h.clone() } else { -h.clone() };
            }
            let mut s = vec![a1, e(8, 0).add(&e(8, 1))];
            for i in 0..6 {
                s.push(e(8, i + 1).sub(&e(8, i)));
            }
            s.truncate(n);
            (8, s)
        }
        Family::F => {
            let h = frac(1, 2);
            let a4 = RationalVector(vec![h.clone(), -h.clone(), -h.clone(), -h]);
            (4, vec![e(4, 1).sub(&e(4, 2)), e(4, 2).sub(&e(4, 3)), e(4, 3), a4])
        }
        Family::G => (
            3,
            vec![
                RationalVector::from_ints(&[1, -1, 0]),
                RationalVector::from_ints(&[-2, 1, 1]),
            ],
        ),
    }
}

/// Builds the root system of the given type.
pub fn build_root_system(spec: RootSystemSpec) -> Result<RootSystem> {
    // Re-validate in case the spec was constructed by hand elsewhere.
    let spec = RootSystemSpec::new(spec.family, spec.rank)?;
    let (dim, simple) = simple_roots_for(spec);
    let n = spec.rank;
    let form = RationalMatrix::identity(dim);
    let ip = |v: &RationalVector, w: &RationalVector| v.dot(&form.mul_vec(w));

    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = q(2) * ip(&simple[i], &simple[j]) / ip(&simple[j], &simple[j]);
            assert!(c.is_integer(), "non-integral Cartan entry");
            cartan[i][j] = c.to_integer().to_i64().expect("small Cartan entry");
        }
    }

    // Closure of the simple roots under simple reflections, in simple-root
    // coordinates: s_i(c) = c - (sum_j c_j cartan[j][i]) e_i.
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut c = vec![0i64; n];
        c[i] = 1;
        seen.insert(c.clone());
        queue.push_back(c);
    }
    while let Some(c) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| c[j] * cartan[j][i]).sum();
            if pairing == 0 {
                continue;
            }
            let mut d = c.clone();
            d[i] -= pairing;
            if seen.insert(d.clone()) {
                queue.push_back(d);
            }
        }
    }

    let to_ambient = |c: &[i64]| {
        c.iter()
            .zip(&simple)
            .filter(|(x, _)| **x != 0)
            .fold(RationalVector::zeros(dim), |acc, (&x, a)| acc.axpy(&q(x), a))
    };

    let mut positive: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|c| c.iter().all(|&x| x >= 0))
        .collect();
    let mut keyed: Vec<(bool, i64, RationalVector, Vec<i64>)> = positive
        .drain(..)
        .map(|c| {
            let height: i64 = c.iter().sum();
            let simple_idx = if height == 1 { c.iter().position(|&x| x == 1) } else { None };
            // Simple roots sort by index; the rest by height then coordinates.
            let amb = to_ambient(&c);
            (simple_idx.is_none(), height, amb, c)
        })
        .collect();
    keyed.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| {
                if !a.0 {
                    // both simple: index order
                    let ia = a.3.iter().position(|&x| x == 1);
                    let ib = b.3.iter().position(|&x| x == 1);
                    ia.cmp(&ib)
                } else {
                    a.2.cmp(&b.2)
                }
            })
    });

    let num_positive = keyed.len();
    let mut roots = Vec::with_capacity(2 * num_positive);
    let mut coefficients = Vec::with_capacity(2 * num_positive);
    for (_, _, amb, c) in &keyed {
        roots.push(amb.clone());
        coefficients.push(c.clone());
    }
    for i in 0..num_positive {
        roots.push(roots[i].neg());
        coefficients.push(coefficients[i].iter().map(|x| -x).collect());
    }
    let index: HashMap<Vec<i64>, usize> = coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    // Orthogonal complement of the root span under the form.
    let constraint = RationalMatrix::from_fn(n, dim, |i, j| form.mul_vec(&simple[i])[j].clone());
    let complement = constraint.nullspace();
    let mut basis_cols = simple.clone();
    basis_cols.extend(complement.iter().cloned());
    let basis = RationalMatrix::from_columns(dim, &basis_cols);
    let basis_inverse = basis.inverse().expect("simple roots are independent");

    // Fundamental coweights: the dual basis to the simple roots inside the
    // root span, omega_i = sum_k (G^-1)_{ki} alpha_k.
    let gram = RationalMatrix::from_fn(n, n, |i, j| ip(&simple[i], &simple[j]));
    let gram_inv = gram.inverse().expect("Gram matrix is nondegenerate");
    let coweights = (0..n)
        .map(|i| {
            (0..n).fold(RationalVector::zeros(dim), |acc, k| {
                acc.axpy(&gram_inv[(k, i)], &simple[k])
            })
        })
        .collect();

    Ok(RootSystem {
        spec,
        ambient_dim: dim,
        simple_roots: simple,
        roots,
        coefficients,
        cartan,
        form,
        num_positive,
        index,
        basis_inverse,
        complement,
        coweights,
    })
}

impl RootSystem {
    pub fn spec(&self) -> RootSystemSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[RationalVector] {
        &self.simple_roots
    }

    pub fn roots(&self) -> &[RationalVector] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &RationalVector {
        &self.roots[i]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive
    }

    /// Index of `-root i`.
    pub fn negative(&self, i: usize) -> usize {
        (i + self.num_positive) % self.roots.len()
    }

    /// Coordinates of root `i` in the basis of simple roots.
    pub fn coefficients(&self, i: usize) -> &[i64] {
        &self.coefficients[i]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.coefficients[i].iter().sum()
    }

    pub fn index_of_coefficients(&self, c: &[i64]) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn form(&self) -> &RationalMatrix {
        &self.form
    }

    /// Basis of the orthogonal complement of the root span (empty unless the
    /// ambient space is larger than the rank, as for `A_n`, `E6`, `E7`, `G2`).
    pub fn complement(&self) -> &[RationalVector] {
        &self.complement
    }

    /// Fundamental coweight `i`: the vector in the root span pairing to
    /// `delta_ij` with simple root `j` under the form.
    pub fn coweight(&self, i: usize) -> &RationalVector {
        &self.coweights[i]
    }

    pub fn is_simply_laced(&self) -> bool {
        self.spec.is_simply_laced()
    }

    fn check_dim(&self, v: &RationalVector) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// The invariant inner product.
    pub fn inner(&self, v: &RationalVector, w: &RationalVector) -> Result<Rational> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        Ok(v.dot(&self.form.mul_vec(w)))
    }

    /// Splits `v` into simple-root coordinates and coordinates along
    /// [`complement`](Self::complement).
    pub fn decompose(&self, v: &RationalVector) -> Result<(Vec<Rational>, Vec<Rational>)> {
        self.check_dim(v)?;
        let c = self.basis_inverse.mul_vec(v);
        let mut all = c.0;
        let perp = all.split_off(self.rank());
        Ok((all, perp))
    }

    /// Index of the root equal to `v`, if any.
    pub fn index_of(&self, v: &RationalVector) -> Option<usize> {
        let (c, perp) = self.decompose(v).ok()?;
        if perp.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let ints: Option<Vec<i64>> = c
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect();
        self.index_of_coefficients(&ints?)
    }

    /// Reflection of `v` in the hyperplane orthogonal to the root `alpha`.
    pub fn reflect(&self, alpha: &RationalVector, v: &RationalVector) -> Result<RationalVector> {
        self.check_dim(alpha)?;
        self.check_dim(v)?;
        if self.index_of(alpha).is_none() {
            return Err(Error::NotARoot);
        }
        let c = q(2) * self.inner(v, alpha)? / self.inner(alpha, alpha)?;
        Ok(v.axpy(&-c, alpha))
    }

    /// Index of `s_i(root k)` for the simple reflection `s_i`.
    pub fn simple_reflection_image(&self, i: usize, k: usize) -> usize {
        let c = &self.coefficients[k];
        let pairing: i64 = c.iter().zip(&self.cartan).map(|(x, row)| x * row[i]).sum();
        if pairing == 0 {
            return k;
        }
        let mut d = c.clone();
        d[i] -= pairing;
        self.index[&d]
    }

    /// Ambient vector with the given simple-root coordinates.
    pub fn from_coefficients(&self, c: &[Rational]) -> RationalVector {
        c.iter()
            .zip(&self.simple_roots)
            .filter(|(x, _)| !x.is_zero())
            .fold(RationalVector::zeros(self.ambient_dim), |acc, (x, a)| acc.axpy(x, a))
    }

    /// Squared length of root `i` under the form.
    pub fn norm(&self, i: usize) -> Rational {
        let r = &self.roots[i];
        r.dot(&self.form.mul_vec(r))
    }

    /// Whether every simple-root coordinate of root `i` is nonnegative.
    pub fn coefficients_nonnegative(&self, i: usize) -> bool {
        self.coefficients[i].iter().all(|&x| x >= 0)
    }

    /// True iff `x` is positive on every positive root, i.e. lies in the
    /// open fundamental chamber.
    pub fn is_dominant_regular(&self, x: &RationalVector) -> bool {
        (0..self.num_positive).all(|i| {
            self.inner(&self.roots[i], x)
                .map(|v| v.is_positive())
                .unwrap_or(false)
        })
    }

    /// Catalog order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        weyl_group_order(self.spec)
    }

    /// Sum of all fundamental coweights (a point of the open fundamental
    /// chamber).
    pub fn rho_check(&self) -> RationalVector {
        self.coweights
            .iter()
            .fold(RationalVector::zeros(self.ambient_dim), |acc, w| acc.add(w))
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Order of the Weyl group of an irreducible type, saturating at
/// `u128::MAX` for very large ranks.
pub fn weyl_group_order(spec: RootSystemSpec) -> u128 {
    let n = spec.rank;
    match spec.family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => 2u128.saturating_pow(n as u32).saturating_mul(factorial(n)),
        Family::D => 2u128.saturating_pow(n as u32 - 1).saturating_mul(factorial(n)),
        Family::E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Family::F => 1152,
        Family::G => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn rank_bounds() {
        for bad in ["A0", "B1", "C1", "D2", "E5", "E9", "F3", "G3", "X4", "A", "A-1"] {
            assert!(bad.parse::<RootSystemSpec>().is_err(), "{bad}");
        }
        for good in ["A1", "B2", "C2", "D3", "E6", "E7", "E8", "F4", "G2"] {
            assert!(good.parse::<RootSystemSpec>().is_ok(), "{good}");
        }
    }

    #[test]
    fn a1() {
        let r = rs("A1");
        assert_eq!(r.num_roots(), 2);
        assert_eq!(r.cartan(), &[vec![2]]);
        assert_eq!(r.root(1), &r.root(0).neg());
    }

    #[test]
    fn d4_uses_lemma_basis() {
        let r = rs("D4");
        let expect = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]];
        for (i, v) in expect.iter().enumerate() {
            assert_eq!(r.simple_roots()[i], RationalVector::from_ints(v));
        }
        assert_eq!(r.num_roots(), 24);
    }

    #[test]
    fn root_counts() {
        let cases = [
            ("A3", 12),
            ("A5", 30),
            ("B3", 18),
            ("C4", 32),
            ("D5", 40),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
            ("F4", 48),
            ("G2", 12),
        ];
        for (s, n) in cases {
            assert_eq!(rs(s).num_roots(), n, "{s}");
        }
    }

    #[test]
    fn inner_product_d4() {
        let r = rs("D4");
        let v = RationalVector::from_ints(&[0, 1, -1, 0]);
        let w = RationalVector::from_ints(&[1, -1, 2, 0]);
        assert_eq!(r.inner(&v, &w).unwrap(), q(-3));
        assert!(matches!(
            r.inner(&v, &RationalVector::zeros(3)),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn reflect_basics() {
        let r = rs("A2");
        let a1 = r.simple_roots()[0].clone();
        let a2 = r.simple_roots()[1].clone();
        assert_eq!(r.reflect(&a1, &a1).unwrap(), a1.neg());
        assert_eq!(r.reflect(&a1, &a2).unwrap(), a1.add(&a2));
        // (1,1,1) is orthogonal to every root of A2
        let perp = RationalVector::from_ints(&[1, 1, 1]);
        assert_eq!(r.reflect(&a1, &perp).unwrap(), perp);
        assert_eq!(
            r.reflect(&RationalVector::from_ints(&[2, 0, 0]), &a2),
            Err(Error::NotARoot)
        );
    }

    #[test]
    fn ordering_puts_simple_roots_first_and_mirrors_negatives() {
        for s in ["A4", "B3", "D5", "E6", "F4", "G2"] {
            let r = rs(s);
            for i in 0..r.rank() {
                assert_eq!(r.root(i), &r.simple_roots()[i]);
            }
            let n = r.num_positive();
            for i in 0..n {
                assert!(r.coefficients_nonnegative(i));
                assert_eq!(r.root(i + n), &r.root(i).neg());
            }
            for i in r.rank()..n - 1 {
                assert!(r.height(i) <= r.height(i + 1));
            }
        }
    }

    #[test]
    fn coweights_are_dual_to_simple_roots() {
        let r = rs("E6");
        for i in 0..6 {
            for j in 0..6 {
                let p = r.inner(&r.simple_roots()[j], r.coweight(i)).unwrap();
                assert_eq!(p, if i == j { q(1) } else { q(0) });
            }
        }
        assert!(r.is_dominant_regular(&r.rho_check()));
    }

    #[test]
    fn g2_lengths() {
        let r = rs("G2");
        assert_eq!(r.cartan(), &[vec![2, -1], vec![-3, 2]]);
        let long = (0..12).filter(|&i| r.norm(i) == q(6)).count();
        assert_eq!(long, 6);
    }
}
