//! Weyl group elements as permutations of the root list.
//!
//! An element is stored only as the permutation it induces on the roots; the
//! images of the simple roots already determine it, so those serve as the
//! hash key. Matrices are derived on demand.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Rational, RationalMatrix, RationalVector};
use crate::rootsys::RootSystem;

/// Enumeration cap used when nothing else is configured.
pub const DEFAULT_CAP: usize = 2_000_000;

/// An element of the Weyl group, as a permutation of root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Box<[u16]>,
}

impl WeylElement {
    pub fn identity(num_roots: usize) -> Self {
        WeylElement {
            perm: (0..num_roots as u16).collect(),
        }
    }

    /// Wraps a raw root permutation. The caller is responsible for it being
    /// induced by a Weyl group element.
    pub fn from_perm(perm: Vec<u16>) -> Self {
        WeylElement { perm: perm.into() }
    }

    /// Reflection in the simple root `i`.
    pub fn simple_reflection(rs: &RootSystem, i: usize) -> Self {
        let perm = (0..rs.num_roots())
            .map(|k| rs.simple_reflection_image(i, k) as u16)
            .collect();
        WeylElement { perm }
    }

    /// Reflection in an arbitrary root `k`, built as a conjugate of a simple
    /// reflection acting on coefficient vectors.
    pub fn root_reflection(rs: &RootSystem, k: usize) -> Self {
        let alpha = rs.root(k);
        let perm = (0..rs.num_roots())
            .map(|j| {
                let image = rs.reflect(alpha, rs.root(j)).expect("alpha is a root");
                rs.index_of(&image).expect("reflection permutes roots") as u16
            })
            .collect();
        WeylElement { perm }
    }

    pub fn perm(&self) -> &[u16] {
        &self.perm
    }

    pub fn apply(&self, root: usize) -> usize {
        self.perm[root] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        WeylElement {
            perm: other.perm.iter().map(|&i| self.perm[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as u16;
        }
        WeylElement { perm: inv.into() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Images of the simple roots; faithful for Weyl group elements.
    pub fn key(&self, rank: usize) -> &[u16] {
        &self.perm[..rank]
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, rs: &RootSystem) -> usize {
        (0..rs.num_positive())
            .filter(|&i| !rs.is_positive(self.apply(i)))
            .count()
    }

    /// Action on a vector given in simple-root coordinates.
    pub fn act_on_coefficients(&self, rs: &RootSystem, c: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); rs.rank()];
        for (i, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, &y) in out.iter_mut().zip(rs.coefficients(self.apply(i))) {
                if y != 0 {
                    *o += x * q(y);
                }
            }
        }
        out
    }

    /// Action on an ambient vector. The orthogonal complement of the root
    /// span is fixed pointwise.
    pub fn act(&self, rs: &RootSystem, v: &RationalVector) -> Result<RationalVector> {
        let (c, _) = rs.decompose(v)?;
        let image = rs.from_coefficients(&self.act_on_coefficients(rs, &c));
        // Add back the part orthogonal to the roots unchanged.
        let root_part = rs.from_coefficients(&c);
        Ok(image.add(&v.sub(&root_part)))
    }

    /// Matrix of the element on the ambient space.
    pub fn matrix(&self, rs: &RootSystem) -> RationalMatrix {
        let dim = rs.ambient_dim();
        let cols: Vec<RationalVector> = (0..dim)
            .map(|j| {
                self.act(rs, &RationalVector::unit(dim, j))
                    .expect("dimension matches")
            })
            .collect();
        RationalMatrix::from_columns(dim, &cols)
    }

    /// Matrix in the basis of simple roots; column `j` holds the
    /// coefficients of `w(alpha_j)`.
    pub fn root_basis_matrix(&self, rs: &RootSystem) -> Vec<Vec<i64>> {
        let n = rs.rank();
        let cols: Vec<&[i64]> = (0..n).map(|j| rs.coefficients(self.apply(j))).collect();
        (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }
}

/// A permutation of the roots induced by an automorphism of the root system
/// (for example the linear extension of a diagram automorphism).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootAutomorphism {
    perm: Box<[u16]>,
    inverse: Box<[u16]>,
}

impl RootAutomorphism {
    pub fn identity(num_roots: usize) -> Self {
        let perm: Box<[u16]> = (0..num_roots as u16).collect();
        RootAutomorphism {
            inverse: perm.clone(),
            perm,
        }
    }

    pub fn from_perm(perm: Vec<u16>) -> Self {
        let mut inverse = vec![0u16; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p as usize] = i as u16;
        }
        RootAutomorphism {
            perm: perm.into(),
            inverse: inverse.into(),
        }
    }

    pub fn perm(&self) -> &[u16] {
        &self.perm
    }

    pub fn apply(&self, root: usize) -> usize {
        self.perm[root] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// `tau w tau^-1`.
    pub fn conjugate(&self, w: &WeylElement) -> WeylElement {
        let perm = self
            .inverse
            .iter()
            .map(|&i| self.perm[w.perm[i as usize] as usize])
            .collect();
        WeylElement { perm }
    }

    pub fn order(&self) -> usize {
        let n = self.perm.len();
        let mut cur: Vec<u16> = self.perm.to_vec();
        let mut k = 1;
        while cur.iter().enumerate().any(|(i, &p)| i != p as usize) {
            cur = (0..n).map(|i| self.perm[cur[i] as usize]).collect();
            k += 1;
            debug_assert!(k <= n + 1);
        }
        k
    }
}

/// A finite group of Weyl group elements with its full element list.
#[derive(Clone, Debug)]
pub struct GeneratedGroup {
    system: Arc<RootSystem>,
    generators: Vec<WeylElement>,
    elements: Vec<WeylElement>,
    index: HashMap<Box<[u16]>, usize>,
    cap: usize,
}

type Closure = (Vec<WeylElement>, HashMap<Box<[u16]>, usize>);

fn closure(
    rank: usize,
    identity: WeylElement,
    gens: &[WeylElement],
    cap: usize,
) -> Result<Closure> {
    let mut elements = vec![identity];
    let mut index = HashMap::new();
    index.insert(Box::<[u16]>::from(elements[0].key(rank)), 0);
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let h = elements[head].compose(g);
            let key: Box<[u16]> = h.key(rank).into();
            if let Entry::Vacant(slot) = index.entry(key) {
                if elements.len() == cap {
                    return Err(Error::CapExceeded {
                        cap,
                        partial: elements.len(),
                    });
                }
                slot.insert(elements.len());
                elements.push(h);
            }
        }
        head += 1;
    }
    Ok((elements, index))
}

impl GeneratedGroup {
    /// Breadth-first closure of `gens`. Elements appear in BFS order, with
    /// the children of each element produced by right multiplication with the
    /// generators in index order.
    pub fn enumerate(system: Arc<RootSystem>, gens: Vec<WeylElement>, cap: usize) -> Result<Self> {
        let n = system.num_roots();
        if let Some(g) = gens.iter().find(|g| g.perm.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.perm.len(),
            });
        }
        let (elements, index) = closure(system.rank(), WeylElement::identity(n), &gens, cap.max(1))?;
        Ok(GeneratedGroup {
            system,
            generators: gens,
            elements,
            index,
            cap,
        })
    }

    /// The full Weyl group of `system`. Fails before enumerating anything
    /// when the known order exceeds `cap`.
    pub fn weyl_group(system: Arc<RootSystem>, cap: usize) -> Result<Self> {
        if system.weyl_order() > cap.max(1) as u128 {
            return Err(Error::CapExceeded { cap, partial: 0 });
        }
        let gens = simple_reflections(&system);
        Self::enumerate(system, gens, cap)
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w.key(self.system.rank())).copied()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.index_of(w).is_some()
    }

    /// Subgroup of the elements satisfying `keep`, listed in this group's
    /// order. The predicate must carve out a subgroup. Generators are chosen
    /// greedily: walking the elements in order, each one not yet generated
    /// by the previous picks becomes a generator.
    pub fn subgroup_where(&self, mut keep: impl FnMut(&WeylElement) -> bool) -> GeneratedGroup {
        let elements: Vec<WeylElement> = self.elements.iter().filter(|w| keep(w)).cloned().collect();
        self.subgroup_from_elements(elements)
    }

    pub(crate) fn subgroup_from_elements(&self, elements: Vec<WeylElement>) -> GeneratedGroup {
        let rank = self.system.rank();
        let n = self.system.num_roots();
        let mut generators: Vec<WeylElement> = Vec::new();
        let mut generated: HashSet<Box<[u16]>> = HashSet::new();
        generated.insert(WeylElement::identity(n).key(rank).into());
        for w in &elements {
            if generated.contains(w.key(rank)) {
                continue;
            }
            generators.push(w.clone());
            let (closed, _) = closure(rank, WeylElement::identity(n), &generators, elements.len())
                .expect("subgroup closure stays inside the subgroup");
            generated = closed.iter().map(|g| g.key(rank).into()).collect();
            if generated.len() == elements.len() {
                break;
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (Box::<[u16]>::from(w.key(rank)), i))
            .collect();
        GeneratedGroup {
            system: self.system.clone(),
            generators,
            elements,
            index,
            cap: self.cap,
        }
    }

    /// True when the element list is closed under products and inverses.
    /// Checks every pair up to `exhaustive_limit` elements and a
    /// deterministic sample of pairs beyond it.
    pub fn check_closure(&self, exhaustive_limit: usize) -> bool {
        let n = self.order();
        if !self.elements.iter().any(WeylElement::is_identity) {
            return false;
        }
        if !self.elements.iter().all(|w| self.contains(&w.inverse())) {
            return false;
        }
        if n <= exhaustive_limit {
            return self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| self.contains(&a.compose(b))));
        }
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        (0..20_000).all(|_| {
            let (i, j) = (next(), next());
            self.contains(&self.elements[i].compose(&self.elements[j]))
        })
    }
}

/// One reflection per simple root, in index order.
pub fn simple_reflections(rs: &RootSystem) -> Vec<WeylElement> {
    (0..rs.rank())
        .map(|i| WeylElement::simple_reflection(rs, i))
        .collect()
}

/// See [`GeneratedGroup::enumerate`].
pub fn enumerate_group(
    system: Arc<RootSystem>,
    gens: Vec<WeylElement>,
    cap: usize,
) -> Result<GeneratedGroup> {
    GeneratedGroup::enumerate(system, gens, cap)
}

/// `{w in G : tau w tau^-1 = w}`.
pub fn fixed_subgroup(group: &GeneratedGroup, tau: &RootAutomorphism) -> Result<GeneratedGroup> {
    let mut fixed = Vec::new();
    for w in group.elements() {
        let c = tau.conjugate(w);
        if !group.contains(&c) {
            return Err(Error::NotNormalized);
        }
        if &c == w {
            fixed.push(w.clone());
        }
    }
    Ok(group.subgroup_from_elements(fixed))
}

/// Integer data for testing how group elements move a fixed list of vectors.
///
/// Each basis vector `b` is rescaled to `sum c_i alpha_i + p` with integral
/// `c` (and `p` orthogonal to the roots), so that `w(b) = sum c_i
/// alpha_{w(i)} + p` can be evaluated with integer arithmetic.
struct SubspaceProbe {
    coeffs: Vec<Vec<i128>>,
    // For each root j, the values of the annihilator rows on root j.
    annihilator_on_roots: Vec<Vec<i128>>,
    // For each basis vector, the annihilator rows on its orthogonal part.
    annihilator_on_perp: Vec<Vec<i128>>,
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("coordinates fit in i128")
}

impl SubspaceProbe {
    fn new(rs: &RootSystem, basis: &[RationalVector]) -> Result<Self> {
        let mut coeffs = Vec::new();
        let mut perps = Vec::new();
        for b in basis {
            let (c, _) = rs.decompose(b)?;
            let root_part = rs.from_coefficients(&c);
            let perp = b.sub(&root_part);
            let d = c
                .iter()
                .chain(perp.iter())
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scale = Rational::from_integer(d);
            coeffs.push(c.iter().map(|x| to_i128(&(x * &scale).to_integer())).collect());
            perps.push(perp.scale(&scale));
        }

        let dim = rs.ambient_dim();
        let annihilator = if basis.is_empty() {
            (0..dim).map(|j| RationalVector::unit(dim, j)).collect()
        } else {
            RationalMatrix::from_rows(basis).nullspace()
        };
        let mut on_roots = vec![Vec::new(); rs.num_roots()];
        let mut on_perp = vec![Vec::new(); basis.len()];
        for a in &annihilator {
            let root_vals: Vec<Rational> = rs.roots().iter().map(|r| a.dot(r)).collect();
            let perp_vals: Vec<Rational> = perps.iter().map(|p| a.dot(p)).collect();
            let d = root_vals
                .iter()
                .chain(&perp_vals)
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scale = Rational::from_integer(d);
            for (j, v) in root_vals.iter().enumerate() {
                on_roots[j].push(to_i128(&(v * &scale).to_integer()));
            }
            for (t, v) in perp_vals.iter().enumerate() {
                on_perp[t].push(to_i128(&(v * &scale).to_integer()));
            }
        }
        Ok(SubspaceProbe {
            coeffs,
            annihilator_on_roots: on_roots,
            annihilator_on_perp: on_perp,
        })
    }

    fn preserves_span(&self, w: &WeylElement) -> bool {
        self.coeffs.iter().enumerate().all(|(t, c)| {
            let mut acc = self.annihilator_on_perp[t].clone();
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (a, &v) in acc.iter_mut().zip(&self.annihilator_on_roots[w.apply(i)]) {
                    *a += ci * v;
                }
            }
            acc.iter().all(|&x| x == 0)
        })
    }

    fn fixes_pointwise(&self, rs: &RootSystem, w: &WeylElement) -> bool {
        self.coeffs.iter().all(|c| {
            let mut acc = vec![0i128; c.len()];
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (a, &v) in acc.iter_mut().zip(rs.coefficients(w.apply(i))) {
                    *a += ci * v as i128;
                }
            }
            &acc == c
        })
    }
}

/// `{g in G : g span(basis) = span(basis)}`.
pub fn setwise_stabilizer_of_subspace(
    group: &GeneratedGroup,
    basis: &[RationalVector],
) -> Result<GeneratedGroup> {
    let probe = SubspaceProbe::new(group.system(), basis)?;
    Ok(group.subgroup_where(|w| probe.preserves_span(w)))
}

/// `{g in G : g b = b for every basis vector b}`.
pub fn pointwise_stabilizer(
    group: &GeneratedGroup,
    basis: &[RationalVector],
) -> Result<GeneratedGroup> {
    let rs = group.system().clone();
    let probe = SubspaceProbe::new(&rs, basis)?;
    Ok(group.subgroup_where(|w| probe.fixes_pointwise(&rs, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn system(s: &str) -> Arc<RootSystem> {
        Arc::new(build_root_system(s.parse().unwrap()).unwrap())
    }

    fn weyl(s: &str) -> GeneratedGroup {
        GeneratedGroup::weyl_group(system(s), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn simple_reflections_are_involutions() {
        let rs = system("D4");
        let gens = simple_reflections(&rs);
        assert_eq!(gens.len(), 4);
        for s in &gens {
            assert!(!s.is_identity());
            assert!(s.compose(s).is_identity());
            assert_eq!(s.order(), 2);
            assert_eq!(s.length(&rs), 1);
        }
        let a1 = simple_reflections(&system("A1"));
        assert_eq!(a1.len(), 1);
        assert_eq!(a1[0].order(), 2);
    }

    #[test]
    fn small_orders() {
        assert_eq!(weyl("A2").order(), 6);
        assert_eq!(weyl("D4").order(), 192);
        assert_eq!(weyl("B3").order(), 48);
        assert_eq!(weyl("G2").order(), 12);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = enumerate_group(system("A3"), vec![], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn cap_exceeded_reports_partial_count() {
        let rs = system("A3");
        let gens = simple_reflections(&rs);
        match enumerate_group(rs, gens, 10) {
            Err(Error::CapExceeded { cap: 10, partial }) => assert_eq!(partial, 10),
            other => panic!("unexpected {other:?}"),
        }
        // exactly at the cap is fine
        let rs = system("A3");
        let gens = simple_reflections(&rs);
        assert_eq!(enumerate_group(rs, gens, 24).unwrap().order(), 24);
    }

    #[test]
    fn bfs_order_is_deterministic() {
        let a = weyl("B3");
        let b = weyl("B3");
        assert_eq!(a.elements(), b.elements());
        assert!(a.element(0).is_identity());
        // first layer: the generators themselves
        for (i, s) in a.generators().iter().enumerate() {
            assert_eq!(a.element(i + 1), s);
        }
    }

    #[test]
    fn matrices_agree_with_permutations() {
        for s in ["A3", "B3", "G2"] {
            let g = weyl(s);
            let rs = g.system().clone();
            for w in g.elements().iter().step_by(5) {
                let m = w.matrix(&rs);
                for k in 0..rs.num_roots() {
                    assert_eq!(&m.mul_vec(rs.root(k)), rs.root(w.apply(k)));
                }
                // preserves the form (identity in these models)
                assert!(m.transpose().mul(rs.form()).mul(&m) == *rs.form());
            }
        }
    }

    #[test]
    fn root_reflection_matches_formula() {
        let rs = system("B3");
        for k in 0..rs.num_roots() {
            let s = WeylElement::root_reflection(&rs, k);
            assert_eq!(s.apply(k), rs.negative(k));
            assert_eq!(s.order(), 2);
        }
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let g = weyl("A3");
        let tau = RootAutomorphism::identity(g.system().num_roots());
        assert_eq!(fixed_subgroup(&g, &tau).unwrap().order(), 24);
    }

    #[test]
    fn non_normalizing_automorphism_is_rejected() {
        // A subgroup generated by s1 is not normalized by s2.
        let rs = system("A2");
        let s = simple_reflections(&rs);
        let h = enumerate_group(rs.clone(), vec![s[0].clone()], 10).unwrap();
        let tau = RootAutomorphism::from_perm(s[1].perm().to_vec());
        assert_eq!(fixed_subgroup(&h, &tau).unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn stabilizers_trivial_cases() {
        let g = weyl("A2");
        let rs = g.system().clone();
        assert_eq!(pointwise_stabilizer(&g, &[]).unwrap().order(), 6);
        let all: Vec<_> = (0..3).map(|i| RationalVector::unit(3, i)).collect();
        assert_eq!(setwise_stabilizer_of_subspace(&g, &all).unwrap().order(), 6);
        // Fixing alpha_1 pointwise: only the identity and the reflection in
        // the root orthogonal to alpha_1 (there is none in A2) survive.
        let a1 = rs.simple_roots()[0].clone();
        let brute = g
            .elements()
            .iter()
            .filter(|w| w.act(&rs, &a1).unwrap() == a1)
            .count();
        assert_eq!(pointwise_stabilizer(&g, &[a1]).unwrap().order(), brute);
    }

    #[test]
    fn subgroup_generators_regenerate() {
        let g = weyl("B3");
        let rs = g.system().clone();
        let v = vec![rs.simple_roots()[0].clone()];
        let h = setwise_stabilizer_of_subspace(&g, &v).unwrap();
        let re = enumerate_group(rs, h.generators().to_vec(), DEFAULT_CAP).unwrap();
        assert_eq!(re.order(), h.order());
        assert!(h.check_closure(10_000));
    }
}
