//! Recognition of finite reflection groups from matrices.
//!
//! Given reflections acting on a rational vector space, the group they
//! generate is identified by choosing a positive system with a generic
//! linear functional, reading off the simple reflections (those sending
//! exactly one positive root to a negative one), computing the Coxeter
//! matrix and matching its connected components against the finite
//! catalog.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, RationalMatrix, RationalVector};

/// Irreducible finite Coxeter group. `B_n` and `C_n` share a Weyl group and
/// are reported together as `BC_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterType {
    A(usize),
    BC(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H(usize),
    I2(usize),
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::BC(n) | CoxeterType::D(n) => n,
            CoxeterType::E(n) | CoxeterType::H(n) => n,
            CoxeterType::F4 => 4,
            CoxeterType::G2 | CoxeterType::I2(_) => 2,
        }
    }

    /// Group order from the catalog.
    pub fn order(self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            CoxeterType::A(n) => fact(n + 1),
            CoxeterType::BC(n) => (1u128 << n) * fact(n),
            CoxeterType::D(n) => (1u128 << (n - 1)) * fact(n),
            CoxeterType::E(6) => 51_840,
            CoxeterType::E(7) => 2_903_040,
            CoxeterType::E(_) => 696_729_600,
            CoxeterType::F4 => 1152,
            CoxeterType::G2 => 12,
            CoxeterType::H(3) => 120,
            CoxeterType::H(_) => 14_400,
            CoxeterType::I2(m) => 2 * m as u128,
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::BC(n) => write!(f, "BC{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E(n) => write!(f, "E{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::G2 => write!(f, "G2"),
            CoxeterType::H(n) => write!(f, "H{n}"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// A product of irreducible types, kept sorted. Displays as e.g.
/// `A1 x BC2`; the empty product is `trivial`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterLabel(Vec<CoxeterType>);

impl CoxeterLabel {
    pub fn new(mut components: Vec<CoxeterType>) -> Self {
        components.sort();
        CoxeterLabel(components)
    }

    pub fn components(&self) -> &[CoxeterType] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> Option<u128> {
        self.0
            .iter()
            .try_fold(1u128, |acc, t| acc.checked_mul(t.order()))
    }

    /// Product label of several groups.
    pub fn product<'a>(labels: impl IntoIterator<Item = &'a CoxeterLabel>) -> Self {
        CoxeterLabel::new(labels.into_iter().flat_map(|l| l.0.iter().copied()).collect())
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "trivial");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// An involution fixing a hyperplane pointwise.
pub fn is_reflection(m: &RationalMatrix) -> bool {
    if !m.is_square() || m.rows() == 0 {
        return false;
    }
    let n = m.rows();
    m.mul(m).is_identity() && m.sub(&RationalMatrix::identity(n)).rank() == 1
}

/// The (-1)-eigenvector of a reflection: its first nonzero column of
/// `M - I`.
pub fn reflection_root(m: &RationalMatrix) -> RationalVector {
    let d = m.sub(&RationalMatrix::identity(m.rows()));
    (0..d.cols())
        .map(|j| d.column(j))
        .find(|c| !c.is_zero())
        .expect("a reflection moves something")
}

/// Structure of the group generated by a set of reflections.
#[derive(Clone, Debug)]
pub struct ReflectionSubgroup {
    /// All reflections of the generated group (the conjugation closure of
    /// the input), input order first.
    pub reflections: Vec<RationalMatrix>,
    /// Simple reflections for the positive system picked by `functional`.
    pub simple: Vec<RationalMatrix>,
    /// Positive roots, one per reflection, aligned with `reflections`.
    pub roots: Vec<RationalVector>,
    pub functional: RationalVector,
    pub coxeter_matrix: Vec<Vec<usize>>,
    pub label: CoxeterLabel,
    pub order: u128,
}

const MAX_REFLECTIONS: usize = 4096;
const MAX_BRAID_ORDER: usize = 1000;

/// Analyzes the finite group generated by `reflections`, all acting on a
/// space of dimension `dim`.
pub fn reflection_subgroup(dim: usize, reflections: &[RationalMatrix]) -> Result<ReflectionSubgroup> {
    let mut refl: Vec<RationalMatrix> = Vec::new();
    let mut seen: HashSet<RationalMatrix> = HashSet::new();
    for r in reflections {
        if r.rows() != dim || !is_reflection(r) {
            return Err(Error::UnrecognizedGraph("input is not a reflection".into()));
        }
        if seen.insert(r.clone()) {
            refl.push(r.clone());
        }
    }
    // Conjugation closure.
    let mut done = 0;
    while done < refl.len() {
        let len = refl.len();
        for a in 0..len {
            for b in 0..len {
                if a < done && b < done {
                    continue;
                }
                let c = refl[b].mul(&refl[a]).mul(&refl[b]);
                if seen.insert(c.clone()) {
                    refl.push(c);
                    if refl.len() > MAX_REFLECTIONS {
                        return Err(Error::UnrecognizedGraph(
                            "reflections generate an infinite group".into(),
                        ));
                    }
                }
            }
        }
        done = len;
    }

    let mut roots: Vec<RationalVector> = refl.iter().map(reflection_root).collect();

    // A functional nonzero on every root defines a positive system.
    let functional = (2i64..)
        .map(|k| {
            let mut p = q(1);
            RationalVector(
                (0..dim)
                    .map(|_| {
                        let x = p.clone();
                        p *= q(k);
                        x
                    })
                    .collect(),
            )
        })
        .find(|phi| roots.iter().all(|r| !phi.dot(r).is_zero()))
        .expect("some power sequence avoids finitely many hyperplanes");
    for r in roots.iter_mut() {
        if functional.dot(r).is_negative() {
            *r = r.neg();
        }
    }

    let positive = |v: &RationalVector| functional.dot(v).is_positive();
    let simple_idx: Vec<usize> = (0..refl.len())
        .filter(|&s| {
            (0..refl.len()).all(|t| t == s || positive(&refl[s].mul_vec(&roots[t])))
        })
        .collect();
    let simple: Vec<RationalMatrix> = simple_idx.iter().map(|&i| refl[i].clone()).collect();

    let n = simple.len();
    let mut coxeter_matrix = vec![vec![1usize; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = simple[i]
                .mul(&simple[j])
                .order(MAX_BRAID_ORDER)
                .ok_or_else(|| Error::UnrecognizedGraph("braid order too large".into()))?;
            coxeter_matrix[i][j] = m;
            coxeter_matrix[j][i] = m;
        }
    }
    let label = classify(&coxeter_matrix)?;
    let order = label
        .order()
        .ok_or_else(|| Error::Overflow("reflection group order".into()))?;

    Ok(ReflectionSubgroup {
        reflections: refl,
        simple,
        roots,
        functional,
        coxeter_matrix,
        label,
        order,
    })
}

/// Identifies the reflection group `action` (the complete list of its
/// elements) from reflections that generate it.
pub fn identify_coxeter_type(
    action: &[RationalMatrix],
    reflections: &[RationalMatrix],
) -> Result<CoxeterLabel> {
    let dim = action.first().map_or(0, |m| m.rows());
    let members: HashSet<&RationalMatrix> = action.iter().collect();
    let sub = reflection_subgroup(dim, reflections)?;
    let inside = sub.reflections.iter().all(|r| members.contains(r));
    if !inside || sub.order != action.len() as u128 {
        return Err(Error::NotGenerated {
            generated: sub.order,
            order: action.len(),
        });
    }
    Ok(sub.label)
}

/// Matches a Coxeter matrix against the finite catalog, component by
/// component.
pub fn classify(m: &[Vec<usize>]) -> Result<CoxeterLabel> {
    let n = m.len();
    let mut comp = vec![usize::MAX; n];
    let mut types = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut nodes = vec![start];
        comp[start] = start;
        let mut k = 0;
        while k < nodes.len() {
            let v = nodes[k];
            for w in 0..n {
                if w != v && m[v][w] >= 3 && comp[w] == usize::MAX {
                    comp[w] = start;
                    nodes.push(w);
                }
            }
            k += 1;
        }
        nodes.sort_unstable();
        types.push(classify_connected(m, &nodes)?);
    }
    Ok(CoxeterLabel::new(types))
}

fn classify_connected(m: &[Vec<usize>], nodes: &[usize]) -> Result<CoxeterType> {
    let n = nodes.len();
    let unrecognized = || {
        let rows: Vec<String> = nodes
            .iter()
            .map(|&i| {
                nodes
                    .iter()
                    .map(|&j| m[i][j].to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        Error::UnrecognizedGraph(rows.join("; "))
    };
    if n == 1 {
        return Ok(CoxeterType::A(1));
    }
    if n == 2 {
        return Ok(match m[nodes[0]][nodes[1]] {
            3 => CoxeterType::A(2),
            4 => CoxeterType::BC(2),
            6 => CoxeterType::G2,
            k => CoxeterType::I2(k),
        });
    }

    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    for a in 0..n {
        for b in a + 1..n {
            let label = m[nodes[a]][nodes[b]];
            if label >= 3 {
                edges.push((a, b, label));
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    if edges.len() != n - 1 {
        return Err(unrecognized());
    }
    let special: Vec<&(usize, usize, usize)> = edges.iter().filter(|e| e.2 != 3).collect();
    let max_degree = *degree.iter().max().unwrap();

    match special.as_slice() {
        [] => {
            if max_degree <= 2 {
                return Ok(CoxeterType::A(n));
            }
            let branches: Vec<usize> = (0..n).filter(|&v| degree[v] == 3).collect();
            if branches.len() != 1 || max_degree > 3 {
                return Err(unrecognized());
            }
            let centre = branches[0];
            let mut arms: Vec<usize> = edges
                .iter()
                .filter_map(|&(a, b, _)| {
                    if a == centre {
                        Some(b)
                    } else if b == centre {
                        Some(a)
                    } else {
                        None
                    }
                })
                .map(|first| arm_length(&edges, centre, first))
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(CoxeterType::D(n)),
                [1, 2, 2] => Ok(CoxeterType::E(6)),
                [1, 2, 3] => Ok(CoxeterType::E(7)),
                [1, 2, 4] => Ok(CoxeterType::E(8)),
                _ => Err(unrecognized()),
            }
        }
        [&(a, b, label)] if max_degree <= 2 => {
            let at_end = degree[a] == 1 || degree[b] == 1;
            match (label, at_end, n) {
                (4, true, _) => Ok(CoxeterType::BC(n)),
                (4, false, 4) => Ok(CoxeterType::F4),
                (5, true, 3) => Ok(CoxeterType::H(3)),
                (5, true, 4) => Ok(CoxeterType::H(4)),
                _ => Err(unrecognized()),
            }
        }
        _ => Err(unrecognized()),
    }
}

fn arm_length(edges: &[(usize, usize, usize)], from: usize, first: usize) -> usize {
    let mut prev = from;
    let mut cur = first;
    let mut len = 1;
    loop {
        let next = edges.iter().find_map(|&(a, b, _)| {
            if a == cur && b != prev {
                Some(b)
            } else if b == cur && a != prev {
                Some(a)
            } else {
                None
            }
        });
        match next {
            Some(n) => {
                prev = cur;
                cur = n;
                len += 1;
            }
            None => return len,
        }
    }
}

/// Closure of a set of matrices under multiplication; used for small
/// independent checks.
pub fn matrix_closure(dim: usize, gens: &[RationalMatrix], limit: usize) -> Option<Vec<RationalMatrix>> {
    let id = RationalMatrix::identity(dim);
    let mut seen: HashSet<RationalMatrix> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        for g in gens {
            let h = out[head].mul(g);
            if seen.insert(h.clone()) {
                if out.len() == limit {
                    return None;
                }
                out.push(h);
            }
        }
        head += 1;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn coxeter(rows: &[&[usize]]) -> Vec<Vec<usize>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn order_two_group_on_a_line() {
        let id = m(&[&[1]]);
        let neg = m(&[&[-1]]);
        let label = identify_coxeter_type(&[id, neg.clone()], &[neg]).unwrap();
        assert_eq!(label.to_string(), "A1");
    }

    #[test]
    fn commuting_reflections_in_the_plane() {
        let a = m(&[&[-1, 0], &[0, 1]]);
        let b = m(&[&[1, 0], &[0, -1]]);
        let group = vec![m(&[&[1, 0], &[0, 1]]), a.clone(), b.clone(), a.mul(&b)];
        let label = identify_coxeter_type(&group, &[a, b]).unwrap();
        assert_eq!(label.to_string(), "A1 x A1");
    }

    #[test]
    fn not_generated() {
        let a = m(&[&[-1, 0], &[0, 1]]);
        let b = m(&[&[1, 0], &[0, -1]]);
        let group = vec![m(&[&[1, 0], &[0, 1]]), a.clone(), b.clone(), a.mul(&b)];
        assert!(matches!(
            identify_coxeter_type(&group, &[a]),
            Err(Error::NotGenerated { generated: 2, order: 4 })
        ));
    }

    #[test]
    fn catalog_graphs() {
        let cases: Vec<(Vec<Vec<usize>>, &str)> = vec![
            (coxeter(&[&[1, 3, 2], &[3, 1, 3], &[2, 3, 1]]), "A3"),
            (coxeter(&[&[1, 3, 2], &[3, 1, 4], &[2, 4, 1]]), "BC3"),
            (coxeter(&[&[1, 5, 2], &[5, 1, 3], &[2, 3, 1]]), "H3"),
            (
                coxeter(&[&[1, 3, 2, 2], &[3, 1, 4, 2], &[2, 4, 1, 3], &[2, 2, 3, 1]]),
                "F4",
            ),
            (
                coxeter(&[&[1, 3, 2, 2], &[3, 1, 3, 3], &[2, 3, 1, 2], &[2, 3, 2, 1]]),
                "D4",
            ),
            (coxeter(&[&[1, 6], &[6, 1]]), "G2"),
            (coxeter(&[&[1, 8], &[8, 1]]), "I2(8)"),
            (coxeter(&[&[1, 2], &[2, 1]]), "A1 x A1"),
            (coxeter(&[]), "trivial"),
        ];
        for (mat, want) in cases {
            assert_eq!(classify(&mat).unwrap().to_string(), want);
        }
    }

    #[test]
    fn affine_graphs_are_rejected() {
        // triangle of 3s (affine A2) and the affine B3-like 4-4 path
        let tri = coxeter(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]);
        assert!(matches!(classify(&tri), Err(Error::UnrecognizedGraph(_))));
        let path = coxeter(&[&[1, 4, 2], &[4, 1, 4], &[2, 4, 1]]);
        assert!(matches!(classify(&path), Err(Error::UnrecognizedGraph(_))));
    }

    #[test]
    fn labels_sort_canonically() {
        let l = CoxeterLabel::new(vec![CoxeterType::BC(3), CoxeterType::A(1), CoxeterType::BC(2)]);
        assert_eq!(l.to_string(), "A1 x BC2 x BC3");
        assert_eq!(l.order(), Some(2 * 8 * 48));
    }
}
