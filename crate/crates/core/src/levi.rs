//! Standard Levi subsystems and the quotient `N_W(L) / W_L` acting on the
//! orthogonal complement of the Levi roots.

use std::collections::HashSet;
use std::sync::Arc;

use crate::coxeter::{is_reflection, reflection_subgroup, CoxeterLabel};
use crate::error::{Error, Result};
use crate::linalg::{q, RationalMatrix, RationalVector};
use crate::rootsys::RootSystem;
use crate::weyl::{GeneratedGroup, WeylElement};

pub use crate::coxeter::identify_coxeter_type;

/// A subset `J` of the simple roots together with the roots it spans.
#[derive(Clone, Debug)]
pub struct LeviDatum {
    system: Arc<RootSystem>,
    levi: Vec<usize>,
    complement: Vec<usize>,
    levi_roots: Vec<usize>,
}

/// Builds the datum for the simple roots labelled `labels` (Bourbaki labels,
/// starting at 1). Duplicates are ignored.
pub fn levi_datum(system: Arc<RootSystem>, labels: &[usize]) -> Result<LeviDatum> {
    let rank = system.rank();
    let mut levi = Vec::with_capacity(labels.len());
    for &l in labels {
        if l == 0 || l > rank {
            return Err(Error::IndexOutOfRange { index: l, rank });
        }
        levi.push(l - 1);
    }
    levi.sort_unstable();
    levi.dedup();
    let complement: Vec<usize> = (0..rank).filter(|i| levi.binary_search(i).is_err()).collect();
    let levi_roots = (0..system.num_roots())
        .filter(|&k| {
            let c = system.coefficients(k);
            complement.iter().all(|&i| c[i] == 0)
        })
        .collect();
    Ok(LeviDatum {
        system,
        levi,
        complement,
        levi_roots,
    })
}

impl LeviDatum {
    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    /// Indices (from 0) of the simple roots in `J`.
    pub fn levi_indices(&self) -> &[usize] {
        &self.levi
    }

    /// Bourbaki labels of `J`.
    pub fn labels(&self) -> Vec<usize> {
        self.levi.iter().map(|i| i + 1).collect()
    }

    /// Indices (from 0) of the simple roots outside `J`; they index the
    /// basis of `k(p)`.
    pub fn complement_indices(&self) -> &[usize] {
        &self.complement
    }

    /// Indices of the roots lying in the span of `J`.
    pub fn levi_roots(&self) -> &[usize] {
        &self.levi_roots
    }

    pub fn contains_root(&self, k: usize) -> bool {
        self.levi_roots.binary_search(&k).is_ok()
    }

    /// Dimension of `k(p)`, which is `rank - |J|`.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Basis of `k(p)`: the fundamental coweights dual to the simple roots
    /// outside `J`, as ambient vectors.
    pub fn k_basis(&self) -> Vec<RationalVector> {
        self.complement
            .iter()
            .map(|&i| self.system.coweight(i).clone())
            .collect()
    }

    /// Coordinates in `k(p)` of an ambient vector in `k(p)`: its pairings
    /// with the simple roots outside `J`.
    pub fn coordinates(&self, v: &RationalVector) -> Result<RationalVector> {
        let coords = self
            .complement
            .iter()
            .map(|&i| self.system.inner(&self.system.simple_roots()[i], v))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalVector(coords))
    }

    /// Matrix of `w` on `k(p)` in the coweight basis. Entry `(a, b)` is the
    /// coefficient of simple root `b` in `w^-1(alpha_a)`. Meaningful only
    /// when `w` normalizes the Levi roots.
    pub fn action_matrix(&self, w: &WeylElement) -> RationalMatrix {
        let inv = w.inverse();
        let d = self.dim();
        let mut m = RationalMatrix::zeros(d, d);
        for (a, &ia) in self.complement.iter().enumerate() {
            let c = self.system.coefficients(inv.apply(ia));
            for (b, &ib) in self.complement.iter().enumerate() {
                m[(a, b)] = q(c[ib]);
            }
        }
        m
    }

    fn preserves_levi(&self, w: &WeylElement, member: &[bool]) -> bool {
        self.levi_roots.iter().all(|&k| member[w.apply(k)])
    }

    fn membership(&self) -> Vec<bool> {
        let mut member = vec![false; self.system.num_roots()];
        for &k in &self.levi_roots {
            member[k] = true;
        }
        member
    }
}

/// `W_L`, generated by the simple reflections in `J`.
pub fn weyl_of_levi(datum: &LeviDatum, cap: usize) -> Result<GeneratedGroup> {
    let gens = datum
        .levi
        .iter()
        .map(|&i| WeylElement::simple_reflection(&datum.system, i))
        .collect();
    GeneratedGroup::enumerate(datum.system.clone(), gens, cap)
}

/// `N_W(L)` as the setwise stabilizer of the Levi roots.
pub fn normalizer(weyl: &GeneratedGroup, datum: &LeviDatum) -> GeneratedGroup {
    let member = datum.membership();
    weyl.subgroup_where(|w| datum.preserves_levi(w, &member))
}

/// `N_W(L)` computed from the definition: elements conjugating every simple
/// reflection of `J` into `W_L`.
pub fn normalizer_by_conjugation(weyl: &GeneratedGroup, levi_group: &GeneratedGroup) -> GeneratedGroup {
    let gens = levi_group.generators().to_vec();
    weyl.subgroup_where(|w| {
        let inv = w.inverse();
        gens.iter()
            .all(|s| levi_group.contains(&w.compose(s).compose(&inv)))
    })
}

#[derive(Clone, Debug)]
pub struct NormalizerReport {
    pub datum: LeviDatum,
    pub weyl_order: usize,
    pub levi_group: GeneratedGroup,
    pub normalizer: GeneratedGroup,
    /// Coset representatives of `W' = N_W(L) / W_L`, the identity coset
    /// first. Each is the earliest coset member in the normalizer's order.
    pub coset_representatives: Vec<WeylElement>,
    /// Matrices of `W'` on `k(p)`, aligned with the representatives.
    pub action: Vec<RationalMatrix>,
    pub is_effective: bool,
    /// Indices of the cosets acting as reflections.
    pub reflection_cosets: Vec<usize>,
    pub is_reflection_group: bool,
    /// Simple reflections of the subgroup generated by all reflections.
    pub reflection_generators: Vec<RationalMatrix>,
    /// Type of `W'` when it is a reflection group.
    pub coxeter_type: Option<CoxeterLabel>,
}

impl NormalizerReport {
    pub fn quotient_order(&self) -> usize {
        self.coset_representatives.len()
    }

    pub fn type_label(&self) -> String {
        match &self.coxeter_type {
            Some(l) => l.to_string(),
            None => "non-reflection".to_string(),
        }
    }

    pub fn coset_of_matrix(&self, m: &RationalMatrix) -> Option<usize> {
        self.action.iter().position(|a| a == m)
    }
}

/// Computes `W' = N_W(L) / W_L` with its action on `k(p)`.
pub fn normalizer_quotient(datum: &LeviDatum, cap: usize) -> Result<NormalizerReport> {
    let system = datum.system.clone();
    let weyl = GeneratedGroup::weyl_group(system.clone(), cap)?;
    let levi_group = weyl_of_levi(datum, cap)?;
    let norm = normalizer(&weyl, datum);

    let mut assigned = vec![false; norm.order()];
    let mut reps = Vec::new();
    for (i, n) in norm.elements().iter().enumerate() {
        if assigned[i] {
            continue;
        }
        for l in levi_group.elements() {
            let j = norm
                .index_of(&n.compose(l))
                .expect("W_L lies in the normalizer");
            assigned[j] = true;
        }
        reps.push(n.clone());
    }
    debug_assert_eq!(reps.len() * levi_group.order(), norm.order());

    let action: Vec<RationalMatrix> = reps.iter().map(|w| datum.action_matrix(w)).collect();
    let is_effective = action.iter().filter(|m| m.is_identity()).count() == 1;
    let reflection_cosets: Vec<usize> = (0..action.len()).filter(|&i| is_reflection(&action[i])).collect();
    let reflections: Vec<RationalMatrix> = reflection_cosets.iter().map(|&i| action[i].clone()).collect();

    let distinct: HashSet<&RationalMatrix> = action.iter().collect();
    let sub = reflection_subgroup(datum.dim(), &reflections)?;
    let is_reflection_group = sub.order == distinct.len() as u128 && is_effective;
    let coxeter_type = if is_reflection_group {
        Some(sub.label.clone())
    } else {
        None
    };
    Ok(NormalizerReport {
        datum: datum.clone(),
        weyl_order: weyl.order(),
        levi_group,
        normalizer: norm,
        coset_representatives: reps,
        action,
        is_effective,
        reflection_cosets,
        is_reflection_group,
        reflection_generators: sub.simple,
        coxeter_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_of;
    use crate::rootsys::build_root_system;
    use crate::weyl::DEFAULT_CAP;

    fn datum(ty: &str, labels: &[usize]) -> LeviDatum {
        let rs = Arc::new(build_root_system(ty.parse().unwrap()).unwrap());
        levi_datum(rs, labels).unwrap()
    }

    #[test]
    fn levi_roots_match_span_membership() {
        let d = datum("B3", &[1, 3]);
        let rs = d.system().clone();
        let span: Vec<RationalVector> = d.levi_indices().iter().map(|&i| rs.simple_roots()[i].clone()).collect();
        for k in 0..rs.num_roots() {
            let mut with = span.clone();
            with.push(rs.root(k).clone());
            let in_span = rank_of(&with) == span.len();
            assert_eq!(in_span, d.contains_root(k), "root {k}");
        }
        assert_eq!(d.levi_roots().len(), 4);
    }

    #[test]
    fn k_basis_is_orthogonal_to_levi() {
        let d = datum("F4", &[2, 3]);
        let rs = d.system().clone();
        let basis = d.k_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for &j in d.levi_indices() {
                assert_eq!(rs.inner(v, &rs.simple_roots()[j]).unwrap(), q(0));
            }
        }
        assert_eq!(rank_of(&basis), 2);
        for (a, v) in basis.iter().enumerate() {
            assert_eq!(d.coordinates(v).unwrap(), RationalVector::unit(2, a));
        }
    }

    #[test]
    fn rejects_bad_labels() {
        let rs = Arc::new(build_root_system("A3".parse().unwrap()).unwrap());
        assert_eq!(
            levi_datum(rs.clone(), &[4]).unwrap_err(),
            Error::IndexOutOfRange { index: 4, rank: 3 }
        );
        assert!(levi_datum(rs, &[0]).is_err());
    }

    #[test]
    fn action_matrix_matches_ambient_action() {
        let d = datum("C3", &[2]);
        let rep = normalizer_quotient(&d, DEFAULT_CAP).unwrap();
        let basis = d.k_basis();
        for (w, m) in rep.coset_representatives.iter().zip(&rep.action) {
            for (b, v) in basis.iter().enumerate() {
                let image = w.act(d.system(), v).unwrap();
                assert_eq!(d.coordinates(&image).unwrap(), m.column(b));
            }
        }
    }

    #[test]
    fn normalizer_definitions_agree() {
        for (ty, j) in [("A3", vec![2]), ("B3", vec![1]), ("D4", vec![2]), ("G2", vec![1])] {
            let d = datum(ty, &j);
            let weyl = GeneratedGroup::weyl_group(d.system().clone(), DEFAULT_CAP).unwrap();
            let wl = weyl_of_levi(&d, DEFAULT_CAP).unwrap();
            let a = normalizer(&weyl, &d);
            let b = normalizer_by_conjugation(&weyl, &wl);
            assert_eq!(a.elements(), b.elements(), "{ty}");
        }
    }

    #[test]
    fn small_quotients() {
        let rep = normalizer_quotient(&datum("A2", &[]), DEFAULT_CAP).unwrap();
        assert_eq!(rep.quotient_order(), 6);
        assert_eq!(rep.type_label(), "A2");

        let rep = normalizer_quotient(&datum("A3", &[2]), DEFAULT_CAP).unwrap();
        assert_eq!(rep.quotient_order(), 2);
        assert!(rep.is_effective);

        let rep = normalizer_quotient(&datum("B2", &[1, 2]), DEFAULT_CAP).unwrap();
        assert_eq!(rep.quotient_order(), 1);
        assert_eq!(rep.type_label(), "trivial");
    }
}
