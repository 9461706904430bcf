//! Dynkin diagram automorphisms and the fixed subgroups they cut out.

use std::sync::Arc;

use crate::coxeter::{identify_coxeter_type, is_reflection, CoxeterLabel};
use crate::error::{Error, Result};
use crate::linalg::{q, RationalMatrix, RationalVector};
use crate::rootsys::{Family, RootSystem, RootSystemSpec};
use crate::weyl::{fixed_subgroup, GeneratedGroup, RootAutomorphism, WeylElement};

/// A permutation of the simple roots preserving the Cartan matrix, with its
/// linear extension to the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    order: usize,
    induced: RootAutomorphism,
}

impl DiagramAutomorphism {
    /// Checks that `perm` preserves the Cartan matrix and builds the induced
    /// permutation of the roots.
    pub fn new(rs: &RootSystem, perm: Vec<usize>) -> Option<Self> {
        let n = rs.rank();
        if perm.len() != n {
            return None;
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut hit[p], true) {
                return None;
            }
        }
        let cartan = rs.cartan();
        for i in 0..n {
            for j in 0..n {
                if cartan[perm[i]][perm[j]] != cartan[i][j] {
                    return None;
                }
            }
        }
        let roots = (0..rs.num_roots())
            .map(|k| {
                let c = rs.coefficients(k);
                let mut d = vec![0i64; n];
                for i in 0..n {
                    d[perm[i]] = c[i];
                }
                rs.index_of_coefficients(&d).map(|x| x as u16)
            })
            .collect::<Option<Vec<u16>>>()?;
        let induced = RootAutomorphism::from_perm(roots);
        let order = induced.order();
        Some(DiagramAutomorphism {
            perm,
            order,
            induced,
        })
    }

    pub fn identity(rs: &RootSystem) -> Self {
        Self::new(rs, (0..rs.rank()).collect()).expect("identity preserves everything")
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn induced(&self) -> &RootAutomorphism {
        &self.induced
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Orbits on simple-root indices, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                orbit.push(i);
                i = self.perm[i];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

/// Every Cartan-preserving permutation of the simple roots, identity first,
/// in lexicographic order.
pub fn diagram_automorphisms(rs: &RootSystem) -> Vec<DiagramAutomorphism> {
    let n = rs.rank();
    let cartan = rs.cartan();
    let mut found = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn extend(
        cartan: &[Vec<i64>],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        found: &mut Vec<Vec<usize>>,
    ) {
        let i = perm.len();
        let n = used.len();
        if i == n {
            found.push(perm.clone());
            return;
        }
        for p in 0..n {
            if used[p] {
                continue;
            }
            let consistent = cartan[p][p] == cartan[i][i]
                && (0..i).all(|j| {
                    cartan[p][perm[j]] == cartan[i][j] && cartan[perm[j]][p] == cartan[j][i]
                });
            if consistent {
                used[p] = true;
                perm.push(p);
                extend(cartan, perm, used, found);
                perm.pop();
                used[p] = false;
            }
        }
    }
    extend(cartan, &mut perm, &mut used, &mut found);
    found
        .into_iter()
        .map(|p| DiagramAutomorphism::new(rs, p).expect("Cartan-preserving by construction"))
        .collect()
}

/// The automorphism attached to a stratum with `r_bar` exceptional divisors
/// over an ADE singularity of type `rs`.
///
/// * `r_bar = rank`: identity, so `W_B = W`.
/// * `A_r`, `r > 1`: `r_bar = floor((r+1)/2)` with the order-two flip.
/// * `D_r`: `r_bar = r - 1` with the flip exchanging the two short legs.
/// * `D4`: `r_bar = 2` with the order-three rotation `1 -> 3 -> 4 -> 1`.
/// * `E6`: `r_bar = 4` with the order-two flip.
pub fn select_tau(rs: &RootSystem, r_bar: usize) -> Result<DiagramAutomorphism> {
    let spec = rs.spec();
    if !spec.is_simply_laced() {
        return Err(Error::NotSimplyLaced {
            ty: spec.to_string(),
        });
    }
    let r = spec.rank();
    let inadmissible = || Error::InadmissibleRBar {
        ty: spec.to_string(),
        r_bar,
    };
    if r_bar == r {
        return Ok(DiagramAutomorphism::identity(rs));
    }
    let perm: Vec<usize> = match spec.family() {
        Family::A if r > 1 && r_bar == r.div_ceil(2) => (0..r).rev().collect(),
        Family::D if r == 4 && r_bar == 2 => vec![2, 1, 3, 0],
        Family::D if r_bar == r - 1 => {
            let mut p: Vec<usize> = (0..r).collect();
            p.swap(r - 2, r - 1);
            p
        }
        Family::E if r == 6 && r_bar == 4 => vec![5, 1, 4, 3, 2, 0],
        _ => return Err(inadmissible()),
    };
    let tau = DiagramAutomorphism::new(rs, perm).ok_or_else(inadmissible)?;
    debug_assert_eq!(tau.orbits().len(), r_bar);
    Ok(tau)
}

/// Basis of the tau-fixed part of the root span: the orbit sums of simple
/// roots, ordered by smallest orbit member.
pub fn fixed_space(rs: &RootSystem, tau: &DiagramAutomorphism) -> Vec<RationalVector> {
    tau.orbits()
        .iter()
        .map(|orbit| {
            orbit
                .iter()
                .fold(RationalVector::zeros(rs.ambient_dim()), |acc, &i| {
                    acc.add(&rs.simple_roots()[i])
                })
        })
        .collect()
}

/// Matrix of `w` on the fixed space, in the orbit-sum basis. Column `j`
/// holds the coordinates of `w(v_j)`. Returns `None` if `w` does not
/// preserve the fixed space.
pub fn action_on_orbit_sums(
    rs: &RootSystem,
    orbits: &[Vec<usize>],
    w: &WeylElement,
) -> Option<RationalMatrix> {
    let n = rs.rank();
    let k = orbits.len();
    let mut m = RationalMatrix::zeros(k, k);
    for (j, orbit) in orbits.iter().enumerate() {
        let mut image = vec![0i64; n];
        for &a in orbit {
            for (x, &c) in image.iter_mut().zip(rs.coefficients(w.apply(a))) {
                *x += c;
            }
        }
        for (i, target) in orbits.iter().enumerate() {
            let c = image[target[0]];
            if target.iter().any(|&t| image[t] != c) {
                return None;
            }
            m[(i, j)] = q(c);
        }
    }
    Some(m)
}

#[derive(Clone, Debug)]
pub struct FoldingReport {
    pub source: RootSystemSpec,
    pub tau: DiagramAutomorphism,
    pub orbits: Vec<Vec<usize>>,
    pub r_bar: usize,
    pub fixed_space_basis: Vec<RationalVector>,
    pub weyl_order: usize,
    pub w_b: GeneratedGroup,
    /// Matrices of `W_B` on the fixed space, aligned with `w_b.elements()`.
    pub w_b_action: Vec<RationalMatrix>,
    /// Whether distinct elements of `W_B` act by distinct matrices.
    pub restriction_faithful: bool,
    pub w_b_type: CoxeterLabel,
    pub w_b_order: usize,
}

/// Computes `W_B = {w : tau w tau^-1 = w}` and identifies it through its
/// action on the fixed space.
pub fn fold(rs: Arc<RootSystem>, tau: &DiagramAutomorphism, cap: usize) -> Result<FoldingReport> {
    if !rs.is_simply_laced() {
        return Err(Error::NotSimplyLaced {
            ty: rs.spec().to_string(),
        });
    }
    let weyl = GeneratedGroup::weyl_group(rs.clone(), cap)?;
    let w_b = fixed_subgroup(&weyl, tau.induced())?;
    let orbits = tau.orbits();
    let basis = fixed_space(&rs, tau);
    let action: Vec<RationalMatrix> = w_b
        .elements()
        .iter()
        .map(|w| action_on_orbit_sums(&rs, &orbits, w).expect("W_B preserves the fixed space"))
        .collect();
    let distinct: std::collections::HashSet<&RationalMatrix> = action.iter().collect();
    let restriction_faithful = distinct.len() == action.len();
    let reflections: Vec<RationalMatrix> =
        action.iter().filter(|m| is_reflection(m)).cloned().collect();
    let w_b_type = identify_coxeter_type(&action, &reflections)?;
    Ok(FoldingReport {
        source: rs.spec(),
        tau: tau.clone(),
        r_bar: orbits.len(),
        orbits,
        fixed_space_basis: basis,
        weyl_order: weyl.order(),
        w_b_order: w_b.order(),
        w_b,
        w_b_action: action,
        restriction_faithful,
        w_b_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;
    use crate::weyl::DEFAULT_CAP;

    fn system(s: &str) -> Arc<RootSystem> {
        Arc::new(build_root_system(s.parse().unwrap()).unwrap())
    }

    /// Brute force: all 24 permutations of four nodes.
    fn brute_force_count(rs: &RootSystem) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut v = p.clone();
                    v.insert(pos, n - 1);
                    out.push(v);
                }
            }
            out
        }
        let c = rs.cartan();
        perms(rs.rank())
            .into_iter()
            .filter(|p| (0..p.len()).all(|i| (0..p.len()).all(|j| c[p[i]][p[j]] == c[i][j])))
            .count()
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(diagram_automorphisms(&system("A1")).len(), 1);
        let d4 = system("D4");
        assert_eq!(diagram_automorphisms(&d4).len(), 6);
        assert_eq!(brute_force_count(&d4), 6);
        assert_eq!(diagram_automorphisms(&system("E6")).len(), 2);
        assert_eq!(diagram_automorphisms(&system("E7")).len(), 1);
        assert_eq!(diagram_automorphisms(&system("B3")).len(), 1);
        assert_eq!(diagram_automorphisms(&system("A5")).len(), 2);
        let autos = diagram_automorphisms(&d4);
        assert!(autos[0].is_identity());
        for a in &autos {
            assert_eq!(a.induced().order(), a.order());
        }
    }

    #[test]
    fn select_tau_rules() {
        let d4 = system("D4");
        let t = select_tau(&d4, 2).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(t.perm(), &[2, 1, 3, 0]);
        assert_eq!(select_tau(&d4, 3).unwrap().order(), 2);
        assert!(select_tau(&d4, 4).unwrap().is_identity());
        assert!(select_tau(&system("A5"), 5).unwrap().is_identity());
        let a4 = select_tau(&system("A4"), 2).unwrap();
        assert_eq!(a4.order(), 2);
        assert_eq!(a4.orbits(), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(select_tau(&system("E6"), 4).unwrap().order(), 2);
        assert!(matches!(
            select_tau(&system("E7"), 4),
            Err(Error::InadmissibleRBar { .. })
        ));
        assert!(matches!(
            select_tau(&system("A5"), 2),
            Err(Error::InadmissibleRBar { .. })
        ));
        assert!(matches!(
            select_tau(&system("B3"), 3),
            Err(Error::NotSimplyLaced { .. })
        ));
    }

    #[test]
    fn r_bar_from_orbits() {
        for r in 2usize..=7 {
            let t = select_tau(&system(&format!("A{r}")), r.div_ceil(2)).unwrap();
            assert_eq!(t.orbits().len(), r.div_ceil(2));
        }
        for r in 3..=7 {
            let t = select_tau(&system(&format!("D{r}")), r - 1).unwrap();
            assert_eq!(t.orbits().len(), r - 1);
        }
        assert_eq!(select_tau(&system("E6"), 4).unwrap().orbits().len(), 4);
    }

    #[test]
    fn fixed_space_dimensions() {
        let d4 = system("D4");
        let t = select_tau(&d4, 2).unwrap();
        let v = fixed_space(&d4, &t);
        assert_eq!(v.len(), 2);
        assert!(v.contains(&RationalVector::from_ints(&[0, 1, -1, 0])));
        assert!(v.contains(&RationalVector::from_ints(&[1, -1, 2, 0])));

        let id = DiagramAutomorphism::identity(&d4);
        assert_eq!(crate::linalg::rank_of(&fixed_space(&d4, &id)), 4);

        // A3 flip: solve tau v = v on simple-root coordinates directly.
        let a3 = system("A3");
        let t = select_tau(&a3, 2).unwrap();
        let tm = RationalMatrix::from_fn(3, 3, |i, j| q((t.perm()[j] == i) as i64));
        let kernel = tm.sub(&RationalMatrix::identity(3)).nullspace();
        assert_eq!(kernel.len(), 2);
        assert_eq!(crate::linalg::rank_of(&fixed_space(&a3, &t)), 2);
    }

    #[test]
    fn fold_small_cases() {
        let a3 = system("A3");
        let t = select_tau(&a3, 2).unwrap();
        let rep = fold(a3, &t, DEFAULT_CAP).unwrap();
        assert_eq!((rep.r_bar, rep.w_b_order), (2, 8));
        assert_eq!(rep.w_b_type.to_string(), "BC2");
        assert!(rep.restriction_faithful);

        let d4 = system("D4");
        let t = select_tau(&d4, 2).unwrap();
        let rep = fold(d4, &t, DEFAULT_CAP).unwrap();
        assert_eq!((rep.r_bar, rep.w_b_order), (2, 12));
        assert_eq!(rep.w_b_type.to_string(), "G2");
    }

    #[test]
    fn fold_rejects_non_simply_laced_and_small_caps() {
        let b3 = system("B3");
        let id = DiagramAutomorphism::identity(&b3);
        assert!(matches!(fold(b3, &id, DEFAULT_CAP), Err(Error::NotSimplyLaced { .. })));
        let a3 = system("A3");
        let t = select_tau(&a3, 2).unwrap();
        assert!(matches!(fold(a3, &t, 5), Err(Error::CapExceeded { .. })));
    }
}
