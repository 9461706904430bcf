//! The arrangement cut out on `k(p)` by the roots outside a Levi subsystem,
//! its chambers, the action of `W'` on them, and galleries.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::levi::{LeviDatum, NormalizerReport};
use crate::linalg::{q, signum, Rational, RationalMatrix, RationalVector};

/// Default bound on the number of hyperplanes.
pub const DEFAULT_HYPERPLANE_LIMIT: usize = 24;

/// Hard bound from the packed sign representation.
pub const MAX_HYPERPLANES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A chamber: its side of every hyperplane and an integral interior point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub signs: Vec<Sign>,
    pub witness: RationalVector,
}

impl Chamber {
    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }

    fn mask(&self) -> u64 {
        mask_of(&self.signs)
    }
}

fn mask_of(signs: &[Sign]) -> u64 {
    signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == Sign::Minus)
        .fold(0, |m, (i, _)| m | (1u64 << i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallKind {
    /// Not fixed by any reflection of `W'`.
    FirstKind,
    /// The fixed hyperplane of a reflection of `W'`.
    SecondKind,
}

impl fmt::Display for WallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WallKind::FirstKind => "first_kind",
            WallKind::SecondKind => "second_kind",
        })
    }
}

/// Hyperplanes in `k(p)` given by the roots outside the Levi subsystem, in
/// coordinates dual to the coweight basis.
#[derive(Clone, Debug)]
pub struct RestrictedArrangement {
    datum: LeviDatum,
    normals: Vec<Vec<i64>>,
    sources: Vec<Vec<usize>>,
}

fn gcd_normalize(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    v.iter().map(|&x| x / g).collect()
}

/// Restricts every root outside the Levi subsystem to `k(p)`. Hyperplanes
/// are listed in the order their first positive root appears.
pub fn restricted_arrangement(datum: &LeviDatum) -> Result<RestrictedArrangement> {
    if datum.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    let rs = datum.system();
    let cols = datum.complement_indices();
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut sources: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for k in 0..rs.num_positive() {
        if datum.contains_root(k) {
            continue;
        }
        let c = rs.coefficients(k);
        let n = gcd_normalize(&cols.iter().map(|&i| c[i]).collect::<Vec<_>>());
        let h = *index.entry(n.clone()).or_insert_with(|| {
            normals.push(n);
            sources.push(Vec::new());
            normals.len() - 1
        });
        sources[h].push(k);
        sources[h].push(rs.negative(k));
    }
    for s in &mut sources {
        s.sort_unstable();
    }
    Ok(RestrictedArrangement {
        datum: datum.clone(),
        normals,
        sources,
    })
}

impl RestrictedArrangement {
    pub fn datum(&self) -> &LeviDatum {
        &self.datum
    }

    pub fn dim(&self) -> usize {
        self.datum.dim()
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// Primitive integral normals.
    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn normal(&self, h: usize) -> RationalVector {
        RationalVector::from_ints(&self.normals[h])
    }

    /// Indices of the roots (both signs) restricting to hyperplane `h`.
    pub fn sources(&self, h: usize) -> &[usize] {
        &self.sources[h]
    }

    /// Side of each hyperplane for a point, `None` if it lies on one.
    pub fn signs_of(&self, x: &RationalVector) -> Option<Vec<Sign>> {
        self.normals
            .iter()
            .map(|n| match signum(&RationalVector::from_ints(n).dot(x)) {
                1 => Some(Sign::Plus),
                -1 => Some(Sign::Minus),
                _ => None,
            })
            .collect()
    }

    /// The canonical base point `(1, ..., 1)`: the sum of the coweights
    /// spanning `k(p)`. It pairs positively with every positive root outside
    /// the Levi subsystem.
    pub fn base_point(&self) -> RationalVector {
        RationalVector::from_ints(&vec![1; self.dim()])
    }
}

/// Enumerates the chambers of the restricted arrangement, sorted by sign
/// vector with `+` before `-`.
pub fn enumerate_chambers(arr: &RestrictedArrangement, limit: usize) -> Result<Vec<Chamber>> {
    let limit = limit.min(MAX_HYPERPLANES);
    if arr.len() > limit {
        return Err(Error::TooManyHyperplanes {
            count: arr.len(),
            limit,
        });
    }
    Ok(chambers_of(arr.normals(), arr.dim()))
}

#[derive(Clone)]
struct Face {
    signs: Vec<i8>,
    point: RationalVector,
}

struct FaceEnumerator<'a> {
    normals: &'a [RationalVector],
    memo: HashMap<Vec<usize>, Rc<Vec<Face>>>,
}

impl FaceEnumerator<'_> {
    /// Chambers of the arrangement induced on the flat spanned by `basis`;
    /// `contained` lists the hyperplanes containing the flat.
    fn flat(&mut self, basis: &[RationalVector], contained: Vec<usize>) -> Rc<Vec<Face>> {
        if let Some(f) = self.memo.get(&contained) {
            return f.clone();
        }
        let m = self.normals.len();
        let is_contained = |i: usize| contained.binary_search(&i).is_ok();
        let active: Vec<usize> = (0..m).filter(|&i| !is_contained(i)).collect();
        let ambient = self.normals.first().map_or(0, |n| n.len());
        let mut faces = Vec::new();
        if active.is_empty() {
            faces.push(Face {
                signs: vec![0; m],
                point: basis.first().cloned().unwrap_or_else(|| RationalVector::zeros(ambient)),
            });
        } else if basis.len() == 1 {
            for p in [basis[0].clone(), basis[0].neg()] {
                let signs = (0..m)
                    .map(|i| if is_contained(i) { 0 } else { signum(&self.normals[i].dot(&p)) })
                    .collect();
                faces.push(Face { signs, point: p });
            }
        } else {
            let mut seen_faces: HashSet<Vec<i8>> = HashSet::new();
            let mut seen_flats: HashSet<Vec<usize>> = HashSet::new();
            for &e in &active {
                let g: Vec<Rational> = basis.iter().map(|b| self.normals[e].dot(b)).collect();
                let kernel = RationalMatrix::from_rows(&[RationalVector(g.clone())]).nullspace();
                let sub_basis: Vec<RationalVector> = kernel
                    .iter()
                    .map(|y| {
                        y.iter()
                            .zip(basis)
                            .fold(RationalVector::zeros(ambient), |acc, (c, b)| acc.axpy(c, b))
                    })
                    .collect();
                let mut sub_contained = contained.clone();
                sub_contained.extend(active.iter().copied().filter(|&i| {
                    sub_basis.iter().all(|b| self.normals[i].dot(b).is_zero())
                }));
                sub_contained.sort_unstable();
                if !seen_flats.insert(sub_contained.clone()) {
                    continue;
                }
                let off = basis[g.iter().position(|x| !x.is_zero()).expect("hyperplane cuts the flat")].clone();
                let facets = self.flat(&sub_basis, sub_contained.clone());
                let crossing: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|i| sub_contained.binary_search(i).is_err())
                    .collect();
                for facet in facets.iter() {
                    let mut eps = q(1);
                    for &i in &crossing {
                        let slope = self.normals[i].dot(&off);
                        if !slope.is_zero() {
                            let bound = self.normals[i].dot(&facet.point).abs() / (slope.abs() * q(2));
                            if bound < eps {
                                eps = bound;
                            }
                        }
                    }
                    for dir in [eps.clone(), -eps.clone()] {
                        let point = facet.point.axpy(&dir, &off);
                        let signs: Vec<i8> = (0..m)
                            .map(|i| {
                                if is_contained(i) {
                                    0
                                } else if sub_contained.binary_search(&i).is_ok() {
                                    signum(&self.normals[i].dot(&point))
                                } else {
                                    facet.signs[i]
                                }
                            })
                            .collect();
                        if seen_faces.insert(signs.clone()) {
                            faces.push(Face { signs, point });
                        }
                    }
                }
            }
        }
        let faces = Rc::new(faces);
        self.memo.insert(contained, faces.clone());
        faces
    }
}

/// Chambers of the central arrangement with the given integral normals in
/// dimension `dim`, sorted by sign vector with `+` before `-`. Witnesses are
/// primitive integral vectors.
pub fn chambers_of(normals: &[Vec<i64>], dim: usize) -> Vec<Chamber> {
    if dim == 0 {
        return vec![Chamber {
            signs: Vec::new(),
            witness: RationalVector::zeros(0),
        }];
    }
    let rational: Vec<RationalVector> = normals.iter().map(|n| RationalVector::from_ints(n)).collect();
    let zero: Vec<usize> = (0..rational.len()).filter(|&i| rational[i].is_zero()).collect();
    let mut enumerator = FaceEnumerator {
        normals: &rational,
        memo: HashMap::new(),
    };
    let basis: Vec<RationalVector> = (0..dim).map(|i| RationalVector::unit(dim, i)).collect();
    let faces = enumerator.flat(&basis, zero);
    let mut chambers: Vec<Chamber> = faces
        .iter()
        .map(|f| Chamber {
            signs: f
                .signs
                .iter()
                .map(|&s| if s < 0 { Sign::Minus } else { Sign::Plus })
                .collect(),
            witness: RationalVector(
                f.point
                    .primitive_integral()
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect(),
            ),
        })
        .collect();
    chambers.sort_by(|a, b| a.signs.cmp(&b.signs));
    chambers
}

/// Classifies each hyperplane as a wall of the first or second kind.
pub fn classify_walls(arr: &RestrictedArrangement, report: &NormalizerReport) -> Vec<WallKind> {
    wall_reflections(arr, report)
        .iter()
        .map(|r| match r {
            Some(_) => WallKind::SecondKind,
            None => WallKind::FirstKind,
        })
        .collect()
}

/// For each hyperplane, the first coset of `W'` acting as a reflection
/// fixing it, if any.
fn wall_reflections(arr: &RestrictedArrangement, report: &NormalizerReport) -> Vec<Option<usize>> {
    let fixed: Vec<(usize, Vec<RationalVector>)> = report
        .reflection_cosets
        .iter()
        .map(|&c| {
            let m = &report.action[c];
            (c, m.sub(&RationalMatrix::identity(m.rows())).nullspace())
        })
        .collect();
    (0..arr.len())
        .map(|h| {
            let n = arr.normal(h);
            fixed
                .iter()
                .find(|(_, ker)| ker.iter().all(|v| n.dot(v).is_zero()))
                .map(|(c, _)| *c)
        })
        .collect()
}

fn to_i128(v: &RationalVector) -> Vec<i128> {
    v.iter()
        .map(|x| {
            assert!(x.is_integer());
            x.to_integer().to_i128().expect("witness entry exceeds i128")
        })
        .collect()
}

/// For each coset of `W'`, the permutation it induces on the chambers.
pub fn chamber_permutations(
    arr: &RestrictedArrangement,
    chambers: &[Chamber],
    report: &NormalizerReport,
) -> Result<Vec<Vec<usize>>> {
    let by_mask: HashMap<u64, usize> = chambers.iter().enumerate().map(|(i, c)| (c.mask(), i)).collect();
    let witnesses: Vec<Vec<i128>> = chambers.iter().map(|c| to_i128(&c.witness)).collect();
    let normals: Vec<Vec<i128>> = arr
        .normals()
        .iter()
        .map(|n| n.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out = Vec::with_capacity(report.action.len());
    for m in &report.action {
        let mi = m.integral_multiple();
        let mut perm = Vec::with_capacity(chambers.len());
        let mut hit = vec![false; chambers.len()];
        for x in &witnesses {
            let y: Vec<i128> = mi
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect();
            let mut mask = 0u64;
            for (h, n) in normals.iter().enumerate() {
                let s: i128 = n.iter().zip(&y).map(|(a, b)| a * b).sum();
                match s.signum() {
                    1 => {}
                    -1 => mask |= 1 << h,
                    _ => return Err(Error::OrbitMismatch),
                }
            }
            let j = *by_mask.get(&mask).ok_or(Error::OrbitMismatch)?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(Error::OrbitMismatch);
            }
            perm.push(j);
        }
        out.push(perm);
    }
    Ok(out)
}

/// Chambers adjacent to `c`, with the hyperplane crossed, in hyperplane
/// order.
pub fn neighbors(chambers: &[Chamber], by_mask: &HashMap<u64, usize>, c: usize) -> Vec<(usize, usize)> {
    let mask = chambers[c].mask();
    (0..chambers[c].signs.len())
        .filter_map(|h| by_mask.get(&(mask ^ (1 << h))).map(|&d| (h, d)))
        .collect()
}

/// A connected set of chambers meeting every `W'`-orbit once, grown
/// breadth-first from `base`.
pub fn fundamental_domain(chambers: &[Chamber], permutations: &[Vec<usize>], base: usize) -> Vec<usize> {
    let by_mask: HashMap<u64, usize> = chambers.iter().enumerate().map(|(i, c)| (c.mask(), i)).collect();
    let mut orbit = vec![usize::MAX; chambers.len()];
    let mut orbits = 0;
    for c in 0..chambers.len() {
        if orbit[c] != usize::MAX {
            continue;
        }
        for p in permutations {
            orbit[p[c]] = orbits;
        }
        orbits += 1;
    }
    let mut taken = vec![false; orbits];
    let mut domain = vec![base];
    taken[orbit[base]] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(c) = queue.pop_front() {
        for (_, d) in neighbors(chambers, &by_mask, c) {
            if !taken[orbit[d]] {
                taken[orbit[d]] = true;
                domain.push(d);
                queue.push_back(d);
            }
        }
    }
    domain.sort_unstable();
    domain
}

/// Outcome of checking that the translates of the domain tile the chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingCheck {
    pub chambers: usize,
    pub domain_size: usize,
    pub group_order: usize,
    /// Every non-identity coset moves every chamber.
    pub free: bool,
    /// The translates of the domain are disjoint and cover every chamber.
    pub partition: bool,
}

impl TilingCheck {
    pub fn holds(&self) -> bool {
        self.free && self.partition && self.domain_size * self.group_order == self.chambers
    }
}

/// A path of adjacent chambers from the base chamber to `w(base)`, with the
/// reflections recorded at walls of the second kind.
#[derive(Clone, Debug)]
pub struct Gallery {
    pub target_coset: usize,
    pub chambers: Vec<usize>,
    /// Hyperplane crossed at each step.
    pub walls: Vec<usize>,
    /// `(step, coset)` for each crossing of a wall of the second kind, in
    /// crossing order.
    pub reflections: Vec<(usize, usize)>,
    pub reflection_matrices: Vec<RationalMatrix>,
    pub word_target: RationalMatrix,
}

impl Gallery {
    /// `s_n ... s_1`, the latest crossing leftmost.
    pub fn product(&self, dim: usize) -> RationalMatrix {
        self.reflection_matrices
            .iter()
            .fold(RationalMatrix::identity(dim), |acc, s| s.mul(&acc))
    }
}

/// All chamber data for one Levi datum.
#[derive(Clone, Debug)]
pub struct ChamberComplex {
    pub arrangement: RestrictedArrangement,
    pub chambers: Vec<Chamber>,
    pub wall_kinds: Vec<WallKind>,
    wall_reflection: Vec<Option<usize>>,
    /// Chamber permutation of each coset of `W'`.
    pub permutations: Vec<Vec<usize>>,
    pub base: usize,
    pub domain: Vec<usize>,
    by_mask: HashMap<u64, usize>,
}

impl ChamberComplex {
    pub fn new(report: &NormalizerReport, limit: usize) -> Result<Self> {
        let arrangement = restricted_arrangement(&report.datum)?;
        let chambers = enumerate_chambers(&arrangement, limit)?;
        let wall_reflection = wall_reflections(&arrangement, report);
        let wall_kinds = classify_walls(&arrangement, report);
        let permutations = chamber_permutations(&arrangement, &chambers, report)?;
        let by_mask: HashMap<u64, usize> = chambers.iter().enumerate().map(|(i, c)| (c.mask(), i)).collect();
        let base_signs = arrangement.signs_of(&arrangement.base_point()).expect("base point is generic");
        let base = by_mask[&mask_of(&base_signs)];
        let domain = fundamental_domain(&chambers, &permutations, base);
        Ok(ChamberComplex {
            arrangement,
            chambers,
            wall_kinds,
            wall_reflection,
            permutations,
            base,
            domain,
            by_mask,
        })
    }

    pub fn index_of_signs(&self, signs: &[Sign]) -> Option<usize> {
        self.by_mask.get(&mask_of(signs)).copied()
    }

    pub fn neighbors(&self, c: usize) -> Vec<(usize, usize)> {
        neighbors(&self.chambers, &self.by_mask, c)
    }

    /// Adjacent pairs `(c, d, wall)` with `c < d`.
    pub fn adjacency(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.chambers.len() {
            for (h, d) in self.neighbors(c) {
                if c < d {
                    out.push((c, d, h));
                }
            }
        }
        out
    }

    /// Walls of the base chamber with their kinds.
    pub fn base_walls(&self) -> Vec<(usize, WallKind)> {
        self.neighbors(self.base)
            .into_iter()
            .map(|(h, _)| (h, self.wall_kinds[h]))
            .collect()
    }

    /// Coset index `u` and domain chamber `d` with `u(d) = c`, for every
    /// chamber, if the translates of the domain partition the chambers.
    fn domain_copies(&self) -> Option<Vec<(usize, usize)>> {
        let mut copy = vec![None; self.chambers.len()];
        for (u, p) in self.permutations.iter().enumerate() {
            for &d in &self.domain {
                if copy[p[d]].replace((u, d)).is_some() {
                    return None;
                }
            }
        }
        copy.into_iter().collect()
    }

    pub fn check_tiling(&self) -> TilingCheck {
        let free = self
            .permutations
            .iter()
            .skip(1)
            .all(|p| p.iter().enumerate().all(|(c, &d)| c != d));
        TilingCheck {
            chambers: self.chambers.len(),
            domain_size: self.domain.len(),
            group_order: self.permutations.len(),
            free,
            partition: self.domain_copies().is_some(),
        }
    }
}

/// Finds a shortest gallery from the base chamber to `w(base)` and reads
/// off `w` as the product of the reflections met at walls of the second
/// kind. Requires `W'` to be a reflection group.
pub fn gallery_factorize(
    report: &NormalizerReport,
    complex: &ChamberComplex,
    w: &RationalMatrix,
) -> Result<Gallery> {
    if !report.is_reflection_group {
        return Err(Error::NotReflectionGroup);
    }
    let target_coset = report.coset_of_matrix(w).ok_or(Error::NotInGroup)?;
    let copies = complex.domain_copies().ok_or(Error::NoPath)?;
    let target = complex.permutations[target_coset][complex.base];

    let n = complex.chambers.len();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    visited[complex.base] = true;
    let mut queue = VecDeque::from([complex.base]);
    while let Some(c) = queue.pop_front() {
        if c == target {
            break;
        }
        for (h, d) in complex.neighbors(c) {
            if !visited[d] {
                visited[d] = true;
                prev[d] = Some((c, h));
                queue.push_back(d);
            }
        }
    }
    if !visited[target] {
        return Err(Error::NoPath);
    }
    let mut path = vec![target];
    let mut walls = Vec::new();
    while let Some((c, h)) = prev[*path.last().unwrap()] {
        path.push(c);
        walls.push(h);
    }
    path.reverse();
    walls.reverse();

    let dim = report.datum.dim();
    let mut reflections = Vec::new();
    let mut matrices = Vec::new();
    for (step, &h) in walls.iter().enumerate() {
        let u = copies[path[step]].0;
        let v = copies[path[step + 1]].0;
        if u == v {
            continue;
        }
        let mu_inv = report.action[u].inverse().expect("group elements are invertible");
        let s = report.action[v].mul(&mu_inv);
        let coset = report.coset_of_matrix(&s).ok_or(Error::NotInGroup)?;
        let fixes_wall = complex.wall_kinds[h] == WallKind::SecondKind && {
            let ker = s.sub(&RationalMatrix::identity(dim)).nullspace();
            let normal = complex.arrangement.normal(h);
            ker.len() + 1 == dim && ker.iter().all(|x| normal.dot(x).is_zero())
        };
        if !fixes_wall {
            return Err(Error::NoPath);
        }
        debug_assert!(complex.wall_reflection[h].is_some());
        reflections.push((step, coset));
        matrices.push(s);
    }
    Ok(Gallery {
        target_coset,
        chambers: path,
        walls,
        reflections,
        reflection_matrices: matrices,
        word_target: w.clone(),
    })
}
