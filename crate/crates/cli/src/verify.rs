//! Self-check batteries run by `weylfold verify`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use weylfold::chambers::{gallery_factorize, ChamberComplex, DEFAULT_HYPERPLANE_LIMIT};
use weylfold::folding::{diagram_automorphisms, fixed_space, select_tau};
use weylfold::galois::compare_with_weyl_group;
use weylfold::levi::{levi_datum, normalizer_quotient};
use weylfold::linalg::{rank_of, RationalVector};
use weylfold::rootsys::{build_root_system, RootSystem};
use weylfold::weyl::{fixed_subgroup, pointwise_stabilizer, setwise_stabilizer_of_subspace, GeneratedGroup};
use weylfold::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check::new(name, false, format!("error: {err}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma12,
    Example29,
    Tiling,
    Galleries,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["lemma12", "example29", "tiling", "galleries", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma12 => "lemma12",
            Suite::Example29 => "example29",
            Suite::Tiling => "tiling",
            Suite::Galleries => "galleries",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma12" => Ok(Suite::Lemma12),
            "example29" => Ok(Suite::Example29),
            "tiling" => Ok(Suite::Tiling),
            "galleries" => Ok(Suite::Galleries),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidSpec(format!(
                "unknown suite {s:?}; expected one of {}",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

/// Types whose diagram automorphisms are checked against subspace
/// stabilizers.
pub const STABILIZER_TYPES: [&str; 9] = ["A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "E6"];

/// Targets of the folding comparison with their expected component counts.
pub const FOLDING_TARGETS: [(&str, usize); 8] = [
    ("B2", 2),
    ("B3", 3),
    ("B4", 4),
    ("C2", 2),
    ("C3", 3),
    ("C4", 4),
    ("F4", 4),
    ("G2", 2),
];

/// Every irreducible type of rank at most four.
pub const QUOTIENT_TYPES: [&str; 13] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2",
];

/// Every irreducible type of rank at most three.
pub const GALLERY_TYPES: [&str; 8] = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"];

pub fn run_suite(suite: Suite, cap: usize) -> Vec<Check> {
    match suite {
        Suite::Lemma12 => stabilizer_checks(cap),
        Suite::Example29 => folding_checks(cap),
        Suite::Tiling => tiling_checks(cap),
        Suite::Galleries => gallery_checks(cap),
        Suite::All => [Suite::Lemma12, Suite::Example29, Suite::Tiling, Suite::Galleries]
            .into_iter()
            .flat_map(|s| run_suite(s, cap))
            .collect(),
    }
}

fn system(ty: &str) -> Result<Arc<RootSystem>> {
    Ok(Arc::new(build_root_system(ty.parse()?)?))
}

fn labels(xs: impl IntoIterator<Item = usize>) -> String {
    let parts: Vec<String> = xs.into_iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(" "))
}

pub fn format_levi(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn sorted_perms(g: &GeneratedGroup) -> Vec<&[u16]> {
    let mut v: Vec<&[u16]> = g.elements().iter().map(|w| w.perm()).collect();
    v.sort_unstable();
    v
}

/// The order-three plane in `D4` and every nontrivial diagram automorphism
/// of the small simply-laced types.
pub fn stabilizer_checks(cap: usize) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(d4_plane_checks(cap));
    for ty in STABILIZER_TYPES {
        let rs = match system(ty) {
            Ok(rs) => rs,
            Err(e) => {
                out.push(Check::failed(format!("lemma12 {ty}"), &e));
                continue;
            }
        };
        let weyl = match GeneratedGroup::weyl_group(rs.clone(), cap) {
            Ok(w) => w,
            Err(e) => {
                out.push(Check::failed(format!("lemma12 {ty}"), &e));
                continue;
            }
        };
        for tau in diagram_automorphisms(&rs).iter().filter(|a| !a.is_identity()) {
            let name = format!("lemma12 {ty} tau={}", labels(tau.perm().iter().copied()));
            let basis = fixed_space(&rs, tau);
            let result = fixed_subgroup(&weyl, tau.induced()).and_then(|fixed| {
                let setwise = setwise_stabilizer_of_subspace(&weyl, &basis)?;
                Ok((fixed, setwise))
            });
            out.push(match result {
                Ok((fixed, setwise)) => Check::new(
                    name,
                    sorted_perms(&fixed) == sorted_perms(&setwise),
                    format!("fixed={} setwise={} of {}", fixed.order(), setwise.order(), weyl.order()),
                ),
                Err(e) => Check::failed(name, &e),
            });
        }
    }
    out
}

fn d4_plane_checks(cap: usize) -> Vec<Check> {
    let name = "lemma12 D4 order-3 plane";
    let run = || -> Result<Vec<Check>> {
        let rs = system("D4")?;
        let weyl = GeneratedGroup::weyl_group(rs.clone(), cap)?;
        let plane = vec![
            RationalVector::from_ints(&[0, 1, -1, 0]),
            RationalVector::from_ints(&[1, -1, 2, 0]),
        ];
        let tau = select_tau(&rs, 2)?;
        let mut both = fixed_space(&rs, &tau);
        both.extend(plane.iter().cloned());
        let same_plane = rank_of(&both) == 2;
        let fixed = fixed_subgroup(&weyl, tau.induced())?;
        let setwise = setwise_stabilizer_of_subspace(&weyl, &plane)?;
        let pointwise = pointwise_stabilizer(&weyl, &plane)?;
        Ok(vec![
            Check::new(
                format!("{name}: setwise stabilizer"),
                weyl.order() == 192 && same_plane && sorted_perms(&fixed) == sorted_perms(&setwise),
                format!(
                    "|W|={} fixed={} setwise={} plane_matches_tau={}",
                    weyl.order(),
                    fixed.order(),
                    setwise.order(),
                    same_plane
                ),
            ),
            Check::new(
                format!("{name}: pointwise stabilizer"),
                pointwise.order() == 1,
                format!("order={}", pointwise.order()),
            ),
        ])
    };
    run().unwrap_or_else(|e| vec![Check::failed(name, &e)])
}

/// Folded strata against independently enumerated Weyl groups of the
/// non-simply-laced types.
pub fn folding_checks(cap: usize) -> Vec<Check> {
    FOLDING_TARGETS
        .iter()
        .map(|&(ty, components)| {
            let name = format!("example29 {ty}");
            match ty.parse().and_then(|t| compare_with_weyl_group(t, cap)) {
                Ok(c) => Check::new(
                    format!("{name} from {}", c.stratum),
                    c.orders_match() && c.types_match() && c.stratum.r_bar == components,
                    format!(
                        "|W_B|={} |W(g)|={} types {}/{} components={}",
                        c.w_b_order, c.weyl_order, c.w_b_type, c.weyl_type, c.stratum.r_bar
                    ),
                ),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn subsets(rank: usize) -> Vec<Vec<usize>> {
    (0u32..1 << rank)
        .map(|m| (0..rank).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

/// Normalizer quotients and chamber tilings for every type of rank at most
/// four and every Levi subset.
pub fn tiling_checks(cap: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for ty in QUOTIENT_TYPES {
        let rs = match system(ty) {
            Ok(rs) => rs,
            Err(e) => {
                out.push(Check::failed(format!("quotient {ty}"), &e));
                continue;
            }
        };
        out.push(borel_representation_check(ty, &rs, cap));
        for j in subsets(rs.rank()) {
            let tag = format!("{ty} J={}", format_levi(&j));
            let report = match levi_datum(rs.clone(), &j).and_then(|d| normalizer_quotient(&d, cap)) {
                Ok(r) => r,
                Err(e) => {
                    out.push(Check::failed(format!("quotient {tag}"), &e));
                    continue;
                }
            };
            let n = report.normalizer.order();
            let q = report.quotient_order();
            let l = report.levi_group.order();
            out.push(Check::new(
                format!("quotient {tag}"),
                n == q * l && report.is_effective,
                format!("|N|={n} |W'|={q} |W_L|={l} effective={}", report.is_effective),
            ));
            if report.datum.dim() == 0 {
                continue;
            }
            out.push(match ChamberComplex::new(&report, DEFAULT_HYPERPLANE_LIMIT) {
                Ok(cx) => {
                    let t = cx.check_tiling();
                    Check::new(
                        format!("tiling {tag}"),
                        t.holds() && t.chambers % q == 0,
                        format!(
                            "chambers={} |W'|={} domain={} free={} partition={}",
                            t.chambers, q, t.domain_size, t.free, t.partition
                        ),
                    )
                }
                Err(e) => Check::failed(format!("tiling {tag}"), &e),
            });
        }
    }
    out
}

fn borel_representation_check(ty: &str, rs: &Arc<RootSystem>, cap: usize) -> Check {
    let name = format!("quotient {ty} J={{}}: reflection representation");
    let run = || -> Result<(bool, usize)> {
        let datum = levi_datum(rs.clone(), &[])?;
        let report = normalizer_quotient(&datum, cap)?;
        let weyl = GeneratedGroup::weyl_group(rs.clone(), cap)?;
        let basis = datum.k_basis();
        let mut ok = weyl.order() == report.quotient_order();
        for (w, m) in weyl.elements().iter().zip(&report.action) {
            for (b, v) in basis.iter().enumerate() {
                ok &= datum.coordinates(&w.act(rs, v)?)? == m.column(b);
            }
        }
        Ok((ok, weyl.order()))
    };
    match run() {
        Ok((ok, order)) => Check::new(name, ok, format!("{order} matrices compared")),
        Err(e) => Check::failed(name, &e),
    }
}

/// Gallery factorizations for every reflection quotient of rank at most
/// three.
pub fn gallery_checks(cap: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for ty in GALLERY_TYPES {
        let rs = match system(ty) {
            Ok(rs) => rs,
            Err(e) => {
                out.push(Check::failed(format!("galleries {ty}"), &e));
                continue;
            }
        };
        for j in subsets(rs.rank()) {
            if j.len() == rs.rank() {
                continue;
            }
            let name = format!("galleries {ty} J={}", format_levi(&j));
            let run = || -> Result<Option<(usize, usize, bool)>> {
                let report = normalizer_quotient(&levi_datum(rs.clone(), &j)?, cap)?;
                if !report.is_reflection_group {
                    return Ok(None);
                }
                let cx = ChamberComplex::new(&report, DEFAULT_HYPERPLANE_LIMIT)?;
                let dim = report.datum.dim();
                let mut good = 0;
                for w in &report.action {
                    let g = gallery_factorize(&report, &cx, w)?;
                    if &g.product(dim) == w {
                        good += 1;
                    }
                }
                let id = gallery_factorize(&report, &cx, &report.action[0])?;
                let empty = id.chambers == vec![cx.base] && id.reflection_matrices.is_empty();
                Ok(Some((good, report.action.len(), empty)))
            };
            match run() {
                Ok(Some((good, total, empty))) => out.push(Check::new(
                    name,
                    good == total && empty,
                    format!("{good}/{total} products match, identity gallery empty={empty}"),
                )),
                Ok(None) => {}
                Err(e) => out.push(Check::failed(name, &e)),
            }
        }
    }
    out
}
