//! One function per subcommand, each producing a JSON value and a text
//! rendering of the same report.

use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use weylfold::chambers::{gallery_factorize, ChamberComplex};
use weylfold::folding::{fold as fold_group, select_tau};
use weylfold::galois::{compare_with_weyl_group, galois_group, StratumSpec};
use weylfold::levi::{levi_datum, normalizer_quotient};
use weylfold::linalg::{RationalMatrix, RationalVector};
use weylfold::rootsys::{build_root_system, RootSystemSpec};
use weylfold::{Error, Result};

use crate::verify::{format_levi, run_suite, Check, Suite};

pub const SCHEMA_VERSION: &str = "1";
pub const SPACE_LABEL: &str = "k(p) (dual model of M(L)⊗R)";

pub struct Report {
    pub json: Value,
    pub text: String,
    /// Set by `verify` when some check failed.
    pub failed_check: Option<String>,
}

impl Report {
    fn new(command: &str, fields: Value, text: String) -> Self {
        let mut map = match fields {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
        Report {
            json: Value::Object(map),
            text,
            failed_check: None,
        }
    }
}

fn vector(v: &RationalVector) -> Value {
    json!(v.to_strings())
}

fn matrix(m: &RationalMatrix) -> Value {
    json!(m.to_strings())
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|i| i + 1).collect()
}

fn parse_type(ty: &str) -> Result<RootSystemSpec> {
    ty.parse()
}

pub fn rootsys(ty: &str) -> Result<Report> {
    let rs = build_root_system(parse_type(ty)?)?;
    let roots: Vec<Value> = (0..rs.num_roots())
        .map(|k| {
            json!({
                "coordinates": vector(rs.root(k)),
                "coefficients": rs.coefficients(k),
                "height": rs.height(k),
            })
        })
        .collect();
    let simple: Vec<Value> = rs.simple_roots().iter().map(vector).collect();
    let fields = json!({
        "type": rs.spec().to_string(),
        "rank": rs.rank(),
        "ambient_dim": rs.ambient_dim(),
        "num_roots": rs.num_roots(),
        "num_positive": rs.num_positive(),
        "simple_roots": simple,
        "roots": roots,
        "cartan": rs.cartan(),
        "form": matrix(rs.form()),
        "weyl_order": rs.weyl_order().to_string(),
    });

    let mut t = String::new();
    writeln!(t, "root system {}", rs.spec()).unwrap();
    writeln!(t, "rank {}, ambient dimension {}", rs.rank(), rs.ambient_dim()).unwrap();
    writeln!(t, "roots: {} ({} positive)", rs.num_roots(), rs.num_positive()).unwrap();
    writeln!(t, "simple roots:").unwrap();
    for (i, a) in rs.simple_roots().iter().enumerate() {
        writeln!(t, "  alpha_{} = {a}", i + 1).unwrap();
    }
    writeln!(t, "cartan matrix:").unwrap();
    for row in rs.cartan() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>2}")).collect();
        writeln!(t, "  {}", cells.join(" ")).unwrap();
    }
    writeln!(t, "|W| = {}", rs.weyl_order()).unwrap();
    Ok(Report::new("rootsys", fields, t))
}

pub fn fold(ty: &str, r_bar: usize, cap: usize) -> Result<Report> {
    let rs = Arc::new(build_root_system(parse_type(ty)?)?);
    let tau = select_tau(&rs, r_bar)?;
    let rep = fold_group(rs.clone(), &tau, cap)?;
    let orbits: Vec<Vec<usize>> = rep.orbits.iter().map(|o| one_based(o)).collect();
    let gen_matrices: Vec<Value> = rep
        .w_b
        .generators()
        .iter()
        .map(|g| {
            let i = rep.w_b.index_of(g).expect("generators are elements");
            matrix(&rep.w_b_action[i])
        })
        .collect();
    let fields = json!({
        "type": rep.source.to_string(),
        "r_bar": rep.r_bar,
        "tau": { "perm": one_based(tau.perm()), "order": tau.order() },
        "orbits": orbits,
        "fixed_space_basis": rep.fixed_space_basis.iter().map(vector).collect::<Vec<_>>(),
        "W_order": rep.weyl_order,
        "W_B_order": rep.w_b_order,
        "W_B_type": rep.w_b_type.to_string(),
        "W_B_generators": gen_matrices,
        "restriction_faithful": rep.restriction_faithful,
    });

    let mut t = String::new();
    writeln!(t, "fold {} with r_bar = {}", rep.source, rep.r_bar).unwrap();
    writeln!(t, "tau: {:?} (order {})", one_based(tau.perm()), tau.order()).unwrap();
    let orbit_text: Vec<String> = orbits.iter().map(|o| format_levi(o)).collect();
    writeln!(t, "orbits: {}", orbit_text.join(" ")).unwrap();
    writeln!(t, "fixed space basis:").unwrap();
    for v in &rep.fixed_space_basis {
        writeln!(t, "  {v}").unwrap();
    }
    writeln!(t, "|W| = {}", rep.weyl_order).unwrap();
    writeln!(t, "|W_B| = {}", rep.w_b_order).unwrap();
    writeln!(t, "W_B type: {}", rep.w_b_type).unwrap();
    writeln!(t, "restriction to the fixed space is faithful: {}", rep.restriction_faithful).unwrap();
    Ok(Report::new("fold", fields, t))
}

pub fn normalizer(ty: &str, levi: &[usize], cap: usize, birational: bool) -> Result<Report> {
    let rs = Arc::new(build_root_system(parse_type(ty)?)?);
    let datum = levi_datum(rs, levi)?;
    let rep = normalizer_quotient(&datum, cap)?;
    let fields = json!({
        "type": datum.system().spec().to_string(),
        "levi": datum.labels(),
        "levi_root_count": datum.levi_roots().len(),
        "space": SPACE_LABEL,
        "k_dim": datum.dim(),
        "k_basis": datum.k_basis().iter().map(vector).collect::<Vec<_>>(),
        "W_order": rep.weyl_order,
        "W_L_order": rep.levi_group.order(),
        "N_W_L_order": rep.normalizer.order(),
        "W_prime_order": rep.quotient_order(),
        "W_prime_action": rep.action.iter().map(matrix).collect::<Vec<_>>(),
        "is_effective": rep.is_effective,
        "is_reflection_group": rep.is_reflection_group,
        "reflection_generators": rep.reflection_generators.iter().map(matrix).collect::<Vec<_>>(),
        "coxeter_type": rep.type_label(),
        "birationality_assumed": birational,
    });

    let mut t = String::new();
    writeln!(t, "normalizer quotient for {} with J = {}", datum.system().spec(), format_levi(&datum.labels())).unwrap();
    writeln!(t, "space: {SPACE_LABEL}, dimension {}", datum.dim()).unwrap();
    writeln!(t, "|W| = {}, |W_L| = {}, |N_W(L)| = {}", rep.weyl_order, rep.levi_group.order(), rep.normalizer.order()).unwrap();
    writeln!(t, "|W'| = {}", rep.quotient_order()).unwrap();
    writeln!(t, "effective: {}", rep.is_effective).unwrap();
    writeln!(t, "reflection group: {}", rep.is_reflection_group).unwrap();
    writeln!(t, "type: {}", rep.type_label()).unwrap();
    writeln!(t, "birationality assumed: {birational}").unwrap();
    for (i, m) in rep.action.iter().enumerate() {
        writeln!(t, "  w'_{i} = {m}").unwrap();
    }
    Ok(Report::new("normalizer", fields, t))
}

pub fn chambers(ty: &str, levi: &[usize], max_hyperplanes: usize, cap: usize, birational: bool) -> Result<Report> {
    let rs = Arc::new(build_root_system(parse_type(ty)?)?);
    let datum = levi_datum(rs, levi)?;
    let rep = normalizer_quotient(&datum, cap)?;
    let cx = ChamberComplex::new(&rep, max_hyperplanes)?;
    let arr = &cx.arrangement;
    let tiling = cx.check_tiling();

    let hyperplanes: Vec<Value> = (0..arr.len())
        .map(|h| {
            json!({
                "normal": vector(&arr.normal(h)),
                "root_sources": arr.sources(h),
                "kind": cx.wall_kinds[h].to_string(),
            })
        })
        .collect();
    let chambers: Vec<Value> = cx
        .chambers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "signs": c.sign_string(),
                "witness": vector(&c.witness),
                "in_domain": cx.domain.binary_search(&i).is_ok(),
            })
        })
        .collect();
    let galleries: Value = if rep.is_reflection_group {
        let mut out = Vec::new();
        for w in &rep.action {
            let g = gallery_factorize(&rep, &cx, w)?;
            out.push(json!({
                "target": g.target_coset,
                "chamber_path": g.chambers,
                "walls": g.walls,
                "wall_reflections": g.reflection_matrices.iter().map(matrix).collect::<Vec<_>>(),
                "word_target": matrix(&g.word_target),
                "product_matches": g.product(datum.dim()) == g.word_target,
            }));
        }
        Value::Array(out)
    } else {
        Value::Null
    };
    let fields = json!({
        "type": datum.system().spec().to_string(),
        "levi": datum.labels(),
        "space": SPACE_LABEL,
        "k_dim": datum.dim(),
        "hyperplanes": hyperplanes,
        "chambers": chambers,
        "base_chamber": cx.base,
        "fundamental_domain": cx.domain,
        "W_prime_order": rep.quotient_order(),
        "coxeter_type": rep.type_label(),
        "is_reflection_group": rep.is_reflection_group,
        "tiling": {
            "chamber_count": tiling.chambers,
            "domain_size": tiling.domain_size,
            "free": tiling.free,
            "partition": tiling.partition,
            "holds": tiling.holds(),
        },
        "galleries": galleries,
        "birationality_assumed": birational,
    });

    let mut t = String::new();
    writeln!(t, "chambers for {} with J = {}", datum.system().spec(), format_levi(&datum.labels())).unwrap();
    writeln!(t, "space: {SPACE_LABEL}, dimension {}", datum.dim()).unwrap();
    writeln!(t, "hyperplanes: {}", arr.len()).unwrap();
    for h in 0..arr.len() {
        writeln!(t, "  H{h}: normal {} ({})", arr.normal(h), cx.wall_kinds[h]).unwrap();
    }
    writeln!(t, "chambers: {}", cx.chambers.len()).unwrap();
    for (i, c) in cx.chambers.iter().enumerate() {
        let mark = if cx.domain.binary_search(&i).is_ok() { "*" } else { " " };
        writeln!(t, " {mark}C{i}: {} witness {}", c.sign_string(), c.witness).unwrap();
    }
    writeln!(t, "|W'| = {} ({})", rep.quotient_order(), rep.type_label()).unwrap();
    writeln!(t, "fundamental domain: {} chambers (marked *)", cx.domain.len()).unwrap();
    writeln!(t, "tiling: free={} partition={}", tiling.free, tiling.partition).unwrap();
    writeln!(t, "birationality assumed: {birational}").unwrap();
    Ok(Report::new("chambers", fields, t))
}

pub fn galois(strata: &[StratumSpec], cap: usize) -> Result<Report> {
    let rep = galois_group(strata, cap)?;
    let total = u64::try_from(rep.total_order).map_err(|_| Error::Overflow("total order exceeds 64 bits".into()))?;
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "type": r.stratum.ade.to_string(),
                "r_bar": r.stratum.r_bar,
                "tau_order": r.tau_order,
                "W_B_type": r.w_b_type.to_string(),
                "W_B_order": r.w_b_order,
            })
        })
        .collect();
    let fields = json!({
        "strata": rows,
        "total_order": total,
        "group_label": rep.label.to_string(),
    });

    let mut t = String::new();
    writeln!(t, "strata: {}", rep.rows.len()).unwrap();
    for r in &rep.rows {
        writeln!(t, "  {}: W_B = {} of order {}", r.stratum, r.w_b_type, r.w_b_order).unwrap();
    }
    writeln!(t, "group: {}", rep.label).unwrap();
    writeln!(t, "total order: {total}").unwrap();
    Ok(Report::new("galois", fields, t))
}

pub fn example29(g: &str, cap: usize) -> Result<Report> {
    let c = compare_with_weyl_group(parse_type(g)?, cap)?;
    let fields = json!({
        "g": c.target.to_string(),
        "stratum_type": c.stratum.ade.to_string(),
        "component_count": c.stratum.r_bar,
        "tau_order": c.tau_order,
        "W_B_order": c.w_b_order,
        "W_B_type": c.w_b_type.to_string(),
        "W_g_order": c.weyl_order,
        "W_g_type": c.weyl_type.to_string(),
        "orders_match": c.orders_match(),
        "types_match": c.types_match(),
    });
    let mut t = String::new();
    writeln!(t, "g = {}: stratum {} with {} components", c.target, c.stratum.ade, c.stratum.r_bar).unwrap();
    writeln!(t, "tau order {}", c.tau_order).unwrap();
    writeln!(t, "|W_B| = {} ({})", c.w_b_order, c.w_b_type).unwrap();
    writeln!(t, "|W(g)| = {} ({})", c.weyl_order, c.weyl_type).unwrap();
    writeln!(t, "orders match: {}, types match: {}", c.orders_match(), c.types_match()).unwrap();
    Ok(Report::new("example29", fields, t))
}

pub fn verify(suite: Suite, cap: usize) -> Report {
    let checks = run_suite(suite, cap);
    let failed: Option<&Check> = checks.iter().find(|c| !c.passed);
    let fields = json!({
        "suite": suite.name(),
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "passed": failed.is_none(),
    });
    let mut t = String::new();
    for c in &checks {
        writeln!(t, "{c}").unwrap();
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    writeln!(t, "{passed}/{} checks passed", checks.len()).unwrap();
    let mut report = Report::new("verify", fields, t);
    report.failed_check = failed.map(|c| c.name.clone());
    report
}
