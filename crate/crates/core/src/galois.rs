//! Products of folded Weyl groups over a list of singular strata.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::coxeter::{identify_coxeter_type, is_reflection, CoxeterLabel};
use crate::error::{Error, Result};
use crate::folding::{fold, select_tau};
use crate::linalg::{RationalMatrix, RationalVector};
use crate::rootsys::{build_root_system, Family, RootSystemSpec};
use crate::weyl::GeneratedGroup;

/// An ADE singularity type with the number of exceptional components over
/// the stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StratumSpec {
    pub ade: RootSystemSpec,
    pub r_bar: usize,
}

impl FromStr for StratumSpec {
    type Err = Error;

    /// Parses `TYPE:R_BAR`, for example `D4:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (ty, r) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected TYPE:R_BAR, got {s:?}")))?;
        let ade: RootSystemSpec = ty.trim().parse()?;
        let r_bar = r
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad r_bar in {s:?}")))?;
        Ok(StratumSpec { ade, r_bar })
    }
}

impl fmt::Display for StratumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.ade, self.r_bar)
    }
}

/// Parses a comma-separated list of strata. The empty string gives the
/// empty list.
pub fn parse_strata(s: &str) -> Result<Vec<StratumSpec>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRow {
    pub stratum: StratumSpec,
    pub tau_order: usize,
    pub w_b_type: CoxeterLabel,
    pub w_b_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisReport {
    /// One row per stratum, in input order.
    pub rows: Vec<StratumRow>,
    pub total_order: u128,
    pub label: CoxeterLabel,
}

/// The product of the groups `W_B` over all strata.
pub fn galois_group(strata: &[StratumSpec], cap: usize) -> Result<GaloisReport> {
    let mut cache: HashMap<StratumSpec, StratumRow> = HashMap::new();
    let mut rows = Vec::with_capacity(strata.len());
    for s in strata {
        let row = match cache.get(s) {
            Some(r) => r.clone(),
            None => {
                let rs = Arc::new(build_root_system(s.ade)?);
                let tau = select_tau(&rs, s.r_bar)?;
                let rep = fold(rs, &tau, cap)?;
                let row = StratumRow {
                    stratum: *s,
                    tau_order: tau.order(),
                    w_b_type: rep.w_b_type,
                    w_b_order: rep.w_b_order,
                };
                cache.insert(*s, row.clone());
                row
            }
        };
        rows.push(row);
    }
    let total_order = rows.iter().try_fold(1u128, |acc, r| {
        acc.checked_mul(r.w_b_order as u128)
            .ok_or_else(|| Error::Overflow("total order exceeds u128".into()))
    })?;
    let label = CoxeterLabel::product(rows.iter().map(|r| &r.w_b_type));
    Ok(GaloisReport {
        rows,
        total_order,
        label,
    })
}

/// Comparison of the folded group of an ADE stratum with the Weyl group of
/// a non-simply-laced type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingComparison {
    pub target: RootSystemSpec,
    pub stratum: StratumSpec,
    pub tau_order: usize,
    pub w_b_order: usize,
    pub w_b_type: CoxeterLabel,
    pub weyl_order: usize,
    pub weyl_type: CoxeterLabel,
}

impl FoldingComparison {
    pub fn orders_match(&self) -> bool {
        self.w_b_order == self.weyl_order
    }

    pub fn types_match(&self) -> bool {
        self.w_b_type == self.weyl_type
    }
}

/// The ADE stratum whose folding produces the Weyl group of `target`:
/// `B_m` from `A_{2m-1}`, `C_m` from `D_{m+1}`, `F4` from `E6` and `G2`
/// from `D4`.
pub fn folding_source(target: RootSystemSpec) -> Result<StratumSpec> {
    let m = target.rank();
    let (family, rank, r_bar) = match target.family() {
        Family::B if m >= 2 => (Family::A, 2 * m - 1, m),
        Family::C if m >= 2 => (Family::D, m + 1, m),
        Family::F => (Family::E, 6, 4),
        Family::G => (Family::D, 4, 2),
        _ => {
            return Err(Error::InvalidSpec(format!(
                "{target} is not one of B_m, C_m (m >= 2), F4, G2"
            )))
        }
    };
    Ok(StratumSpec {
        ade: RootSystemSpec::new(family, rank)?,
        r_bar,
    })
}

/// Folds the stratum attached to `target` and compares the result with an
/// independent enumeration of `W(target)`.
pub fn compare_with_weyl_group(target: RootSystemSpec, cap: usize) -> Result<FoldingComparison> {
    let stratum = folding_source(target)?;
    let row = galois_group(&[stratum], cap)?.rows.remove(0);

    let rs = Arc::new(build_root_system(target)?);
    let n = rs.rank();
    let weyl = GeneratedGroup::weyl_group(rs.clone(), cap)?;
    let action: Vec<RationalMatrix> = weyl
        .elements()
        .iter()
        .map(|w| {
            let cols: Vec<RationalVector> = (0..n)
                .map(|j| RationalVector::from_ints(rs.coefficients(w.apply(j))))
                .collect();
            RationalMatrix::from_columns(n, &cols)
        })
        .collect();
    let reflections: Vec<RationalMatrix> = action.iter().filter(|m| is_reflection(m)).cloned().collect();
    let weyl_type = identify_coxeter_type(&action, &reflections)?;
    Ok(FoldingComparison {
        target,
        stratum,
        tau_order: row.tau_order,
        w_b_order: row.w_b_order,
        w_b_type: row.w_b_type,
        weyl_order: weyl.order(),
        weyl_type,
    })
}
