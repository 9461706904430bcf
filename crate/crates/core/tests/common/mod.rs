#![allow(dead_code)]

use std::sync::Arc;

use weylfold::levi::{levi_datum, normalizer_quotient, LeviDatum, NormalizerReport};
use weylfold::rootsys::{build_root_system, RootSystem};
use weylfold::weyl::DEFAULT_CAP;

pub const SMALL_TYPES: [&str; 14] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2", "D3",
];

pub fn system(s: &str) -> Arc<RootSystem> {
    Arc::new(build_root_system(s.parse().unwrap()).unwrap())
}

/// Every subset of Bourbaki labels `1..=rank`, as label lists.
pub fn subsets(rank: usize) -> Vec<Vec<usize>> {
    (0u32..1 << rank)
        .map(|m| (0..rank).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

pub fn datum(ty: &str, labels: &[usize]) -> LeviDatum {
    levi_datum(system(ty), labels).unwrap()
}

pub fn report(ty: &str, labels: &[usize]) -> NormalizerReport {
    normalizer_quotient(&datum(ty, labels), DEFAULT_CAP).unwrap()
}
