use std::sync::Arc;

use proptest::prelude::*;
use weylfold::galois::{galois_group, parse_strata, StratumSpec};
use weylfold::rootsys::build_root_system;
use weylfold::weyl::{GeneratedGroup, DEFAULT_CAP};
use weylfold::folding::select_tau;

/// Order of `W_B` by filtering the whole Weyl group.
fn brute_force_order(s: &StratumSpec) -> usize {
    let rs = Arc::new(build_root_system(s.ade).unwrap());
    let tau = select_tau(&rs, s.r_bar).unwrap();
    let weyl = GeneratedGroup::weyl_group(rs, DEFAULT_CAP).unwrap();
    weyl.elements()
        .iter()
        .filter(|w| &tau.induced().conjugate(w) == *w)
        .count()
}

#[test]
fn two_strata_product() {
    let strata = parse_strata("A3:2,D4:3").unwrap();
    let rep = galois_group(&strata, DEFAULT_CAP).unwrap();
    assert_eq!(rep.total_order, 384);
    let oracle: usize = strata.iter().map(brute_force_order).product();
    assert_eq!(rep.total_order, oracle as u128);
    assert_eq!(rep.label.to_string(), "BC2 x BC3");

    let single = galois_group(&parse_strata("A3:2").unwrap(), DEFAULT_CAP).unwrap();
    assert_eq!((single.total_order, single.label.to_string()), (8, "BC2".to_string()));
    assert_eq!(galois_group(&[], DEFAULT_CAP).unwrap().total_order, 1);
}

#[test]
fn inadmissible_strata_are_rejected() {
    assert!(galois_group(&parse_strata("A3:1").unwrap(), DEFAULT_CAP).is_err());
    assert!(galois_group(&parse_strata("B3:3").unwrap(), DEFAULT_CAP).is_err());
}

const POOL: [&str; 8] = ["A1:1", "A2:1", "A3:2", "A3:3", "D4:2", "D4:3", "D4:4", "A4:2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn concatenation_is_multiplicative(
        a in proptest::collection::vec(0usize..POOL.len(), 0..4),
        b in proptest::collection::vec(0usize..POOL.len(), 0..4),
    ) {
        let pa: Vec<StratumSpec> = a.iter().map(|&i| POOL[i].parse().unwrap()).collect();
        let pb: Vec<StratumSpec> = b.iter().map(|&i| POOL[i].parse().unwrap()).collect();
        let joined: Vec<StratumSpec> = pa.iter().chain(&pb).copied().collect();
        let ra = galois_group(&pa, DEFAULT_CAP).unwrap();
        let rb = galois_group(&pb, DEFAULT_CAP).unwrap();
        let rj = galois_group(&joined, DEFAULT_CAP).unwrap();
        prop_assert_eq!(rj.total_order, ra.total_order * rb.total_order);
    }

    #[test]
    fn permuting_strata_permutes_rows(
        idx in proptest::collection::vec(0usize..POOL.len(), 1..5),
        seed in any::<u64>(),
    ) {
        let strata: Vec<StratumSpec> = idx.iter().map(|&i| POOL[i].parse().unwrap()).collect();
        let mut shuffled = strata.clone();
        let mut s = seed | 1;
        for i in (1..shuffled.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let r1 = galois_group(&strata, DEFAULT_CAP).unwrap();
        let r2 = galois_group(&shuffled, DEFAULT_CAP).unwrap();
        prop_assert_eq!(r1.total_order, r2.total_order);
        prop_assert_eq!(&r1.label, &r2.label);
        for (row, s) in r2.rows.iter().zip(&shuffled) {
            prop_assert_eq!(&row.stratum, s);
        }
    }
}
