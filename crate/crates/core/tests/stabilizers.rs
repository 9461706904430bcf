use std::sync::Arc;

use weylfold::folding::{diagram_automorphisms, fixed_space};
use weylfold::linalg::{rank_of, RationalVector};
use weylfold::rootsys::{build_root_system, RootSystem};
use weylfold::weyl::{
    fixed_subgroup, pointwise_stabilizer, setwise_stabilizer_of_subspace, GeneratedGroup, WeylElement,
    DEFAULT_CAP,
};

fn system(s: &str) -> Arc<RootSystem> {
    Arc::new(build_root_system(s.parse().unwrap()).unwrap())
}

/// `w` preserves `span(basis)` iff appending the images keeps the rank.
fn preserves_span_oracle(rs: &RootSystem, w: &WeylElement, basis: &[RationalVector]) -> bool {
    let mut all = basis.to_vec();
    all.extend(basis.iter().map(|b| w.act(rs, b).unwrap()));
    rank_of(&all) == rank_of(basis)
}

fn positions(g: &GeneratedGroup) -> Vec<Box<[u16]>> {
    let mut v: Vec<Box<[u16]>> = g.elements().iter().map(|w| w.perm().into()).collect();
    v.sort();
    v
}

#[test]
fn d4_order_three_subspace() {
    let rs = system("D4");
    let weyl = GeneratedGroup::weyl_group(rs.clone(), DEFAULT_CAP).unwrap();
    assert_eq!(weyl.order(), 192);

    let v_tau = vec![
        RationalVector::from_ints(&[0, 1, -1, 0]),
        RationalVector::from_ints(&[1, -1, 2, 0]),
    ];
    let tau = diagram_automorphisms(&rs)
        .into_iter()
        .find(|a| a.order() == 3 && rank_of(&{
            let mut v = fixed_space(&rs, a);
            v.extend(v_tau.iter().cloned());
            v
        }) == 2)
        .expect("an order-3 automorphism fixing the given plane");

    let setwise = setwise_stabilizer_of_subspace(&weyl, &v_tau).unwrap();
    let fixed = fixed_subgroup(&weyl, tau.induced()).unwrap();
    assert_eq!(setwise.order(), 12);
    assert_eq!(positions(&setwise), positions(&fixed));

    let brute: Vec<&WeylElement> = weyl
        .elements()
        .iter()
        .filter(|w| preserves_span_oracle(&rs, w, &v_tau))
        .collect();
    assert_eq!(brute.len(), 12);

    let pointwise = pointwise_stabilizer(&weyl, &v_tau).unwrap();
    assert_eq!(pointwise.order(), 1);
    let brute_fixers = weyl
        .elements()
        .iter()
        .filter(|w| v_tau.iter().all(|b| &w.act(&rs, b).unwrap() == b))
        .count();
    assert_eq!(brute_fixers, 1);
}

#[test]
fn fixed_subgroups_are_subspace_stabilizers() {
    let types = ["A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6"];
    for ty in types {
        let rs = system(ty);
        let weyl = GeneratedGroup::weyl_group(rs.clone(), DEFAULT_CAP).unwrap();
        assert_eq!(weyl.order() as u128, rs.weyl_order());
        for tau in diagram_automorphisms(&rs).iter().filter(|a| !a.is_identity()) {
            let basis = fixed_space(&rs, tau);
            let fixed = fixed_subgroup(&weyl, tau.induced()).unwrap();
            let setwise = setwise_stabilizer_of_subspace(&weyl, &basis).unwrap();
            assert_eq!(positions(&fixed), positions(&setwise), "{ty} {:?}", tau.perm());
            // commuting with tau, checked on the permutations directly
            let commuting = weyl
                .elements()
                .iter()
                .filter(|w| {
                    (0..rs.num_roots()).all(|k| tau.induced().apply(w.apply(k)) == w.apply(tau.induced().apply(k)))
                })
                .count();
            assert_eq!(commuting, fixed.order(), "{ty}");
        }
    }
}

#[test]
fn small_stabilizer_examples() {
    let rs = system("A3");
    let weyl = GeneratedGroup::weyl_group(rs.clone(), DEFAULT_CAP).unwrap();
    let flip = diagram_automorphisms(&rs).pop().unwrap();
    assert_eq!(fixed_subgroup(&weyl, flip.induced()).unwrap().order(), 8);
    let whole: Vec<RationalVector> = rs.simple_roots().to_vec();
    assert_eq!(setwise_stabilizer_of_subspace(&weyl, &whole).unwrap().order(), 24);
    assert_eq!(pointwise_stabilizer(&weyl, &[]).unwrap().order(), 24);

    let a2 = system("A2");
    let weyl = GeneratedGroup::weyl_group(a2.clone(), DEFAULT_CAP).unwrap();
    let line = vec![a2.simple_roots()[0].clone()];
    let brute = weyl
        .elements()
        .iter()
        .filter(|w| w.act(&a2, &line[0]).unwrap() == line[0])
        .count();
    assert_eq!(pointwise_stabilizer(&weyl, &line).unwrap().order(), brute);
}

#[test]
fn matrices_agree_with_permutations() {
    for ty in ["B3", "G2", "F4"] {
        let rs = system(ty);
        let weyl = GeneratedGroup::weyl_group(rs.clone(), DEFAULT_CAP).unwrap();
        for w in weyl.elements().iter().step_by(7) {
            let m = w.matrix(&rs);
            for k in 0..rs.num_roots() {
                assert_eq!(&m.mul_vec(rs.root(k)), rs.root(w.apply(k)));
            }
        }
    }
}

#[test]
fn large_groups_hit_the_cap() {
    let e7 = system("E7");
    assert!(matches!(
        GeneratedGroup::weyl_group(e7, DEFAULT_CAP),
        Err(weylfold::Error::CapExceeded { .. })
    ));
}
