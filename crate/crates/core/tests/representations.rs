use std::collections::BTreeMap;

use lsmodel::repthy::{
    character_product_oracle, cone_membership, lr_multiplicity, ls_character, mult_freudenthal, mult_ls,
    pipeline_steps45, saturation_scan, tensor_decomposition, tensor_invariant_nonzero, weyl_dimension, LsCache,
    ScanConfig, SearchConfig,
};
use lsmodel::{Coweight, RootSystem};

fn rs(t: &str) -> RootSystem {
    RootSystem::from_str_type(t).unwrap()
}

fn w(v: &[i64]) -> Coweight {
    Coweight::from_ints(v)
}

/// sl3 character from Gelfand–Tsetlin patterns with top row (a+b, b, 0).
fn gt_character(a: i64, b: i64) -> BTreeMap<(i64, i64), u64> {
    let (m1, m2, m3) = (a + b, b, 0);
    let mut out = BTreeMap::new();
    for x1 in m2..=m1 {
        for x2 in m3..=m2 {
            for y in x2..=x1 {
                let e = [y, x1 + x2 - y, m1 + m2 + m3 - x1 - x2];
                *out.entry((e[0] - e[1], e[1] - e[2])).or_insert(0) += 1;
            }
        }
    }
    out
}

/// sl3 tensor product multiplicities from GT characters, by peeling.
fn gt_tensor(l: (i64, i64), m: (i64, i64)) -> BTreeMap<(i64, i64), u64> {
    let mut prod: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for (x, a) in gt_character(l.0, l.1) {
        for (y, b) in gt_character(m.0, m.1) {
            *prod.entry((x.0 + y.0, x.1 + y.1)).or_insert(0) += (a * b) as i64;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        prod.retain(|_, c| *c != 0);
        let Some(top) = prod.keys().max_by_key(|(p, q)| (p + q, *p)).copied() else { break };
        let c = prod[&top];
        assert!(c > 0 && top.0 >= 0 && top.1 >= 0);
        out.insert(top, c as u64);
        for (x, a) in gt_character(top.0, top.1) {
            *prod.entry(x).or_insert(0) -= c * a as i64;
        }
    }
    out
}

#[test]
fn sl2_strings() {
    let a1 = rs("A1");
    for l in 0..=6 {
        let ch = ls_character(&a1, &w(&[l])).unwrap();
        let expect: BTreeMap<Coweight, u64> = (0..=l).map(|k| (w(&[l - 2 * k]), 1)).collect();
        assert_eq!(ch, expect);
    }
    assert_eq!(mult_ls(&a1, &w(&[2]), &w(&[0])).unwrap(), 1);
}

#[test]
fn sl3_characters_match_patterns() {
    let a2 = rs("A2");
    for a in 0..=3 {
        for b in 0..=3 - a {
            let ch = ls_character(&a2, &w(&[a, b])).unwrap();
            let ours: BTreeMap<(i64, i64), u64> = ch.iter().map(|(k, &v)| ((k.to_ints().unwrap()[0], k.to_ints().unwrap()[1]), v)).collect();
            assert_eq!(ours, gt_character(a, b), "({a},{b})");
            assert_eq!(weyl_dimension(&a2, &w(&[a, b])) as u64, ours.values().sum::<u64>());
        }
    }
    assert_eq!(mult_ls(&a2, &w(&[1, 1]), &w(&[0, 0])).unwrap(), 2);
    assert_eq!(mult_freudenthal(&a2, &w(&[1, 1]), &w(&[0, 0])).unwrap(), 2);
    // μ not below λ
    assert_eq!(mult_ls(&a2, &w(&[1, 0]), &w(&[0, 1])).unwrap(), 0);
    assert_eq!(mult_ls(&a2, &w(&[2, 1]), &w(&[2, 1])).unwrap(), 1);
}

#[test]
fn sl3_tensor_products_match_patterns() {
    let a2 = rs("A2");
    let cache = LsCache::new();
    for l in [(1, 0), (1, 1), (2, 0), (0, 2), (2, 1)] {
        for m in [(1, 0), (0, 1), (1, 1), (2, 1)] {
            let t = tensor_decomposition(&a2, &w(&[l.0, l.1]), &w(&[m.0, m.1]), &cache).unwrap();
            let ours: BTreeMap<(i64, i64), u64> = t.entries.iter().map(|(k, &v)| ((k.to_ints().unwrap()[0], k.to_ints().unwrap()[1]), v)).collect();
            assert_eq!(ours, gt_tensor(l, m), "{l:?} ⊗ {m:?}");
        }
    }
}

#[test]
fn clebsch_gordan() {
    let a1 = rs("A1");
    let cache = LsCache::new();
    for (a, b) in [(2, 2), (3, 1), (4, 2), (0, 5)] {
        let t = tensor_decomposition(&a1, &w(&[a]), &w(&[b]), &cache).unwrap();
        let expect: BTreeMap<Coweight, u64> = (0..=a.min(b)).map(|k| (w(&[a + b - 2 * k]), 1)).collect();
        assert_eq!(t.entries, expect);
        assert_eq!(character_product_oracle(&a1, &w(&[a]), &w(&[b])).unwrap().entries, expect);
    }
}

#[test]
fn invariants_and_lr_examples() {
    let a2 = rs("A2");
    let cache = LsCache::new();
    let (w1, w2) = (w(&[1, 0]), w(&[0, 1]));
    assert!(tensor_invariant_nonzero(&a2, &w1, &w1, &w1).unwrap());
    assert!(!tensor_invariant_nonzero(&a2, &w1, &w1, &w2).unwrap());
    assert_eq!(lr_multiplicity(&a2, &w1, &w1, &w1, &cache).unwrap(), 1);
    assert_eq!(lr_multiplicity(&a2, &w1, &w1, &w2, &cache).unwrap(), 0);
    let theta = w(&[1, 1]);
    assert_eq!(lr_multiplicity(&a2, &theta, &theta, &theta, &cache).unwrap(), 2);
    for l in [w(&[2, 1]), w(&[0, 3])] {
        let star = a2.star(&l).unwrap();
        let zero = w(&[0, 0]);
        assert_eq!(lr_multiplicity(&a2, &l, &zero, &star, &cache).unwrap(), 1);
        let c = cone_membership(&a2, &l, &zero, &star, &SearchConfig::default(), &cache).unwrap();
        assert!(c.member);
        let t = tensor_decomposition(&a2, &l, &zero, &cache).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(l.clone(), 1)]));
    }
}

#[test]
fn witness_polygons_are_in_the_cone() {
    let b2 = rs("B2");
    let cache = LsCache::new();
    for (l, m, n) in [([1, 0], [1, 0], [2, 0]), ([1, 1], [1, 1], [0, 2]), ([0, 2], [1, 0], [1, 0])] {
        let (l, m, n) = (w(&l), w(&m), w(&n));
        let nonzero = tensor_invariant_nonzero(&b2, &l, &m, &n).unwrap();
        let c = cone_membership(&b2, &l, &m, &n, &SearchConfig::default(), &cache).unwrap();
        if nonzero {
            assert_eq!(c.via, "tensor-witness");
            assert!(c.member);
        }
    }
}

#[test]
fn b2_triple_nonzero_only_at_two() {
    let b2 = rs("B2");
    let cache = LsCache::new();
    let (l, m, n) = (w(&[2, 1]), w(&[0, 2]), w(&[0, 2]));
    assert!(!tensor_invariant_nonzero(&b2, &l, &m, &n).unwrap());
    assert!(tensor_invariant_nonzero(&b2, &l.scale(2.into()), &m.scale(2.into()), &n.scale(2.into())).unwrap());
    let c = cone_membership(&b2, &l, &m, &n, &SearchConfig::default(), &cache).unwrap();
    assert!(c.member);
    assert_eq!(c.via, "search");
    let trace = pipeline_steps45(&b2, &l, &m, &n, 2, &SearchConfig::default(), &cache).unwrap();
    assert!(trace.ok, "{:?}", trace.failures());
    assert!(tensor_invariant_nonzero(&b2, &l.scale(4.into()), &m.scale(4.into()), &n.scale(4.into())).unwrap());
}

#[test]
fn small_scans() {
    let cfg = ScanConfig { bound: 1, n_max: 2, search: SearchConfig::default(), pipeline: true };
    for t in ["A1", "A2", "B2"] {
        let r = saturation_scan(&rs(t), &cfg, 2).unwrap();
        assert_eq!(r.theorem_violations, 0, "{t}");
        assert_eq!(r.cone_saturation_failures, 0, "{t}");
        assert_eq!(r.pipeline_failures, 0, "{t}");
        assert!(r.k_conjecture_holds, "{t}");
        assert!(r.records.iter().filter(|x| x.invariants.iter().all(|b| !b)).all(|x| x.theorem_ok));
    }
}
