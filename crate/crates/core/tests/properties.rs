use lsmodel::coweight::qr;
use lsmodel::galleries::{dim_gallery, enumerate_positively_folded, ls_dimension, minimal_gallery, target};
use lsmodel::paths::{
    classify, fold_dominant, generate_ls, ls_certificate, random_folded_path, stays_dominant, LsOptions, PLPath,
};
use lsmodel::repthy::{invariant_nonzero_fast, LsCache};
use lsmodel::weyl::{enumerate_group, share_chamber, WeylElement};
use lsmodel::{Coweight, RootSystem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TYPES: [&str; 4] = ["A1", "A2", "B2", "G2"];

fn rs(t: &str) -> RootSystem {
    RootSystem::from_str_type(t).unwrap()
}

fn rational_point(rank: usize) -> impl Strategy<Value = Coweight> {
    proptest::collection::vec((-12i64..=12, 1i64..=6), rank).prop_map(|v| Coweight(v.into_iter().map(|(a, b)| qr(a, b)).collect()))
}

fn typed_point() -> impl Strategy<Value = (RootSystem, Coweight)> {
    (0..TYPES.len()).prop_flat_map(|i| {
        let r = rs(TYPES[i]);
        let n = r.rank();
        (Just(r), rational_point(n))
    })
}

fn small_dominant(rank: usize, max: i64) -> impl Strategy<Value = Coweight> {
    proptest::collection::vec(0..=max, rank).prop_map(|v| Coweight::from_ints(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_dominant_and_in_orbit((r, x) in typed_point()) {
        let d = r.dominant_projection(&x);
        prop_assert!(d.is_dominant());
        prop_assert_eq!(r.dominant_projection(&d), d.clone());
        prop_assert_eq!(r.inner(&d, &d), r.inner(&x, &x));
        let (d2, word) = r.dominant_with_word(&x);
        prop_assert_eq!(&d2, &d);
        let back = word.iter().fold(x.clone(), |y, &i| r.reflect_simple(i, &y));
        prop_assert_eq!(back, d);
    }

    #[test]
    fn reflections_are_involutions((r, x) in typed_point(), b in 0usize..6) {
        let b = b % r.num_positive_roots();
        let y = r.reflect(b, &x);
        prop_assert_eq!(r.pair(b, &y), -r.pair(b, &x));
        prop_assert_eq!(r.reflect(b, &y), x.clone());
        prop_assert_eq!(r.inner(&y, &y), r.inner(&x, &x));
    }

    #[test]
    fn coweight_text_round_trip((r, x) in typed_point()) {
        prop_assert_eq!(r.parse_coweight(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn share_chamber_is_symmetric((r, x) in typed_point(), y in rational_point(2)) {
        let y = if r.rank() == 1 { Coweight(vec![y.0[0]]) } else { y };
        prop_assert_eq!(share_chamber(&r, &x, &y), share_chamber(&r, &y, &x));
        prop_assert!(share_chamber(&r, &x, &x));
    }

    #[test]
    fn group_products(i in 0..TYPES.len(), a in 0usize..12, b in 0usize..12) {
        let r = rs(TYPES[i]);
        let g = enumerate_group(&r);
        let (u, v) = (&g[a % g.len()], &g[b % g.len()]);
        let uv = u.mul(&r, v);
        let x = r.rho_vee();
        prop_assert_eq!(uv.apply(&x), u.apply(&v.apply(&x)));
        prop_assert_eq!((uv.length() + u.length() + v.length()) % 2, 0);
        prop_assert_eq!(uv.length(), uv.inversions(&r));
        prop_assert_eq!(WeylElement::from_word(&r, uv.word()), uv);
    }

    #[test]
    fn root_operators_invert(i in 0..TYPES.len(), l in small_dominant(2, 2), pick in 0usize..1000) {
        let r = rs(TYPES[i]);
        let l = Coweight(l.0[..r.rank()].to_vec());
        prop_assume!(!l.is_zero());
        let ls = generate_ls(&r, &l).unwrap();
        let p = &ls[pick % ls.len()];
        for a in 0..r.rank() {
            let q = p.q_value(a);
            let pv = p.p_value(a);
            prop_assert_eq!(pv + q, r.pair(r.simple_root_index(a), &p.endpoint()).to_integer());
            if let Some(f) = p.f_op(&r, a).unwrap() {
                prop_assert_eq!(f.endpoint(), &p.endpoint() - &r.simple_coroot(a));
                prop_assert_eq!(f.e_op(&r, a).unwrap(), Some(p.clone()));
                prop_assert!(ls.contains(&f));
            } else {
                prop_assert_eq!(pv, 0);
            }
            if let Some(e) = p.e_op(&r, a).unwrap() {
                prop_assert_eq!(e.endpoint(), &p.endpoint() + &r.simple_coroot(a));
                prop_assert_eq!(e.f_op(&r, a).unwrap(), Some(p.clone()));
            } else {
                prop_assert_eq!(q, 0);
            }
        }
    }

    #[test]
    fn ls_iff_hecke_on_folds(i in 0..TYPES.len(), l in small_dominant(2, 2), seed in any::<u64>()) {
        let r = rs(TYPES[i]);
        let l = Coweight(l.0[..r.rank()].to_vec());
        prop_assume!(!l.is_zero());
        let ls = generate_ls(&r, &l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_folded_path(&r, &l, &ls, &mut rng);
        let c = classify(&r, &p).unwrap();
        let ungraded = LsOptions { check_base: true, graded: false };
        prop_assert_eq!(ls_certificate(&r, &p, &l, ungraded).unwrap().is_some(), c.hecke);
        prop_assert_eq!(c.ls, ls.contains(&p));
        prop_assert!(!c.ls || c.hecke);
        if c.hecke {
            prop_assert!(c.positively_folded && c.billiard);
        }
    }

    #[test]
    fn folding_and_dilation((r, x) in typed_point(), k in 1i64..5) {
        let d = r.dominant_projection(&x);
        prop_assume!(!d.is_zero());
        let p = PLPath::straight(&d).translate(&x);
        let f = fold_dominant(&r, &p);
        prop_assert!(stays_dominant(&f, &Coweight::zero(r.rank())));
        prop_assert_eq!(r.dominant_projection(&f.endpoint()), r.dominant_projection(&p.endpoint()));
        prop_assert_eq!(f.dilate(k).endpoint(), f.endpoint().scale(qr(k, 1)));
        prop_assert_eq!(p.dilate(k).dilate(2), p.dilate(2 * k));
    }

    #[test]
    fn invariants_are_symmetric(l in small_dominant(2, 2), m in small_dominant(2, 2), n in small_dominant(2, 2)) {
        let r = rs("A2");
        let cache = LsCache::new();
        let a = invariant_nonzero_fast(&r, &l, &m, &n, &cache).unwrap();
        let plain = lsmodel::repthy::tensor_invariant_witness(&r, &l, &m, &n, &cache).unwrap().is_some();
        let swapped = lsmodel::repthy::tensor_invariant_witness(&r, &n, &l, &m, &cache).unwrap().is_some();
        prop_assert_eq!(a, plain);
        prop_assert_eq!(a, swapped);
        if a {
            prop_assert!(r.in_coroot_lattice(&(&(&l + &m) + &n)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gallery_dimension_bound(t in 0usize..3, l in small_dominant(2, 1), pick in 0usize..10_000) {
        let r = rs(["A1", "A2", "B2"][t]);
        let l = Coweight(l.0[..r.rank()].iter().map(|c| c + qr(1, 1)).collect());
        let model = minimal_gallery(&r, &l).unwrap();
        let all = enumerate_positively_folded(&r, &model);
        let g = &all[pick % all.len()];
        let mu = target(&r, &model, g);
        let bound = ls_dimension(&r, &l, &mu);
        prop_assert!(lsmodel::coweight::qi(dim_gallery(&r, g).unwrap() as i64) <= bound);
    }
}
