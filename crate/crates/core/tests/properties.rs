use cobar_core::barcobar::random_complex;
use cobar_core::chain::{dec_upper_star, hom_complex, tensor, tot, AbGroup, ChainComplex};
use cobar_core::doldkan::{chains_of, gamma_n_iso};
use cobar_core::loopgroup::{reduce, word_inv, word_mul};
use cobar_core::simplexcat::{compose, SimplexMap};
use cobar_core::sset::{product, sphere};
use cobar_core::szczarba::{sz, sz_alt, LeveledTree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn monotone_map() -> impl Strategy<Value = SimplexMap> {
    (0usize..5, 0usize..5).prop_flat_map(|(n, m)| {
        proptest::collection::vec(0..=m, n + 1).prop_map(move |mut v| {
            v.sort_unstable();
            SimplexMap::new(m, v).unwrap()
        })
    })
}

fn tree() -> impl Strategy<Value = LeveledTree> {
    (1usize..6).prop_flat_map(|k| {
        (0..k).map(|j| 0..k - j).collect::<Vec<_>>().prop_map(|i| LeveledTree::new(i).unwrap())
    })
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    proptest::collection::vec(prop_oneof![-3i32..0, 1i32..4], 0..8)
}

fn d_squared_zero(c: &ChainComplex) -> bool {
    (c.lo() + 2..=c.hi()).all(|n| c.d(n - 1).mul(&c.d(n)).is_zero())
}

fn euler(c: &ChainComplex) -> i64 {
    c.degrees().map(|n| if n % 2 == 0 { c.rank(n) as i64 } else { -(c.rank(n) as i64) }).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn epi_mono_factorization(f in monotone_map()) {
        let (e, m) = f.epi_mono_factor();
        prop_assert!(e.is_surjective());
        prop_assert!(m.is_injective());
        prop_assert_eq!(compose(&m, &e).unwrap(), f);
    }

    #[test]
    fn active_inert_factorization(f in monotone_map()) {
        let (a, i) = f.active_inert_factor();
        prop_assert!(a.is_active());
        prop_assert!(i.is_inert());
        prop_assert_eq!(compose(&i, &a).unwrap(), f);
    }

    #[test]
    fn interval_duality_round_trip(f in monotone_map()) {
        if let Ok(g) = f.interval_dual() {
            prop_assert_eq!(g.interval_dual_inv(), f);
        }
    }

    #[test]
    fn star_is_associative(f in monotone_map(), g in monotone_map(), h in monotone_map()) {
        prop_assert_eq!(f.star(&g).star(&h), f.star(&g.star(&h)));
    }

    #[test]
    fn tree_dual_is_an_involution(i in tree()) {
        prop_assert_eq!(i.dual().dual(), i.clone());
        prop_assert_eq!(LeveledTree::all(i.k()).len(), (1..=i.k()).product::<usize>());
    }

    #[test]
    fn szczarba_recursions_agree(i in tree()) {
        for j in 0..=i.k() {
            let a = sz(j, &i).unwrap();
            prop_assert!(a.is_active());
            prop_assert_eq!(a, sz_alt(j, &i).unwrap());
        }
    }

    #[test]
    fn free_group_words(a in word(), b in word(), c in word()) {
        prop_assert_eq!(word_mul(&word_mul(&a, &b), &c), word_mul(&a, &word_mul(&b, &c)));
        prop_assert!(word_mul(&a, &word_inv(&a)).is_empty());
        prop_assert_eq!(reduce(&reduce(&a)), reduce(&a));
    }

    #[test]
    fn constructions_are_complexes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, 3, 4);
        let b = random_complex(&mut rng, 3, 4);
        let t = tensor(&a, &b);
        prop_assert!(d_squared_zero(&t));
        prop_assert!(d_squared_zero(&hom_complex(&a, &b)));
        prop_assert!(d_squared_zero(&tot(&dec_upper_star(&a))));
        prop_assert_eq!(euler(&t), euler(&a) * euler(&b));
    }

    #[test]
    fn tot_dec_star_keeps_h0(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, 3, 4);
        let t = tot(&dec_upper_star(&a));
        let h0 = t.homology(0).unwrap();
        prop_assert_eq!(h0, a.homology(0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gamma_n_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, 3, 4);
        prop_assert!(gamma_n_iso(&c, 3).is_ok());
    }
}

#[test]
fn kunneth_on_a_product_of_spheres() {
    let x = product(&sphere(1, 4), &sphere(2, 4)).unwrap();
    let c = chains_of(&x);
    let h: Vec<AbGroup> = (0..4).map(|n| c.homology(n).unwrap()).collect();
    assert_eq!(h, vec![AbGroup::free(1), AbGroup::free(1), AbGroup::free(1), AbGroup::free(1)]);
}
