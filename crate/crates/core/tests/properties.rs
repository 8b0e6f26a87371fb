use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use split_hecke::coset::{apply_generator, base_class, left_translate_cosets, Factor, FormalSum};
use split_hecke::hecke_poly::expand_product;
use split_hecke::matrix::{cartan_invariants, coset_key, random_k, GroupElement, Mat};
use split_hecke::orbit::{normal_form, project, refined_key, verify_witness, Level};
use split_hecke::sym::elementary;
use split_hecke::{FieldElem, LaurentPoly};

fn elem(q: u32) -> impl Strategy<Value = FieldElem> {
    (-3i64..3, prop::collection::vec(0..q, 1..5), prop::collection::vec(0..q, 1..3)).prop_map(move |(lo, num, den)| {
        let n = LaurentPoly::new(q, lo, num).to_field();
        let mut d = LaurentPoly::new(q, 0, den).to_field();
        if d.is_zero() {
            d = FieldElem::one(q);
        }
        n.div(&d).unwrap()
    })
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

fn random_gl(rng: &mut ChaCha8Rng, q: u32, m: usize) -> Mat {
    use rand::Rng;
    let d: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..3)).collect();
    random_k(rng, q, m, 2).mul(&Mat::diag_pow(q, &d)).mul(&random_k(rng, q, m, 2))
}

fn random_pair(rng: &mut ChaCha8Rng, q: u32, n: usize) -> GroupElement {
    GroupElement::new(random_gl(rng, q, n + 1), random_gl(rng, q, n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_ring_axioms((q, x, y, z) in prime().prop_flat_map(|q| (Just(q), elem(q), elem(q), elem(q)))) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.inv().unwrap()), FieldElem::one(q));
        }
    }

    #[test]
    fn valuation_and_truncation((q, x, y) in prime().prop_flat_map(|q| (Just(q), elem(q), elem(q)))) {
        if let (Some(a), Some(b)) = (x.ord(), y.ord()) {
            prop_assert_eq!(x.mul(&y).ord(), Some(a + b));
            let t = x.series_truncate(a + 4).to_field();
            let rest = x.sub(&t);
            prop_assert!(rest.is_zero() || rest.ord().unwrap() >= a + 4);
        }
        prop_assert_eq!(FieldElem::parse(q, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn determinant_and_inverse(seed in any::<u64>(), q in prime(), m in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_gl(&mut rng, q, m);
        let b = random_gl(&mut rng, q, m);
        prop_assert_eq!(a.mul(&b).det(), a.det().mul(&b.det()));
        prop_assert_eq!(a.mul(&a.inverse().unwrap()), Mat::identity(q, m));
    }

    #[test]
    fn cartan_and_coset_key_invariance(seed in any::<u64>(), q in prime(), m in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gl(&mut rng, q, m);
        let k1 = random_k(&mut rng, q, m, 3);
        let k2 = random_k(&mut rng, q, m, 3);
        prop_assert_eq!(cartan_invariants(&k1.mul(&g).mul(&k2)).unwrap(), cartan_invariants(&g).unwrap());
        prop_assert_eq!(coset_key(&g.mul(&k2)).unwrap(), coset_key(&g).unwrap());
    }

    #[test]
    fn newton_route_matches_numeric_product(seed in any::<u64>(), n in 1usize..4) {
        use rand::Rng;
        let p = 1_000_003u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<u64> = (0..=n).map(|_| rng.gen_range(1..p)).collect();
        let ys: Vec<u64> = (0..n).map(|_| rng.gen_range(1..p)).collect();
        let (t, z) = (rng.gen_range(1..p), rng.gen_range(1..p));
        let ex: Vec<u64> = (1..=n + 1).map(|k| elementary(k, n + 1).eval_mod(&xs, p)).collect();
        let ey: Vec<u64> = (1..=n).map(|k| elementary(k, n).eval_mod(&ys, p)).collect();
        let mut want = 1u64;
        for x in &xs {
            for y in &ys {
                let txy = t * x % p * y % p;
                want = want * ((z + p - txy) % p) % p;
            }
        }
        let sym = expand_product(n).unwrap();
        prop_assert_eq!(sym.eval_mod(&ex, &ey, t, z, p), want);
    }
}

fn normal_form_trial(seed: u64, n: usize, q: u32) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_pair(&mut rng, q, n);
    let h = random_gl(&mut rng, q, n);
    let k = GroupElement::new(random_k(&mut rng, q, n + 1, 2), random_k(&mut rng, q, n, 2)).unwrap();
    let moved = GroupElement::delta(&h).mul(&g).mul(&k);
    let (nf, wit) = normal_form(&g).unwrap();
    let (nf2, wit2) = normal_form(&moved).unwrap();
    prop_assert_eq!(&nf, &nf2);
    prop_assert!(nf.is_reduced());
    prop_assert!(verify_witness(&g, &nf, &wit).unwrap());
    prop_assert!(verify_witness(&moved, &nf2, &wit2).unwrap());
    let det = h.det();
    let expected = refined_key(&g, Level::HDer).unwrap().translate(det.ord().unwrap(), &det.unit_part());
    prop_assert_eq!(refined_key(&moved, Level::HDer).unwrap(), expected);
    prop_assert_eq!(wit2.shift - wit.shift, det.ord().unwrap());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_form_invariance_n1_q2(seed in any::<u64>()) { normal_form_trial(seed, 1, 2)?; }

    #[test]
    fn normal_form_invariance_n1_q3(seed in any::<u64>()) { normal_form_trial(seed, 1, 3)?; }

    #[test]
    fn normal_form_invariance_n2_q2(seed in any::<u64>()) { normal_form_trial(seed, 2, 2)?; }

    #[test]
    fn normal_form_invariance_n2_q3(seed in any::<u64>()) { normal_form_trial(seed, 2, 3)?; }
}

fn small_class(seed: u64, n: usize, q: u32) -> FormalSum<split_hecke::matrix::PairKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_pair(&mut rng, q, n);
    FormalSum::single(g.key().unwrap(), split_hecke::coset::coef(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hecke_generators_commute(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), n in 1usize..3) {
        let x = small_class(seed, n, q);
        let gens: Vec<(Factor, usize)> = (1..=n + 1).map(|k| (Factor::V, k)).chain((1..=n).map(|k| (Factor::W, k))).collect();
        let (a, b) = (gens[seed as usize % gens.len()], gens[(seed / 7) as usize % gens.len()]);
        let ab = apply_generator(a.0, a.1, &apply_generator(b.0, b.1, &x, n, q).unwrap(), n, q).unwrap();
        let ba = apply_generator(b.0, b.1, &apply_generator(a.0, a.1, &x, n, q).unwrap(), n, q).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn left_translation_commutes_with_hecke(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), n in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = GroupElement::delta(&random_gl(&mut rng, q, n));
        let x = small_class(seed.wrapping_add(1), n, q);
        let factor = if seed % 2 == 0 { Factor::V } else { Factor::W };
        let tx = apply_generator(factor, 1, &x, n, q).unwrap();
        let left = left_translate_cosets(&h, &tx).unwrap();
        let right = apply_generator(factor, 1, &left_translate_cosets(&h, &x).unwrap(), n, q).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn h0_projection_is_translation_invariant(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), n in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = apply_generator(Factor::V, 1, &base_class(n, q), n, q).unwrap();
        let u = random_k(&mut rng, q, n, 2);
        let moved = left_translate_cosets(&GroupElement::delta(&u), &x).unwrap();
        prop_assert_eq!(project(&moved, Level::H0, q).unwrap(), project(&x, Level::H0, q).unwrap());
    }
}
