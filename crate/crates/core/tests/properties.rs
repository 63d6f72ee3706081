use minimal7::classify::{classify, net_conic, Shape};
use minimal7::field::{Field, PrimeField, QuadExt, RationalField};
use minimal7::linalg::{self, BasisChange, Matrix};
use minimal7::liealg::{random_basis_change, random_presentation, MinimalAlgebra};
use minimal7::quadform::{is_isotropic_ternary, normalize_conic, quaternion_class};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn axioms_hold<F: Field>(f: &F, x: &F::Elem, y: &F::Elem, z: &F::Elem) -> bool {
    let add_ok = f.add(x, y) == f.add(y, x)
        && f.add(&f.add(x, y), z) == f.add(x, &f.add(y, z))
        && f.add(x, &f.zero()) == *x
        && f.is_zero(&f.add(x, &f.neg(x)));
    let mul_ok = f.mul(x, y) == f.mul(y, x)
        && f.mul(&f.mul(x, y), z) == f.mul(x, &f.mul(y, z))
        && f.mul(x, &f.one()) == *x
        && (f.is_zero(x) || f.is_one(&f.mul(x, &f.inv(x).unwrap())));
    let dist = f.mul(x, &f.add(y, z)) == f.add(&f.mul(x, y), &f.mul(x, z));
    add_ok && mul_ok && dist
}

#[test]
fn small_prime_fields_satisfy_axioms_exhaustively() {
    for p in [3u64, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for x in 0..p as i64 {
            for y in 0..p as i64 {
                for z in 0..p as i64 {
                    let (x, y, z) = (f.from_i64(x), f.from_i64(y), f.from_i64(z));
                    assert!(axioms_hold(&f, &x, &y, &z), "F{p}");
                }
            }
        }
    }
}

#[test]
fn square_class_counts() {
    for p in [3u64, 5, 7, 11, 101] {
        assert_eq!(PrimeField::new(p).unwrap().square_class_reps().map(|r| r.len()), Some(2));
    }
    assert_eq!(RationalField::R.square_class_reps().map(|r| r.len()), Some(2));
    assert_eq!(RationalField::QBAR.square_class_reps().map(|r| r.len()), Some(1));
    assert_eq!(RationalField::Q.square_class_reps(), None);
}

/// `d` sends `W_1` onto a space of dimension `dim W_1 - dim W_0`.
fn injective_on_quotient<F: Field>(alg: &MinimalAlgebra<F>) -> bool {
    let filt = alg.characteristic_filtration().unwrap();
    let w = filt.levels();
    let images: Vec<Vec<F::Elem>> = w[1].iter().map(|v| alg.d_of_vector(v).coefficient_vector()).collect();
    linalg::span_dim(alg.field(), 21, &images) == w[1].len() - w[0].len()
}

/// `P ⊕ Q` with `P` acting on the closed generators.
fn block_change<F: Field>(f: &F, p: &BasisChange<F>, q: &BasisChange<F>) -> BasisChange<F> {
    let m = Matrix::from_fn(f, 7, 7, |i, j| match (i < 4, j < 4) {
        (true, true) => p.matrix().get(i, j).clone(),
        (false, false) => q.matrix().get(i - 4, j - 4).clone(),
        _ => f.zero(),
    });
    BasisChange::new(m).unwrap()
}

fn signature() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((6, 1)), Just((5, 2)), Just((4, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_and_extension_axioms(v in proptest::collection::vec(-50i64..=50, 9)) {
        let q = RationalField::Q;
        let r = |k: usize| q.div(&q.from_i64(v[k]), &q.from_i64(v[k + 3].abs() + 1)).unwrap();
        prop_assert!(axioms_hold(&q, &r(0), &r(1), &r(2)));
        let k = QuadExt::new(q, q.from_i64(-1)).unwrap();
        let e = |i: usize| k.make(q.from_i64(v[i]), q.from_i64(v[i + 3]));
        prop_assert!(axioms_hold(&k, &e(0), &e(1), &e(2)));
        prop_assert!(axioms_hold(&k, &e(3), &e(4), &e(5)));
        let f = PrimeField::new(13).unwrap();
        prop_assert!(axioms_hold(&f, &f.from_i64(v[6]), &f.from_i64(v[7]), &f.from_i64(v[8])));
    }

    #[test]
    fn squareness_ignores_square_factors(x in -400i64..=400, y in 1i64..=60, p in prop::sample::select(vec![3u64, 5, 7, 13])) {
        prop_assume!(x != 0);
        for f in [RationalField::Q, RationalField::R, RationalField::QBAR] {
            let (x, y) = (f.from_i64(x), f.from_i64(y));
            let xy2 = f.mul(&x, &f.square(&y));
            prop_assert_eq!(f.is_square(&xy2).unwrap(), f.is_square(&x).unwrap());
            prop_assert_eq!(f.square_class(&xy2).unwrap(), f.square_class(&x).unwrap());
        }
        let f = PrimeField::new(p).unwrap();
        let (x, y) = (f.from_i64(x), f.from_i64(y));
        prop_assume!(!f.is_zero(&x) && !f.is_zero(&y));
        let xy2 = f.mul(&x, &f.square(&y));
        prop_assert_eq!(f.is_square(&xy2).unwrap(), f.is_square(&x).unwrap());
        prop_assert_eq!(f.square_class(&xy2).unwrap(), f.square_class(&x).unwrap());
    }

    #[test]
    fn conjugation_is_an_automorphism(a in prop::sample::select(vec![-7i64, -3, -1, 2, 5, 6]), v in proptest::collection::vec(-30i64..=30, 4)) {
        let q = RationalField::Q;
        let k = QuadExt::new(q, q.from_i64(a)).unwrap();
        let x = k.make(q.from_i64(v[0]), q.from_i64(v[1]));
        let y = k.make(q.from_i64(v[2]), q.from_i64(v[3]));
        let c = |z: &_| k.conjugate(z).unwrap();
        prop_assert_eq!(c(&k.mul(&x, &y)), k.mul(&c(&x), &c(&y)));
        prop_assert_eq!(c(&k.add(&x, &y)), k.add(&c(&x), &c(&y)));
        prop_assert_eq!(c(&c(&x)), x);
    }

    #[test]
    fn rank_of_d_is_f1(seed in any::<u64>(), sig in signature()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = RationalField::Q;
        let alg = random_presentation(&q, sig.0, sig.1, &mut rng, 3).unwrap();
        let alg = alg.apply_basis_change(&random_basis_change(&q, 7, &mut rng, 2)).unwrap();
        let dims = alg.characteristic_filtration().unwrap().dims();
        prop_assert_eq!(dims, vec![sig.0, sig.1]);
        prop_assert_eq!(alg.d_matrix().rank(), sig.1);
        prop_assert!(injective_on_quotient(&alg));
    }

    #[test]
    fn every_presentation_lands_in_one_row(seed in any::<u64>(), sig in signature(), p in prop::sample::select(vec![0u64, 3, 5, 7])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = if p == 0 {
            let q = RationalField::Q;
            let alg = random_presentation(&q, sig.0, sig.1, &mut rng, 2).unwrap();
            classify(&alg).unwrap().canonical.shape
        } else {
            let f = PrimeField::new(p).unwrap();
            let alg = random_presentation(&f, sig.0, sig.1, &mut rng, 1).unwrap();
            classify(&alg).unwrap().canonical.shape
        };
        prop_assert!(Shape::ALL.contains(&shape));
        prop_assert_eq!(shape.signature(), sig);
    }

    #[test]
    fn net_conic_is_invariant_up_to_similarity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = RationalField::Q;
        let alg = random_presentation(&q, 4, 3, &mut rng, 3).unwrap();
        let p = block_change(&q, &random_basis_change(&q, 4, &mut rng, 2), &random_basis_change(&q, 3, &mut rng, 2));
        let moved = alg.apply_basis_change(&p).unwrap();
        let net = |a: &MinimalAlgebra<RationalField>| -> Vec<_> { a.differentials()[4..].iter().map(|d| d.narrow(4)).collect() };
        let g0 = net_conic(&net(&alg)).unwrap();
        let g1 = net_conic(&net(&moved)).unwrap();
        prop_assume!(!g0.is_zero());
        let (n0, n1) = (normalize_conic(&g0).unwrap(), normalize_conic(&g1).unwrap());
        prop_assert_eq!(n0.rank, n1.rank);
        if n0.rank == 3 {
            let (a0, b0, a1, b1) = (&n0.form.a, &n0.form.b, &n1.form.a, &n1.form.b);
            prop_assert_eq!(quaternion_class(&q, a0, b0).unwrap(), quaternion_class(&q, a1, b1).unwrap());
            prop_assert_eq!(is_isotropic_ternary(&q, a0, b0).unwrap(), is_isotropic_ternary(&q, a1, b1).unwrap());
        }
    }
}
