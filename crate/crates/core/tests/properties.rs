mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use staralg::rickart::{self, Side};
use staralg::spectral::{positive_sqrt, quasi_inverse, right_projection};
use staralg::structure::analyze;
use staralg::{algebra, instances, Element, C64};

const TOL: f64 = 1e-9;
const CLOSE: f64 = 1e-7;

fn instance(seed: u64, max_dim: usize) -> (Instance, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (blocks, abelian) = random_shape(&mut rng, max_dim);
    (Instance::rotated(&blocks, abelian, &mut rng), rng)
}

fn oracle(inst: &Instance, x: &Element, f: impl Fn(&staralg::CMatrix) -> staralg::CMatrix) -> Element {
    element(&inst.alg, blockwise(inst, x.coeffs(), f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn involution_axioms(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let (inst, mut rng) = instance(seed, 12);
        let a = instances::random_element(&inst.alg, &mut rng);
        let b = instances::random_element(&inst.alg, &mut rng);
        let l = C64::new(re, im);
        prop_assert!(rel(&(&a * &b).star(), &(&b.star() * &a.star())) < CLOSE);
        prop_assert!(rel(&a.star().star(), &a) < CLOSE);
        prop_assert!(rel(&(&a + &b).star(), &(&a.star() + &b.star())) < CLOSE);
        prop_assert!(rel(&a.scale(l).star(), &a.star().scale(l.conj())) < CLOSE);
    }

    #[test]
    fn spectrum_of_ab_equals_spectrum_of_ba(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 10);
        let a = instances::random_element(&inst.alg, &mut rng);
        let b = instances::random_element(&inst.alg, &mut rng);
        let (Ok(s1), Ok(s2)) = (algebra::spectrum(&(&a * &b), TOL), algebra::spectrum(&(&b * &a), TOL)) else {
            return Err(TestCaseError::reject("ill-conditioned minimal polynomial"));
        };
        prop_assert!(s1.same_set(&s2, 1e-6), "{:?} vs {:?}", s1, s2);
    }

    #[test]
    fn right_projection_matches_oracle(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 14);
        let a = low_rank(&inst, &mut rng);
        let p = right_projection(&a, TOL).unwrap();
        prop_assert!(rel(&p, &oracle(&inst, &a, |m| oracle_rp(m, a.norm()))) < CLOSE);
    }

    #[test]
    fn quasi_inverse_matches_pseudo_inverse(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 14);
        let a = low_rank(&inst, &mut rng);
        let Ok(q) = quasi_inverse(&a, TOL) else {
            return Err(TestCaseError::reject("refused at tol"));
        };
        prop_assert!(rel(&q, &oracle(&inst, &a, |m| oracle_pinv(m, a.norm()))) < 1e-6);
    }

    #[test]
    fn square_root_matches_oracle(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 14);
        let x = instances::random_positive(&inst.alg, &mut rng);
        let r = positive_sqrt(&x, TOL).unwrap();
        prop_assert!(rel(&r, &oracle(&inst, &x, oracle_sqrt)) < 1e-6);
        prop_assert!(r.selfadjoint_defect() < CLOSE * r.norm().max(1.0));
    }

    #[test]
    fn join_and_meet_bound_both_projections(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 12);
        let e = right_projection(&low_rank(&inst, &mut rng), TOL).unwrap();
        let f = right_projection(&low_rank(&inst, &mut rng), TOL).unwrap();
        let j = rickart::join(&e, &f, TOL).unwrap();
        let m = rickart::meet(&e, &f, TOL).unwrap();
        for p in [&e, &f] {
            prop_assert!(rickart::leq(p, &j, 1e-8));
            prop_assert!(rickart::leq(&m, p, 1e-8));
        }
        prop_assert!(rel(&j, &rickart::join(&f, &e, TOL).unwrap()) < CLOSE);
        prop_assert!(rel(&m, &rickart::meet(&f, &e, TOL).unwrap()) < CLOSE);
        prop_assert!(rel(&rickart::join(&e, &e, TOL).unwrap(), &e) < CLOSE);
    }

    #[test]
    fn double_annihilator_is_generated_by_right_projection(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 12);
        let a = low_rank(&inst, &mut rng);
        let rp = oracle(&inst, &a, |m| oracle_rp(m, a.norm()));
        let one = Element::one(&inst.alg).unwrap();
        let ann = rickart::annihilator(std::slice::from_ref(&a), Side::Right, TOL).unwrap();
        let g = ann.generator.expect("proper instances are Baer");
        prop_assert!(rel(&g, &(&one - &rp)) < CLOSE);
        let back = rickart::annihilator(&[g], Side::Left, TOL).unwrap();
        prop_assert!(rel(&back.generator.unwrap(), &rp) < CLOSE);
    }

    #[test]
    fn orthogonal_families_fit_in_dim(seed in any::<u64>()) {
        let (inst, _) = instance(seed, 16);
        let fam = rickart::greedy_orthogonal_family(&inst.alg, TOL, seed, 4);
        prop_assert!(fam.len() <= inst.alg.dim());
        for (i, p) in fam.iter().enumerate() {
            prop_assert!(p.is_projection(1e-8));
            for q in &fam[i + 1..] {
                prop_assert!((p * q).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn directly_finite(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed, 14);
        let a = instances::random_element(&inst.alg, &mut rng);
        let b = quasi_inverse(&a, TOL).unwrap();
        let one = Element::one(&inst.alg).unwrap();
        prop_assume!(rel(&(&a * &b), &one) < 1e-9);
        prop_assert!(rel(&(&b * &a), &one) < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn block_sizes_account_for_dim(seed in any::<u64>()) {
        let (inst, _) = instance(seed, 12);
        let r = analyze(&inst.alg, TOL, seed).unwrap();
        let sum: usize = r.block_sizes_nonabelian.iter().map(|n| n * n).sum();
        prop_assert_eq!(sum + r.abelian_dim, r.dim);
        let mut blocks = r.block_sizes_nonabelian.clone();
        blocks.sort_unstable();
        prop_assert_eq!(blocks, inst.nonabelian_blocks());
        prop_assert_eq!(r.abelian_dim, inst.abelian_dim());
    }
}
