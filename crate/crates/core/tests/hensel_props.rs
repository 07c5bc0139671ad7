mod common;

use common::*;
use gradval::exact_fields::Fe;
use gradval::graded_core::homog_factor;
use gradval::hensel_lambda::{
    build_root_extension, certify, hensel_root, is_lambda_polynomial, newton_polygon, residue_poly,
};
use gradval::value_groups::Rat;
use proptest::prelude::*;
use rand::Rng;

const LAMBDAS: [(i64, i64); 6] = [(0, 1), (1, 1), (-1, 1), (1, 2), (3, 2), (1, 3)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lambda_criterion_is_single_slope(seed in any::<u64>(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let mut r = rng(seed);
        let e = laurent(p);
        let n = r.gen_range(1..=6);
        let (f, vals) = random_poly(&mut r, &e, p, n);
        let oracle = hull_segments(&vals) == 1;
        prop_assert_eq!(is_lambda_polynomial(&e, &f).unwrap().is_some(), oracle);
        prop_assert_eq!(newton_polygon(&e, &f).unwrap().single_slope(), oracle);
    }

    #[test]
    fn residues_are_multiplicative(seed in any::<u64>(), pi in 0usize..3, li in 0usize..6) {
        let p = [2u64, 3, 5][pi];
        let mut r = rng(seed);
        let e = laurent(p);
        let ge = e.graded();
        let lambda = Rat::new(LAMBDAS[li].0, LAMBDAS[li].1);
        let b = *lambda.denom() as usize;
        let (dg, dh) = (b * r.gen_range(1..=2), b * r.gen_range(1..=2));
        let g = random_lambda_poly(&mut r, &e, p, dg, lambda);
        let hh = random_lambda_poly(&mut r, &e, p, dh, lambda);
        let lg = is_lambda_polynomial(&e, &g).unwrap().unwrap();
        let lh = is_lambda_polynomial(&e, &hh).unwrap().unwrap();
        let lgh = is_lambda_polynomial(&e, &e.pmul(&g, &hh)).unwrap().unwrap();
        prop_assert_eq!(
            ge.ptrim(residue_poly(&lgh)),
            ge.ptrim(ge.pmul(&residue_poly(&lg), &residue_poly(&lh)))
        );
    }

    #[test]
    fn lifts_of_homogenizable_polynomials_are_lambda_polynomials(
        seed in any::<u64>(), pi in 0usize..3, li in 0usize..6
    ) {
        let p = [2u64, 3, 5][pi];
        let mut r = rng(seed);
        let e = laurent(p);
        let ge = e.graded();
        let lambda = Rat::new(LAMBDAS[li].0, LAMBDAS[li].1);
        let d = r.gen_range(1..=3);
        let mut big = random_fp_poly(&mut r, p, d, false);
        big[0] = nonzero_mod(&mut r, p);
        let u = ge.monomial(Fe::Mod(1), &hi(r.gen_range(-2..3))).unwrap();
        let fres: Vec<_> = homogenize(&ge, &big, lambda).iter().map(|c| ge.mul(c, &u)).collect();
        let f = lift_with_noise(&mut r, &e, p, &fres, lambda);
        let lp = is_lambda_polynomial(&e, &f).unwrap().unwrap();
        prop_assert_eq!(&lp.lambda, &h(lambda));
        prop_assert_eq!(ge.ptrim(residue_poly(&lp)), ge.ptrim(fres));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn simple_roots_match_coefficient_recursion(seed in any::<u64>(), pi in 0usize..3) {
        let p = [5u64, 7, 11][pi];
        let mut r = rng(seed);
        let e = laurent(p);
        let n = r.gen_range(2..=3);
        let b = r.gen_range(1..p);
        let q = random_fp_poly(&mut r, p, n - 1, true);
        prop_assume!(fp_eval(&q, b, p) != 0);
        let res = fp_mul(&[p - b, 1], &q, p);
        prop_assume!(res[0] != 0);
        let f: Vec<Vec<u64>> = res
            .iter()
            .enumerate()
            .map(|(i, c)| (0..5).map(|k| if k == 0 { *c } else if i == n { 0 } else { r.gen_range(0..p) }).collect())
            .collect();
        let fs: Vec<_> = f.iter().map(|c| ps_to_series(&e, c)).collect();
        let lp = certify(&e, &fs, &hi(0)).unwrap().unwrap();
        let root = hensel_root(&lp, &e.graded().constant(Fe::Mod(b))).unwrap();
        for (k, want) in ps_root(&f, b, p, 24).iter().enumerate() {
            prop_assert_eq!(coeff_at(&root, k as i64), *want);
        }
    }

    #[test]
    fn irreducible_minimal_polynomials_have_irreducible_residues(seed in any::<u64>(), pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let mut r = rng(seed);
        let e = laurent(p);
        let ge = e.graded();
        let (big, lambda) = if r.gen_bool(0.5) {
            (random_irreducible(&mut r, p, 2), Rat::from(0))
        } else {
            (vec![p - nonzero_mod(&mut r, p), 1], Rat::new(r.gen_range(1..3) * 2 - 1, 2))
        };
        let f = lift_with_noise(&mut r, &e, p, &homogenize(&ge, &big, lambda), lambda);
        let ext = build_root_extension(&e, &f).unwrap();
        prop_assert_eq!(ext.ext.degree, ext.graded.degree());
        prop_assert!(ext.ext.fundamental_equality());
        let lp = is_lambda_polynomial(&e, &ext.poly).unwrap().unwrap();
        let fac = homog_factor(&ge, &residue_poly(&lp)).unwrap();
        prop_assert_eq!(fac.factors.len(), 1);
        prop_assert!(fac.unit.is_homogeneous());
    }
}
