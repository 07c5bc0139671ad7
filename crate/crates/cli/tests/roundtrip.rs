//! Printing a value and parsing the text back gives the same value.

use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gradval::crossed_products::{cyclic_algebra, multiquadratic_algebra, AElem, CrossedProduct};
use gradval::exact_fields::{Fe, Field, Poly};
use gradval::graded_core::{GElem, GPoly, GradedField};
use gradval::valued_series::{SPoly, Series, SeriesField};
use gradval::value_groups::{HullVector, Rat};
use gradval_cli::eval::{
    build_base, build_series_field, eval, hull_string, parse_hull, AlgebraRing, FieldRing, GradedRing,
    PolyRing, SeriesRing,
};
use gradval_cli::parse::{parse_expr, parse_field, parse_input};

fn fields() -> Vec<Field> {
    vec![
        Field::prime(2).unwrap(),
        Field::prime(5).unwrap(),
        Field::galois(4, None).unwrap(),
        Field::galois(27, Some(&[1, 2, 0, 1])).unwrap(),
        Field::rationals(),
        Field::multi_quadratic(&[2]).unwrap(),
        Field::multi_quadratic(&[2, 3]).unwrap(),
        Field::prime(3)
            .unwrap()
            .extension(Poly::new(vec![Fe::Mod(1), Fe::Mod(0), Fe::Mod(1)]), Some("w"))
            .unwrap(),
    ]
}

fn random_fe(r: &mut impl Rng, f: &Field) -> Fe {
    if r.gen_bool(0.2) {
        return f.zero();
    }
    if f.is_finite() {
        return f.elements().unwrap().choose(r).unwrap().clone();
    }
    let d = f.degree_over(&Field::rationals()).unwrap();
    let coords: Vec<Fe> = (0..d)
        .map(|_| {
            if r.gen_bool(0.5) {
                Fe::Rat(BigRational::from_integer(0.into()))
            } else {
                Fe::Rat(BigRational::new(r.gen_range(-9..10).into(), r.gen_range(1..5).into()))
            }
        })
        .collect();
    f.from_coords(&Field::rationals(), &coords)
}

fn random_grade(r: &mut impl Rng, rank: usize) -> HullVector {
    HullVector::from_ints(&(0..rank).map(|_| r.gen_range(-4..6)).collect::<Vec<_>>())
}

fn random_series(r: &mut impl Rng, e: &SeriesField) -> Series {
    let terms: Vec<(HullVector, Fe)> =
        (0..r.gen_range(0..5)).map(|_| (random_grade(r, e.rank()), random_fe(r, e.residue()))).collect();
    let cutoff = r.gen_bool(0.4).then(|| random_grade(r, e.rank()));
    e.from_terms(terms, cutoff).unwrap()
}

fn series_fields() -> Vec<SeriesField> {
    let mut out = Vec::new();
    for f in fields() {
        out.push(SeriesField::laurent(f.clone(), &["t"]));
        out.push(SeriesField::laurent(f, &["t1", "t2"]));
    }
    out
}

fn reparse_series_poly(text: &str, e: &SeriesField) -> SPoly {
    let input = parse_input(&format!("{} over {}", text, e)).unwrap();
    let e2 = build_series_field(input.field.as_ref().unwrap(), e.precision()).unwrap();
    assert_eq!(&e2, e);
    eval(&SeriesRing(&e2), &input.expr).unwrap()
}

fn random_gelem(r: &mut impl Rng, g: &GradedField) -> GElem {
    let mut x = g.zero();
    for _ in 0..r.gen_range(0..3) {
        let m = g.monomial(random_fe(r, g.f0()), &random_grade(r, g.rank())).unwrap();
        x = g.add(&x, &m);
    }
    x
}

fn algebras() -> Vec<CrossedProduct> {
    let n0 = Field::multi_quadratic(&[2, 3]).unwrap();
    let m1 = n0.from_int(-1);
    vec![
        cyclic_algebra(&Field::prime(5).unwrap(), &Field::galois(625, None).unwrap(), Fe::Ext(vec![Fe::Mod(1)]))
            .unwrap(),
        multiquadratic_algebra(
            &[2, 3],
            vec![vec![n0.one(), m1.clone()], vec![m1, n0.one()]],
            vec![n0.one(), n0.from_int(3)],
        )
        .unwrap(),
    ]
}

fn random_aelem(r: &mut impl Rng, a: &CrossedProduct) -> AElem {
    let mut x = a.zero();
    for _ in 0..r.gen_range(0..4) {
        let j: Vec<u32> = a.data.orders.iter().map(|o| r.gen_range(0..*o as u32)).collect();
        let k: Vec<i64> = (0..a.rank()).map(|_| r.gen_range(-2..3)).collect();
        x = a.add(&x, &a.term(random_fe(r, a.n0()), &j, &k));
    }
    x
}

#[test]
fn field_specs_round_trip() {
    for f in fields() {
        let spec = parse_field(&f.to_string()).unwrap();
        assert_eq!(build_base(&spec.base).unwrap(), f, "{}", f);
    }
    for e in series_fields() {
        let spec = parse_field(&e.to_string()).unwrap();
        assert_eq!(build_series_field(&spec, e.precision()).unwrap(), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_elements_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for f in fields() {
            let x = random_fe(&mut r, &f);
            let text = f.format(&x);
            let back = eval(&FieldRing(&f), &parse_expr(&text).unwrap()).unwrap();
            prop_assert_eq!(back, x, "{} over {}", text, f);
            let p = Poly::new((0..3).map(|_| random_fe(&mut r, &f)).collect());
            let text = f.poly_to_string(&p, "X");
            let back = eval(&PolyRing(&f), &parse_expr(&text).unwrap()).unwrap();
            prop_assert_eq!(back, p, "{}", text);
        }
    }

    #[test]
    fn series_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for e in series_fields() {
            let x = random_series(&mut r, &e);
            let text = e.format(&x);
            let expect = e.ptrim(vec![x.clone()]);
            prop_assert_eq!(reparse_series_poly(&text, &e), expect, "{}", text);
        }
    }

    #[test]
    fn series_polynomials_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for e in series_fields() {
            let f: SPoly = e.ptrim((0..r.gen_range(1..5)).map(|_| random_series(&mut r, &e)).collect());
            let text = e.pformat(&f);
            prop_assert_eq!(reparse_series_poly(&text, &e), f, "{}", text);
        }
    }

    #[test]
    fn graded_polynomials_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for e in series_fields() {
            let g = e.graded();
            let f: GPoly = g.ptrim((0..r.gen_range(1..5)).map(|_| random_gelem(&mut r, &g)).collect());
            let text = g.pformat(&f);
            let back = eval(&GradedRing::new(&g, e.vars()), &parse_expr(&text).unwrap()).unwrap();
            prop_assert_eq!(back, f, "{}", text);
        }
    }

    #[test]
    fn algebra_elements_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for a in algebras() {
            let x = random_aelem(&mut r, &a);
            let text = a.format(&x);
            let back = eval(&AlgebraRing(&a), &parse_expr(&text).unwrap()).unwrap();
            prop_assert_eq!(back, x, "{}", text);
        }
    }

    #[test]
    fn value_vectors_round_trip(a in -50i64..50, b in 1i64..9, c in -50i64..50, rank in 1usize..3) {
        let h = if rank == 1 {
            HullVector(vec![Rat::new(a, b)])
        } else {
            HullVector(vec![Rat::new(a, b), Rat::from(c)])
        };
        prop_assert_eq!(parse_hull(&hull_string(&h), rank).unwrap(), h);
    }
}
