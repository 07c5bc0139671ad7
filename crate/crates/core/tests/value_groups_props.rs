use std::cmp::Ordering;
use std::collections::BTreeSet;

use gradval::value_groups::{
    lex_compare, quotient_structure, ramification_order, HullVector, Lattice, Rat, ValueVector,
};
use proptest::prelude::*;

fn hull(rank: usize) -> impl Strategy<Value = HullVector> {
    prop::collection::vec((-6i64..6, 1i64..5), rank)
        .prop_map(|v| HullVector(v.into_iter().map(|(n, d)| Rat::new(n, d)).collect()))
}

/// Closure of `{0}` under adding generators, reduced modulo `Z^m`.
fn brute_order(gens: &[HullVector], lattice: &Lattice) -> usize {
    let zero = HullVector::zero(lattice.rank());
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = lattice.reduce(&x.add(g));
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

proptest! {
    #[test]
    fn lex_order_is_compatible_with_addition(
        (a, b, c) in (1usize..4).prop_flat_map(|m| (hull(m), hull(m), hull(m)))
    ) {
        if a < b {
            prop_assert!(a.add(&c) < b.add(&c));
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn integer_vectors_compare_lexicographically(
        a in prop::collection::vec(-5i64..5, 3),
        b in prop::collection::vec(-5i64..5, 3),
        c in prop::collection::vec(-5i64..5, 3),
    ) {
        let (va, vb, vc) = (ValueVector::Finite(a.clone()), ValueVector::Finite(b.clone()), ValueVector::Finite(c));
        let ord = lex_compare(&va, &vb).unwrap();
        prop_assert_eq!(ord, HullVector::from_ints(&a).cmp(&HullVector::from_ints(&b)));
        if ord == Ordering::Less {
            let (sa, sb) = (va.add(&vc).unwrap(), vb.add(&vc).unwrap());
            prop_assert_eq!(lex_compare(&sa, &sb).unwrap(), Ordering::Less);
        }
        prop_assert_eq!(lex_compare(&va, &ValueVector::Top).unwrap(), Ordering::Less);
    }

    #[test]
    fn quotient_order_matches_coset_count(
        gens in (1usize..3).prop_flat_map(|m| prop::collection::vec(hull(m), 1..4))
    ) {
        let lattice = Lattice::standard(gens[0].rank());
        let q = quotient_structure(&gens, &lattice);
        let brute = brute_order(&gens, &lattice);
        prop_assume!(brute <= 64);
        prop_assert_eq!(q.order() as usize, brute);
        for w in q.invariant_factors.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(q.invariant_factors.iter().all(|d| *d > 1));
        prop_assert!(q.rank() <= gens[0].rank());
        for g in &gens {
            prop_assert_eq!(q.exponent() % ramification_order(g, &lattice), 0);
        }
    }
}
