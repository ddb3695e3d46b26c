mod common;

use algcensus::{Error, IntPoly};
use common::{brute_irreducible, primitive_vectors};
use proptest::prelude::*;

#[test]
fn irreducibility_matches_factor_search() {
    for (n, q) in [(2, 4), (3, 3), (4, 2), (5, 1)] {
        let mut reducible = 0;
        for c in primitive_vectors(n, q) {
            let expected = brute_irreducible(&c);
            let got = IntPoly::from_i64(&c).is_irreducible().unwrap();
            assert_eq!(got, expected, "{c:?}");
            reducible += (!got) as usize;
        }
        assert!(reducible > 0);
    }
}

#[test]
fn quartics_splitting_into_quadratics() {
    // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root.
    assert!(!IntPoly::from_i64(&[4, 0, 0, 0, 1]).is_irreducible().unwrap());
    assert!(IntPoly::from_i64(&[1, 0, 0, 0, 1]).is_irreducible().unwrap());
    assert!(!IntPoly::from_i64(&[1, 0, -3, 0, 1]).is_irreducible().unwrap());
}

#[test]
fn irreducibility_preconditions() {
    assert_eq!(IntPoly::from_i64(&[2, 4]).is_irreducible(), Err(Error::NotPrimitive));
    assert_eq!(IntPoly::from_i64(&[3]).is_irreducible(), Err(Error::DegreeZero));
    assert_eq!(IntPoly::zero().is_irreducible(), Err(Error::ZeroPolynomial));
}

fn nonconstant(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_deg).prop_flat_map(|d| {
        (prop::collection::vec(-6i64..=6, d), 1i64..=6).prop_map(|(mut c, lead)| {
            c.push(lead);
            c
        })
    })
}

proptest! {
    #[test]
    fn products_are_reducible(a in nonconstant(3), b in nonconstant(3)) {
        let p = &IntPoly::from_i64(&a) * &IntPoly::from_i64(&b);
        prop_assert!(!p.primitive_part().is_irreducible().unwrap());
    }

    #[test]
    fn symmetries_preserve_irreducibility(c in nonconstant(5)) {
        prop_assume!(c[0] != 0);
        let p = IntPoly::from_i64(&c).primitive_part();
        let expected = p.is_irreducible().unwrap();
        prop_assert_eq!(p.negate_arg().is_irreducible().unwrap(), expected);
        prop_assert_eq!(p.reverse().unwrap().primitive_part().is_irreducible().unwrap(), expected);
    }

    #[test]
    fn exact_division_recovers_factor(a in nonconstant(3), b in nonconstant(3)) {
        let (pa, pb) = (IntPoly::from_i64(&a), IntPoly::from_i64(&b));
        let prod = &pa * &pb;
        prop_assert_eq!(prod.div_exact(&pb), Some(pa.clone()));
        prop_assert_eq!(prod.degree(), Some(a.len() + b.len() - 2));
    }

    #[test]
    fn primitive_part_has_unit_content(c in nonconstant(4), k in 1i64..9) {
        let scaled: Vec<i64> = c.iter().map(|x| x * k).collect();
        let p = IntPoly::from_i64(&scaled);
        prop_assert!(p.primitive_part().is_primitive());
        prop_assert_eq!(p.primitive_part(), IntPoly::from_i64(&c).primitive_part());
    }
}
