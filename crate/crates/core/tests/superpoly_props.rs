use proptest::prelude::*;

use ybsl21_core::rational::int;
use ybsl21_core::superpoly::{deriv_even, deriv_odd, mul, OddMask};
use ybsl21_core::{Monomial, OddVar, Site, SuperPolynomial};

const SITES: [Site; 2] = [Site::ONE, Site::TWO];

fn odd_vars() -> Vec<OddVar> {
    SITES.iter().flat_map(|s| [s.theta(), s.theta_bar()]).collect()
}

fn term() -> impl Strategy<Value = (Monomial, i64)> {
    (0u32..3, 0u32..3, 0u8..16, -5i64..=5)
        .prop_map(|(a, b, bits, c)| (Monomial::new([a, b, 0], OddMask::from_bits(bits)), c))
}

fn poly() -> impl Strategy<Value = SuperPolynomial> {
    prop::collection::vec(term(), 0..5).prop_map(|terms| {
        let mut p = SuperPolynomial::zero();
        for (m, c) in terms {
            p.add_term(m, int(c));
        }
        p
    })
}

/// A polynomial of definite parity, with that parity.
fn homogeneous() -> impl Strategy<Value = (SuperPolynomial, u8)> {
    (poly(), 0u8..2).prop_map(|(p, parity)| {
        let mut h = SuperPolynomial::zero();
        for (m, c) in p.terms() {
            if m.parity() == parity {
                h.add_term(*m, c.clone());
            }
        }
        (h, parity)
    })
}

fn sign(e: u8) -> ybsl21_core::Rational {
    if e & 1 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
    }

    #[test]
    fn product_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(mul(&a, &(&b + &c)), &mul(&a, &b) + &mul(&a, &c));
    }

    #[test]
    fn graded_commutativity((a, pa) in homogeneous(), (b, pb) in homogeneous()) {
        prop_assert_eq!(mul(&a, &b), mul(&b, &a).scale(&sign(pa * pb)));
    }

    #[test]
    fn odd_variables_square_to_zero(a in poly(), i in 0usize..4) {
        let th = SuperPolynomial::odd(odd_vars()[i]);
        prop_assert!(mul(&th, &mul(&th, &a)).is_zero());
    }

    #[test]
    fn odd_derivative_is_graded_leibniz((a, pa) in homogeneous(), b in poly(), i in 0usize..4) {
        let v = odd_vars()[i];
        let lhs = deriv_odd(v, &mul(&a, &b));
        let rhs = &mul(&deriv_odd(v, &a), &b) + &mul(&a, &deriv_odd(v, &b)).scale(&sign(pa));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_derivative_is_leibniz(a in poly(), b in poly(), s in 0usize..2) {
        let site = SITES[s];
        let lhs = deriv_even(site, &mul(&a, &b));
        let rhs = &mul(&deriv_even(site, &a), &b) + &mul(&a, &deriv_even(site, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_derivatives_anticommute(a in poly(), i in 0usize..4, j in 0usize..4) {
        let (v, w) = (odd_vars()[i], odd_vars()[j]);
        let sum = &deriv_odd(v, &deriv_odd(w, &a)) + &deriv_odd(w, &deriv_odd(v, &a));
        prop_assert!(sum.is_zero());
    }
}
