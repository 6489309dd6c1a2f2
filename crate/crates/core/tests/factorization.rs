use ybsl21_core::lax::SpectralTriple;
use ybsl21_core::opalg::equal_on_degree;
use ybsl21_core::rational::q;
use ybsl21_core::rops::{
    build_r, build_rhat, check_defining, check_lemma_system, check_recurrences, check_rhat_exchange, check_rhat_identity,
    weight_shift, ParamPair,
};
use ybsl21_core::sample::sample_params;
use ybsl21_core::sl21::Weight;
use ybsl21_core::{Error, Operator, Site, SuperPolynomial};

fn pairs(seed: u64) -> Vec<ParamPair> {
    sample_params(seed, 2, 2).unwrap()
}

#[test]
fn lemma_systems_follow_defining_equations() {
    for p in pairs(11) {
        for k in 1..=3 {
            let defining = check_defining(k, &p, 2);
            assert!(defining.passed(), "{defining:?}");
            assert!(check_lemma_system(k, &p, 2).passed());
        }
    }
}

#[test]
fn r2_on_odd_lowest_vector() {
    let psi = &SuperPolynomial::theta_bar(Site::ONE) - &SuperPolynomial::theta_bar(Site::TWO);
    for p in pairs(12) {
        let r = build_r(2, &p, 2).unwrap();
        let ratio = (&p.v.u2 - &p.u.u1) / (&p.u.u2 - &p.u.u1);
        assert_eq!(r.apply(&psi).unwrap(), psi.scale(&ratio));
    }
}

#[test]
fn rhat_at_equal_triples_is_identity() {
    let u = SpectralTriple::new(q(7, 3), q(-1, 4), q(1, 5));
    assert!(check_rhat_identity(&u, 3).passed());
    // the public builder's guard rejects the degenerate exchange
    assert!(matches!(
        build_rhat(&ParamPair::new(u.clone(), u), 2),
        Err(Error::SingularParameters(_))
    ));
}

#[test]
fn site_swap_is_an_involution() {
    let swap = Operator::SwapSites(Site::ONE, Site::TWO);
    let p = &SuperPolynomial::theta(Site::ONE) * &SuperPolynomial::theta(Site::TWO);
    assert_eq!(swap.apply(&p).unwrap(), p.scale(&q(-1, 1)));
    assert!(equal_on_degree(&(swap.clone() * swap), &Operator::identity(), 3).unwrap().passed());
}

#[test]
fn exchange_and_recurrences_on_sampled_pairs() {
    for p in pairs(13) {
        assert!(check_rhat_exchange(&p, 2).passed());
        assert!(check_recurrences(&p, 4).passed());
        let rhat = build_rhat(&p, 2).unwrap();
        assert_eq!(rhat.apply(&SuperPolynomial::one()).unwrap(), SuperPolynomial::one());
    }
}

#[test]
fn weight_shift_examples() {
    let w1 = Weight::new(q(1, 3), q(2, 5));
    let w2 = Weight::new(q(-3, 2), q(1, 7));
    let p = ParamPair::from_values(&[q(1, 2), q(3, 1), q(0, 1), q(1, 2), q(2, 1), q(-1, 2)]);
    let (a, b) = weight_shift(2, &w1, &w2, &p);
    assert_eq!(a, Weight::new(w1.ell.clone(), &w1.b - q(1, 1)));
    assert_eq!(b, Weight::new(w2.ell.clone(), &w2.b + q(1, 1)));
    let (a, b) = weight_shift(1, &w1, &w2, &p);
    assert_eq!((a, b), (w1.clone(), w2.clone()));
    let (a, b) = weight_shift(3, &w1, &w2, &p);
    assert_eq!(a, Weight::new(&w1.ell + q(1, 4), &w1.b + q(1, 4)));
    assert_eq!(b, Weight::new(&w2.ell - q(1, 4), &w2.b - q(1, 4)));
}

#[test]
fn singular_parameters_are_rejected() {
    let p = ParamPair::from_values(&[q(1, 1), q(2, 1), q(2, 1), q(1, 3), q(5, 2), q(-1, 1)]);
    assert!(matches!(build_rhat(&p, 2), Err(Error::SingularParameters(_))));
}
