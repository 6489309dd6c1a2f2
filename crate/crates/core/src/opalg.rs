//! Linear operators on superpolynomials, built as immutable expression trees.
//!
//! Identities between operators are decided extensionally: both sides are
//! applied to every monomial of a degree-bounded basis and the images are
//! compared exactly.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::rational::{int, Rational};
use crate::report::{compare_images, CheckReport};
use crate::superpoly::{
    deriv_even, deriv_odd, enumerate_basis_sites, mul_odd, mul_z, Monomial, OddMask, OddVar,
    Site, SuperPolynomial, Var, MAX_SITES,
};
use crate::{Error, Result};

/// Extra iterations a terminating exponential may take beyond the input's
/// z-degree before it is declared non-terminating.
pub const EXP_MARGIN: u32 = 5;

/// Diagonal weight `h(n) = Π (a_j)_n / Π (b_k)_n` on z-degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PochhammerSpec {
    pub numerator_offsets: Vec<Rational>,
    pub denominator_offsets: Vec<Rational>,
}

impl PochhammerSpec {
    pub fn new(numerator_offsets: Vec<Rational>, denominator_offsets: Vec<Rational>) -> Self {
        PochhammerSpec {
            numerator_offsets,
            denominator_offsets,
        }
    }

    pub fn eval(&self, n: u32) -> Result<Rational> {
        let mut num = Rational::one();
        let mut den = Rational::one();
        for k in 0..n {
            let k = int(k as i64);
            for a in &self.numerator_offsets {
                num *= a + &k;
            }
            for b in &self.denominator_offsets {
                den *= b + &k;
            }
        }
        if den.is_zero() {
            return Err(Error::SingularDiagonal { degree: n });
        }
        Ok(num / den)
    }
}

#[derive(Clone, Debug)]
pub enum Operator {
    MulByVar(Var),
    /// Left multiplication by a fixed polynomial.
    MulByPoly(Arc<SuperPolynomial>),
    EvenDeriv(Site),
    OddDeriv(OddVar),
    DegreeDiagonal(Site, Arc<PochhammerSpec>),
    Scalar(Rational),
    /// Relabels the variables of two sites, `Ψ(.., Z_a, .., Z_b, ..) ↦ Ψ(.., Z_b, .., Z_a, ..)`.
    SwapSites(Site, Site),
    Sum(Arc<Vec<Operator>>),
    /// Applied right to left.
    Compose(Arc<Vec<Operator>>),
    TerminatingExp(Arc<Operator>),
}

impl Operator {
    pub fn identity() -> Operator {
        Operator::Scalar(Rational::one())
    }

    pub fn zero() -> Operator {
        Operator::Scalar(Rational::zero())
    }

    pub fn scalar(c: Rational) -> Operator {
        Operator::Scalar(c)
    }

    pub fn z(site: Site) -> Operator {
        Operator::MulByVar(Var::Even(site))
    }

    pub fn theta(site: Site) -> Operator {
        Operator::MulByVar(Var::Odd(site.theta()))
    }

    pub fn theta_bar(site: Site) -> Operator {
        Operator::MulByVar(Var::Odd(site.theta_bar()))
    }

    pub fn d(site: Site) -> Operator {
        Operator::EvenDeriv(site)
    }

    pub fn d_theta(site: Site) -> Operator {
        Operator::OddDeriv(site.theta())
    }

    pub fn d_theta_bar(site: Site) -> Operator {
        Operator::OddDeriv(site.theta_bar())
    }

    pub fn mul_poly(p: SuperPolynomial) -> Operator {
        Operator::MulByPoly(Arc::new(p))
    }

    pub fn diagonal(site: Site, spec: PochhammerSpec) -> Operator {
        Operator::DegreeDiagonal(site, Arc::new(spec))
    }

    pub fn sum(ops: Vec<Operator>) -> Operator {
        Operator::Sum(Arc::new(ops))
    }

    /// `ops[0] ∘ ops[1] ∘ ...`, so the last operator acts first.
    pub fn compose(ops: Vec<Operator>) -> Operator {
        Operator::Compose(Arc::new(ops))
    }

    pub fn then(&self, first: &Operator) -> Operator {
        Operator::compose(vec![self.clone(), first.clone()])
    }

    pub fn scale(&self, c: Rational) -> Operator {
        Operator::compose(vec![Operator::Scalar(c), self.clone()])
    }

    pub fn exp(&self) -> Operator {
        exp_terminating(self)
    }

    /// `Some(0|1)` when the operator has a definite parity.
    pub fn parity(&self) -> Option<u8> {
        match self {
            Operator::MulByVar(Var::Even(_)) | Operator::EvenDeriv(_) => Some(0),
            Operator::MulByVar(Var::Odd(_)) | Operator::OddDeriv(_) => Some(1),
            Operator::MulByPoly(p) => p.parity(),
            Operator::DegreeDiagonal(..) | Operator::Scalar(_) | Operator::SwapSites(..) => Some(0),
            Operator::Sum(ops) => {
                let mut it = ops.iter().map(Operator::parity);
                match it.next() {
                    None => Some(0),
                    Some(first) => {
                        let first = first?;
                        for p in it {
                            if p? != first {
                                return None;
                            }
                        }
                        Some(first)
                    }
                }
            }
            Operator::Compose(ops) => ops
                .iter()
                .try_fold(0u8, |acc, o| o.parity().map(|p| (acc + p) % 2)),
            Operator::TerminatingExp(inner) => match inner.parity()? {
                0 => Some(0),
                _ => None,
            },
        }
    }

    pub fn apply(&self, p: &SuperPolynomial) -> Result<SuperPolynomial> {
        apply(self, p)
    }

    pub fn apply_monomial(&self, m: Monomial) -> Result<SuperPolynomial> {
        apply(self, &SuperPolynomial::monomial(m))
    }
}

pub fn apply(op: &Operator, p: &SuperPolynomial) -> Result<SuperPolynomial> {
    if p.is_zero() {
        return Ok(SuperPolynomial::zero());
    }
    Ok(match op {
        Operator::MulByVar(Var::Even(s)) => mul_z(*s, p),
        Operator::MulByVar(Var::Odd(v)) => mul_odd(*v, p),
        Operator::MulByPoly(q) => q.as_ref() * p,
        Operator::EvenDeriv(s) => deriv_even(*s, p),
        Operator::OddDeriv(v) => deriv_odd(*v, p),
        Operator::Scalar(c) => p.scale(c),
        Operator::DegreeDiagonal(s, spec) => {
            let mut out = SuperPolynomial::zero();
            for (m, c) in p.terms() {
                out.add_term(*m, c * spec.eval(m.z[s.index()])?);
            }
            out
        }
        Operator::SwapSites(a, b) => swap_sites(*a, *b, p),
        Operator::Sum(ops) => {
            let mut out = SuperPolynomial::zero();
            for o in ops.iter() {
                out += &apply(o, p)?;
            }
            out
        }
        Operator::Compose(ops) => {
            let mut cur = p.clone();
            for o in ops.iter().rev() {
                cur = apply(o, &cur)?;
                if cur.is_zero() {
                    break;
                }
            }
            cur
        }
        Operator::TerminatingExp(inner) => apply_exp(inner, p)?,
    })
}

fn apply_exp(inner: &Operator, p: &SuperPolynomial) -> Result<SuperPolynomial> {
    let budget = p.max_z_degree() + EXP_MARGIN;
    let mut sum = p.clone();
    let mut term = p.clone();
    for k in 1..=budget {
        term = apply(inner, &term)?.scale(&Rational::new(1.into(), k.into()));
        if term.is_zero() {
            return Ok(sum);
        }
        sum += &term;
    }
    Err(Error::NonTerminatingExp { budget })
}

fn swap_sites(a: Site, b: Site, p: &SuperPolynomial) -> SuperPolynomial {
    let image = |i: usize| -> usize {
        let s = i / 2;
        let t = if s == a.index() {
            b.index()
        } else if s == b.index() {
            a.index()
        } else {
            s
        };
        2 * t + i % 2
    };
    p.map_terms(|m, c| {
        let mut z = m.z;
        z.swap(a.index(), b.index());
        // image positions of the odd factors, listed in their original order
        let seq: Vec<usize> = (0..2 * MAX_SITES)
            .filter(|&i| m.odd.bits() & (1 << i) != 0)
            .map(image)
            .collect();
        let mut inversions = 0;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inversions += 1;
                }
            }
        }
        let bits = seq.iter().fold(0u8, |acc, &i| acc | (1 << i));
        let c = if inversions % 2 == 1 { -c } else { c.clone() };
        Some((Monomial::new(z, OddMask::from_bits(bits)), c))
    })
}

/// `A∘B − (−1)^{|A||B|} B∘A`.
pub fn graded_commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    let pa = a.parity().ok_or(Error::IndefiniteParity)?;
    let pb = b.parity().ok_or(Error::IndefiniteParity)?;
    let sign = if pa * pb == 1 { int(1) } else { int(-1) };
    Ok(Operator::sum(vec![a.then(b), b.then(a).scale(sign)]))
}

/// `Σ_k A^k / k!`, evaluated lazily until a term vanishes.
pub fn exp_terminating(a: &Operator) -> Operator {
    Operator::TerminatingExp(Arc::new(a.clone()))
}

/// Compares `a` and `b` on every two-site monomial of z-degree `≤ max_degree`.
pub fn equal_on_degree(a: &Operator, b: &Operator, max_degree: u32) -> Result<CheckReport> {
    equal_on_basis("operator-equality", a, b, 2, max_degree)
}

pub fn equal_on_basis(
    name: &str,
    a: &Operator,
    b: &Operator,
    sites: usize,
    max_degree: u32,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(name, max_degree);
    let basis = enumerate_basis_sites(sites, max_degree);
    compare_images(
        &mut report,
        &basis,
        |m| m.to_string(),
        |m| a.apply_monomial(*m),
        |m| b.apply_monomial(*m),
    )?;
    Ok(report)
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator::sum(vec![self, rhs])
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator::sum(vec![self, -rhs])
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(int(-1))
    }
}

/// Composition: `(a * b)(p) = a(b(p))`.
impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator::compose(vec![self, rhs])
    }
}

impl Mul<Operator> for Rational {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::superpoly::enumerate_basis;

    const S1: Site = Site::ONE;
    const S2: Site = Site::TWO;

    fn z1() -> SuperPolynomial {
        SuperPolynomial::z(S1)
    }

    #[test]
    fn apply_examples() {
        let op = Operator::d(S1) * Operator::z(S1);
        assert_eq!(op.apply(&SuperPolynomial::one()).unwrap(), SuperPolynomial::one());

        // oracle: (3)_2 / (5)_2 evaluated by an explicit loop
        let (mut num, mut den) = (int(1), int(1));
        for k in 0..2 {
            num *= int(3 + k);
            den *= int(5 + k);
        }
        let expected = num / den;
        assert_eq!(expected, q(2, 5));
        let diag = Operator::diagonal(S1, PochhammerSpec::new(vec![int(3)], vec![int(5)]));
        assert_eq!(diag.apply(&z1().pow(2)).unwrap(), z1().pow(2).scale(&expected));

        let p = &(&SuperPolynomial::z(S2) * &SuperPolynomial::theta(S1)) * &SuperPolynomial::theta_bar(S2);
        let want = &SuperPolynomial::z(S2) * &SuperPolynomial::theta_bar(S2);
        assert_eq!(Operator::d_theta(S1).apply(&p).unwrap(), want);
    }

    #[test]
    fn singular_diagonal_errors() {
        let diag = Operator::diagonal(S1, PochhammerSpec::new(vec![], vec![int(-1)]));
        assert!(diag.apply(&z1()).is_ok());
        assert_eq!(
            diag.apply(&z1().pow(2)),
            Err(Error::SingularDiagonal { degree: 2 })
        );
    }

    #[test]
    fn commutator_examples() {
        let c = graded_commutator(&Operator::d(S1), &Operator::z(S1)).unwrap();
        assert!(equal_on_degree(&c, &Operator::identity(), 3).unwrap().passed());
        let c = graded_commutator(&Operator::d_theta(S1), &Operator::theta(S1)).unwrap();
        assert!(equal_on_degree(&c, &Operator::identity(), 3).unwrap().passed());
        let c = graded_commutator(&Operator::d_theta(S1), &Operator::theta_bar(S2)).unwrap();
        assert!(equal_on_degree(&c, &Operator::zero(), 3).unwrap().passed());

        let mixed = Operator::theta(S1) + Operator::z(S1);
        assert_eq!(
            graded_commutator(&mixed, &Operator::z(S1)).err(),
            Some(Error::IndefiniteParity)
        );
    }

    #[test]
    fn exp_examples() {
        let th2 = SuperPolynomial::theta(S2);
        let e = exp_terminating(&(Operator::theta(S1) * Operator::d_theta(S2)));
        assert_eq!(e.apply(&th2).unwrap(), &th2 + &SuperPolynomial::theta(S1));

        let e = exp_terminating(&(Operator::z(S1) * Operator::d(S2)).scale(int(-1)));
        assert_eq!(
            e.apply(&SuperPolynomial::z(S2)).unwrap(),
            &SuperPolynomial::z(S2) - &z1()
        );

        let tt = &SuperPolynomial::theta(S1) * &SuperPolynomial::theta_bar(S1);
        let gen = Operator::mul_poly(tt.scale(&q(1, 2))) * Operator::d(S1);
        let got = exp_terminating(&gen).apply(&z1().pow(2)).unwrap();
        assert_eq!(got, &z1().pow(2) + &(&z1() * &tt));
    }

    #[test]
    fn exp_budget_is_enforced() {
        // multiplication by z never terminates
        let e = exp_terminating(&Operator::z(S1));
        assert_eq!(
            e.apply(&SuperPolynomial::one()),
            Err(Error::NonTerminatingExp { budget: EXP_MARGIN })
        );
    }

    #[test]
    fn equality_examples() {
        assert!(equal_on_degree(&Operator::identity(), &Operator::compose(vec![]), 3)
            .unwrap()
            .passed());
        let lhs = Operator::d(S1) * Operator::z(S1);
        let rhs = Operator::z(S1) * Operator::d(S1) + Operator::identity();
        assert!(equal_on_degree(&lhs, &rhs, 4).unwrap().passed());

        let r = equal_on_degree(&Operator::d_theta(S1), &Operator::d_theta_bar(S1), 2).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failures[0].input, "th1");
    }

    #[test]
    fn swap_sites_signs() {
        let p = &SuperPolynomial::theta(S1) * &SuperPolynomial::theta(S2);
        let sw = Operator::SwapSites(S1, S2);
        assert_eq!(sw.apply(&p).unwrap(), -&p);
        assert!(equal_on_degree(&(sw.clone() * sw), &Operator::identity(), 3)
            .unwrap()
            .passed());
    }

    #[test]
    fn empty_diagonal_is_identity() {
        let d = Operator::diagonal(S2, PochhammerSpec::default());
        assert!(equal_on_degree(&d, &Operator::identity(), 3).unwrap().passed());
    }

    #[test]
    fn parity_shift_on_basis() {
        let ops = [
            Operator::theta(S1) * Operator::d(S2),
            Operator::d_theta_bar(S2),
            Operator::z(S1) + Operator::d(S1),
        ];
        for op in &ops {
            let p = op.parity().unwrap();
            for m in enumerate_basis(2) {
                let img = op.apply_monomial(m).unwrap();
                if !img.is_zero() {
                    assert_eq!(img.parity(), Some((m.parity() + p) % 2));
                }
            }
        }
    }
}
