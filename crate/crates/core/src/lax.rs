//! Lax operators on `V ⊗ C[z, θ, θ̄]`, their factorized form and the RLL relation.

use num_traits::{One, Zero};

use crate::graded::{equal_full, AuxMatrix, FullOp, SuperMatrixOperator};
use crate::opalg::{exp_terminating, Operator};
use crate::rational::{int, q, Rational};
use crate::report::{guarded, CheckReport};
use crate::sl21::{
    build_generators, fundamental_rep, grade, mat_unit, Chirality, Generator, Mat3, SiteGenerators,
    Weight,
};
use crate::superpoly::{Site, SuperPolynomial};

/// Spectral parameters `(u₁, u₂, u₃)` of a Lax operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralTriple {
    pub u1: Rational,
    pub u2: Rational,
    pub u3: Rational,
}

impl SpectralTriple {
    pub fn new(u1: Rational, u2: Rational, u3: Rational) -> Self {
        SpectralTriple { u1, u2, u3 }
    }

    /// `u₁ = u+b+ℓ, u₂ = u+2b, u₃ = u+b−ℓ`.
    pub fn from_weight(u: &Rational, w: &Weight) -> Self {
        SpectralTriple {
            u1: u + &w.b + &w.ell,
            u2: u + int(2) * &w.b,
            u3: u + &w.b - &w.ell,
        }
    }

    pub fn ell(&self) -> Rational {
        (&self.u1 - &self.u3) / int(2)
    }

    pub fn b(&self) -> Rational {
        &self.u2 - (&self.u1 + &self.u3) / int(2)
    }

    pub fn u(&self) -> Rational {
        &self.u2 - int(2) * self.b()
    }

    pub fn weight(&self) -> Weight {
        Weight::new(self.ell(), self.b())
    }

    pub fn push_params(&self, report: &mut CheckReport, prefix: &str) {
        report.push_param(&format!("{prefix}1"), &self.u1);
        report.push_param(&format!("{prefix}2"), &self.u2);
        report.push_param(&format!("{prefix}3"), &self.u3);
    }
}

/// `D⁻ = −∂_θ̄ + ½θ∂` and `D⁺ = −∂_θ + ½θ̄∂` at one site.
#[derive(Clone, Debug)]
pub struct CovariantDerivatives {
    pub site: Site,
    pub d_minus: Operator,
    pub d_plus: Operator,
}

impl CovariantDerivatives {
    pub fn new(site: Site) -> Self {
        let half = q(1, 2);
        let d = Operator::d(site);
        CovariantDerivatives {
            site,
            d_minus: -Operator::d_theta_bar(site)
                + Operator::mul_poly(SuperPolynomial::theta(site).scale(&half)) * d.clone(),
            d_plus: -Operator::d_theta(site)
                + Operator::mul_poly(SuperPolynomial::theta_bar(site).scale(&half)) * d,
        }
    }
}

/// `D±² = 0` and `{D⁺, D⁻} = −∂`, checked on the site's monomials.
pub fn check_covariant_derivatives(site: Site, max_degree: u32) -> CheckReport {
    let report = CheckReport::new("covariant-derivatives", max_degree);
    guarded(report, |report| {
        let cd = CovariantDerivatives::new(site);
        let n = site.number();
        let zero = Operator::zero();
        let pairs = [
            ("D-^2", cd.d_minus.clone() * cd.d_minus.clone(), zero.clone()),
            ("D+^2", cd.d_plus.clone() * cd.d_plus.clone(), zero),
            (
                "{D+,D-}",
                cd.d_plus.clone() * cd.d_minus.clone() + cd.d_minus.clone() * cd.d_plus.clone(),
                -Operator::d(site),
            ),
        ];
        for (name, a, b) in pairs {
            let r = crate::opalg::equal_on_basis(name, &a, &b, n, max_degree)?;
            report.absorb(name, r);
        }
        Ok(())
    })
}

fn poly_op(p: SuperPolynomial) -> Operator {
    Operator::mul_poly(p)
}

/// The Lax matrix in explicit differential form at one site.
fn printed_chiral(site: Site, t: &SpectralTriple) -> SuperMatrixOperator {
    let half = q(1, 2);
    let z = || SuperPolynomial::z(site);
    let th = || SuperPolynomial::theta(site);
    let thb = || SuperPolynomial::theta_bar(site);
    let tt = || (&th() * &thb()).scale(&half);
    let d = || Operator::d(site);
    let dth = || Operator::d_theta(site);
    let dthb = || Operator::d_theta_bar(site);
    let sc = |r: &Rational| Operator::scalar(r.clone());

    let l11 = poly_op(z()) * d() + poly_op(thb()) * dthb() + sc(&t.u1);
    let l12 = -(dthb() + poly_op(th().scale(&half)) * d());
    let l13 = -d();
    let l21 = Operator::sum(vec![
        -(poly_op(&z() - &tt()) * dth()),
        -(poly_op((&thb() * &z()).scale(&half)) * d()),
        poly_op(thb().scale(&(&t.u2 - &t.u1))),
    ]);
    let l22 = poly_op(thb()) * dthb() - poly_op(th()) * dth() + sc(&t.u2);
    let l23 = dth() + poly_op(thb().scale(&half)) * d();
    let l31 = Operator::sum(vec![
        poly_op(z().pow(2)) * d(),
        poly_op(&z() * &th()) * dth(),
        poly_op(&z() * &thb()) * dthb(),
        poly_op(z().scale(&(&t.u1 - &t.u3))),
        poly_op(tt().scale(&(&t.u1 + &t.u3 - int(2) * &t.u2))),
    ]);
    let l32 = Operator::sum(vec![
        -(poly_op(&z() + &tt()) * dthb()),
        -(poly_op((&th() * &z()).scale(&half)) * d()),
        poly_op(th().scale(&(&t.u3 - &t.u2))),
    ]);
    let l33 = -(poly_op(z()) * d()) - poly_op(th()) * dth() + sc(&t.u3);
    let rows = [[l11, l12, l13], [l21, l22, l23], [l31, l32, l33]];
    SuperMatrixOperator::from_fn(|i, k| rows[i - 1][k - 1].clone())
}

/// The Lax matrix written through the generators of weight `t.weight()`.
pub fn lax_from_generators(g: &SiteGenerators, u: &Rational, kind: Chirality) -> SuperMatrixOperator {
    use Generator::*;
    let gen = |x: Generator| g.get(x).clone();
    let uo = || Operator::scalar(u.clone());
    let rows = match kind {
        Chirality::Chiral => [
            [gen(S) + gen(B) + uo(), -gen(WMinus), gen(SMinus)],
            [gen(VPlus), gen(B).scale(int(2)) + uo(), gen(VMinus)],
            [gen(SPlus), gen(WPlus), gen(B) - gen(S) + uo()],
        ],
        Chirality::Antichiral => [
            [gen(S) - gen(B) + uo(), -gen(VMinus), gen(SMinus)],
            [gen(WPlus), gen(B).scale(int(-2)) + uo(), gen(WMinus)],
            [gen(SPlus), gen(VPlus), -gen(B) - gen(S) + uo()],
        ],
    };
    SuperMatrixOperator::from_fn(|i, k| rows[i - 1][k - 1].clone())
}

/// Chiral: the explicit differential matrix. Antichiral: the generator matrix
/// at the weight and shift encoded by `t`.
pub fn build_lax(site: Site, t: &SpectralTriple, kind: Chirality) -> SuperMatrixOperator {
    match kind {
        Chirality::Chiral => printed_chiral(site, t),
        Chirality::Antichiral => {
            lax_from_generators(&build_generators(site, &t.weight()), &t.u(), kind)
        }
    }
}

/// `u + 2s⊗S − 2b⊗B + v₊⊗W₋ + s₊⊗S₋ − w₋⊗V₊ + w₊⊗V₋ + s₋⊗S₊ − v₋⊗W₊`
/// with the matrices of the chosen three-dimensional representation.
pub fn build_lax_tensor(site: Site, t: &SpectralTriple, kind: Chirality, slot: usize) -> FullOp {
    use Generator::*;
    let rep = fundamental_rep(kind);
    let g = build_generators(site, &t.weight());
    let legs: [(i64, Generator, Generator); 8] = [
        (2, S, S),
        (-2, B, B),
        (1, VPlus, WMinus),
        (1, SPlus, SMinus),
        (-1, WMinus, VPlus),
        (1, WPlus, VMinus),
        (1, SMinus, SPlus),
        (-1, VMinus, WPlus),
    ];
    let mut terms = vec![FullOp::Scalar(t.u())];
    for (c, a, x) in legs {
        terms.push(FullOp::tensor(
            slot,
            rep.get(a).clone(),
            a.parity(),
            g.get(x).scale(int(c)),
        ));
    }
    FullOp::Sum(terms)
}

fn lower(site: Site, sign: i64) -> SuperMatrixOperator {
    let s = int(sign);
    let z = SuperPolynomial::z(site);
    let th = SuperPolynomial::theta(site);
    let thb = SuperPolynomial::theta_bar(site);
    let tt = (&th * &thb).scale(&q(1, 2));
    let zero = SuperPolynomial::zero;
    SuperMatrixOperator::from_polys([
        [SuperPolynomial::one(), zero(), zero()],
        [thb.scale(&-s.clone()), SuperPolynomial::one(), zero()],
        [&z.scale(&s) + &tt, th.scale(&-s), SuperPolynomial::one()],
    ])
}

fn middle(site: Site, t: &SpectralTriple) -> SuperMatrixOperator {
    let cd = CovariantDerivatives::new(site);
    let sc = |r: Rational| Operator::scalar(r);
    let rows = [
        [sc(t.u1.clone()), cd.d_minus.clone(), -Operator::d(site)],
        [Operator::zero(), sc(&t.u2 - int(1)), -cd.d_plus.clone()],
        [Operator::zero(), Operator::zero(), sc(t.u3.clone())],
    ];
    SuperMatrixOperator::from_fn(|i, k| rows[i - 1][k - 1].clone())
}

/// The three factors `(lower, upper, lower)` of the factorized Lax operator.
pub fn lax_factors(site: Site, t: &SpectralTriple) -> [SuperMatrixOperator; 3] {
    [lower(site, 1), middle(site, t), lower(site, -1)]
}

/// Product of the three factors, realized on the single auxiliary slot.
pub fn build_lax_factorized(site: Site, t: &SpectralTriple, slot: usize) -> FullOp {
    let [a, b, c] = lax_factors(site, t);
    FullOp::Compose(vec![a.at(slot), b.at(slot), c.at(slot)])
}

pub fn check_tensor_lax(site: Site, t: &SpectralTriple, kind: Chirality, max_degree: u32) -> CheckReport {
    let name = match kind {
        Chirality::Chiral => "lax-tensor-chiral",
        Chirality::Antichiral => "lax-tensor-antichiral",
    };
    let mut report = CheckReport::new(name, max_degree);
    t.push_params(&mut report, "u");
    guarded(report, |report| {
        let printed = build_lax(site, t, kind).at(0);
        let tensor = build_lax_tensor(site, t, kind, 0);
        report.absorb(
            "tensor-vs-matrix",
            equal_full("tensor-vs-matrix", &tensor, &printed, 1, site.number(), max_degree)?,
        );
        if kind == Chirality::Chiral {
            let gens = lax_from_generators(&build_generators(site, &t.weight()), &t.u(), kind).at(0);
            report.absorb(
                "generators-vs-matrix",
                equal_full("generators-vs-matrix", &gens, &printed, 1, site.number(), max_degree)?,
            );
        }
        Ok(())
    })
}

pub fn check_factorized(site: Site, t: &SpectralTriple, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("lax-factorized", max_degree);
    t.push_params(&mut report, "u");
    guarded(report, |report| {
        let r = equal_full(
            "factorized-vs-matrix",
            &build_lax_factorized(site, t, 0),
            &build_lax(site, t, Chirality::Chiral).at(0),
            1,
            site.number(),
            max_degree,
        )?;
        report.absorb("factorized-vs-matrix", r);
        Ok(())
    })
}

/// `ℝ(u) = u + P` on `V ⊗ V`, with `P e_i⊗e_k = (−1)^{īk̄} e_k⊗e_i`.
pub fn fundamental_rmatrix(u: &Rational) -> AuxMatrix {
    let mut entries = Vec::new();
    for i in 0..3 {
        for k in 0..3 {
            let col = i * 3 + k;
            let row = k * 3 + i;
            let sign = if grade(i + 1) * grade(k + 1) == 1 { int(-1) } else { int(1) };
            if row == col {
                entries.push((row, col, sign + u));
            } else {
                entries.push((row, col, sign));
                if !u.is_zero() {
                    entries.push((col, col, u.clone()));
                }
            }
        }
    }
    AuxMatrix { slots: 2, entries }
}

/// `ℝ₁₂(u−v) L⁽¹⁾(u) L⁽²⁾(v) = L⁽²⁾(v) L⁽¹⁾(u) ℝ₁₂(u−v)` for given Lax matrices.
pub fn check_rll_matrices(
    name: &str,
    l_u: &SuperMatrixOperator,
    l_v: &SuperMatrixOperator,
    u_minus_v: &Rational,
    max_degree: u32,
) -> CheckReport {
    let report = CheckReport::new(name, max_degree);
    guarded(report, |report| {
        let r = FullOp::aux(fundamental_rmatrix(u_minus_v));
        let lhs = FullOp::Compose(vec![r.clone(), l_u.at(0), l_v.at(1)]);
        let rhs = FullOp::Compose(vec![l_v.at(1), l_u.at(0), r]);
        let sub = equal_full(name, &lhs, &rhs, 2, 1, max_degree)?;
        report.absorb("rll", sub);
        Ok(())
    })
}

pub fn check_rll(w: &Weight, u: &Rational, v: &Rational, kind: Chirality, max_degree: u32) -> CheckReport {
    let name = match kind {
        Chirality::Chiral => "rll-chiral",
        Chirality::Antichiral => "rll-antichiral",
    };
    let site = Site::ONE;
    let l_u = build_lax(site, &SpectralTriple::from_weight(u, w), kind);
    let l_v = build_lax(site, &SpectralTriple::from_weight(v, w), kind);
    let mut report = check_rll_matrices(name, &l_u, &l_v, &(u - v), max_degree);
    w.push_params(&mut report, "");
    report.push_param("u", u);
    report.push_param("v", v);
    report
}

/// Orientation of the conjugator in the even-sector invariance identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvarianceForm {
    /// `𝕊 = e^{−λS⁻}` against `M` with `+λ` in the corner.
    Consistent,
    /// `𝕊 = e^{λS⁻}` against the same `M`.
    Printed,
}

/// `M⁻¹ L M = 𝕊⁻¹ L 𝕊` with `M = 1 + λE₃₁` and `𝕊` an exponential of `S⁻`.
pub fn check_invariance(
    site: Site,
    t: &SpectralTriple,
    lambda: &Rational,
    form: InvarianceForm,
    max_degree: u32,
) -> CheckReport {
    let mut report = CheckReport::new(
        match form {
            InvarianceForm::Consistent => "lax-invariance",
            InvarianceForm::Printed => "lax-invariance-printed",
        },
        max_degree,
    );
    t.push_params(&mut report, "u");
    report.push_param("lambda", lambda);
    guarded(report, |report| {
        let corner = |c: &Rational| -> Mat3 {
            let mut m = mat_unit(1, 1);
            m[1][1] = Rational::one();
            m[2][2] = Rational::one();
            m[2][0] = c.clone();
            m
        };
        let m = SuperMatrixOperator::from_scalars(&corner(lambda));
        let m_inv = SuperMatrixOperator::from_scalars(&corner(&-lambda.clone()));
        let l = build_lax(site, t, Chirality::Chiral);
        let s_minus = build_generators(site, &t.weight()).get(Generator::SMinus).clone();
        let exponent = match form {
            InvarianceForm::Consistent => -lambda.clone(),
            InvarianceForm::Printed => lambda.clone(),
        };
        let s = exp_terminating(&s_minus.scale(exponent.clone()));
        let s_inv = exp_terminating(&s_minus.scale(-exponent));
        let lhs = FullOp::Compose(vec![m_inv.at(0), l.at(0), m.at(0)]);
        let rhs = FullOp::Compose(vec![FullOp::Quantum(s_inv), l.at(0), FullOp::Quantum(s)]);
        let sub = equal_full("invariance", &lhs, &rhs, 1, site.number(), max_degree)?;
        report.absorb("invariance", sub);
        Ok(())
    })
}
