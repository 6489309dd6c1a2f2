//! sl(2|1) in the functional representation on `C[z, θ, θ̄]` and in the two
//! three-dimensional representations.
//!
//! Generators are indexed through `E_AB` with grading `1̄ = 3̄ = 0, 2̄ = 1`:
//! `E31 = S⁻, E21 = −W⁻, E32 = V⁻, E13 = S⁺, E23 = W⁺, E12 = V⁺`, and the
//! Cartan part `E11 = B + S, E22 = −2B, E33 = B − S`. With these, both the
//! differential operators and the 3×3 matrices satisfy
//! `[E_AB, E_CD] = δ_CB E_AD − (−)^{(Ā+B̄)(C̄+D̄)} δ_AD E_CB`.
//! The opposite assignment of `E11` and `E33` is kept as
//! [`CartanConvention::Printed`] so the mismatch stays testable.

use rayon::prelude::*;

use num_traits::{One, Zero};

use crate::linalg::solve_in_span;
use crate::opalg::{equal_on_basis, graded_commutator, Operator};
use crate::rational::{hits_nonpositive_integer, int, pochhammer, q, render, Rational};
use crate::report::{guarded, CheckReport};
use crate::superpoly::{Site, SuperPolynomial};
use crate::{Error, Result};

/// Lowest weight `Λ = (ℓ, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub ell: Rational,
    pub b: Rational,
}

impl Weight {
    pub fn new(ell: Rational, b: Rational) -> Self {
        Weight { ell, b }
    }

    pub fn push_params(&self, report: &mut CheckReport, suffix: &str) {
        report.push_param(&format!("ell{suffix}"), &self.ell);
        report.push_param(&format!("b{suffix}"), &self.b);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    S,
    B,
    SPlus,
    SMinus,
    VPlus,
    VMinus,
    WPlus,
    WMinus,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::S,
        Generator::B,
        Generator::SPlus,
        Generator::SMinus,
        Generator::VPlus,
        Generator::VMinus,
        Generator::WPlus,
        Generator::WMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::S => "S",
            Generator::B => "B",
            Generator::SPlus => "S+",
            Generator::SMinus => "S-",
            Generator::VPlus => "V+",
            Generator::VMinus => "V-",
            Generator::WPlus => "W+",
            Generator::WMinus => "W-",
        }
    }

    pub fn parity(self) -> u8 {
        match self {
            Generator::VPlus | Generator::VMinus | Generator::WPlus | Generator::WMinus => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanConvention {
    /// `E11 = B + S`, `E33 = B − S`; consistent with both representations.
    Consistent,
    /// `E11 = B − S`, `E33 = B + S`, as the dictionary is usually printed.
    Printed,
}

/// Grading of the auxiliary index `A ∈ {1, 2, 3}`.
pub fn grade(a: usize) -> u8 {
    u8::from(a == 2)
}

/// `E_AB` as a signed combination of generators.
pub fn e_combination(a: usize, b: usize, conv: CartanConvention) -> Vec<(Rational, Generator)> {
    use Generator::*;
    let (s_sign, b_for_s) = match conv {
        CartanConvention::Consistent => (1, -1),
        CartanConvention::Printed => (-1, 1),
    };
    match (a, b) {
        (3, 1) => vec![(int(1), SMinus)],
        (2, 1) => vec![(int(-1), WMinus)],
        (3, 2) => vec![(int(1), VMinus)],
        (1, 3) => vec![(int(1), SPlus)],
        (2, 3) => vec![(int(1), WPlus)],
        (1, 2) => vec![(int(1), VPlus)],
        (1, 1) => vec![(int(1), B), (int(s_sign), S)],
        (2, 2) => vec![(int(-2), B)],
        (3, 3) => vec![(int(1), B), (int(b_for_s), S)],
        _ => panic!("E index out of range: ({a},{b})"),
    }
}

/// The eight generators at one site, acting as the identity elsewhere.
#[derive(Clone, Debug)]
pub struct SiteGenerators {
    pub site: Site,
    pub weight: Weight,
    gens: Vec<Operator>,
}

impl SiteGenerators {
    pub fn get(&self, g: Generator) -> &Operator {
        &self.gens[Generator::ALL.iter().position(|x| *x == g).unwrap()]
    }

    pub fn e(&self, a: usize, b: usize, conv: CartanConvention) -> Operator {
        Operator::sum(
            e_combination(a, b, conv)
                .into_iter()
                .map(|(c, g)| self.get(g).scale(c))
                .collect(),
        )
    }

    pub fn with_replaced(&self, g: Generator, op: Operator) -> Self {
        let mut out = self.clone();
        let i = Generator::ALL.iter().position(|x| *x == g).unwrap();
        out.gens[i] = op;
        out
    }
}

pub fn build_generators(site: Site, w: &Weight) -> SiteGenerators {
    use Generator::*;
    let z = || SuperPolynomial::z(site);
    let th = || SuperPolynomial::theta(site);
    let thb = || SuperPolynomial::theta_bar(site);
    let mulp = Operator::mul_poly;
    let d = Operator::d(site);
    let dth = Operator::d_theta(site);
    let dthb = Operator::d_theta_bar(site);
    let half = q(1, 2);

    let s_minus = -d.clone();
    let v_minus = dth.clone() + mulp(thb().scale(&half)) * d.clone();
    let w_minus = dthb.clone() + mulp(th().scale(&half)) * d.clone();
    let v_plus = -(mulp(z()) * dth.clone()
        + mulp((&thb() * &z()).scale(&half)) * d.clone()
        + mulp((&thb() * &th()).scale(&half)) * dth.clone())
        + mulp(thb().scale(&-(&w.ell - &w.b)));
    let w_plus = -(mulp(z()) * dthb.clone()
        + mulp((&th() * &z()).scale(&half)) * d.clone()
        + mulp((&th() * &thb()).scale(&half)) * dthb.clone())
        + mulp(th().scale(&-(&w.ell + &w.b)));
    let s_plus = Operator::sum(vec![
        mulp(z().pow(2)) * d.clone(),
        mulp(&z() * &th()) * dth.clone(),
        mulp(&z() * &thb()) * dthb.clone(),
        mulp(z().scale(&(int(2) * &w.ell))),
        mulp((&th() * &thb()).scale(&-w.b.clone())),
    ]);
    let s = Operator::sum(vec![
        mulp(z()) * d,
        mulp(th().scale(&half)) * dth.clone(),
        mulp(thb().scale(&half)) * dthb.clone(),
        Operator::scalar(w.ell.clone()),
    ]);
    let b = Operator::sum(vec![
        mulp(thb().scale(&half)) * dthb,
        mulp(th().scale(&-half.clone())) * dth,
        Operator::scalar(w.b.clone()),
    ]);

    let gens = Generator::ALL
        .iter()
        .map(|g| match g {
            S => s.clone(),
            B => b.clone(),
            SPlus => s_plus.clone(),
            SMinus => s_minus.clone(),
            VPlus => v_plus.clone(),
            VMinus => v_minus.clone(),
            WPlus => w_plus.clone(),
            WMinus => w_minus.clone(),
        })
        .collect();
    SiteGenerators {
        site,
        weight: w.clone(),
        gens,
    }
}

/// Exact 3×3 matrix acting as `A e_k = Σ_i e_i A_ik`.
pub type Mat3 = [[Rational; 3]; 3];

pub fn mat_zero() -> Mat3 {
    std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()))
}

pub fn mat_unit(i: usize, k: usize) -> Mat3 {
    let mut m = mat_zero();
    m[i - 1][k - 1] = Rational::one();
    m
}

fn mat_diag(d: [Rational; 3]) -> Mat3 {
    let mut m = mat_zero();
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|k| (0..3).fold(Rational::zero(), |acc, j| acc + &a[i][j] * &b[j][k]))
    })
}

pub fn mat_lin(terms: &[(Rational, &Mat3)]) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            terms
                .iter()
                .fold(Rational::zero(), |acc, (c, m)| acc + c * &m[i][k])
        })
    })
}

fn render_mat(m: &Mat3) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(render).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Chiral,
    Antichiral,
}

/// One of the two three-dimensional representations; `e2` is odd.
#[derive(Clone, Debug)]
pub struct FundamentalRep {
    pub kind: Chirality,
    matrices: Vec<Mat3>,
}

impl FundamentalRep {
    pub fn get(&self, g: Generator) -> &Mat3 {
        &self.matrices[Generator::ALL.iter().position(|x| *x == g).unwrap()]
    }

    pub fn e(&self, a: usize, b: usize, conv: CartanConvention) -> Mat3 {
        let terms: Vec<(Rational, &Mat3)> = e_combination(a, b, conv)
            .into_iter()
            .map(|(c, g)| (c, self.get(g)))
            .collect();
        mat_lin(&terms)
    }
}

pub fn fundamental_rep(kind: Chirality) -> FundamentalRep {
    use Generator::*;
    let chiral = |g: Generator| -> Mat3 {
        match g {
            SMinus => mat_unit(3, 1),
            WMinus => mat_lin(&[(int(-1), &mat_unit(2, 1))]),
            VMinus => mat_unit(3, 2),
            S => mat_diag([q(1, 2), int(0), q(-1, 2)]),
            SPlus => mat_unit(1, 3),
            WPlus => mat_unit(2, 3),
            VPlus => mat_unit(1, 2),
            B => mat_diag([q(-1, 2), int(-1), q(-1, 2)]),
        }
    };
    let matrices = Generator::ALL
        .iter()
        .map(|&g| match kind {
            Chirality::Chiral => chiral(g),
            Chirality::Antichiral => match g {
                VPlus => chiral(WPlus),
                WPlus => chiral(VPlus),
                VMinus => chiral(WMinus),
                WMinus => chiral(VMinus),
                B => mat_lin(&[(int(-1), &chiral(B))]),
                other => chiral(other),
            },
        })
        .collect();
    FundamentalRep { kind, matrices }
}

/// Index quadruples `(A, B, C, D)` of all 81 structure relations.
fn quadruples() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(81);
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                for d in 1..=3 {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn relation_sign(a: usize, b: usize, c: usize, d: usize) -> Rational {
    if (grade(a) + grade(b)) * (grade(c) + grade(d)) % 2 == 1 {
        int(-1)
    } else {
        int(1)
    }
}

fn delta(i: usize, j: usize) -> Rational {
    if i == j {
        int(1)
    } else {
        int(0)
    }
}

pub fn check_relations(g: &SiteGenerators, max_degree: u32) -> CheckReport {
    check_relations_with(g, max_degree, CartanConvention::Consistent)
}

/// All 81 graded commutators against the delta formula, on the basis of
/// monomials up to the generator's site.
pub fn check_relations_with(
    g: &SiteGenerators,
    max_degree: u32,
    conv: CartanConvention,
) -> CheckReport {
    let mut report = CheckReport::new("sl21-relations-functional", max_degree);
    g.weight.push_params(&mut report, "");
    guarded(report, |report| {
        let subs: Vec<Result<(String, CheckReport)>> = quadruples()
            .into_par_iter()
            .map(|[a, b, c, d]| {
                let lhs = graded_commutator(&g.e(a, b, conv), &g.e(c, d, conv))?;
                let sign = relation_sign(a, b, c, d);
                let rhs = Operator::sum(vec![
                    g.e(a, d, conv).scale(delta(c, b)),
                    g.e(c, b, conv).scale(-sign * delta(a, d)),
                ]);
                let name = format!("[E{a}{b},E{c}{d}]");
                let r = equal_on_basis(&name, &lhs, &rhs, g.site.number(), max_degree)?;
                Ok((name, r))
            })
            .collect();
        for s in subs {
            let (name, r) = s?;
            if !r.passed() {
                report.absorb(name, r);
            }
        }
        report.note("81 graded commutators checked");
        Ok(())
    })
}

pub fn check_rep_relations(rep: &FundamentalRep, conv: CartanConvention) -> CheckReport {
    let name = match rep.kind {
        Chirality::Chiral => "sl21-relations-chiral",
        Chirality::Antichiral => "sl21-relations-antichiral",
    };
    let mut report = CheckReport::new(name, 0);
    for [a, b, c, d] in quadruples() {
        let (x, y) = (rep.e(a, b, conv), rep.e(c, d, conv));
        let sign = relation_sign(a, b, c, d);
        let lhs = mat_lin(&[(int(1), &mat_mul(&x, &y)), (-sign.clone(), &mat_mul(&y, &x))]);
        let rhs = mat_lin(&[
            (delta(c, b), &rep.e(a, d, conv)),
            (-sign * delta(a, d), &rep.e(c, b, conv)),
        ]);
        if lhs != rhs {
            report.fail_msg(format!("[E{a}{b},E{c}{d}]"), render_mat(&lhs), render_mat(&rhs));
        }
    }
    report
}

/// Quadratic (`order = 2`) or cubic (`order = 3`) Casimir operator.
pub fn casimir(g: &SiteGenerators, order: u8) -> Operator {
    use Generator::*;
    match order {
        2 => Operator::sum(vec![
            g.get(S).clone() * g.get(S).clone(),
            -(g.get(B).clone() * g.get(B).clone()),
            g.get(SPlus).clone() * g.get(SMinus).clone(),
            g.get(VPlus).clone() * g.get(WMinus).clone(),
            g.get(WPlus).clone() * g.get(VMinus).clone(),
        ]),
        3 => {
            let conv = CartanConvention::Consistent;
            let mut terms = Vec::with_capacity(27);
            for a in 1..=3 {
                for b in 1..=3 {
                    for c in 1..=3 {
                        let sign = if (grade(b) + grade(c)) % 2 == 1 { q(-1, 6) } else { q(1, 6) };
                        terms.push(
                            Operator::compose(vec![g.e(a, b, conv), g.e(b, c, conv), g.e(c, a, conv)])
                                .scale(sign),
                        );
                    }
                }
            }
            Operator::sum(terms)
        }
        _ => panic!("only orders 2 and 3 are defined"),
    }
}

/// `½ Σ (−)^{B̄} E_AB E_BA`, the supertrace form of the quadratic Casimir.
pub fn casimir2_supertrace(g: &SiteGenerators) -> Operator {
    let conv = CartanConvention::Consistent;
    let mut terms = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            let sign = if grade(b) == 1 { q(-1, 2) } else { q(1, 2) };
            terms.push((g.e(a, b, conv) * g.e(b, a, conv)).scale(sign));
        }
    }
    Operator::sum(terms)
}

/// Graded commutators of a Casimir with every generator, each against zero.
pub fn check_casimir_central(g: &SiteGenerators, order: u8, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new(format!("casimir{order}-central"), max_degree);
    g.weight.push_params(&mut report, "");
    let c = casimir(g, order);
    guarded(report, |report| {
        for gen in Generator::ALL {
            let comm = graded_commutator(&c, g.get(gen))?;
            let r = equal_on_basis(gen.name(), &comm, &Operator::zero(), g.site.number(), max_degree)?;
            if !r.passed() {
                report.absorb(gen.name(), r);
            }
        }
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VermaKind {
    A,
    B,
    V,
    W,
}

/// Closed forms of the Verma basis at site 1.
pub fn verma_vector(w: &Weight, kind: VermaKind, k: u32) -> Result<SuperPolynomial> {
    let site = Site::ONE;
    let z = SuperPolynomial::z(site);
    let th = SuperPolynomial::theta(site);
    let thb = SuperPolynomial::theta_bar(site);
    let tt = &th * &thb;
    let two_l = int(2) * &w.ell;
    let singular = || Error::SingularWeight(format!("2ell = {}", render(&two_l)));
    let kq = int(k as i64);
    Ok(match kind {
        VermaKind::A => {
            if k == 0 {
                return Ok(SuperPolynomial::one());
            }
            if two_l.is_zero() {
                return Err(singular());
            }
            let inner = &z - &tt.scale(&(&kq * &w.b / &two_l));
            (&inner * &z.pow(k - 1)).scale(&pochhammer(&two_l, k))
        }
        VermaKind::B => {
            if k == 0 {
                return Err(Error::SingularWeight("b_k needs k >= 1".into()));
            }
            if two_l.is_zero() {
                return Err(singular());
            }
            let inner = &z + &tt.scale(&(&w.b + &w.ell + &kq / int(2)));
            let pref = (&w.ell - &w.b) / &two_l * pochhammer(&two_l, k);
            (&inner * &z.pow(k - 1)).scale(&pref)
        }
        VermaKind::V => {
            let pref = -(&w.ell - &w.b) * pochhammer(&(&two_l + int(1)), k);
            (&z.pow(k) * &thb).scale(&pref)
        }
        VermaKind::W => {
            let pref = -(&w.ell + &w.b) * pochhammer(&(&two_l + int(1)), k);
            (&z.pow(k) * &th).scale(&pref)
        }
    })
}

/// The Verma vector obtained by literally applying raising operators to 1.
pub fn verma_by_raising(w: &Weight, kind: VermaKind, k: u32) -> Result<SuperPolynomial> {
    use Generator::*;
    let g = build_generators(Site::ONE, w);
    let mut v = SuperPolynomial::one();
    let raises = match kind {
        VermaKind::A => k,
        VermaKind::B => {
            v = g.get(WPlus).apply(&g.get(VPlus).apply(&v)?)?;
            k.saturating_sub(1)
        }
        VermaKind::V => {
            v = g.get(VPlus).apply(&v)?;
            k
        }
        VermaKind::W => {
            v = g.get(WPlus).apply(&v)?;
            k
        }
    };
    for _ in 0..raises {
        v = g.get(SPlus).apply(&v)?;
    }
    Ok(v)
}

/// Spanning vectors of the `(2n+1)`-dimensional invariant subspace.
pub fn finite_subspace_span(n: u32, kind: Chirality) -> Vec<SuperPolynomial> {
    let site = Site::ONE;
    let z = SuperPolynomial::z(site);
    let th = SuperPolynomial::theta(site);
    let thb = SuperPolynomial::theta_bar(site);
    let tt = (&th * &thb).scale(&q(1, 2));
    let (base, odd) = match kind {
        Chirality::Chiral => (&z - &tt, th),
        Chirality::Antichiral => (&z + &tt, thb),
    };
    let mut span: Vec<SuperPolynomial> = (0..=n).map(|k| base.pow(k)).collect();
    span.extend((0..n).map(|k| &odd * &z.pow(k)));
    span
}

/// The atypical weight `(−n/2, ∓n/2)` carrying the finite subspace.
pub fn finite_subspace_weight(n: u32, kind: Chirality) -> Weight {
    let half_n = q(n as i64, 2);
    let b = match kind {
        Chirality::Chiral => -half_n.clone(),
        Chirality::Antichiral => half_n.clone(),
    };
    Weight::new(-half_n, b)
}

pub fn check_finite_subspace(n: u32, kind: Chirality) -> CheckReport {
    check_finite_subspace_at(n, kind, &finite_subspace_weight(n, kind))
}

/// Closure of the spanning set under all eight generators at weight `w`.
pub fn check_finite_subspace_at(n: u32, kind: Chirality, w: &Weight) -> CheckReport {
    let mut report = CheckReport::new(
        match kind {
            Chirality::Chiral => "finite-subspace-chiral",
            Chirality::Antichiral => "finite-subspace-antichiral",
        },
        n,
    );
    report.push_param("n", &int(n as i64));
    w.push_params(&mut report, "");
    let g = build_generators(Site::ONE, w);
    let span = finite_subspace_span(n, kind);
    guarded(report, |report| {
        for gen in Generator::ALL {
            for (i, v) in span.iter().enumerate() {
                let img = g.get(gen).apply(v)?;
                if let Err(residual) = solve_in_span(&span, &img) {
                    report.fail(crate::report::Failure {
                        input: format!("{} on span vector {i}", gen.name()),
                        lhs: img.to_string(),
                        rhs: "element of span".into(),
                        residual: residual.to_string(),
                    });
                }
            }
        }
        Ok(())
    })
}

/// True unless `2ℓ` is a non-positive integer up to `k`.
pub fn is_generic_for(w: &Weight, k: u32) -> bool {
    !hits_nonpositive_integer(&(int(2) * &w.ell), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::equal_on_degree;

    fn w(l: Rational, b: Rational) -> Weight {
        Weight::new(l, b)
    }

    #[test]
    fn lowest_weight_conditions() {
        let g = build_generators(Site::ONE, &w(q(2, 3), q(1, 5)));
        let one = SuperPolynomial::one();
        assert_eq!(g.get(Generator::S).apply(&one).unwrap(), one.scale(&q(2, 3)));
        assert_eq!(g.get(Generator::B).apply(&one).unwrap(), one.scale(&q(1, 5)));
        for lowering in [Generator::SMinus, Generator::VMinus, Generator::WMinus] {
            assert!(g.get(lowering).apply(&one).unwrap().is_zero());
        }
        let z = SuperPolynomial::z(Site::ONE);
        let tt = &SuperPolynomial::theta(Site::ONE) * &SuperPolynomial::theta_bar(Site::ONE);
        let want = &z.scale(&q(4, 3)) - &tt.scale(&q(1, 5));
        assert_eq!(g.get(Generator::SPlus).apply(&one).unwrap(), want);
        let th = SuperPolynomial::theta(Site::ONE);
        assert_eq!(g.get(Generator::VMinus).apply(&th).unwrap(), one);
    }

    #[test]
    fn chiral_matrices_match_golden_data() {
        let rep = fundamental_rep(Chirality::Chiral);
        assert_eq!(*rep.get(Generator::S), mat_diag([q(1, 2), int(0), q(-1, 2)]));
        assert_eq!(*rep.get(Generator::B), mat_diag([q(-1, 2), int(-1), q(-1, 2)]));
        assert_eq!(rep.get(Generator::WMinus)[1][0], int(-1));
        assert_eq!(rep.get(Generator::VPlus)[0][1], int(1));
        assert_eq!(rep.get(Generator::WPlus)[1][2], int(1));
        let anti = fundamental_rep(Chirality::Antichiral);
        assert_eq!(*anti.get(Generator::B), mat_diag([q(1, 2), int(1), q(1, 2)]));
        assert_eq!(anti.get(Generator::VPlus), rep.get(Generator::WPlus));
    }

    #[test]
    fn representation_relations() {
        for kind in [Chirality::Chiral, Chirality::Antichiral] {
            let rep = fundamental_rep(kind);
            assert!(check_rep_relations(&rep, CartanConvention::Consistent).passed());
            assert!(!check_rep_relations(&rep, CartanConvention::Printed).passed());
        }
    }

    #[test]
    fn functional_relations() {
        let g = build_generators(Site::ONE, &w(int(1), int(0)));
        let r = check_relations(&g, 3);
        assert!(r.passed(), "{r:?}");
        let g = build_generators(Site::TWO, &w(q(-3, 7), q(5, 2)));
        assert!(check_relations(&g, 2).passed());
    }

    #[test]
    fn printed_cartan_assignment_fails() {
        let g = build_generators(Site::ONE, &w(int(1), int(0)));
        let r = check_relations_with(&g, 2, CartanConvention::Printed);
        assert!(!r.passed());
    }

    #[test]
    fn corrupted_s_plus_is_detected() {
        let wt = w(q(1, 3), q(2, 5));
        let g = build_generators(Site::ONE, &wt);
        let z = SuperPolynomial::z(Site::ONE);
        let d = Operator::d(Site::ONE);
        let s = Site::ONE;
        let bad = Operator::sum(vec![
            Operator::mul_poly(z.pow(2)) * d,
            Operator::mul_poly(&z * &SuperPolynomial::theta(s)) * Operator::d_theta(s),
            Operator::mul_poly(&z * &SuperPolynomial::theta_bar(s)) * Operator::d_theta_bar(s),
            Operator::mul_poly(z.scale(&(int(2) * &wt.ell))),
        ]);
        let g = g.with_replaced(Generator::SPlus, bad);
        assert!(!check_relations(&g, 2).passed());
    }

    #[test]
    fn casimir_values_and_centrality() {
        let g = build_generators(Site::ONE, &w(int(1), q(1, 2)));
        let one = SuperPolynomial::one();
        assert_eq!(casimir(&g, 2).apply(&one).unwrap(), one.scale(&q(3, 4)));
        assert!(check_casimir_central(&g, 2, 3).passed());
        assert!(check_casimir_central(&g, 3, 3).passed());
        assert!(equal_on_degree(&casimir(&g, 2), &casimir2_supertrace(&g), 3).unwrap().passed());
    }

    #[test]
    fn verma_closed_forms() {
        let wt = w(int(1), q(1, 2));
        let z = SuperPolynomial::z(Site::ONE);
        let tt = &SuperPolynomial::theta(Site::ONE) * &SuperPolynomial::theta_bar(Site::ONE);
        let a1 = verma_vector(&wt, VermaKind::A, 1).unwrap();
        assert_eq!(a1, &z.scale(&int(2)) - &tt.scale(&q(1, 2)));
        for kind in [VermaKind::A, VermaKind::B, VermaKind::V, VermaKind::W] {
            let k0 = if kind == VermaKind::B { 1 } else { 0 };
            for k in k0..=4 {
                assert_eq!(
                    verma_vector(&wt, kind, k).unwrap(),
                    verma_by_raising(&wt, kind, k).unwrap(),
                    "{kind:?} k={k}"
                );
            }
        }
        assert!(verma_vector(&w(int(0), int(1)), VermaKind::A, 2).is_err());
        assert!(verma_vector(&wt, VermaKind::B, 0).is_err());
    }

    #[test]
    fn finite_subspaces() {
        for kind in [Chirality::Chiral, Chirality::Antichiral] {
            for n in 1..=2 {
                let r = check_finite_subspace(n, kind);
                assert!(r.passed(), "{kind:?} n={n}: {r:?}");
            }
        }
        let wrong = Weight::new(q(-1, 2), q(1, 2));
        assert!(!check_finite_subspace_at(1, Chirality::Chiral, &wrong).passed());
    }
}
