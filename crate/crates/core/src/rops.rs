//! The building blocks `ℛ₁, ℛ₂, ℛ₃`, their product `Ř` and the full R-operator.
//!
//! Each block is `𝕊⁻¹ ∘ r ∘ 𝕊` with `𝕊` a product of terminating exponentials
//! and `r` a kernel whose Gamma-function ratios are replaced by Pochhammer
//! ratios normalized at degree zero. Every operator is rescaled so that it
//! maps the constant polynomial `1` to `1`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::graded::{equal_full, FullOp};
use crate::lax::{build_lax, SpectralTriple};
use crate::opalg::{equal_on_basis, exp_terminating, Operator, PochhammerSpec};
use crate::rational::{hits_nonpositive_integer, int, render, Rational};
use crate::report::{guarded, CheckReport};
use crate::sl21::{build_generators, Chirality, Generator, Weight};
use crate::superpoly::{enumerate_basis_sites, Monomial, OddMask, Site, SuperPolynomial};
use crate::{Error, Result};

/// Slack added to the working degree in the Pochhammer guards; the
/// conjugators can raise the z-degree of an intermediate by up to this much.
pub const GUARD_SLACK: u32 = 3;

/// The `u` and `v` spectral triples of the two sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPair {
    pub u: SpectralTriple,
    pub v: SpectralTriple,
}

fn singular(msg: String) -> Error {
    Error::SingularParameters(msg)
}

fn require_distinct(a: &Rational, b: &Rational, what: &str) -> Result<()> {
    if a == b {
        return Err(singular(format!("{what} (both {})", render(a))));
    }
    Ok(())
}

/// `x ∉ {−1, …, −n}`, or `x ∉ {0, −1, …, −n}` when `include_zero`.
fn require_off_poles(x: &Rational, n: u32, include_zero: bool, what: &str) -> Result<()> {
    let hit = if include_zero {
        hits_nonpositive_integer(x, n)
    } else {
        hits_nonpositive_integer(&(x + int(1)), n.saturating_sub(1))
    };
    if hit {
        return Err(singular(format!("{what} = {} hits a pole", render(x))));
    }
    Ok(())
}

impl ParamPair {
    pub fn new(u: SpectralTriple, v: SpectralTriple) -> Self {
        ParamPair { u, v }
    }

    /// From `[u1, u2, u3, v1, v2, v3]`.
    pub fn from_values(x: &[Rational; 6]) -> Self {
        ParamPair {
            u: SpectralTriple::new(x[0].clone(), x[1].clone(), x[2].clone()),
            v: SpectralTriple::new(x[3].clone(), x[4].clone(), x[5].clone()),
        }
    }

    /// Triples `(u, Λ₁)` and `(v, Λ₂)`.
    pub fn from_weights(w1: &Weight, w2: &Weight, u: &Rational, v: &Rational) -> Self {
        ParamPair {
            u: SpectralTriple::from_weight(u, w1),
            v: SpectralTriple::from_weight(v, w2),
        }
    }

    pub fn values(&self) -> [Rational; 6] {
        [
            self.u.u1.clone(),
            self.u.u2.clone(),
            self.u.u3.clone(),
            self.v.u1.clone(),
            self.v.u2.clone(),
            self.v.u3.clone(),
        ]
    }

    pub fn push_params(&self, report: &mut CheckReport) {
        self.u.push_params(report, "u");
        self.v.push_params(report, "v");
    }

    /// Swaps `u_k ↔ v_k`.
    pub fn exchanged(&self, k: usize) -> ParamPair {
        let mut out = self.clone();
        let (a, b) = match k {
            1 => (&mut out.u.u1, &mut out.v.u1),
            2 => (&mut out.u.u2, &mut out.v.u2),
            3 => (&mut out.u.u3, &mut out.v.u3),
            _ => panic!("exchange index must be 1, 2 or 3"),
        };
        std::mem::swap(a, b);
        out
    }

    /// The regularity guard at working degree `max_degree`.
    pub fn check_regular(&self, max_degree: u32) -> Result<()> {
        let (u, v) = (&self.u, &self.v);
        require_distinct(&u.u1, &v.u1, "u1 = v1")?;
        require_distinct(&u.u2, &v.u2, "u2 = v2")?;
        require_distinct(&u.u3, &v.u3, "u3 = v3")?;
        require_distinct(&v.u1, &v.u2, "v1 = v2")?;
        require_distinct(&u.u1, &u.u2, "u1 = u2")?;
        require_distinct(&u.u2, &u.u3, "u2 = u3")?;
        require_distinct(&v.u2, &v.u3, "v2 = v3")?;
        let n = max_degree + GUARD_SLACK;
        require_off_poles(&(&u.u1 - &u.u3), n, false, "u1 - u3")?;
        require_off_poles(&(&v.u1 - &v.u3), n, false, "v1 - v3")?;
        require_off_poles(&(&u.u1 - &v.u3), n, true, "u1 - v3")?;
        Ok(())
    }

    /// The guard plus the guards of every block met while threading `Ř`.
    pub fn check_regular_rhat(&self, max_degree: u32) -> Result<()> {
        self.check_regular(max_degree)?;
        for (k, p) in rhat_steps(self) {
            block_guard(k, &p, max_degree)?;
        }
        Ok(())
    }
}

/// Conditions each block needs for its own coefficients.
fn block_guard(k: usize, p: &ParamPair, max_degree: u32) -> Result<()> {
    let (u, v) = (&p.u, &p.v);
    let n = max_degree + GUARD_SLACK;
    match k {
        1 => {
            require_distinct(&u.u1, &v.u1, "u1 = v1")?;
            require_distinct(&v.u1, &v.u2, "v1 = v2")?;
            require_off_poles(&(&v.u1 - &v.u3), n, false, "v1 - v3")?;
            require_off_poles(&(&u.u1 - &v.u3), n, true, "u1 - v3")
        }
        2 => {
            require_distinct(&u.u2, &v.u2, "u2 = v2")?;
            require_distinct(&u.u1, &u.u2, "u1 = u2")?;
            require_distinct(&v.u2, &v.u3, "v2 = v3")
        }
        3 => {
            require_distinct(&u.u3, &v.u3, "u3 = v3")?;
            require_distinct(&u.u2, &u.u3, "u2 = u3")?;
            require_off_poles(&(&u.u1 - &u.u3), n, false, "u1 - u3")?;
            require_off_poles(&(&u.u1 - &v.u3), n, true, "u1 - v3")
        }
        _ => panic!("block index must be 1, 2 or 3"),
    }
}

/// The blocks of `Ř` in the order they act, each with the pair it sees.
fn rhat_steps(p: &ParamPair) -> Vec<(usize, ParamPair)> {
    let mut out = Vec::new();
    let mut cur = p.clone();
    for k in [3, 2, 1] {
        out.push((k, cur.clone()));
        cur = cur.exchanged(k);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ROpKind {
    R1,
    R2,
    R3,
    RHat,
    Full,
}

impl ROpKind {
    pub fn block(k: usize) -> ROpKind {
        match k {
            1 => ROpKind::R1,
            2 => ROpKind::R2,
            3 => ROpKind::R3,
            _ => panic!("block index must be 1, 2 or 3"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ROpKind::R1 => "R1",
            ROpKind::R2 => "R2",
            ROpKind::R3 => "R3",
            ROpKind::RHat => "Rhat",
            ROpKind::Full => "R",
        }
    }
}

/// Deliberate departures from the standard blocks, used as mutation witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Standard,
    /// Adds the given amount to the block's `f` constant.
    ShiftedF(Rational),
    /// Flips the sign of the quartic odd term of `ℛ₂`.
    FlippedQuartic,
}

#[derive(Clone, Debug)]
pub struct NormalizedROp {
    pub which: ROpKind,
    pub params: ParamPair,
    pub op: Operator,
}

impl NormalizedROp {
    pub fn apply(&self, p: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.op.apply(p)
    }
}

/// Rescales `op` so that `op(1) = 1`.
fn normalize(op: Operator) -> Result<Operator> {
    let image = op.apply(&SuperPolynomial::one())?;
    let c = image.coeff(&Monomial::ONE);
    if c.is_zero() || image != SuperPolynomial::constant(c.clone()) {
        return Err(Error::NormalizationFailure(format!("image of 1 is {image}")));
    }
    Ok(if c.is_one() { op } else { op.scale(c.recip()) })
}

fn mulp(p: SuperPolynomial) -> Operator {
    Operator::mul_poly(p)
}

pub(crate) fn half_tt(s: Site) -> SuperPolynomial {
    (&SuperPolynomial::theta(s) * &SuperPolynomial::theta_bar(s)).scale(&Rational::new(1.into(), 2.into()))
}

/// `(S⁻, V⁻, W⁻)` at a site; none of them depends on the weight.
fn lowering(s: Site) -> (Operator, Operator, Operator) {
    let g = build_generators(s, &Weight::new(int(0), int(0)));
    (
        g.get(Generator::SMinus).clone(),
        g.get(Generator::VMinus).clone(),
        g.get(Generator::WMinus).clone(),
    )
}

/// A product of exponentials and its inverse.
pub struct Conjugator {
    pub forward: Operator,
    pub inverse: Operator,
}

/// `e^{x₁} ⋯ e^{x_k}` and its inverse, from the exponents `x₁, …, x_k`.
pub fn conjugator(exponents: Vec<Operator>) -> Conjugator {
    let forward = Operator::compose(exponents.iter().map(exp_terminating).collect());
    let inverse = Operator::compose(
        exponents
            .iter()
            .rev()
            .map(|x| exp_terminating(&x.scale(int(-1))))
            .collect(),
    );
    Conjugator { forward, inverse }
}

/// `e^{−½θ_aθ̄_a∂_a} e^{θ_b V_a⁻} e^{θ̄_b W_a⁻} e^{−(z_b+½θ_bθ̄_b) S_a⁻}`.
fn conjugator_3(a: Site, b: Site) -> Conjugator {
    let (sm, vm, wm) = lowering(a);
    conjugator(vec![
        mulp(half_tt(a).scale(&int(-1))) * Operator::d(a),
        Operator::theta(b) * vm,
        Operator::theta_bar(b) * wm,
        mulp(&SuperPolynomial::z(b) + &half_tt(b)).scale(int(-1)) * sm,
    ])
}

/// `e^{½θ_bθ̄_b∂_b} e^{θ_a V_b⁻} e^{θ̄_a W_b⁻} e^{−(z_a+½θ_aθ̄_a) S_b⁻}`.
fn conjugator_1(a: Site, b: Site) -> Conjugator {
    let (sm, vm, wm) = lowering(b);
    conjugator(vec![
        mulp(half_tt(b)) * Operator::d(b),
        Operator::theta(a) * vm,
        Operator::theta_bar(a) * wm,
        mulp(&SuperPolynomial::z(a) + &half_tt(a)).scale(int(-1)) * sm,
    ])
}

/// `e^{θ_a∂_{θ_b}} e^{θ̄_b∂_{θ̄_a}} e^{½θ_aθ̄_a∂_a} e^{−½θ_bθ̄_b∂_b}`.
fn conjugator_2(a: Site, b: Site) -> Conjugator {
    conjugator(vec![
        Operator::theta(a) * Operator::d_theta(b),
        Operator::theta_bar(b) * Operator::d_theta_bar(a),
        mulp(half_tt(a)) * Operator::d(a),
        mulp(half_tt(b).scale(&int(-1))) * Operator::d(b),
    ])
}

/// The conjugator `𝕊` of block `k` on the site pair `(a, b)`.
pub fn block_conjugator(k: usize, a: Site, b: Site) -> Conjugator {
    match k {
        1 => conjugator_1(a, b),
        2 => conjugator_2(a, b),
        3 => conjugator_3(a, b),
        _ => panic!("block index must be 1, 2 or 3"),
    }
}

fn f_shift(variant: &Variant) -> Rational {
    match variant {
        Variant::ShiftedF(s) => s.clone(),
        _ => Rational::zero(),
    }
}

/// Kernel of `ℛ₃`: `a[n] + b[n] θ_a∂_{θ_a} + c[n] z_a∂_{θ_a}∂_{θ̄_a}` with the
/// coefficients taken at the output z_a-degree `n`.
pub fn kernel_3(a: Site, p: &ParamPair, variant: &Variant) -> Result<Operator> {
    let (u, v) = (&p.u, &p.v);
    let f3_den = &u.u3 - &v.u3;
    if f3_den.is_zero() {
        // f₃ is infinite; the normalized kernel is the identity
        return Ok(Operator::identity());
    }
    let f3 = (&u.u2 - &u.u3) / &f3_den + f_shift(variant);
    if f3.is_zero() {
        return Err(singular("f3 = 0".into()));
    }
    let g3 = f3.recip();
    let alpha = &u.u1 - &v.u3 + int(1);
    let beta = &u.u1 - &u.u3 + int(1);
    if beta.is_zero() {
        return Err(singular("u1 - u3 + 1 = 0".into()));
    }
    let diag_a = Operator::diagonal(a, PochhammerSpec::new(vec![alpha.clone()], vec![beta.clone()]));
    let c_shifted = Operator::diagonal(a, PochhammerSpec::new(vec![alpha], vec![&beta + int(1)]));
    Ok(Operator::sum(vec![
        diag_a.clone(),
        (diag_a * Operator::theta(a) * Operator::d_theta(a)).scale(g3.clone()),
        (Operator::z(a) * Operator::d_theta(a) * Operator::d_theta_bar(a) * c_shifted)
            .scale(g3 / beta),
    ]))
}

/// Kernel of `ℛ₁`: the mirror of [`kernel_3`] in the second site's variables.
pub fn kernel_1(b: Site, p: &ParamPair, variant: &Variant) -> Result<Operator> {
    let (u, v) = (&p.u, &p.v);
    let f1_den = &u.u1 - &v.u1;
    if f1_den.is_zero() {
        return Ok(Operator::identity());
    }
    let f1 = (&v.u1 - &v.u2) / &f1_den + f_shift(variant);
    if f1.is_zero() {
        return Err(singular("f1 = 0".into()));
    }
    let g1 = f1.recip();
    let alpha = &u.u1 - &v.u3 + int(1);
    let beta = &v.u1 - &v.u3 + int(1);
    if beta.is_zero() {
        return Err(singular("v1 - v3 + 1 = 0".into()));
    }
    let diag_a = Operator::diagonal(b, PochhammerSpec::new(vec![alpha.clone()], vec![beta.clone()]));
    let c_shifted = Operator::diagonal(b, PochhammerSpec::new(vec![alpha], vec![&beta + int(1)]));
    Ok(Operator::sum(vec![
        diag_a.clone(),
        (diag_a * Operator::theta_bar(b) * Operator::d_theta_bar(b)).scale(g1.clone()),
        (Operator::z(b) * Operator::d_theta(b) * Operator::d_theta_bar(b) * c_shifted)
            .scale(-g1 / beta),
    ]))
}

/// Kernel of `ℛ₂` divided by `f₂`:
/// `1 + (u₁−u₂)/f₂ θ_b∂_{θ_b} + (v₂−v₃)/f₂ θ̄_a∂_{θ̄_a}
///  + 1/f₂ (z_a−z_b+θ_aθ̄_b)∂_{θ̄_a}∂_{θ_b} + (u₂−v₂)/f₂ θ_bθ̄_a∂_{θ̄_a}∂_{θ_b}`.
pub fn kernel_2(a: Site, b: Site, p: &ParamPair, variant: &Variant) -> Result<Operator> {
    let (u, v) = (&p.u, &p.v);
    if u.u2 == v.u2 {
        return Ok(Operator::identity());
    }
    let f2 = (&u.u2 - &u.u1) * (&v.u2 - &v.u3) / (&v.u2 - &u.u2) + f_shift(variant);
    if f2.is_zero() {
        return Err(singular("f2 = 0".into()));
    }
    let inv = f2.recip();
    let quartic_sign = if *variant == Variant::FlippedQuartic { int(-1) } else { int(1) };
    let z_ab = &(&SuperPolynomial::z(a) - &SuperPolynomial::z(b))
        + &(&SuperPolynomial::theta(a) * &SuperPolynomial::theta_bar(b));
    let dd = Operator::d_theta_bar(a) * Operator::d_theta(b);
    let quartic = &SuperPolynomial::theta(b) * &SuperPolynomial::theta_bar(a);
    Ok(Operator::sum(vec![
        Operator::identity(),
        (Operator::theta(b) * Operator::d_theta(b)).scale(&(&u.u1 - &u.u2) * &inv),
        (Operator::theta_bar(a) * Operator::d_theta_bar(a)).scale(&(&v.u2 - &v.u3) * &inv),
        (mulp(z_ab) * dd.clone()).scale(inv.clone()),
        (mulp(quartic) * dd).scale(quartic_sign * (&u.u2 - &v.u2) * &inv),
    ]))
}

/// Block `k` acting on the site pair `(a, b)`, where `a` carries the `u`
/// parameters, without the regularity guard.
pub fn build_block(k: usize, a: Site, b: Site, p: &ParamPair, variant: &Variant) -> Result<NormalizedROp> {
    let kernel = match k {
        1 => kernel_1(b, p, variant)?,
        2 => kernel_2(a, b, p, variant)?,
        3 => kernel_3(a, p, variant)?,
        _ => panic!("block index must be 1, 2 or 3"),
    };
    let s = block_conjugator(k, a, b);
    let op = Operator::compose(vec![s.inverse, kernel, s.forward]);
    Ok(NormalizedROp {
        which: ROpKind::block(k),
        params: p.clone(),
        op: normalize(op)?,
    })
}

/// `ℛ_k` on sites 1 and 2, after the regularity guard at degree `max_degree`.
pub fn build_r(k: usize, p: &ParamPair, max_degree: u32) -> Result<NormalizedROp> {
    p.check_regular(max_degree)?;
    build_block(k, Site::ONE, Site::TWO, p, &Variant::Standard)
}

fn rhat_on(a: Site, b: Site, p: &ParamPair) -> Result<Operator> {
    let mut ops = Vec::new();
    for (k, q) in rhat_steps(p) {
        ops.push(build_block(k, a, b, &q, &Variant::Standard)?.op);
    }
    ops.reverse();
    normalize(Operator::compose(ops))
}

/// `Ř(u;v) = ℛ₁(u₁|v₁,u₂,u₃) ℛ₂(u₁,u₂|v₂,u₃) ℛ₃(u₁,u₂,u₃|v₃)`.
pub fn build_rhat(p: &ParamPair, max_degree: u32) -> Result<NormalizedROp> {
    p.check_regular_rhat(max_degree)?;
    Ok(NormalizedROp {
        which: ROpKind::RHat,
        params: p.clone(),
        op: rhat_on(Site::ONE, Site::TWO, p)?,
    })
}

/// `Ř` on an arbitrary site pair, guarding only what its blocks need.
pub fn build_rhat_on(a: Site, b: Site, p: &ParamPair, max_degree: u32) -> Result<Operator> {
    for (k, q) in rhat_steps(p) {
        block_guard(k, &q, max_degree)?;
    }
    rhat_on(a, b, p)
}

/// `ℙ₁₂ ∘ Ř(u;v)`, which equals `ℝ⁻¹(v−u)`.
pub fn build_full_r(p: &ParamPair, max_degree: u32) -> Result<NormalizedROp> {
    let rhat = build_rhat(p, max_degree)?;
    Ok(NormalizedROp {
        which: ROpKind::Full,
        params: p.clone(),
        op: Operator::SwapSites(Site::ONE, Site::TWO) * rhat.op,
    })
}

/// Weights `(Λ₁′, Λ₂′)` after block `k`.
pub fn weight_shift(k: usize, w1: &Weight, w2: &Weight, p: &ParamPair) -> (Weight, Weight) {
    let two = int(2);
    match k {
        1 => {
            let xi = (&p.u.u1 - &p.v.u1) / &two;
            (
                Weight::new(&w1.ell - &xi, &w1.b + &xi),
                Weight::new(&w2.ell + &xi, &w2.b - &xi),
            )
        }
        2 => {
            let xi = &p.u.u2 - &p.v.u2;
            (
                Weight::new(w1.ell.clone(), &w1.b - &xi),
                Weight::new(w2.ell.clone(), &w2.b + &xi),
            )
        }
        3 => {
            let xi = (&p.u.u3 - &p.v.u3) / &two;
            (
                Weight::new(&w1.ell + &xi, &w1.b + &xi),
                Weight::new(&w2.ell - &xi, &w2.b - &xi),
            )
        }
        _ => panic!("block index must be 1, 2 or 3"),
    }
}

fn lax_pair(p: &ParamPair) -> FullOp {
    FullOp::Compose(vec![
        build_lax(Site::ONE, &p.u, Chirality::Chiral).at(0),
        build_lax(Site::TWO, &p.v, Chirality::Chiral).at(0),
    ])
}

fn lax_sum(p: &ParamPair) -> FullOp {
    FullOp::Sum(vec![
        build_lax(Site::ONE, &p.u, Chirality::Chiral).at(0),
        build_lax(Site::TWO, &p.v, Chirality::Chiral).at(0),
    ])
}

/// `R L₁(u) L₂(v) = L₁(u′) L₂(v′) R` on `V ⊗ C[Z₁, Z₂]`.
fn exchange_report(name: &str, op: &Operator, before: &ParamPair, after: &ParamPair, max_degree: u32) -> Result<CheckReport> {
    let r = FullOp::Quantum(op.clone());
    let lhs = r.clone() * lax_pair(before);
    let rhs = lax_pair(after) * r;
    equal_full(name, &lhs, &rhs, 1, 2, max_degree)
}

pub fn check_defining(k: usize, p: &ParamPair, max_degree: u32) -> CheckReport {
    check_defining_variant(k, p, max_degree, &Variant::Standard, true)
}

/// The defining exchange of block `k`; `guard = false` skips the regularity
/// guard (the block itself still refuses genuine divisions by zero).
pub fn check_defining_variant(
    k: usize,
    p: &ParamPair,
    max_degree: u32,
    variant: &Variant,
    guard: bool,
) -> CheckReport {
    let mut report = CheckReport::new(format!("defining-R{k}"), max_degree);
    p.push_params(&mut report);
    guarded(report, |report| {
        if guard {
            p.check_regular(max_degree)?;
        }
        let r = build_block(k, Site::ONE, Site::TWO, p, variant)?;
        let sub = exchange_report("exchange", &r.op, p, &p.exchanged(k), max_degree)?;
        report.absorb("exchange", sub);
        Ok(())
    })
}

/// The equivalent system: the sum equation, the commutation rules and, for
/// blocks 1 and 3, the extra odd relation.
pub fn check_lemma_system(k: usize, p: &ParamPair, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new(format!("lemma-R{k}"), max_degree);
    p.push_params(&mut report);
    guarded(report, |report| {
        p.check_regular(max_degree)?;
        let r = build_block(k, Site::ONE, Site::TWO, p, &Variant::Standard)?.op;
        let after = p.exchanged(k);
        let (one, two) = (Site::ONE, Site::TWO);

        let rq = FullOp::Quantum(r.clone());
        let sum = equal_full(
            "sum",
            &(rq.clone() * lax_sum(p)),
            &(lax_sum(&after) * rq),
            1,
            2,
            max_degree,
        )?;
        report.absorb("sum", sum);

        let commuting: Vec<(&str, Operator)> = match k {
            1 => vec![
                ("z1", Operator::z(one)),
                ("th1", Operator::theta(one)),
                ("thb1", Operator::theta_bar(one)),
            ],
            2 => vec![
                ("z1-th1thb1/2", mulp(&SuperPolynomial::z(one) - &half_tt(one))),
                ("th1", Operator::theta(one)),
                ("z2+th2thb2/2", mulp(&SuperPolynomial::z(two) + &half_tt(two))),
                ("thb2", Operator::theta_bar(two)),
            ],
            3 => vec![
                ("z2", Operator::z(two)),
                ("th2", Operator::theta(two)),
                ("thb2", Operator::theta_bar(two)),
            ],
            _ => panic!("block index must be 1, 2 or 3"),
        };
        let extra = match k {
            1 => {
                let (sm, vm, _) = lowering(two);
                Some(("V2- + thb1 S2-", vm + Operator::theta_bar(one) * sm))
            }
            3 => {
                let (sm, _, wm) = lowering(one);
                Some(("W1- + th2 S1-", wm + Operator::theta(two) * sm))
            }
            _ => None,
        };
        let subs: Vec<(&str, Operator)> = commuting.into_iter().chain(extra).collect();
        let results: Vec<Result<(String, CheckReport)>> = subs
            .into_par_iter()
            .map(|(name, x)| {
                let name = format!("[R{k}, {name}]");
                let sub = equal_on_basis(&name, &(r.clone() * x.clone()), &(x * r.clone()), 2, max_degree)?;
                Ok((name, sub))
            })
            .collect();
        for res in results {
            let (name, sub) = res?;
            report.absorb(name, sub);
        }
        Ok(())
    })
}

/// Coefficients `a[n], b[n], c[n]` of the `ℛ₃` kernel, read off the operator.
pub fn r3_coefficients(p: &ParamPair, n: u32) -> Result<(Rational, Rational, Rational)> {
    let s = Site::ONE;
    let k = kernel_3(s, p, &Variant::Standard)?;
    let zn = |e: u32, bits: u8| Monomial::new([e, 0, 0], OddMask::from_bits(bits));
    let a = k.apply_monomial(zn(n, 0))?.coeff(&zn(n, 0));
    let b = k.apply_monomial(zn(n, 0b01))?.coeff(&zn(n, 0b01)) - &a;
    let c = if n == 0 {
        Rational::zero()
    } else {
        -k.apply_monomial(zn(n - 1, 0b11))?.coeff(&zn(n, 0))
    };
    Ok((a, b, c))
}

/// Coefficients `(a, b, c, d, e)` of the `ℛ₂` kernel in the basis
/// `1, θ̄₁∂_{θ̄₁}, θ₂∂_{θ₂}, (z₁₂+θ₁θ̄₂)∂_{θ̄₁}∂_{θ₂}, θ₂θ̄₁∂_{θ̄₁}∂_{θ₂}`.
/// Writing the last basis element as `θ̄₁θ₂∂_{θ̄₁}∂_{θ₂}` instead negates `e`.
pub fn r2_coefficients(p: &ParamPair) -> Result<[Rational; 5]> {
    let k = kernel_2(Site::ONE, Site::TWO, p, &Variant::Standard)?;
    let m = |bits: u8| Monomial::new([0, 0, 0], OddMask::from_bits(bits));
    let thb1 = 0b0010;
    let th2 = 0b0100;
    let a = k.apply_monomial(Monomial::ONE)?.coeff(&Monomial::ONE);
    let b = k.apply_monomial(m(thb1))?.coeff(&m(thb1)) - &a;
    let c = k.apply_monomial(m(th2))?.coeff(&m(th2)) - &a;
    let image = k.apply_monomial(m(thb1 | th2))?;
    let d = -image.coeff(&Monomial::new([1, 0, 0], OddMask::EMPTY));
    let e = image.coeff(&m(thb1 | th2)) - &a - &b - &c;
    Ok([a, b, c, d, e])
}

/// The five `ℛ₃` recurrences for `n ≤ max_degree` and the four `ℛ₂`
/// coefficient relations.
pub fn check_recurrences(p: &ParamPair, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("recurrences", max_degree);
    p.push_params(&mut report);
    guarded(report, |report| {
        p.check_regular(max_degree)?;
        let (u, v) = (&p.u, &p.v);
        let top = max_degree + 1;
        let coeffs: Vec<(Rational, Rational, Rational)> =
            (0..=top).map(|n| r3_coefficients(p, n)).collect::<Result<_>>()?;
        let a = |n: u32| coeffs[n as usize].0.clone();
        let b = |n: u32| coeffs[n as usize].1.clone();
        let c = |n: u32| coeffs[n as usize].2.clone();
        let u23 = &u.u2 - &u.u3;
        let u13 = &u.u1 - &u.u3;
        let u1v3 = &u.u1 - &v.u3;
        let nq = |n: u32| int(n as i64);

        let mut sub = CheckReport::new("R3", max_degree);
        for n in 1..=max_degree {
            sub.check_eq(format!("a[{n}]-a[{}] = (u2-u3)c[{n}]", n - 1), &(a(n) - a(n - 1)), &(&u23 * c(n)));
        }
        for n in 0..=max_degree {
            sub.check_eq(
                format!("b[{n}] = (u3-v3)/(u2-u3) a[{n}]"),
                &b(n),
                &((&u.u3 - &v.u3) / &u23 * a(n)),
            );
        }
        for n in 1..max_degree.max(2) {
            sub.check_eq(
                format!("c[{}](n+u1-u3+1) = (n+u1-v3)c[{n}]", n + 1),
                &(c(n + 1) * (nq(n) + &u13 + int(1))),
                &((nq(n) + &u1v3) * c(n)),
            );
        }
        for n in 0..max_degree {
            sub.check_eq(
                format!("a[{}](n+u1-u3) + (u2-u3)c[{}] = (n+u1-v3)a[{n}]", n + 1, n + 1),
                &(a(n + 1) * (nq(n) + &u13) + &u23 * c(n + 1)),
                &((nq(n) + &u1v3) * a(n)),
            );
        }
        for n in 1..=max_degree {
            sub.check_eq(
                format!("a[{n}] + b[{n}](n+u1-u3) - (u2-u3)c[{n}] = a[{}] + (n+u1-v3)b[{}]", n - 1, n - 1),
                &(a(n) + b(n) * (nq(n) + &u13) - &u23 * c(n)),
                &(a(n - 1) + (nq(n) + &u1v3) * b(n - 1)),
            );
        }
        report.absorb("R3", sub);

        let [a2, b2, c2, d2, e2] = r2_coefficients(p)?;
        let mut sub = CheckReport::new("R2", 0);
        let f2 = (&u.u2 - &u.u1) * (&v.u2 - &v.u3) / (&v.u2 - &u.u2);
        sub.check_eq("a = f2 d", &a2, &(&f2 * &d2));
        sub.check_eq("b = (v2-v3) d", &b2, &((&v.u2 - &v.u3) * &d2));
        sub.check_eq("c = (u1-u2) d", &c2, &((&u.u1 - &u.u2) * &d2));
        sub.check_eq("e = (u2-v2) d", &e2, &((&u.u2 - &v.u2) * &d2));
        report.absorb("R2", sub);
        report.note("R2 quartic coefficient e is taken against th2 thb1 d_thb1 d_th2");
        Ok(())
    })
}

/// The exchange `Ř L₁(u)L₂(v) = L₁(v)L₂(u) Ř`.
pub fn check_rhat_exchange(p: &ParamPair, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("rhat-exchange", max_degree);
    p.push_params(&mut report);
    guarded(report, |report| {
        let r = build_rhat(p, max_degree)?;
        let swapped = ParamPair::new(p.v.clone(), p.u.clone());
        let sub = exchange_report("exchange", &r.op, p, &swapped, max_degree)?;
        report.absorb("exchange", sub);
        Ok(())
    })
}

/// `Ř(u;u)` is the identity.
pub fn check_rhat_identity(u: &SpectralTriple, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("rhat-identity", max_degree);
    u.push_params(&mut report, "u");
    guarded(report, |report| {
        let p = ParamPair::new(u.clone(), u.clone());
        let op = rhat_on(Site::ONE, Site::TWO, &p)?;
        let sub = equal_on_basis("identity", &op, &Operator::identity(), 2, max_degree)?;
        report.absorb("identity", sub);
        Ok(())
    })
}

/// `Ř (G₁(Λ₁) + G₂(Λ₂)) = (G₁(Λ₂) + G₂(Λ₁)) Ř` for all eight generators.
pub fn check_rhat_invariance(p: &ParamPair, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("rhat-invariance", max_degree);
    p.push_params(&mut report);
    guarded(report, |report| {
        let r = build_rhat(p, max_degree)?.op;
        let (w1, w2) = (p.u.weight(), p.v.weight());
        let before = [build_generators(Site::ONE, &w1), build_generators(Site::TWO, &w2)];
        let after = [build_generators(Site::ONE, &w2), build_generators(Site::TWO, &w1)];
        let results: Vec<Result<CheckReport>> = Generator::ALL
            .par_iter()
            .map(|&g| {
                let lhs = r.clone() * (before[0].get(g).clone() + before[1].get(g).clone());
                let rhs = (after[0].get(g).clone() + after[1].get(g).clone()) * r.clone();
                equal_on_basis(g.name(), &lhs, &rhs, 2, max_degree)
            })
            .collect();
        for (g, res) in Generator::ALL.iter().zip(results) {
            report.absorb(g.name(), res?);
        }
        Ok(())
    })
}

/// `z₁ + z₂ + ½·(odd count)` is preserved on every basis monomial.
pub fn check_degree_preservation(name: &str, op: &Operator, max_degree: u32) -> CheckReport {
    let report = CheckReport::new(format!("degree-{name}"), max_degree);
    guarded(report, |report| {
        let basis = enumerate_basis_sites(2, max_degree);
        let images: Vec<Result<SuperPolynomial>> = basis.par_iter().map(|m| op.apply_monomial(*m)).collect();
        for (m, img) in basis.iter().zip(images) {
            let img = img?;
            for (t, _) in img.terms() {
                if t.twice_weight() != m.twice_weight() {
                    report.fail_msg(m.to_string(), t, "same degree");
                }
            }
        }
        Ok(())
    })
}

/// Per-site spectral parameters and weights for the three-site relation.
fn ybe_pair(w: &[Weight; 3], s: &[Rational; 3], i: usize, j: usize) -> ParamPair {
    ParamPair::from_weights(&w[i], &w[j], &s[i], &s[j])
}

/// The block guards of every `Ř_ij` in the three-site relation.
pub fn check_ybe_regular(w: &[Weight; 3], u: &Rational, v: &Rational, max_degree: u32) -> Result<()> {
    let s = [u.clone(), v.clone(), Rational::zero()];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (k, q) in rhat_steps(&ybe_pair(w, &s, i, j)) {
            block_guard(k, &q, max_degree)?;
        }
    }
    Ok(())
}

/// `X₁₂ X₁₃ X₂₃ = c · X₂₃ X₁₃ X₁₂` with `X_ij = ℙ_ij Ř_ij`, on three sites.
pub fn check_ybe(w: &[Weight; 3], u: &Rational, v: &Rational, max_degree: u32) -> CheckReport {
    let mut report = CheckReport::new("ybe", max_degree);
    for (i, wi) in w.iter().enumerate() {
        wi.push_params(&mut report, &(i + 1).to_string());
    }
    report.push_param("u", u);
    report.push_param("v", v);
    guarded(report, |report| {
        let s = [u.clone(), v.clone(), Rational::zero()];
        let sites = [Site::ONE, Site::TWO, Site::THREE];
        let x = |i: usize, j: usize| -> Result<Operator> {
            let r = build_rhat_on(sites[i], sites[j], &ybe_pair(w, &s, i, j), max_degree)?;
            Ok(Operator::SwapSites(sites[i], sites[j]) * r)
        };
        let (x12, x13, x23) = (x(0, 1)?, x(0, 2)?, x(1, 2)?);
        let lhs = Operator::compose(vec![x12.clone(), x13.clone(), x23.clone()]);
        let rhs = Operator::compose(vec![x23, x13, x12]);
        let one = SuperPolynomial::one();
        let (l1, r1) = (lhs.apply(&one)?, rhs.apply(&one)?);
        let cl = l1.coeff(&Monomial::ONE);
        let cr = r1.coeff(&Monomial::ONE);
        if cl.is_zero() || cr.is_zero() {
            return Err(Error::NormalizationFailure("three-site product kills 1".into()));
        }
        let c = cl / cr;
        report.note(format!("global scalar {}", render(&c)));
        let sub = equal_on_basis("ybe", &lhs, &rhs.scale(c), 3, max_degree)?;
        report.absorb("ybe", sub);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    pub(crate) fn sample_pair() -> ParamPair {
        ParamPair::from_values(&[q(7, 2), q(1, 3), q(-5, 4), q(2, 5), q(-3, 2), q(1, 7)])
    }

    #[test]
    fn normalized_on_one() {
        let p = sample_pair();
        for k in 1..=3 {
            let r = build_r(k, &p, 2).unwrap();
            assert_eq!(r.apply(&SuperPolynomial::one()).unwrap(), SuperPolynomial::one());
        }
    }

    #[test]
    fn defining_equations() {
        let p = sample_pair();
        for k in 1..=3 {
            let r = check_defining(k, &p, 2);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn trivial_exchange_r3() {
        let mut p = sample_pair();
        p.v.u3 = p.u.u3.clone();
        let r = check_defining_variant(3, &p, 2, &Variant::Standard, false);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn mutations_fail() {
        let p = sample_pair();
        let r = check_defining_variant(1, &p, 2, &Variant::ShiftedF(int(1)), true);
        assert!(!r.passed());
        let r = check_defining_variant(2, &p, 2, &Variant::FlippedQuartic, true);
        assert!(!r.passed());
    }

    #[test]
    fn lemma_systems() {
        let p = sample_pair();
        for k in 1..=3 {
            let r = check_lemma_system(k, &p, 2);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn recurrences() {
        let r = check_recurrences(&sample_pair(), 4);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn quartic_ordering_matters() {
        // against θ̄₁θ₂∂_{θ̄₁}∂_{θ₂} the same kernel has e = −(u₂−v₂)d
        let p = sample_pair();
        let [_, _, _, d, e] = r2_coefficients(&p).unwrap();
        let expected = (&p.u.u2 - &p.v.u2) * &d;
        assert_eq!(e, expected);
        let e_reordered = -e;
        assert_ne!(e_reordered, expected);
    }

    #[test]
    fn rhat() {
        let p = sample_pair();
        let r = check_rhat_exchange(&p, 2);
        assert!(r.passed(), "{r:?}");
        let r = check_rhat_identity(&p.u, 2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn rhat_invariance_and_degree() {
        let p = sample_pair();
        let r = check_rhat_invariance(&p, 2);
        assert!(r.passed(), "{r:?}");
        let op = build_full_r(&p, 2).unwrap().op;
        assert!(check_degree_preservation("R", &op, 2).passed());
    }

    #[test]
    fn ybe_degree_one() {
        let w = [
            Weight::new(q(1, 3), q(1, 5)),
            Weight::new(q(3, 4), q(-2, 3)),
            Weight::new(q(5, 2), q(1, 7)),
        ];
        let r = check_ybe(&w, &q(7, 3), &q(-4, 5), 1);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn permutation_signs() {
        let th12 = &SuperPolynomial::theta(Site::ONE) * &SuperPolynomial::theta(Site::TWO);
        let swapped = Operator::SwapSites(Site::ONE, Site::TWO).apply(&th12).unwrap();
        assert_eq!(swapped, th12.scale(&int(-1)));
    }

    #[test]
    fn weight_shifts() {
        let p = ParamPair::from_values(&[int(0), int(2), int(0), int(0), int(1), int(0)]);
        let w1 = Weight::new(q(1, 2), int(0));
        let w2 = Weight::new(int(1), q(1, 3));
        let (a, b) = weight_shift(2, &w1, &w2, &p);
        assert_eq!(a, Weight::new(q(1, 2), int(-1)));
        assert_eq!(b, Weight::new(int(1), q(4, 3)));
    }

    #[test]
    fn guard_rejects_equal_u2_u3() {
        let mut p = sample_pair();
        p.u.u3 = p.u.u2.clone();
        assert!(matches!(build_r(3, &p, 2), Err(Error::SingularParameters(_))));
    }
}
