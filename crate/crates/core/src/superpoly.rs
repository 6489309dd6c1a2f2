//! Graded polynomials in even variables `z_s` and odd variables `θ_s, θ̄_s`.
//!
//! Up to three sites are supported. Odd variables are kept in the canonical
//! order `θ1, θ̄1, θ2, θ̄2, θ3, θ̄3`; bit `2s` of an [`OddMask`] is `θ_{s+1}`
//! and bit `2s+1` is `θ̄_{s+1}`. Every sign in the algebra comes from sorting
//! odd factors into that order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::rational::{render_abs, Rational};

pub const MAX_SITES: usize = 3;

/// A quantum site, 1-based in rendering and 0-based internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site(u8);

impl Site {
    pub const ONE: Site = Site(0);
    pub const TWO: Site = Site(1);
    pub const THREE: Site = Site(2);

    pub fn new(one_based: usize) -> Site {
        assert!((1..=MAX_SITES).contains(&one_based), "site out of range");
        Site(one_based as u8 - 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn number(self) -> usize {
        self.0 as usize + 1
    }

    pub fn theta(self) -> OddVar {
        OddVar(2 * self.0)
    }

    pub fn theta_bar(self) -> OddVar {
        OddVar(2 * self.0 + 1)
    }
}

/// One of the odd generators, identified by its canonical position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddVar(u8);

impl OddVar {
    pub fn site(self) -> Site {
        Site(self.0 / 2)
    }

    pub fn is_bar(self) -> bool {
        self.0 % 2 == 1
    }

    fn bit(self) -> u8 {
        1 << self.0
    }

    fn name(self) -> String {
        let stem = if self.is_bar() { "thb" } else { "th" };
        format!("{}{}", stem, self.site().number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Even(Site),
    Odd(OddVar),
}

/// Subset of the odd variables, stored as a bitmask in canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddMask(u8);

impl OddMask {
    pub const EMPTY: OddMask = OddMask(0);

    pub fn from_bits(bits: u8) -> OddMask {
        OddMask(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, v: OddVar) -> bool {
        self.0 & v.bit() != 0
    }

    pub fn parity(self) -> u8 {
        (self.0.count_ones() % 2) as u8
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Number of members strictly before `v` in canonical order.
    fn count_below(self, v: OddVar) -> u32 {
        (self.0 & (v.bit() - 1)).count_ones()
    }

    fn vars(self) -> impl Iterator<Item = OddVar> {
        (0..2 * MAX_SITES as u8)
            .map(OddVar)
            .filter(move |v| self.contains(*v))
    }
}

/// Product `left · right` of two odd monomials: `None` when a variable
/// repeats, otherwise the merged mask and the sign of the merge.
pub fn merge_masks(left: OddMask, right: OddMask) -> Option<(OddMask, bool)> {
    if left.0 & right.0 != 0 {
        return None;
    }
    let mut swaps = 0;
    for v in right.vars() {
        swaps += (left.0 & !(v.bit() | (v.bit() - 1))).count_ones();
    }
    Some((OddMask(left.0 | right.0), swaps % 2 == 1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: [u32; MAX_SITES],
    pub odd: OddMask,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        z: [0; MAX_SITES],
        odd: OddMask::EMPTY,
    };

    pub fn new(z: [u32; MAX_SITES], odd: OddMask) -> Monomial {
        Monomial { z, odd }
    }

    pub fn z_degree(&self) -> u32 {
        self.z.iter().sum()
    }

    pub fn parity(&self) -> u8 {
        self.odd.parity()
    }

    /// z-degree plus half the odd count, doubled to stay integral.
    pub fn twice_weight(&self) -> u32 {
        2 * self.z_degree() + self.odd.len()
    }

    fn render(&self) -> String {
        let mut parts = Vec::new();
        for (s, &d) in self.z.iter().enumerate() {
            match d {
                0 => {}
                1 => parts.push(format!("z{}", s + 1)),
                _ => parts.push(format!("z{}^{}", s + 1, d)),
            }
        }
        parts.extend(self.odd.vars().map(OddVar::name));
        parts.join(" ")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render();
        if s.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&s)
        }
    }
}

/// Finite exact-rational combination of monomials; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Even(s) => Self::z(s),
            Var::Odd(o) => Self::odd(o),
        }
    }

    pub fn z(site: Site) -> Self {
        let mut z = [0; MAX_SITES];
        z[site.index()] = 1;
        Self::monomial(Monomial::new(z, OddMask::EMPTY))
    }

    pub fn odd(v: OddVar) -> Self {
        Self::monomial(Monomial::new([0; MAX_SITES], OddMask(v.bit())))
    }

    pub fn theta(site: Site) -> Self {
        Self::odd(site.theta())
    }

    pub fn theta_bar(site: Site) -> Self {
        Self::odd(site.theta_bar())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, p: &SuperPolynomial) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &p.terms {
            self.add_term(*m, a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> SuperPolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        SuperPolynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// `Some(parity)` when every term has the same parity (zero counts as even).
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(Monomial::parity);
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    /// Largest total z-degree among the terms, 0 for the zero polynomial.
    pub fn max_z_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::z_degree).max().unwrap_or(0)
    }

    /// Builds a polynomial by mapping each term to a scaled image term.
    pub(crate) fn map_terms<F>(&self, mut f: F) -> SuperPolynomial
    where
        F: FnMut(&Monomial, &Rational) -> Option<(Monomial, Rational)>,
    {
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> SuperPolynomial {
        let mut acc = SuperPolynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// `Σ cᵢ pᵢ` with zero coefficients dropped.
pub fn linear_combine<'a, I>(pairs: I) -> SuperPolynomial
where
    I: IntoIterator<Item = (Rational, &'a SuperPolynomial)>,
{
    let mut out = SuperPolynomial::zero();
    for (c, p) in pairs {
        out.add_scaled(&c, p);
    }
    out
}

pub fn mul(p: &SuperPolynomial, q: &SuperPolynomial) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero();
    for (ma, ca) in &p.terms {
        for (mb, cb) in &q.terms {
            let Some((mask, negate)) = merge_masks(ma.odd, mb.odd) else {
                continue;
            };
            let mut z = ma.z;
            for (zi, d) in z.iter_mut().zip(mb.z) {
                *zi += d;
            }
            let c = ca * cb;
            out.add_term(Monomial::new(z, mask), if negate { -c } else { c });
        }
    }
    out
}

/// `∂/∂z_site`, term by term.
pub fn deriv_even(site: Site, p: &SuperPolynomial) -> SuperPolynomial {
    let s = site.index();
    p.map_terms(|m, c| {
        let d = m.z[s];
        (d > 0).then(|| {
            let mut m2 = *m;
            m2.z[s] = d - 1;
            (m2, c * Rational::from_integer(d.into()))
        })
    })
}

/// Left Grassmann derivative: anticommute `v` to the front, then drop it.
pub fn deriv_odd(v: OddVar, p: &SuperPolynomial) -> SuperPolynomial {
    p.map_terms(|m, c| {
        m.odd.contains(v).then(|| {
            let mut m2 = *m;
            m2.odd = OddMask(m.odd.0 & !v.bit());
            let sign_flip = m.odd.count_below(v) % 2 == 1;
            (m2, if sign_flip { -c } else { c.clone() })
        })
    })
}

/// Left multiplication by a single odd variable.
pub fn mul_odd(v: OddVar, p: &SuperPolynomial) -> SuperPolynomial {
    p.map_terms(|m, c| {
        (!m.odd.contains(v)).then(|| {
            let mut m2 = *m;
            m2.odd = OddMask(m.odd.0 | v.bit());
            let sign_flip = m.odd.count_below(v) % 2 == 1;
            (m2, if sign_flip { -c } else { c.clone() })
        })
    })
}

pub fn mul_z(site: Site, p: &SuperPolynomial) -> SuperPolynomial {
    let s = site.index();
    p.map_terms(|m, c| {
        let mut m2 = *m;
        m2.z[s] += 1;
        Some((m2, c.clone()))
    })
}

/// Two-site basis: every monomial with `z1 + z2 ≤ max_z_degree` and each of
/// the 16 odd masks, ordered by `(z1, z2, mask)`.
pub fn enumerate_basis(max_z_degree: u32) -> Vec<Monomial> {
    enumerate_basis_sites(2, max_z_degree)
}

/// Basis over the first `sites` sites, in `(z1, z2, z3, mask)` order.
pub fn enumerate_basis_sites(sites: usize, max_z_degree: u32) -> Vec<Monomial> {
    assert!((1..=MAX_SITES).contains(&sites));
    let mut zs = Vec::new();
    let mut z = [0u32; MAX_SITES];
    fn rec(k: usize, sites: usize, left: u32, z: &mut [u32; MAX_SITES], out: &mut Vec<[u32; MAX_SITES]>) {
        if k == sites {
            out.push(*z);
            return;
        }
        for d in 0..=left {
            z[k] = d;
            rec(k + 1, sites, left - d, z, out);
        }
        z[k] = 0;
    }
    rec(0, sites, max_z_degree, &mut z, &mut zs);
    let masks = 1u16 << (2 * sites);
    let mut out = Vec::with_capacity(zs.len() * masks as usize);
    for z in zs {
        for bits in 0..masks {
            out.push(Monomial::new(z, OddMask(bits as u8)));
        }
    }
    out
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = m.render();
            let coeff = render_abs(c);
            let term = if body.is_empty() {
                coeff
            } else {
                format!("{coeff} {body}")
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(mut self, rhs: SuperPolynomial) -> SuperPolynomial {
        self += &rhs;
        self
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(mut self, rhs: SuperPolynomial) -> SuperPolynomial {
        self -= &rhs;
        self
    }
}

impl AddAssign<&SuperPolynomial> for SuperPolynomial {
    fn add_assign(&mut self, rhs: &SuperPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&SuperPolynomial> for SuperPolynomial {
    fn sub_assign(&mut self, rhs: &SuperPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        -&self
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        mul(self, rhs)
    }
}

impl Mul for SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: SuperPolynomial) -> SuperPolynomial {
        mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn th1() -> SuperPolynomial {
        SuperPolynomial::theta(Site::ONE)
    }
    fn thb1() -> SuperPolynomial {
        SuperPolynomial::theta_bar(Site::ONE)
    }
    fn z1() -> SuperPolynomial {
        SuperPolynomial::z(Site::ONE)
    }
    fn z2() -> SuperPolynomial {
        SuperPolynomial::z(Site::TWO)
    }

    #[test]
    fn linear_combine_cancels_and_merges() {
        assert!(linear_combine([(int(1), &th1()), (int(-1), &th1())]).is_zero());
        let p = linear_combine([(int(2), &z1()), (int(3), &z2())]);
        assert_eq!(p.to_string(), "3 z2 + 2 z1");
        let tt = &th1() * &thb1();
        assert_eq!(linear_combine([(q(1, 2), &tt), (q(1, 2), &tt)]), tt);
    }

    #[test]
    fn grassmann_products() {
        let a = &th1() * &thb1();
        let b = &thb1() * &th1();
        assert_eq!(b, -&a);
        assert_eq!(a.to_string(), "1 th1 thb1");
        assert!((&th1() * &th1()).is_zero());
        let p = &(&z1() + &a) * &z1();
        assert_eq!(p, &z1().pow(2) + &(&z1() * &a));
    }

    #[test]
    fn derivatives() {
        let th2 = SuperPolynomial::theta(Site::TWO);
        let p = &z1().pow(2) * &th2;
        assert_eq!(deriv_even(Site::ONE, &p), (&z1() * &th2).scale(&int(2)));
        assert!(deriv_even(Site::TWO, &z1()).is_zero());
        assert_eq!(deriv_even(Site::ONE, &(&z1() * &z2())), z2());

        let tt = &th1() * &thb1();
        assert_eq!(deriv_odd(Site::ONE.theta_bar(), &tt), -th1());
        assert_eq!(deriv_odd(Site::ONE.theta(), &tt), thb1());
        assert!(deriv_odd(Site::TWO.theta(), &(&z1() * &th1())).is_zero());
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(0).len(), 16);
        assert_eq!(enumerate_basis(1).len(), 48);
        assert_eq!(enumerate_basis(4).len(), 240);
        let b = enumerate_basis(2);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_basis_sites(3, 1).len(), 4 * 64);
    }

    #[test]
    fn canonical_rendering() {
        let th = |s| SuperPolynomial::theta(Site::new(s));
        let thb = |s| SuperPolynomial::theta_bar(Site::new(s));
        let p = &(&z1().pow(2) * &th(1)) * &thb(2);
        let p = linear_combine([(q(1, 2), &p), (int(-1), &z2())]);
        assert_eq!(p.to_string(), "-1 z2 + 1/2 z1^2 th1 thb2");
        let _ = th(3) * thb(3);
        assert_eq!(SuperPolynomial::zero().to_string(), "0");
        assert_eq!(SuperPolynomial::constant(q(-2, 3)).to_string(), "-2/3");
    }
}
