//! Exact evaluation of products of Gamma functions whose arguments pair up
//! with integer differences, such as `Γ(n+a+1)Γ(b) / (Γ(n+b+1)Γ(a))`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{int, pochhammer, render, Rational};
use crate::{Error, Result};

/// `Π Γ(argᵢ)^{eᵢ}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaProduct {
    factors: BTreeMap<Rational, i32>,
}

impl GammaProduct {
    pub fn one() -> Self {
        GammaProduct::default()
    }

    /// `Γ(numerator) / Γ(denominator)`.
    pub fn ratio(numerator: Rational, denominator: Rational) -> Self {
        GammaProduct::one().times_gamma(numerator, 1).times_gamma(denominator, -1)
    }

    pub fn times_gamma(mut self, arg: Rational, exponent: i32) -> Self {
        let e = self.factors.entry(arg.clone()).or_insert(0);
        *e += exponent;
        if *e == 0 {
            self.factors.remove(&arg);
        }
        self
    }

    pub fn mul(&self, other: &GammaProduct) -> GammaProduct {
        other
            .factors
            .iter()
            .fold(self.clone(), |acc, (a, e)| acc.times_gamma(a.clone(), *e))
    }

    pub fn div(&self, other: &GammaProduct) -> GammaProduct {
        other
            .factors
            .iter()
            .fold(self.clone(), |acc, (a, e)| acc.times_gamma(a.clone(), -*e))
    }

    /// Exact value; arguments are grouped into classes modulo the integers
    /// and every class must have total exponent zero.
    pub fn eval(&self) -> Result<Rational> {
        let mut classes: Vec<Vec<(Rational, i32)>> = Vec::new();
        for (a, e) in &self.factors {
            match classes.iter_mut().find(|c| (&c[0].0 - a).is_integer()) {
                Some(c) => c.push((a.clone(), *e)),
                None => classes.push(vec![(a.clone(), *e)]),
            }
        }
        let mut value = Rational::one();
        for class in classes {
            if class.iter().map(|(_, e)| e).sum::<i32>() != 0 {
                return Err(Error::NormalizationFailure(format!(
                    "Gamma product {self} is not a rational function"
                )));
            }
            // Γ(x₀ + k) = Γ(x₀)·(x₀)_k with x₀ the smallest argument
            let x0 = class.iter().map(|(a, _)| a.clone()).min().expect("nonempty class");
            if x0.is_integer() && x0 <= Rational::zero() {
                return Err(Error::SingularParameters(format!(
                    "Gamma argument {} is a pole",
                    render(&x0)
                )));
            }
            for (a, e) in class {
                let k = (&a - &x0).to_integer();
                let k: u32 = k.try_into().expect("small shift");
                let p = pochhammer(&x0, k);
                if e > 0 {
                    for _ in 0..e {
                        value *= &p;
                    }
                } else {
                    if p.is_zero() {
                        return Err(Error::SingularParameters("Gamma ratio has a pole".into()));
                    }
                    for _ in 0..-e {
                        value /= &p;
                    }
                }
            }
        }
        Ok(value)
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(a, e)| format!("G({})^{}", render(a), e))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A finite sum `Σ cᵢ·Gᵢ` of Gamma products with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaSum {
    pub terms: Vec<(Rational, GammaProduct)>,
}

impl GammaSum {
    pub fn zero() -> Self {
        GammaSum::default()
    }

    pub fn term(c: Rational, g: GammaProduct) -> Self {
        GammaSum { terms: vec![(c, g)] }
    }

    pub fn plus(mut self, c: Rational, g: GammaProduct) -> Self {
        self.terms.push((c, g));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }

    /// `self / reference`, which must evaluate to a rational number.
    pub fn ratio_to(&self, reference: &GammaSum) -> Result<Rational> {
        let (c0, g0) = reference
            .terms
            .iter()
            .find(|(c, _)| !c.is_zero())
            .ok_or_else(|| Error::NormalizationFailure("reference value is zero".into()))?;
        let scale = |s: &GammaSum| -> Result<Rational> {
            s.terms
                .iter()
                .filter(|(c, _)| !c.is_zero())
                .try_fold(Rational::zero(), |acc, (c, g)| Ok(acc + c / c0 * g.div(g0).eval()?))
        };
        let den = scale(reference)?;
        if den.is_zero() {
            return Err(Error::NormalizationFailure("reference value is zero".into()));
        }
        Ok(scale(self)? / den)
    }
}

/// `Γ(n + a) / Γ(n + b)` with integer `n`.
pub fn shifted_ratio(n: u32, a: &Rational, b: &Rational) -> GammaProduct {
    let n = int(n as i64);
    GammaProduct::ratio(&n + a, &n + b)
}
