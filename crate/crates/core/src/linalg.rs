//! Exact span membership for small families of superpolynomials.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::rational::Rational;
use crate::superpoly::{Monomial, SuperPolynomial};

/// Writes `target` as `Σ cᵢ spanᵢ` when possible.
///
/// Returns the coefficients (free coordinates set to zero when the family is
/// dependent), or the residual `target − Σ cᵢ spanᵢ` of the best attempt when
/// `target` is outside the span.
pub fn solve_in_span(
    span: &[SuperPolynomial],
    target: &SuperPolynomial,
) -> Result<Vec<Rational>, SuperPolynomial> {
    let rows: Vec<Monomial> = span
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|p| p.terms().map(|(m, _)| *m))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ncols = span.len();
    // augmented matrix, one row per monomial
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|m| {
            let mut row: Vec<Rational> = span.iter().map(|p| p.coeff(m)).collect();
            row.push(target.coeff(m));
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }

    let mut coeffs = vec![Rational::zero(); ncols];
    for (row, &c) in pivots.iter().enumerate() {
        coeffs[c] = a[row][ncols].clone();
    }
    let mut residual = target.clone();
    for (c, p) in coeffs.iter().zip(span) {
        residual.add_scaled(&-c.clone(), p);
    }
    if residual.is_zero() {
        Ok(coeffs)
    } else {
        Err(residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::superpoly::Site;

    #[test]
    fn solves_and_rejects() {
        let z1 = SuperPolynomial::z(Site::ONE);
        let z2 = SuperPolynomial::z(Site::TWO);
        let span = vec![&z1 + &z2, &z1 - &z2];
        let target = z1.scale(&int(2));
        assert_eq!(solve_in_span(&span, &target).unwrap(), vec![int(1), int(1)]);
        let th = SuperPolynomial::theta(Site::ONE);
        assert_eq!(solve_in_span(&span, &th).unwrap_err(), th);
    }

    #[test]
    fn dependent_family() {
        let z1 = SuperPolynomial::z(Site::ONE);
        let span = vec![z1.clone(), z1.scale(&int(2))];
        let c = solve_in_span(&span, &z1.scale(&int(3))).unwrap();
        assert_eq!(c, vec![int(3), int(0)]);
    }
}
