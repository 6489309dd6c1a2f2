//! The graded auxiliary space `V^{⊗k} ⊗ C[Z]` and operators acting on it.
//!
//! A vector is stored as `Σ e_{i₁} ⊗ … ⊗ e_{i_k} ⊗ ψ_{i₁…i_k}` with `e₂` odd.
//! Every sign produced by moving an odd quantum operator past odd auxiliary
//! basis vectors is computed in [`FullOp::apply`], and nowhere else.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::opalg::Operator;
use crate::rational::{int, render, Rational};
use crate::report::{compare_images, CheckReport, Residual};
use crate::sl21::{grade, Mat3};
use crate::superpoly::{enumerate_basis_sites, Monomial, SuperPolynomial};
use crate::{Error, Result};

/// Component index `(i₁, …, i_k)` with values in `0..3`; slot 0 is leftmost.
fn digits(idx: usize, slots: usize) -> Vec<usize> {
    let mut out = vec![0; slots];
    let mut r = idx;
    for t in (0..slots).rev() {
        out[t] = r % 3;
        r /= 3;
    }
    out
}

fn undigits(d: &[usize]) -> usize {
    d.iter().fold(0, |acc, &x| acc * 3 + x)
}

fn g(i: usize) -> u8 {
    grade(i + 1)
}

fn odd_count(d: &[usize]) -> u8 {
    d.iter().map(|&i| g(i)).sum::<u8>() % 2
}

fn sign_of(exponent: u8) -> Rational {
    if exponent % 2 == 1 {
        int(-1)
    } else {
        int(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxVector {
    pub slots: usize,
    pub comps: Vec<SuperPolynomial>,
}

impl AuxVector {
    pub fn zero(slots: usize) -> Self {
        AuxVector {
            slots,
            comps: vec![SuperPolynomial::zero(); 3usize.pow(slots as u32)],
        }
    }

    /// `e_{idx} ⊗ ψ` with 1-based auxiliary indices.
    pub fn basis(idx: &[usize], psi: SuperPolynomial) -> Self {
        let mut v = AuxVector::zero(idx.len());
        let d: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        v.comps[undigits(&d)] = psi;
        v
    }

    /// Component at 1-based auxiliary indices.
    pub fn component(&self, idx: &[usize]) -> &SuperPolynomial {
        let d: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        &self.comps[undigits(&d)]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SuperPolynomial::is_zero)
    }

    fn add_at(&mut self, idx: usize, c: &Rational, p: &SuperPolynomial) {
        self.comps[idx].add_scaled(c, p);
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AuxVector {
            slots: self.slots,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

impl fmt::Display for AuxVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let label: Vec<String> = digits(i, self.slots)
                    .iter()
                    .map(|d| format!("e{}", d + 1))
                    .collect();
                format!("{}:({})", label.join("*"), p)
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Residual for AuxVector {
    fn residual(&self, other: &Self) -> Self {
        AuxVector {
            slots: self.slots,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A 3×3 matrix whose entries are operators on the quantum space, acting as
/// `e_k ⊗ ψ ↦ Σ_i e_i ⊗ M_ik ψ` when it is the only auxiliary factor.
#[derive(Clone, Debug)]
pub struct SuperMatrixOperator {
    entries: Vec<Operator>,
}

impl SuperMatrixOperator {
    /// Builds from a 1-based entry function.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Operator) -> Self {
        let mut entries = Vec::with_capacity(9);
        for i in 1..=3 {
            for k in 1..=3 {
                entries.push(f(i, k));
            }
        }
        SuperMatrixOperator { entries }
    }

    /// Entries are multiplications by the given polynomials.
    pub fn from_polys(rows: [[SuperPolynomial; 3]; 3]) -> Self {
        SuperMatrixOperator::from_fn(|i, k| Operator::mul_poly(rows[i - 1][k - 1].clone()))
    }

    pub fn from_scalars(m: &Mat3) -> Self {
        SuperMatrixOperator::from_fn(|i, k| Operator::scalar(m[i - 1][k - 1].clone()))
    }

    pub fn entry(&self, i: usize, k: usize) -> &Operator {
        &self.entries[(i - 1) * 3 + (k - 1)]
    }

    pub fn with_entry(&self, i: usize, k: usize, op: Operator) -> Self {
        let mut out = self.clone();
        out.entries[(i - 1) * 3 + (k - 1)] = op;
        out
    }

    pub fn at(&self, slot: usize) -> FullOp {
        FullOp::Matrix(slot, Arc::new(self.clone()))
    }
}

fn is_structural_zero(op: &Operator) -> bool {
    matches!(op, Operator::Scalar(c) if c.is_zero())
}

/// Exact matrix on the whole auxiliary space `V^{⊗k}`; must be even.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxMatrix {
    pub slots: usize,
    /// `(row, col, value)` with 0-based multi-indices.
    pub entries: Vec<(usize, usize, Rational)>,
}

impl AuxMatrix {
    pub fn identity(slots: usize) -> Self {
        AuxMatrix {
            slots,
            entries: (0..3usize.pow(slots as u32))
                .map(|i| (i, i, Rational::one()))
                .collect(),
        }
    }

    /// Image of the 1-based basis vector `e_idx`, as `(coefficient, 1-based index)` pairs.
    pub fn column(&self, idx: &[usize]) -> Vec<(Rational, Vec<usize>)> {
        let d: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let col = undigits(&d);
        self.entries
            .iter()
            .filter(|(_, c, v)| *c == col && !v.is_zero())
            .map(|(r, _, v)| {
                (
                    v.clone(),
                    digits(*r, self.slots).iter().map(|x| x + 1).collect(),
                )
            })
            .collect()
    }

    pub fn mul(&self, other: &AuxMatrix) -> AuxMatrix {
        let mut acc: std::collections::BTreeMap<(usize, usize), Rational> = Default::default();
        for (r, m, a) in &self.entries {
            for (m2, c, b) in &other.entries {
                if m == m2 {
                    *acc.entry((*r, *c)).or_insert_with(Rational::zero) += a * b;
                }
            }
        }
        AuxMatrix {
            slots: self.slots,
            entries: acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        }
    }
}

/// Operators on `V^{⊗k} ⊗ C[Z]`.
#[derive(Clone, Debug)]
pub enum FullOp {
    /// Operator-valued matrix on one auxiliary slot.
    Matrix(usize, Arc<SuperMatrixOperator>),
    /// `a ⊗ X` with `a` a homogeneous 3×3 matrix of the given parity on one slot.
    Tensor {
        slot: usize,
        aux: Arc<Mat3>,
        aux_parity: u8,
        quantum: Operator,
    },
    Aux(Arc<AuxMatrix>),
    /// Acts on the quantum factor only.
    Quantum(Operator),
    Scalar(Rational),
    Sum(Vec<FullOp>),
    /// Applied right to left.
    Compose(Vec<FullOp>),
}

impl FullOp {
    pub fn tensor(slot: usize, aux: Mat3, aux_parity: u8, quantum: Operator) -> FullOp {
        FullOp::Tensor {
            slot,
            aux: Arc::new(aux),
            aux_parity,
            quantum,
        }
    }

    pub fn aux(m: AuxMatrix) -> FullOp {
        FullOp::Aux(Arc::new(m))
    }

    pub fn apply(&self, v: &AuxVector) -> Result<AuxVector> {
        let slots = v.slots;
        let mut out = AuxVector::zero(slots);
        match self {
            FullOp::Scalar(c) => return Ok(v.scale(c)),
            FullOp::Sum(ops) => {
                for o in ops {
                    let w = o.apply(v)?;
                    for (i, p) in w.comps.iter().enumerate() {
                        out.add_at(i, &Rational::one(), p);
                    }
                }
            }
            FullOp::Compose(ops) => {
                let mut cur = v.clone();
                for o in ops.iter().rev() {
                    cur = o.apply(&cur)?;
                }
                return Ok(cur);
            }
            FullOp::Quantum(x) => {
                let px = x.parity().ok_or(Error::IndefiniteParity)?;
                for (idx, psi) in v.comps.iter().enumerate() {
                    if psi.is_zero() {
                        continue;
                    }
                    let d = digits(idx, slots);
                    out.add_at(idx, &sign_of(px * odd_count(&d)), &x.apply(psi)?);
                }
            }
            FullOp::Aux(m) => {
                if m.slots != slots {
                    panic!("auxiliary matrix on {} slots applied to {slots}", m.slots);
                }
                for (r, c, a) in &m.entries {
                    if !v.comps[*c].is_zero() {
                        out.add_at(*r, a, &v.comps[*c]);
                    }
                }
            }
            FullOp::Matrix(s, m) => {
                for (idx, psi) in v.comps.iter().enumerate() {
                    if psi.is_zero() {
                        continue;
                    }
                    let mut d = digits(idx, slots);
                    let k = d[*s];
                    let right = odd_count(&d[s + 1..]);
                    for i in 0..3 {
                        let entry = m.entry(i + 1, k + 1);
                        if is_structural_zero(entry) {
                            continue;
                        }
                        let image = entry.apply(psi)?;
                        d[*s] = i;
                        let sign = sign_of((g(i) + g(k)) * right);
                        out.add_at(undigits(&d), &sign, &image);
                    }
                }
            }
            FullOp::Tensor {
                slot,
                aux,
                aux_parity,
                quantum,
            } => {
                let px = quantum.parity().ok_or(Error::IndefiniteParity)?;
                for (idx, psi) in v.comps.iter().enumerate() {
                    if psi.is_zero() {
                        continue;
                    }
                    let mut d = digits(idx, slots);
                    let k = d[*slot];
                    let left = odd_count(&d[..*slot]);
                    let all = odd_count(&d);
                    let mut image: Option<SuperPolynomial> = None;
                    for (i, row) in aux.iter().enumerate() {
                        let a = &row[k];
                        if a.is_zero() {
                            continue;
                        }
                        let x_psi = match &image {
                            Some(p) => p.clone(),
                            None => {
                                let p = quantum.apply(psi)?;
                                image = Some(p.clone());
                                p
                            }
                        };
                        d[*slot] = i;
                        let sign = sign_of(aux_parity * left + px * all);
                        out.add_at(undigits(&d), &(sign * a), &x_psi);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Add for FullOp {
    type Output = FullOp;
    fn add(self, rhs: FullOp) -> FullOp {
        FullOp::Sum(vec![self, rhs])
    }
}

impl std::ops::Mul for FullOp {
    type Output = FullOp;
    fn mul(self, rhs: FullOp) -> FullOp {
        FullOp::Compose(vec![self, rhs])
    }
}

/// Compares two operators on every `e_idx ⊗ m` with `m` of z-degree `≤ max_degree`
/// in the given number of quantum sites.
pub fn equal_full(
    name: &str,
    a: &FullOp,
    b: &FullOp,
    slots: usize,
    sites: usize,
    max_degree: u32,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(name, max_degree);
    let inputs = full_basis(slots, sites, max_degree);
    compare_images(
        &mut report,
        &inputs,
        |(idx, m)| label(idx, m),
        |(idx, m)| a.apply(&AuxVector::basis(idx, SuperPolynomial::monomial(*m))),
        |(idx, m)| b.apply(&AuxVector::basis(idx, SuperPolynomial::monomial(*m))),
    )?;
    Ok(report)
}

/// Like [`equal_full`], but only requires `a = c·b` for one scalar `c` fixed
/// on the first input where `b` is nonzero.
pub fn proportional_full(
    name: &str,
    a: &FullOp,
    b: &FullOp,
    slots: usize,
    sites: usize,
    max_degree: u32,
) -> Result<(CheckReport, Option<Rational>)> {
    let inputs = full_basis(slots, sites, max_degree);
    let mut scalar = None;
    for (idx, m) in &inputs {
        let v = AuxVector::basis(idx, SuperPolynomial::monomial(*m));
        let lb = b.apply(&v)?;
        if let Some((j, p)) = lb.comps.iter().enumerate().find(|(_, p)| !p.is_zero()) {
            let (mono, cb) = p.terms().next().expect("nonzero polynomial");
            let ca = a.apply(&v)?.comps[j].coeff(mono);
            scalar = Some(ca / cb);
            break;
        }
    }
    let c = scalar.clone().unwrap_or_else(Rational::one);
    let scaled = FullOp::Compose(vec![FullOp::Scalar(c), b.clone()]);
    let mut report = equal_full(name, a, &scaled, slots, sites, max_degree)?;
    if let Some(s) = &scalar {
        report.note(format!("{name}: global scalar {}", render(s)));
    }
    Ok((report, scalar))
}

fn full_basis(slots: usize, sites: usize, max_degree: u32) -> Vec<(Vec<usize>, Monomial)> {
    let monos = enumerate_basis_sites(sites, max_degree);
    let mut out = Vec::new();
    for idx in 0..3usize.pow(slots as u32) {
        let d: Vec<usize> = digits(idx, slots).iter().map(|x| x + 1).collect();
        for m in &monos {
            out.push((d.clone(), *m));
        }
    }
    out
}

fn label(idx: &[usize], m: &Monomial) -> String {
    let e: Vec<String> = idx.iter().map(|i| format!("e{i}")).collect();
    format!("{} * {}", e.join("*"), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl21::mat_unit;
    use crate::superpoly::Site;

    #[test]
    fn odd_quantum_operator_anticommutes_past_e2() {
        // e1 e2 ⊗ 1 under θ: the θ passes e2 once
        let th = FullOp::Quantum(Operator::theta(Site::ONE));
        let v = AuxVector::basis(&[1, 2], SuperPolynomial::one());
        let w = th.apply(&v).unwrap();
        assert_eq!(
            w.component(&[1, 2]),
            &SuperPolynomial::theta(Site::ONE).scale(&int(-1))
        );
    }

    #[test]
    fn worked_example_sign() {
        // v₊ ⊗ X on e₂ gives −e₁ ⊗ X for odd X
        let x = Operator::theta(Site::ONE);
        let op = FullOp::tensor(0, mat_unit(1, 2), 1, x);
        let w = op
            .apply(&AuxVector::basis(&[2], SuperPolynomial::one()))
            .unwrap();
        assert_eq!(
            w.component(&[1]),
            &SuperPolynomial::theta(Site::ONE).scale(&int(-1))
        );
    }

    #[test]
    fn matrix_on_second_slot_picks_up_sign_only_from_the_right() {
        let m = SuperMatrixOperator::from_fn(|i, k| {
            if (i, k) == (2, 1) {
                Operator::theta(Site::ONE)
            } else {
                Operator::zero()
            }
        });
        let v = AuxVector::basis(&[1, 2], SuperPolynomial::one());
        let w = m.at(0).apply(&v).unwrap();
        assert_eq!(
            w.component(&[2, 2]),
            &SuperPolynomial::theta(Site::ONE).scale(&int(-1))
        );
        let v = AuxVector::basis(&[2, 1], SuperPolynomial::one());
        let w = m.at(1).apply(&v).unwrap();
        assert_eq!(w.component(&[2, 2]), &SuperPolynomial::theta(Site::ONE));
    }
}
