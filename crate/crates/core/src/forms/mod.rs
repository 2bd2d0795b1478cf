//! Binary forms with exact rational coefficients, transvectants, and a
//! tensor-contraction evaluator for building comitants of a quadratic system.

mod contract;

pub(crate) use contract::contract_tensors;
pub use contract::{contract, ContractError, ContractionExpr, EpsilonTensor, Factor};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{binomial, display_rational, factorial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("transvectant index {k} exceeds operand degrees {left} and {right}")]
    IndexTooLarge { k: usize, left: usize, right: usize },
}

/// Homogeneous polynomial in `(x1, x2)`. Entry `i` of the coefficient vector
/// multiplies `x1^(d-i) * x2^i`. The degree is structural, so the zero form
/// of any degree is representable.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryForm {
    #[serde(with = "crate::rational::serde_rational_seq")]
    coeffs: Vec<Rational>,
}

/// Operation selector for [`form_arith`].
#[derive(Debug, Clone, PartialEq)]
pub enum FormOp {
    Add,
    Sub,
    Mul,
    Scale(Rational),
}

impl BinaryForm {
    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn constant(c: Rational) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    /// Builds a form from its coefficient list; an empty list is the zero scalar.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| crate::rational::int(c)).collect())
    }

    pub fn x1() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn x2() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x1^(d-i) x2^i`.
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Value of a degree-0 form; `None` for forms of positive degree.
    pub fn as_scalar(&self) -> Option<&Rational> {
        (self.degree() == 0).then(|| &self.coeffs[0])
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        let d = self.degree();
        // Horner in the ratio, carried homogeneously
        let mut acc = Rational::zero();
        let mut p2 = Rational::one();
        let mut pows1 = Vec::with_capacity(d + 1);
        let mut p = Rational::one();
        for _ in 0..=d {
            pows1.push(p.clone());
            p *= x1;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &pows1[d - i] * &p2;
            }
            p2 *= x2;
        }
        acc
    }

    pub fn eval_f64(&self, x1: f64, x2: f64) -> f64 {
        let d = self.degree() as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| crate::rational::to_f64(c) * x1.powi(d - i as i32) * x2.powi(i as i32))
            .sum()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        if self.degree() != other.degree() {
            return Err(FormError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FormError> {
        if self.degree() != other.degree() {
            return Err(FormError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&crate::rational::int(c))
    }

    pub fn mul_form(&self, other: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = BinaryForm::constant(Rational::one());
        for _ in 0..n {
            acc = acc.mul_form(self);
        }
        acc
    }

    /// Partial derivative in `x1`; the derivative of a scalar is the zero scalar.
    pub fn d1(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        BinaryForm {
            coeffs: (0..d)
                .map(|i| &self.coeffs[i] * Rational::from_integer((d - i).into()))
                .collect(),
        }
    }

    /// Partial derivative in `x2`.
    pub fn d2(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        BinaryForm {
            coeffs: (1..=d)
                .map(|i| &self.coeffs[i] * Rational::from_integer(i.into()))
                .collect(),
        }
    }

    /// `∂^(a+b) / ∂x1^a ∂x2^b`.
    pub fn derivative(&self, a: usize, b: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..a {
            f = f.d1();
        }
        for _ in 0..b {
            f = f.d2();
        }
        f
    }

    /// Substitutes `x1 -> m[0][0] y1 + m[0][1] y2`, `x2 -> m[1][0] y1 + m[1][1] y2`.
    pub fn substitute_linear(&self, m: &[[Rational; 2]; 2]) -> Self {
        let d = self.degree();
        let l1 = BinaryForm::from_coeffs(vec![m[0][0].clone(), m[0][1].clone()]);
        let l2 = BinaryForm::from_coeffs(vec![m[1][0].clone(), m[1][1].clone()]);
        let mut out = Self::zero(d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = l1.pow((d - i) as u32).mul_form(&l2.pow(i as u32)).scale(c);
            out = &out + &term;
        }
        out
    }
}

impl Add for &BinaryForm {
    type Output = BinaryForm;
    /// Panics on a degree mismatch; use [`BinaryForm::checked_add`] for a fallible sum.
    fn add(self, rhs: &BinaryForm) -> BinaryForm {
        self.checked_add(rhs).expect("form addition")
    }
}

impl Sub for &BinaryForm {
    type Output = BinaryForm;
    fn sub(self, rhs: &BinaryForm) -> BinaryForm {
        self.checked_sub(rhs).expect("form subtraction")
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;
    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        self.mul_form(rhs)
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;
    fn neg(self) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => power("x1", a),
                (0, b) => power("x2", b),
                (a, b) => format!("{}*{}", power("x1", a), power("x2", b)),
            };
            let text = display_rational(c);
            let (neg, body) = match text.strip_prefix('-') {
                Some(t) => (true, t.to_string()),
                None => (false, text),
            };
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            if mono.is_empty() {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&mono)?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn power(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Exact add/sub/mul/scale of binary forms.
pub fn form_arith(f: &BinaryForm, g: &BinaryForm, op: FormOp) -> Result<BinaryForm, FormError> {
    match op {
        FormOp::Add => f.checked_add(g),
        FormOp::Sub => f.checked_sub(g),
        FormOp::Mul => Ok(f.mul_form(g)),
        FormOp::Scale(c) => Ok(f.scale(&c)),
    }
}

/// Transvectant of index `k`:
///
/// `(f, g)^(k) = (r-k)!(ρ-k)!/(r!ρ!) Σ_h (-1)^h C(k,h) ∂^k f/∂x1^(k-h)∂x2^h · ∂^k g/∂x1^h∂x2^(k-h)`
///
/// where `r`, `ρ` are the degrees of `f`, `g`.
pub fn transvectant(f: &BinaryForm, g: &BinaryForm, k: usize) -> Result<BinaryForm, FormError> {
    let (r, rho) = (f.degree(), g.degree());
    if k > r || k > rho {
        return Err(FormError::IndexTooLarge {
            k,
            left: r,
            right: rho,
        });
    }
    let prefactor = factorial(r - k) * factorial(rho - k) / (factorial(r) * factorial(rho));
    let mut acc = BinaryForm::zero(r + rho - 2 * k);
    for h in 0..=k {
        let weight = if h % 2 == 0 {
            binomial(k, h)
        } else {
            -binomial(k, h)
        };
        let term = f.derivative(k - h, h).mul_form(&g.derivative(h, k - h));
        acc = &acc + &term.scale(&weight);
    }
    Ok(acc.scale(&prefactor))
}

/// Infallible transvectant for compositions whose degrees are fixed by construction.
pub(crate) fn tv(f: &BinaryForm, g: &BinaryForm, k: usize) -> BinaryForm {
    transvectant(f, g, k).unwrap_or_else(|e| panic!("comitant construction: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn monomial_product() {
        let p = form_arith(&BinaryForm::x1(), &BinaryForm::x2(), FormOp::Mul).unwrap();
        assert_eq!(p, BinaryForm::from_ints(&[0, 1, 0]));
    }

    #[test]
    fn add_zero_is_identity() {
        let f = BinaryForm::from_ints(&[3, -1, 4]);
        assert_eq!(
            form_arith(&f, &BinaryForm::zero(2), FormOp::Add).unwrap(),
            f
        );
    }

    #[test]
    fn scale_by_half() {
        let f = &BinaryForm::x1() + &BinaryForm::x2();
        let s = form_arith(&f, &f, FormOp::Scale(rat(1, 2))).unwrap();
        assert_eq!(s.coeffs(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn add_rejects_degree_mismatch() {
        let e = form_arith(&BinaryForm::x1(), &BinaryForm::zero(2), FormOp::Add).unwrap_err();
        assert_eq!(e, FormError::DegreeMismatch(1, 2));
        assert!(BinaryForm::x1().checked_sub(&BinaryForm::zero(0)).is_err());
    }

    #[test]
    fn index_zero_is_product() {
        let f = BinaryForm::from_ints(&[1, 2, -3]);
        let g = BinaryForm::from_ints(&[5, 0, 1, 7]);
        assert_eq!(transvectant(&f, &g, 0).unwrap(), &f * &g);
    }

    #[test]
    fn odd_self_transvectants_vanish() {
        let f = BinaryForm::from_ints(&[1, -2, 3, 4]);
        assert!(transvectant(&f, &f, 1).unwrap().is_zero());
        assert!(transvectant(&f, &f, 3).unwrap().is_zero());
    }

    #[test]
    fn hand_computed_second_transvectants() {
        let xy = BinaryForm::from_ints(&[0, 1, 0]);
        assert_eq!(
            transvectant(&xy, &xy, 2).unwrap(),
            BinaryForm::constant(rat(-1, 2))
        );
        let xx = BinaryForm::from_ints(&[1, 0, 0]);
        let yy = BinaryForm::from_ints(&[0, 0, 1]);
        assert_eq!(
            transvectant(&xx, &yy, 2).unwrap(),
            BinaryForm::constant(int(1))
        );
    }

    #[test]
    fn index_too_large() {
        let e = transvectant(&BinaryForm::x1(), &BinaryForm::zero(3), 2).unwrap_err();
        assert!(matches!(e, FormError::IndexTooLarge { k: 2, .. }));
    }

    #[test]
    fn derivatives_and_eval() {
        // f = x1^2 x2 - 2 x2^3
        let f = BinaryForm::from_ints(&[0, 1, 0, -2]);
        assert_eq!(f.d1(), BinaryForm::from_ints(&[0, 2, 0]));
        assert_eq!(f.d2(), BinaryForm::from_ints(&[1, 0, -6]));
        assert_eq!(f.eval(&int(2), &int(1)), int(2));
        assert_eq!(BinaryForm::constant(int(-3)).d1(), BinaryForm::zero(0));
    }

    #[test]
    fn display() {
        let f = BinaryForm::from_ints(&[1, 0, -3]);
        assert_eq!(f.to_string(), "x1^2 - 3*x2^2");
        assert_eq!(BinaryForm::zero(2).to_string(), "0");
    }
}
