//! Exact arithmetic in `Q[x]/(m)` at one isolated real root `α` of a
//! square-free `m`. Elements are residues modulo `m`; signs are decided
//! exactly by Sturm counting and interval refinement.

use num_traits::Zero;

use crate::poly::{count_with, UPoly};
use crate::rational::{int, sign, to_f64, Rational};
use crate::scalar::Arith;

#[derive(Debug, Clone, PartialEq)]
pub struct RealRoot {
    modulus: UPoly,
    sturm: Vec<UPoly>,
    lo: Rational,
    hi: Rational,
    approx: f64,
}

impl RealRoot {
    /// `modulus` must be square-free with exactly one root in `(lo, hi]`,
    /// or `lo == hi` must itself be a root.
    pub fn new(modulus: UPoly, lo: Rational, hi: Rational) -> Self {
        debug_assert!(if lo == hi {
            modulus.eval(&lo).is_zero()
        } else {
            modulus.count_roots(&lo, &hi) == 1
        });
        let sturm = if lo == hi {
            Vec::new()
        } else {
            modulus.sturm()
        };
        let approx = approximate(&modulus, &lo, &hi);
        RealRoot {
            modulus,
            sturm,
            lo,
            hi,
            approx,
        }
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    /// The root itself when it is rational.
    pub fn rational(&self) -> Option<Rational> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        (self.modulus.degree() == Some(1)).then(|| -self.modulus.coeff(0) / self.modulus.coeff(1))
    }

    /// Element `x` itself.
    pub fn generator(&self) -> UPoly {
        UPoly::x().rem(&self.modulus)
    }

    pub fn reduce(&self, p: &UPoly) -> UPoly {
        p.rem(&self.modulus)
    }

    /// Inverse of a nonzero element, if it is a unit of `Q[x]/(m)`.
    pub fn inverse(&self, a: &UPoly) -> Option<UPoly> {
        let (g, s) = UPoly::gcd_inverse(a, &self.modulus);
        (g.degree() == Some(0)).then_some(s)
    }

    /// Halves `(lo, hi]` keeping the root; `Err(r)` when the midpoint is the root.
    fn bisect(&self, lo: &Rational, hi: &Rational) -> Result<(Rational, Rational), Rational> {
        let mid = (lo + hi) / int(2);
        if self.modulus.eval(&mid).is_zero() {
            return Err(mid);
        }
        if count_with(&self.sturm, lo, &mid) == 1 {
            Ok((lo.clone(), mid))
        } else {
            Ok((mid, hi.clone()))
        }
    }

    fn sign_of(&self, a: &UPoly) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if let Some(r) = self.rational() {
            return sign(&a.eval(&r));
        }
        let g = UPoly::gcd(a, &self.modulus);
        if g.degree().unwrap_or(0) > 0 && g.count_roots(&self.lo, &self.hi) > 0 {
            return 0;
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let chain = a.sturm();
        while count_with(&chain, &lo, &hi) > 0 {
            match self.bisect(&lo, &hi) {
                Ok((l, h)) => {
                    lo = l;
                    hi = h;
                }
                Err(root) => return sign(&a.eval(&root)),
            }
        }
        sign(&a.eval(&hi))
    }

    /// Floating-point value of an element.
    pub fn approx(&self, a: &UPoly) -> f64 {
        a.eval_f64(self.approx_root())
    }

    pub fn approx_root(&self) -> f64 {
        self.approx
    }
}

/// Floating-point bisection on the single sign change inside `(lo, hi]`.
fn approximate(m: &UPoly, lo: &Rational, hi: &Rational) -> f64 {
    let (mut l, mut h) = (to_f64(lo), to_f64(hi));
    if lo == hi || m.degree() == Some(1) {
        return if lo == hi {
            l
        } else {
            to_f64(&(-m.coeff(0) / m.coeff(1)))
        };
    }
    let s_hi = m.eval_f64(h).signum();
    for _ in 0..200 {
        let mid = 0.5 * (l + h);
        if mid <= l || mid >= h {
            break;
        }
        let v = m.eval_f64(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == s_hi {
            h = mid;
        } else {
            l = mid;
        }
    }
    0.5 * (l + h)
}

impl Arith for RealRoot {
    type Elem = UPoly;

    fn lift(&self, r: &Rational) -> UPoly {
        UPoly::constant(r.clone())
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a + b
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a - b
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        (a * b).rem(&self.modulus)
    }
    fn sign(&self, a: &UPoly) -> i8 {
        self.sign_of(a)
    }
}

/// Floating-point arithmetic whose sign treats `|v| ≤ tol` as zero.
#[derive(Debug, Clone, Copy)]
pub struct Approx {
    pub tol: f64,
}

impl Arith for Approx {
    type Elem = f64;

    fn lift(&self, r: &Rational) -> f64 {
        to_f64(r)
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn sign(&self, a: &f64) -> i8 {
        if a.abs() <= self.tol {
            0
        } else if *a > 0.0 {
            1
        } else {
            -1
        }
    }
}
