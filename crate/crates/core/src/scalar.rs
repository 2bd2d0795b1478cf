//! Minimal ordered-ring interface shared by exact rationals and the
//! algebraic-number arithmetic the singular-point oracle works in.

use num_traits::{One, Zero};

use crate::rational::{sign, Rational};

pub trait Arith {
    type Elem: Clone + std::fmt::Debug;

    fn lift(&self, r: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// -1, 0 or 1.
    fn sign(&self, a: &Self::Elem) -> i8;

    fn zero(&self) -> Self::Elem {
        self.lift(&Rational::zero())
    }

    fn one(&self) -> Self::Elem {
        self.lift(&Rational::one())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn scale(&self, c: i64, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.lift(&Rational::from_integer(c.into())), a)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.sign(a) == 0
    }

    /// Sum of an iterator of elements.
    fn sum<I: IntoIterator<Item = Self::Elem>>(&self, items: I) -> Self::Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, &x))
    }
}

/// Plain exact rational arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exact;

impl Arith for Exact {
    type Elem = Rational;

    fn lift(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn sign(&self, a: &Rational) -> i8 {
        sign(a)
    }
}
