//! Dense univariate polynomials over the rationals: Euclidean arithmetic,
//! square-free decomposition, Sturm sequences and real root isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, sign, Rational};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(v: Rational) -> Self {
        Self::new(vec![v])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.c.iter().map(|v| v * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lead()))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, v| acc * x + v)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let cs: Vec<f64> = self.c.iter().map(crate::rational::to_f64).collect();
        cs.iter().rev().fold(0.0, |acc, v| acc * x + v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * int(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lead;
            if !f.is_zero() {
                for (i, dc) in d.c.iter().enumerate() {
                    r[k + i] -= &f * dc;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(a, m)` monic and `s a ≡ g (mod m)`.
    pub fn gcd_inverse(a: &Self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), a.rem(m));
        let (mut s0, mut s1) = (Self::zero(), Self::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let k = Rational::one() / r0.lead();
        (r0.scale(&k), s0.scale(&k))
    }

    /// Yun's algorithm: `[(f₁, 1), (f₂, 2), …]` with `self = c ∏ fᵢ^i`,
    /// each `fᵢ` monic, square-free and pairwise coprime; constant factors are dropped.
    pub fn square_free(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = Self::gcd(&f, &df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = Self::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn sturm(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = -&seq[n - 2].rem(&seq[n - 1]);
            seq.push(r);
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.is_zero() {
            panic!("root count of the zero polynomial");
        }
        let seq = self.sturm();
        sign_changes(&seq, a) - sign_changes(&seq, b)
    }

    /// Bound strictly exceeding the modulus of every root.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let m = self.c[..self.c.len().saturating_sub(1)]
            .iter()
            .map(|v| v.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Disjoint isolating intervals `(l, r]` of the real roots of a
    /// square-free polynomial, in increasing order. Rational roots are
    /// returned as degenerate intervals `l = r`.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        let Some(deg) = self.degree() else {
            panic!("roots of the zero polynomial");
        };
        if deg == 0 {
            return Vec::new();
        }
        let b = self.root_bound();
        let seq = self.sturm();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((l, r)) = stack.pop() {
            let n = sign_changes(&seq, &l) - sign_changes(&seq, &r);
            let at_r = self.eval(&r).is_zero();
            if at_r {
                out.push((r.clone(), r.clone()));
            }
            let inner = n - usize::from(at_r);
            if inner == 0 {
                continue;
            }
            if inner == 1 && !at_r {
                out.push((l, r));
                continue;
            }
            let mid = (&l + &r) / int(2);
            stack.push((l, mid.clone()));
            stack.push((mid, r));
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out.dedup();
        out
    }
}

impl UPoly {
    /// Leading coefficient after scaling to a primitive-free integer polynomial
    /// (denominators cleared).
    fn integer_lead(&self) -> BigInt {
        let l = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        (self.lead() * Rational::from_integer(l)).to_integer().abs()
    }

    /// The root in `(lo, hi]` when it is rational. Uses that `L·α` is an
    /// integer for a rational root `α` and integer leading coefficient `L`.
    pub fn rational_root_in(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        if lo == hi {
            return Some(lo.clone());
        }
        let l = Rational::from_integer(self.integer_lead());
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        while (&hi - &lo) * &l >= Rational::one() {
            let mid = (&lo + &hi) / int(2);
            if self.eval(&mid).is_zero() {
                return Some(mid);
            }
            if self.count_roots(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let n = ((&lo + &hi) / int(2) * &l).round();
        [&n - Rational::one(), n.clone(), &n + Rational::one()]
            .into_iter()
            .map(|k| k / &l)
            .find(|r| *r > lo && *r <= hi && self.eval(r).is_zero())
    }
}

/// Number of distinct real roots in `(a, b]` from a precomputed Sturm chain.
pub fn count_with(seq: &[UPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign(&p.eval(x)))
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| match i {
                0 => format!("{v}"),
                1 => format!("({v})x"),
                _ => format!("({v})x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.c.iter().map(|v| -v).collect())
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn det(m: &[Vec<UPoly>]) -> UPoly {
    match m.len() {
        0 => UPoly::constant(Rational::one()),
        1 => m[0][0].clone(),
        n => {
            let mut acc = UPoly::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<UPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &det(&minor);
                acc = if col % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// Sylvester resultant of `Σ a[i] y^i` and `Σ b[j] y^j` (coefficients
/// polynomials in another variable), taken at the formal degrees given by
/// the slice lengths.
pub fn resultant(a: &[UPoly], b: &[UPoly]) -> UPoly {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return UPoly::constant(Rational::one());
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![UPoly::zero(); size];
        for (i, v) in a.iter().rev().enumerate() {
            row[shift + i] = v.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![UPoly::zero(); size];
        for (i, v) in b.iter().rev().enumerate() {
            row[shift + i] = v.clone();
        }
        rows.push(row);
    }
    det(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn division_round_trip() {
        let a = UPoly::from_ints(&[3, 0, -2, 5, 1]);
        let d = UPoly::from_ints(&[1, 2, 3]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn yun_splits_powers() {
        // (x-1)^3 (x+2) (x^2+1)^2
        let l1 = UPoly::from_ints(&[-1, 1]);
        let l2 = UPoly::from_ints(&[2, 1]);
        let q = UPoly::from_ints(&[1, 0, 1]);
        let f = &(&(&(&l1 * &l1) * &l1) * &l2) * &(&q * &q);
        let sf = f.scale(&int(7)).square_free();
        assert_eq!(sf, vec![(l2, 1), (q, 2), (l1, 3)]);
    }

    #[test]
    fn sturm_counts() {
        // x^3 - 2x has roots -√2, 0, √2
        let f = UPoly::from_ints(&[0, -2, 0, 1]);
        assert_eq!(f.count_roots(&int(-2), &int(2)), 3);
        assert_eq!(f.count_roots(&int(0), &int(2)), 1);
        assert_eq!(f.count_roots(&int(-1), &int(0)), 1);
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1], (int(0), int(0)));
        for (l, r) in [&roots[0], &roots[2]] {
            assert_eq!(f.count_roots(l, r), 1);
        }
    }

    #[test]
    fn isolation_of_close_roots() {
        // (x - 1/1000)(x - 2/1000)(x^2 - 3)
        let a = UPoly::new(vec![-rat(1, 1000), int(1)]);
        let b = UPoly::new(vec![-rat(2, 1000), int(1)]);
        let c = UPoly::from_ints(&[-3, 0, 1]);
        let f = &(&a * &b) * &c;
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 4);
        for (l, r) in &roots {
            if l == r {
                assert!(f.eval(l).is_zero());
            } else {
                assert_eq!(f.count_roots(l, r), 1);
            }
        }
    }

    #[test]
    fn rational_roots_inside_intervals() {
        // (3x - 1)(2x + 5)(x^2 - 2)
        let f = &(&UPoly::from_ints(&[-1, 3]) * &UPoly::from_ints(&[5, 2]))
            * &UPoly::from_ints(&[-2, 0, 1]);
        let found: Vec<_> = f
            .isolate_real_roots()
            .iter()
            .filter_map(|(l, r)| f.rational_root_in(l, r))
            .collect();
        assert_eq!(found, vec![rat(-5, 2), rat(1, 3)]);
    }

    #[test]
    fn no_real_roots() {
        assert!(UPoly::from_ints(&[1, 0, 1]).isolate_real_roots().is_empty());
    }

    #[test]
    fn inverse_modulo() {
        let m = UPoly::from_ints(&[-2, 0, 1]);
        let a = UPoly::from_ints(&[1, 1]);
        let (g, s) = UPoly::gcd_inverse(&a, &m);
        assert_eq!(g, UPoly::from_ints(&[1]));
        assert_eq!((&s * &a).rem(&m), UPoly::from_ints(&[1]));
    }

    #[test]
    fn resultant_of_line_and_circle() {
        // y - x and y^2 + x^2 - 2 as polynomials in y over Q[x]
        let x = UPoly::x();
        let a = vec![-&x, UPoly::from_ints(&[1])];
        let b = vec![
            &(&x * &x) - &UPoly::from_ints(&[2]),
            UPoly::zero(),
            UPoly::from_ints(&[1]),
        ];
        assert_eq!(resultant(&a, &b), UPoly::from_ints(&[-2, 0, 2]));
    }
}
