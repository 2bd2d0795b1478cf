//! The quadratic system `x' = P(x, y)`, `y' = Q(x, y)` and its coordinate changes.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::forms::BinaryForm;
use crate::poly::UPoly;
use crate::rational::{display_rational, int, Rational};

/// Position of each monomial inside a six-entry coefficient block.
pub const C00: usize = 0;
pub const C10: usize = 1;
pub const C01: usize = 2;
pub const C20: usize = 3;
pub const C11: usize = 4;
pub const C02: usize = 5;

/// Coefficients of
/// `P = p00 + p10 x + p01 y + p20 x^2 + p11 x y + p02 y^2` and the same for `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadSystem {
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub p: [Rational; 6],
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub q: [Rational; 6],
}

/// Components `a^j`, `a^j_α`, `a^j_{αβ}` of the coefficient tensors, indices 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensors<E> {
    pub a0: [E; 2],
    pub a1: [[E; 2]; 2],
    pub a2: [[[E; 2]; 2]; 2],
}

/// Affine change of phase coordinates `u = m x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub m: [[Rational; 2]; 2],
    pub b: [Rational; 2],
}

impl AffineMap {
    pub fn linear(m: [[Rational; 2]; 2]) -> Self {
        AffineMap {
            m,
            b: [Rational::zero(), Rational::zero()],
        }
    }

    pub fn shift(h: Rational, k: Rational) -> Self {
        AffineMap {
            m: [[int(1), int(0)], [int(0), int(1)]],
            b: [h, k],
        }
    }

    pub fn det(&self) -> Rational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    fn inverse_linear(&self) -> [[Rational; 2]; 2] {
        let det = self.det();
        let m = &self.m;
        [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ]
    }

    /// Image of a point.
    pub fn apply(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (
            &self.m[0][0] * x + &self.m[0][1] * y + &self.b[0],
            &self.m[1][0] * x + &self.m[1][1] * y + &self.b[1],
        )
    }
}

impl QuadSystem {
    pub fn new(p: [Rational; 6], q: [Rational; 6]) -> Self {
        QuadSystem { p, q }
    }

    /// Fixed order `p00,p10,p01,p20,p11,p02,q00,q10,q01,q20,q11,q02`.
    pub fn from_coeffs(c: [Rational; 12]) -> Self {
        let mut it = c.into_iter();
        let p = std::array::from_fn(|_| it.next().unwrap());
        let q = std::array::from_fn(|_| it.next().unwrap());
        QuadSystem { p, q }
    }

    pub fn from_ints(c: [i64; 12]) -> Self {
        Self::from_coeffs(c.map(int))
    }

    pub fn zero() -> Self {
        Self::from_ints([0; 12])
    }

    pub fn coeffs(&self) -> [Rational; 12] {
        std::array::from_fn(|i| {
            if i < 6 {
                self.p[i].clone()
            } else {
                self.q[i - 6].clone()
            }
        })
    }

    /// Coefficient block of `P` (j = 0) or `Q` (j = 1).
    pub fn component(&self, j: usize) -> &[Rational; 6] {
        if j == 0 {
            &self.p
        } else {
            &self.q
        }
    }

    pub fn a0(&self, j: usize) -> Rational {
        self.component(j)[C00].clone()
    }

    pub fn a1(&self, j: usize, alpha: usize) -> Rational {
        self.component(j)[if alpha == 0 { C10 } else { C01 }].clone()
    }

    /// Symmetric tensor `a^j_{αβ}`; the mixed entry is half of the `xy` coefficient.
    pub fn a2(&self, j: usize, alpha: usize, beta: usize) -> Rational {
        let c = self.component(j);
        match (alpha, beta) {
            (0, 0) => c[C20].clone(),
            (1, 1) => c[C02].clone(),
            _ => &c[C11] / int(2),
        }
    }

    pub fn tensors(&self) -> Tensors<Rational> {
        Tensors {
            a0: std::array::from_fn(|j| self.a0(j)),
            a1: std::array::from_fn(|j| std::array::from_fn(|a| self.a1(j, a))),
            a2: std::array::from_fn(|j| {
                std::array::from_fn(|a| std::array::from_fn(|b| self.a2(j, a, b)))
            }),
        }
    }

    /// Homogeneous part of degree `deg` (0, 1 or 2) of `P` (j = 0) or `Q` (j = 1).
    pub fn part(&self, j: usize, deg: usize) -> BinaryForm {
        let c = self.component(j);
        match deg {
            0 => BinaryForm::constant(c[C00].clone()),
            1 => BinaryForm::from_coeffs(vec![c[C10].clone(), c[C01].clone()]),
            2 => BinaryForm::from_coeffs(vec![c[C20].clone(), c[C11].clone(), c[C02].clone()]),
            _ => panic!("quadratic systems have parts of degree 0..=2"),
        }
    }

    pub fn has_zero_quadratic_part(&self) -> bool {
        [C20, C11, C02]
            .iter()
            .all(|&i| self.p[i].is_zero() && self.q[i].is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().chain(self.q.iter()).all(Zero::is_zero)
    }

    /// Value of `P` (j = 0) or `Q` (j = 1) at a point.
    pub fn eval(&self, j: usize, x: &Rational, y: &Rational) -> Rational {
        eval_block(self.component(j), x, y)
    }

    /// Jacobian `[[P_x, P_y], [Q_x, Q_y]]` at a point.
    pub fn jacobian(&self, x: &Rational, y: &Rational) -> [[Rational; 2]; 2] {
        std::array::from_fn(|j| {
            let c = self.component(j);
            [
                &c[C10] + int(2) * &c[C20] * x + &c[C11] * y,
                &c[C01] + &c[C11] * x + int(2) * &c[C02] * y,
            ]
        })
    }

    /// The system written in coordinates centred at `(h, k)`.
    pub fn translate(&self, h: &Rational, k: &Rational) -> QuadSystem {
        let shift = |c: &[Rational; 6]| -> [Rational; 6] {
            [
                eval_block(c, h, k),
                &c[C10] + int(2) * &c[C20] * h + &c[C11] * k,
                &c[C01] + &c[C11] * h + int(2) * &c[C02] * k,
                c[C20].clone(),
                c[C11].clone(),
                c[C02].clone(),
            ]
        };
        QuadSystem {
            p: shift(&self.p),
            q: shift(&self.q),
        }
    }

    /// The system expressed in the coordinates `u = m x + b`.
    ///
    /// Panics when the map is singular.
    pub fn transform(&self, map: &AffineMap) -> QuadSystem {
        assert!(map.is_invertible(), "affine map must be invertible");
        let n = map.inverse_linear();
        // x = n u + c with c = -n b
        let c = [
            -(&n[0][0] * &map.b[0] + &n[0][1] * &map.b[1]),
            -(&n[1][0] * &map.b[0] + &n[1][1] * &map.b[1]),
        ];
        let shifted = self.translate(&c[0], &c[1]);
        let subst = |j: usize| -> [BinaryForm; 3] {
            [
                shifted.part(j, 0),
                shifted.part(j, 1).substitute_linear(&n),
                shifted.part(j, 2).substitute_linear(&n),
            ]
        };
        let pf = subst(0);
        let qf = subst(1);
        let combine = |a: &Rational, b: &Rational| -> [Rational; 6] {
            let parts: Vec<BinaryForm> =
                (0..3).map(|d| &pf[d].scale(a) + &qf[d].scale(b)).collect();
            [
                parts[0].coeff(0).clone(),
                parts[1].coeff(0).clone(),
                parts[1].coeff(1).clone(),
                parts[2].coeff(0).clone(),
                parts[2].coeff(1).clone(),
                parts[2].coeff(2).clone(),
            ]
        };
        QuadSystem {
            p: combine(&map.m[0][0], &map.m[0][1]),
            q: combine(&map.m[1][0], &map.m[1][1]),
        }
    }

    /// Rescaling of time `t -> t / c`, i.e. both right-hand sides multiplied by `c`.
    pub fn scale_time(&self, c: &Rational) -> QuadSystem {
        QuadSystem {
            p: self.p.clone().map(|v| v * c),
            q: self.q.clone().map(|v| v * c),
        }
    }
}

fn eval_block(c: &[Rational; 6], x: &Rational, y: &Rational) -> Rational {
    &c[C00] + &c[C10] * x + &c[C01] * y + &c[C20] * x * x + &c[C11] * x * y + &c[C02] * y * y
}

fn write_poly(f: &mut fmt::Formatter<'_>, c: &[Rational; 6]) -> fmt::Result {
    const MONO: [&str; 6] = ["", "x", "y", "x^2", "x*y", "y^2"];
    let mut wrote = false;
    for (coef, mono) in c.iter().zip(MONO) {
        if coef.is_zero() {
            continue;
        }
        let text = display_rational(coef);
        let (neg, body) = match text.strip_prefix('-') {
            Some(t) => (true, t.to_string()),
            None => (false, text),
        };
        if wrote {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        match (
            mono.is_empty(),
            coef.numer().magnitude().is_one() && coef.denom().is_one(),
        ) {
            (true, _) => f.write_str(&body)?,
            (false, true) => f.write_str(mono)?,
            (false, false) => write!(f, "{body}*{mono}")?,
        }
        wrote = true;
    }
    if !wrote {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for QuadSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("x' = ")?;
        write_poly(f, &self.p)?;
        f.write_str(", y' = ")?;
        write_poly(f, &self.q)
    }
}

impl fmt::Debug for QuadSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadSystem({self})")
    }
}

pub(crate) fn total_degree(c: &[Rational; 6]) -> Option<usize> {
    if c[3..].iter().any(|v| !v.is_zero()) {
        Some(2)
    } else if c[1..3].iter().any(|v| !v.is_zero()) {
        Some(1)
    } else if !c[0].is_zero() {
        Some(0)
    } else {
        None
    }
}

/// Coefficients in `Y` of `P(X + tY, Y)`, each a polynomial in `X`,
/// truncated to the total degree.
pub(crate) fn sheared(c: &[Rational; 6], t: &Rational, deg: usize) -> Vec<UPoly> {
    let all = [
        UPoly::new(vec![c[0].clone(), c[1].clone(), c[3].clone()]),
        UPoly::new(vec![&c[1] * t + &c[2], int(2) * t * &c[3] + &c[4]]),
        UPoly::constant(&c[3] * t * t + &c[4] * t + &c[5]),
    ];
    all[..=deg].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn tensor_accessors_halve_the_cross_term() {
        let s = QuadSystem::from_ints([1, 2, 3, 4, 6, 8, 0, 0, 0, 0, 5, 0]);
        assert_eq!(s.a0(0), int(1));
        assert_eq!(s.a1(0, 1), int(3));
        assert_eq!(s.a2(0, 0, 1), int(3));
        assert_eq!(s.a2(0, 1, 0), int(3));
        assert_eq!(s.a2(1, 0, 1), rat(5, 2));
        assert_eq!(s.a2(0, 1, 1), int(8));
    }

    #[test]
    fn translation_moves_a_singular_point_to_the_origin() {
        // x' = x - x^2, y' = y - y^2 has a singular point at (1, 1)
        let s = QuadSystem::from_ints([0, 1, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1]);
        let t = s.translate(&int(1), &int(1));
        assert!(t.a0(0).is_zero() && t.a0(1).is_zero());
        assert_eq!(t.a1(0, 0), int(-1));
        assert_eq!(t.a1(1, 1), int(-1));
    }

    #[test]
    fn transform_then_inverse_round_trips() {
        let s = QuadSystem::from_ints([1, -2, 3, 1, 0, -1, 2, 0, 1, 4, -3, 2]);
        let map = AffineMap {
            m: [[int(2), int(1)], [int(-1), int(3)]],
            b: [rat(1, 2), int(-2)],
        };
        let t = s.transform(&map);
        // inverse: x = n (u - b)
        let det = map.det();
        let n = [
            [&map.m[1][1] / &det, -&map.m[0][1] / &det],
            [-&map.m[1][0] / &det, &map.m[0][0] / &det],
        ];
        let b = [
            -(&n[0][0] * &map.b[0] + &n[0][1] * &map.b[1]),
            -(&n[1][0] * &map.b[0] + &n[1][1] * &map.b[1]),
        ];
        let back = t.transform(&AffineMap { m: n, b });
        assert_eq!(back, s);
    }

    #[test]
    fn transform_maps_singular_points() {
        let s = QuadSystem::from_ints([0, 1, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1]);
        let map = AffineMap {
            m: [[int(1), int(2)], [int(0), int(-1)]],
            b: [int(3), int(1)],
        };
        let t = s.transform(&map);
        let (u, v) = map.apply(&int(1), &int(1));
        assert!(t.eval(0, &u, &v).is_zero() && t.eval(1, &u, &v).is_zero());
    }

    #[test]
    fn display() {
        let s = QuadSystem::from_ints([0, 0, 1, 1, 0, 0, 0, -1, 0, 0, 0, 0]);
        assert_eq!(s.to_string(), "x' = y + x^2, y' = -x");
    }
}
