//! Scalar invariants: the affine invariants `A₁ … A₂₆` plus the auxiliary
//! `A₂₇ = (Ĉ, (D̂, Ê)⁽¹⁾)⁽³⁾`, their polynomial combinations `C₁ … C₁₂, E₁, E₂`,
//! and the center-affine invariants evaluated at the origin
//! (`I₁ … I₆, I₁₃, I₁₇, I₂₀, J₁, J₂`) with `K₁`.

use serde::{Deserialize, Serialize};

use crate::comitants::{assemble, cls_comitants, hat_comitants, ComitantSet, HatComitants};
use crate::forms::{tv, BinaryForm, EpsilonTensor};
use crate::rational::{int, rat, Rational};
use crate::scalar::{Arith, Exact};
use crate::system::{QuadSystem, Tensors};

/// `C₁ … C₁₂` with `E₁`, `E₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CInvariants {
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub c: [Rational; 12],
    #[serde(with = "crate::rational::serde_rational")]
    pub e1: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub e2: Rational,
}

/// Center-affine invariants built from the coefficients as given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginInvariants<E> {
    pub i1: E,
    pub i2: E,
    pub i3: E,
    pub i4: E,
    pub i5: E,
    pub i6: E,
    pub i13: E,
    pub i17: E,
    pub i20: E,
    pub j1: E,
    pub j2: E,
}

/// Everything the classifier reads, for one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantTable {
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub a: [Rational; 26],
    #[serde(with = "crate::rational::serde_rational")]
    pub a27: Rational,
    #[serde(flatten)]
    pub cs: CInvariants,
    #[serde(with = "origin_serde")]
    pub origin: OriginInvariants<Rational>,
    pub k1: BinaryForm,
    pub comitants: ComitantSet,
}

impl InvariantTable {
    pub fn compute(sys: &QuadSystem) -> Self {
        let hats = hat_comitants(sys);
        let a = a_invariants_from(&hats);
        let a27 = a27_from(&hats);
        let cs = c_invariants(&a, &a27);
        let comitants = assemble(hats, cls_comitants(sys));
        InvariantTable {
            a,
            a27,
            cs,
            origin: origin_invariants(sys),
            k1: comitants.hats.g.clone(),
            comitants,
        }
    }

    /// `A_n`, 1-based.
    pub fn a(&self, n: usize) -> &Rational {
        &self.a[n - 1]
    }

    /// `C_n`, 1-based.
    pub fn c(&self, n: usize) -> &Rational {
        &self.cs.c[n - 1]
    }

    pub fn mu(&self) -> &Rational {
        &self.comitants.mu
    }

    pub fn d(&self) -> &Rational {
        &self.comitants.d
    }
}

fn scalar(f: BinaryForm) -> Rational {
    assert_eq!(f.degree(), 0, "affine invariant must have degree 0");
    f.coeffs()[0].clone()
}

/// `A₁ … A₂₆` from already computed contraction comitants.
pub fn a_invariants_from(h: &HatComitants) -> [Rational; 26] {
    let (b, c, d, e, f, g, hh, k) = (&h.b, &h.c, &h.d, &h.e, &h.f, &h.g, &h.h, &h.k);
    let dd2 = tv(d, d, 2);
    let cd1 = tv(c, d, 1);
    let cd2 = tv(c, d, 2);
    let g3 = |x: &BinaryForm| tv(&tv(&tv(x, g, 1), g, 1), g, 1);
    let values = [
        h.a.clone(),
        tv(c, d, 3),
        g3(c),
        tv(hh, hh, 2),
        tv(hh, k, 2),
        tv(e, hh, 2),
        tv(&tv(c, e, 2), g, 1),
        tv(&tv(d, hh, 2), g, 1),
        g3(d),
        tv(&tv(d, k, 2), g, 1),
        tv(f, k, 2),
        tv(f, hh, 2),
        tv(&tv(&tv(c, hh, 1), hh, 2), g, 1),
        tv(b, c, 3),
        tv(e, f, 2),
        tv(&tv(&tv(e, g, 1), c, 1), k, 2),
        tv(&tv(&dd2, g, 1), g, 1),
        tv(&tv(d, f, 2), g, 1),
        tv(&dd2, hh, 2),
        tv(&cd2, f, 2),
        tv(&dd2, k, 2),
        tv(&g3(&cd1), g, 1),
        tv(&tv(f, hh, 1), k, 2),
        tv(&tv(&cd2, k, 1), hh, 2),
        tv(&dd2, e, 2),
        tv(b, d, 3),
    ];
    values.map(scalar)
}

/// `A₂₇ = (Ĉ, (D̂, Ê)⁽¹⁾)⁽³⁾`, the degree-seven invariant `C₂` needs beyond `A₁ … A₂₆`.
pub fn a27_from(h: &HatComitants) -> Rational {
    scalar(tv(&h.c, &tv(&h.d, &h.e, 1), 3))
}

/// `A₁ … A₂₆` of a system.
pub fn a_invariants(sys: &QuadSystem) -> [Rational; 26] {
    a_invariants_from(&hat_comitants(sys))
}

/// The fourteen polynomials in `A₁ … A₂₇`.
pub fn c_invariants(a: &[Rational; 26], a27: &Rational) -> CInvariants {
    let a = |n: usize| &a[n - 1];
    let k = |n: i64| int(n);
    let q = |n: i64, d: i64| rat(n, d);
    let c1 = k(3) * a(2) * a(2) - k(12) * a(17) - q(16, 3) * a(18) - k(4) * a(20) - k(24) * a(21);
    let c2 = k(4) * a(1) * a(2) + k(10) * a(14) + k(6) * a27;
    let c3 = a(2).clone();
    let c4 = a(7).clone();
    let c5 = -a(2) * a(3) + k(2) * a(22);
    let c6 = -k(4) * a(1) * (k(16) * a(6) + k(3) * a(7))
        - a(2) * (k(3) * a(3) + k(44) * a(4) + k(20) * a(5))
        + k(6) * a(22)
        + q(80, 3) * a(23)
        + k(48) * a(24);
    let c7 = -k(20) * a(1) * a(7) - a(2) * a(3) + k(2) * a(22);
    let c8 = k(2) * a(1) * a(1) + k(2) * a(10) + q(2, 3) * a(11) + k(2) * a(12);
    let c9 = a(4) - a(5);
    let c10 = k(3) * a(25) - a(26);
    let c11 =
        q(3, 4) * a(2) * a(2) - k(3) * a(17) - q(8, 9) * a(18) + k(2) * a(19) + q(1, 3) * a(20);
    let c12 = a(1) * a(1) * (k(4) * a(5) - k(2) * a(3))
        + k(12) * a(1) * a(16)
        + q(4, 3) * a(3) * a(12)
        + a(4) * (k(8) * a(8) + k(8) * a(10) + q(4, 3) * a(11) + k(4) * a(12))
        - k(12) * a(5) * a(10);
    CInvariants {
        c: [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12],
        e1: a(5).clone(),
        e2: a(25).clone(),
    }
}

/// Sums `term(idx)` over all assignments of `n` indices in {0, 1}; `term`
/// returns `None` for assignments killed by an ε factor.
fn sum_over<A: Arith>(ar: &A, n: usize, term: impl Fn(&[usize]) -> Option<A::Elem>) -> A::Elem {
    let mut idx = vec![0usize; n];
    let mut acc = ar.zero();
    for bits in 0..(1usize << n) {
        for (k, slot) in idx.iter_mut().enumerate() {
            *slot = (bits >> k) & 1;
        }
        if let Some(v) = term(&idx) {
            acc = ar.add(&acc, &v);
        }
    }
    acc
}

fn eps(p: usize, q: usize) -> i64 {
    EpsilonTensor::upper(p, q) as i64
}

/// Center-affine invariants of the coefficient tensors, in any ordered ring.
pub fn origin_invariants_in<A: Arith>(ar: &A, t: &Tensors<A::Elem>) -> OriginInvariants<A::Elem> {
    let a0 = &t.a0;
    let a1 = &t.a1;
    let a2 = &t.a2;
    let prod = |xs: &[&A::Elem]| -> A::Elem { xs.iter().fold(ar.one(), |acc, x| ar.mul(&acc, x)) };
    let with_eps = |e: i64, v: A::Elem| -> Option<A::Elem> { (e != 0).then(|| ar.scale(e, &v)) };

    let i1 = ar.add(&a1[0][0], &a1[1][1]);
    let i2 = sum_over(ar, 2, |i| Some(ar.mul(&a1[i[0]][i[1]], &a1[i[1]][i[0]])));
    // i = [α, β, γ, p, q]
    let i3 = sum_over(ar, 5, |i| {
        let (al, be, ga, p, q) = (i[0], i[1], i[2], i[3], i[4]);
        with_eps(
            eps(p, q),
            prod(&[&a1[al][p], &a2[be][al][q], &a2[ga][be][ga]]),
        )
    });
    let i4 = sum_over(ar, 5, |i| {
        let (al, be, ga, p, q) = (i[0], i[1], i[2], i[3], i[4]);
        with_eps(
            eps(p, q),
            prod(&[&a1[al][p], &a2[be][be][q], &a2[ga][al][ga]]),
        )
    });
    let i5 = sum_over(ar, 5, |i| {
        let (al, be, ga, p, q) = (i[0], i[1], i[2], i[3], i[4]);
        with_eps(
            eps(p, q),
            prod(&[&a1[al][p], &a2[be][ga][q], &a2[ga][al][be]]),
        )
    });
    // i = [α, β, γ, δ, p, q]
    let i6 = sum_over(ar, 6, |i| {
        let (al, be, ga, de, p, q) = (i[0], i[1], i[2], i[3], i[4], i[5]);
        with_eps(
            eps(p, q),
            prod(&[&a1[al][p], &a1[be][ga], &a2[ga][al][q], &a2[de][be][de]]),
        )
    });
    // i = [α, β, γ, δ, μ, p, q, r, s]
    let i13 = sum_over(ar, 9, |i| {
        let (al, be, ga, de, mu, p, q, r, s) =
            (i[0], i[1], i[2], i[3], i[4], i[5], i[6], i[7], i[8]);
        with_eps(
            eps(p, q) * eps(r, s),
            prod(&[
                &a1[al][p],
                &a2[be][q][r],
                &a2[ga][ga][s],
                &a2[de][al][be],
                &a2[mu][de][mu],
            ]),
        )
    });
    let i17 = sum_over(ar, 2, |i| Some(ar.mul(&a0[i[0]], &a2[i[1]][i[0]][i[1]])));
    // i = [α, β, γ, δ]
    let i20 = sum_over(ar, 4, |i| {
        let (al, be, ga, de) = (i[0], i[1], i[2], i[3]);
        with_eps(
            EpsilonTensor::lower(de, ga) as i64,
            prod(&[&a0[al], &a0[be], &a0[ga], &a2[de][al][be]]),
        )
    });
    let j1 = ar.sub(&ar.mul(&a1[0][0], &a1[1][1]), &ar.mul(&a1[0][1], &a1[1][0]));
    // J₂ = I₁(I₂ - I₁²) + 4 I₁ I₁₇ - 4 I₂₀
    let j2 = ar.sub(
        &ar.add(
            &ar.mul(&i1, &ar.sub(&i2, &ar.mul(&i1, &i1))),
            &ar.scale(4, &ar.mul(&i1, &i17)),
        ),
        &ar.scale(4, &i20),
    );
    OriginInvariants {
        i1,
        i2,
        i3,
        i4,
        i5,
        i6,
        i13,
        i17,
        i20,
        j1,
        j2,
    }
}

/// Center-affine invariants of a system's coefficients as given.
pub fn origin_invariants(sys: &QuadSystem) -> OriginInvariants<Rational> {
    origin_invariants_in(&Exact, &sys.tensors())
}

/// `K₁ = a^α_{αβ} x^β`.
pub fn k1(sys: &QuadSystem) -> BinaryForm {
    let t = sys.tensors();
    BinaryForm::from_coeffs(vec![
        &t.a2[0][0][0] + &t.a2[1][0][1],
        &t.a2[0][1][0] + &t.a2[1][1][1],
    ])
}

mod origin_serde {
    use super::*;
    use crate::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};
    use std::collections::BTreeMap;

    const KEYS: [&str; 11] = [
        "I1", "I2", "I3", "I4", "I5", "I6", "I13", "I17", "I20", "J1", "J2",
    ];

    pub fn serialize<S: Serializer>(
        o: &OriginInvariants<Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let vals = [
            &o.i1, &o.i2, &o.i3, &o.i4, &o.i5, &o.i6, &o.i13, &o.i17, &o.i20, &o.j1, &o.j2,
        ];
        let map: BTreeMap<&str, String> = KEYS
            .iter()
            .zip(vals)
            .map(|(k, v)| (*k, format_rational(v)))
            .collect();
        s.collect_map(map)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<OriginInvariants<Rational>, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(d)?;
        let get = |k: &str| -> Result<Rational, D::Error> {
            let text = map
                .get(k)
                .ok_or_else(|| serde::de::Error::missing_field("origin invariant"))?;
            parse_rational(text).map_err(serde::de::Error::custom)
        };
        Ok(OriginInvariants {
            i1: get("I1")?,
            i2: get("I2")?,
            i3: get("I3")?,
            i4: get("I4")?,
            i5: get("I5")?,
            i6: get("I6")?,
            i13: get("I13")?,
            i17: get("I17")?,
            i20: get("I20")?,
            j1: get("J1")?,
            j2: get("J2")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{contract, ContractionExpr};
    use num_traits::Zero;

    #[test]
    fn linear_systems_have_vanishing_a_invariants() {
        let a = a_invariants(&QuadSystem::from_ints([
            1, 2, 3, 0, 0, 0, -4, 5, 6, 0, 0, 0,
        ]));
        assert!(a.iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_a_vector_gives_zero_c() {
        let c = c_invariants(
            &std::array::from_fn(|_| Rational::zero()),
            &Rational::zero(),
        );
        assert!(c.c.iter().all(Zero::is_zero));
        assert!(c.e1.is_zero() && c.e2.is_zero());
    }

    #[test]
    fn rotation_origin_invariants() {
        let o = origin_invariants(&QuadSystem::from_ints([
            0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0,
        ]));
        assert_eq!(o.i1, int(0));
        assert_eq!(o.i2, int(-2));
        for v in [&o.i3, &o.i4, &o.i5, &o.i6, &o.i13] {
            assert!(v.is_zero());
        }
    }

    #[test]
    fn reversible_example_origin_invariants() {
        // x' = y + x^2, y' = -x
        let s = QuadSystem::from_ints([0, 0, 1, 1, 0, 0, 0, -1, 0, 0, 0, 0]);
        let o = origin_invariants(&s);
        assert_eq!(o.j1, int(1));
        assert_eq!(o.j2, int(0));
        assert_eq!(o.i1, int(0));
        assert_eq!(o.i2, int(-2));
        assert_eq!(k1(&s), BinaryForm::x1());
    }

    #[test]
    fn linear_systems_have_vanishing_higher_origin_invariants() {
        let o = origin_invariants(&QuadSystem::from_ints([
            3, 2, -1, 0, 0, 0, 1, 5, 7, 0, 0, 0,
        ]));
        for v in [&o.i3, &o.i4, &o.i5, &o.i6, &o.i13, &o.i17, &o.i20] {
            assert!(v.is_zero());
        }
    }

    #[test]
    fn origin_invariants_agree_with_the_contraction_evaluator() {
        let s = QuadSystem::from_ints([2, -1, 3, 1, 4, -2, 1, 2, -1, 3, -1, 1]);
        let o = origin_invariants(&s);
        let ev =
            |text: &str| contract(&ContractionExpr::parse(text).unwrap(), &s).coeffs()[0].clone();
        assert_eq!(o.i1, ev("a^a_a"));
        assert_eq!(o.i2, ev("a^a_b a^b_a"));
        assert_eq!(o.i3, ev("a^a_p a^b_aq a^g_bg e^pq"));
        assert_eq!(o.i4, ev("a^a_p a^b_bq a^g_ag e^pq"));
        assert_eq!(o.i5, ev("a^a_p a^b_gq a^g_ab e^pq"));
        assert_eq!(o.i6, ev("a^a_p a^b_g a^g_aq a^d_bd e^pq"));
        assert_eq!(o.i13, ev("a^a_p a^b_qr a^g_gs a^d_ab a^m_dm e^pq e^rs"));
        assert_eq!(o.i17, ev("a^a a^b_ab"));
        assert_eq!(o.i20, ev("a^a a^b a^g a^d_ab e_dg"));
        // the tensor expression for J₁ is twice the determinant
        assert_eq!(o.j1 * int(2), ev("a^a_p a^b_q e_ab e^pq"));
    }

    #[test]
    fn trace_square_identity() {
        let s = QuadSystem::from_ints([1, 3, -2, 1, 0, 2, -1, 5, 4, 2, 1, -1]);
        let o = origin_invariants(&s);
        let t = s.tensors();
        let expect = &t.a1[0][0] * &t.a1[0][0]
            + int(2) * &t.a1[0][1] * &t.a1[1][0]
            + &t.a1[1][1] * &t.a1[1][1];
        assert_eq!(o.i2, expect);
        assert_eq!(o.i1, &t.a1[0][0] + &t.a1[1][1]);
    }

    #[test]
    fn e_invariants_alias_a_invariants() {
        let t = InvariantTable::compute(&QuadSystem::from_ints([
            2, -1, 3, 1, 4, -2, 1, 2, -1, 3, -1, 1,
        ]));
        assert_eq!(&t.cs.e1, t.a(5));
        assert_eq!(&t.cs.e2, t.a(25));
        assert_eq!(t.c(3), t.a(2));
        assert_eq!(
            t.k1,
            k1(&QuadSystem::from_ints([
                2, -1, 3, 1, 4, -2, 1, 2, -1, 3, -1, 1
            ]))
        );
    }
}
