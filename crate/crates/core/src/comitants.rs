//! Named comitants of a quadratic system: the nine contraction comitants
//! `Â … K̂`, the determinant comitants `J₁, B₁ … B₅`, and everything derived
//! from them by transvection (`μ, D, H, G, F, V, P, R, S, T, U`).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::forms::{contract_tensors as contract_t, tv, BinaryForm, ContractionExpr};
use crate::rational::{int, rat, Rational};
use crate::system::{QuadSystem, Tensors};

/// The nine contraction comitants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HatComitants {
    pub a: BinaryForm,
    pub b: BinaryForm,
    pub c: BinaryForm,
    pub d: BinaryForm,
    pub e: BinaryForm,
    pub f: BinaryForm,
    pub g: BinaryForm,
    pub h: BinaryForm,
    pub k: BinaryForm,
}

/// `J₁` and the determinant comitants `B₁ … B₅`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminantComitants {
    #[serde(with = "crate::rational::serde_rational")]
    pub j1: Rational,
    pub b1: BinaryForm,
    pub b2: BinaryForm,
    pub b3: BinaryForm,
    pub b4: BinaryForm,
    pub b5: BinaryForm,
}

/// Every comitant used downstream, for one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComitantSet {
    pub hats: HatComitants,
    pub det: DeterminantComitants,
    /// `(B₃, B₃)⁽²⁾`, degree 0.
    pub mu1: BinaryForm,
    /// `(B₃, B₁)⁽¹⁾`
    pub h1: BinaryForm,
    /// `(B₁, B₅)⁽¹⁾`
    pub g1: BinaryForm,
    /// `(B₅, B₅)⁽²⁾`
    pub g2: BinaryForm,
    /// `(B₃, B₄)⁽¹⁾`
    pub g3: BinaryForm,
    /// `(((D̂, D̂)⁽²⁾, D̂)⁽¹⁾, D̂)⁽³⁾`, degree 0.
    pub d1: BinaryForm,
    #[serde(with = "crate::rational::serde_rational")]
    pub mu: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub d: Rational,
    pub h: BinaryForm,
    pub g: BinaryForm,
    pub f: BinaryForm,
    pub v: BinaryForm,
    pub s_tilde: BinaryForm,
    pub n_tilde: BinaryForm,
    pub p: BinaryForm,
    pub r: BinaryForm,
    pub s: BinaryForm,
    pub t: BinaryForm,
    pub u: BinaryForm,
}

pub(crate) struct HatExprs {
    pub a: ContractionExpr,
    pub b: ContractionExpr,
    pub c: ContractionExpr,
    pub d: ContractionExpr,
    pub e: ContractionExpr,
    pub f: ContractionExpr,
    pub g: ContractionExpr,
    pub h: ContractionExpr,
    pub k: ContractionExpr,
    pub b1: ContractionExpr,
}

// Index letters: a = α, b = β, g/w = γ, c = κ.
pub(crate) fn hat_exprs() -> &'static HatExprs {
    static EXPRS: OnceLock<HatExprs> = OnceLock::new();
    EXPRS.get_or_init(|| {
        let p = |s: &str| ContractionExpr::parse(s).expect("built-in expression");
        let sum = |terms: &[(i64, &str)]| {
            ContractionExpr::sum(terms.iter().map(|&(c, s)| (int(c), s)))
                .expect("built-in expression")
        };
        const B_TAIL: &str = "a^l_r a^k_pb a^m_qs a^g_vw x^a x^b x^w e_kl e_mn e_gh e^pq e^rs e^uv";
        const D_TAIL: &str = "a^u_bc x^q x^s x^v e_pq e_rs e_uv e^ab e^gc";
        const F_TAIL: &str = "a^l_qa x^a x^b e_kl e_mn e^pq e^rs";
        let b1 = format!("a^n a^h_ua {B_TAIL}");
        let b2 = format!("a^n_u a^h_a {B_TAIL}");
        let d1 = format!("a^p a^r_ag {D_TAIL}");
        let d2 = format!("a^p_a a^r_g {D_TAIL}");
        let f1 = format!("a^m_s a^n_b a^k_pr {F_TAIL}");
        let f2 = format!("a^k_r a^n_b a^m_ps {F_TAIL}");
        let f3 = format!("a^k_p a^m_r a^n_sb {F_TAIL}");
        let f4 = format!("a^m a^k_pr a^n_sb {F_TAIL}");
        HatExprs {
            a: p("a^p_k a^q_am a^a_ln e_pq e^kl e^mn"),
            b: sum(&[(2, &b1), (-1, &b2)]),
            c: p("a^p_ab x^q x^a x^b e_pq"),
            d: sum(&[(2, &d1), (-1, &d2)]),
            e: p("a^p_k a^q_am a^r_ln x^s x^a e_pq e_rs e^kl e^mn"),
            f: sum(&[(1, &f1), (-2, &f2), (1, &f3), (-4, &f4)]),
            g: p("a^a_ab x^b"),
            h: p("a^p_ra a^q_sb x^a x^b e_pq e^rs").scaled(&rat(1, 2)),
            k: p("a^p_mu a^r_nv x^q x^s e_pq e_rs e^mn e^uv").scaled(&rat(1, 2)),
            b1: p("x^a a^b_q a^g_pa e_bg e^pq"),
        }
    })
}

pub(crate) fn hat_comitants_of(t: &Tensors<Rational>) -> HatComitants {
    let ex = hat_exprs();
    HatComitants {
        a: contract_t(&ex.a, t),
        b: contract_t(&ex.b, t),
        c: contract_t(&ex.c, t),
        d: contract_t(&ex.d, t),
        e: contract_t(&ex.e, t),
        f: contract_t(&ex.f, t),
        g: contract_t(&ex.g, t),
        h: contract_t(&ex.h, t),
        k: contract_t(&ex.k, t),
    }
}

/// The nine contraction comitants `Â, B̂, Ĉ, D̂, Ê, F̂, Ĝ, Ĥ, K̂`.
pub fn hat_comitants(sys: &QuadSystem) -> HatComitants {
    hat_comitants_of(&sys.tensors())
}

/// `J₁` and `B₁ … B₅` from the homogeneous parts of `P` and `Q`.
///
/// `B₁` is taken in its tensor form `x^α a^β_q a^γ_{pα} ε_{βγ} ε^{pq}`, which is
/// `-1/2` times the printed difference of Jacobian minors.
pub fn cls_comitants(sys: &QuadSystem) -> DeterminantComitants {
    let (p0, p1, p2) = (sys.part(0, 0), sys.part(0, 1), sys.part(0, 2));
    let (q0, q1, q2) = (sys.part(1, 0), sys.part(1, 1), sys.part(1, 2));
    let det2 = |a: &BinaryForm, b: &BinaryForm, c: &BinaryForm, d: &BinaryForm| &(a * d) - &(b * c);
    let j1 = det2(&p1.d1(), &p1.d2(), &q1.d1(), &q1.d2());
    let b3 = det2(&p2.d1(), &p2.d2(), &q2.d1(), &q2.d2()).scale(&rat(1, 4));
    DeterminantComitants {
        j1: j1.as_scalar().expect("degree 0").clone(),
        b1: contract_t(&hat_exprs().b1, &sys.tensors()),
        b2: det2(&p0, &p1, &q0, &q1),
        b3,
        b4: det2(&p0, &p2, &q0, &q2),
        b5: det2(&p1, &p2, &q1, &q2),
    }
}

/// Builds the full comitant set.
pub fn derived_comitants(sys: &QuadSystem) -> ComitantSet {
    let hats = hat_comitants(sys);
    let det = cls_comitants(sys);
    assemble(hats, det)
}

pub(crate) fn assemble(hats: HatComitants, det: DeterminantComitants) -> ComitantSet {
    let DeterminantComitants {
        j1,
        b1,
        b2,
        b3,
        b4,
        b5,
    } = &det;
    let mu1 = tv(b3, b3, 2);
    let h1 = tv(b3, b1, 1);
    let g1 = tv(b1, b5, 1);
    let g2 = tv(b5, b5, 2);
    let g3 = tv(b3, b4, 1);
    let dd = &hats.d;
    let d1 = tv(&tv(&tv(dd, dd, 2), dd, 1), dd, 3);

    let mu = -int(2) * mu1.as_scalar().expect("degree 0");
    let d = -d1.as_scalar().expect("degree 0").clone();
    let h = h1.scale_int(2);
    // the stored G is half of 4G₁ - 3G₂ + 8G₃
    let g = (&(&g1.scale_int(4) - &g2.scale_int(3)) + &g3.scale_int(8)).scale(&rat(1, 2));
    let f = &(&b5.scale(j1) + &(b1 * b4).scale_int(2)) + &(b2 * b3).scale_int(4);
    let v = &(b4 * b4) - &(b2 * b5);

    let p = &(&(&g * &g) - &(&f * &h).scale_int(6)) + &v.scale(&(int(12) * &mu));
    let r = (&(&h * &h).scale_int(3) - &g.scale(&(int(2) * &mu))).scale_int(4);
    let s = &(&r * &r) - &p.scale(&(int(16) * &mu * &mu));
    let g_cubed = &(&g * &g) * &g;
    let bracket = &(&(&g_cubed.scale_int(2)
        + &(&(&f * &f).scale_int(3) - &(&g * &v).scale_int(8)).scale(&(int(9) * &mu)))
        - &(&(&f * &g) * &h).scale_int(18))
        + &(&(&h * &h) * &v).scale_int(108);
    let t = &bracket.scale(&(int(2) * &mu)) - &(&p * &r);
    let u = &(&f * &f) - &(&g * &v).scale_int(4);

    ComitantSet {
        s_tilde: det.b3.clone(),
        n_tilde: hats.k.clone(),
        hats,
        mu1,
        h1,
        g1,
        g2,
        g3,
        d1,
        mu,
        d,
        h,
        g,
        f,
        v,
        p,
        r,
        s,
        t,
        u,
        det,
    }
}

impl ComitantSet {
    /// Forms whose identical vanishing drives the partition into `M₁ … M₁₉`.
    pub fn table_forms(&self) -> [(&'static str, &BinaryForm); 5] {
        [
            ("R", &self.r),
            ("S", &self.s),
            ("T", &self.t),
            ("P", &self.p),
            ("U", &self.u),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn sys(c: [i64; 12]) -> QuadSystem {
        QuadSystem::from_ints(c)
    }

    // x' = x - x^2, y' = y - y^2
    fn four_nodes() -> QuadSystem {
        sys([0, 1, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1])
    }

    #[test]
    fn hat_degrees() {
        let h = hat_comitants(&sys([1, 2, -1, 3, 1, -2, -1, 1, 2, 1, -3, 2]));
        let degs = [
            h.a.degree(),
            h.b.degree(),
            h.c.degree(),
            h.d.degree(),
            h.e.degree(),
            h.f.degree(),
            h.g.degree(),
            h.h.degree(),
            h.k.degree(),
        ];
        assert_eq!(degs, [0, 3, 3, 3, 2, 2, 1, 2, 2]);
    }

    #[test]
    fn trace_and_hessian_like_forms_of_four_node_system() {
        let h = hat_comitants(&four_nodes());
        assert_eq!(h.g, BinaryForm::from_ints(&[-1, -1]));
        assert_eq!(h.h, BinaryForm::from_ints(&[0, 1, 0]));
    }

    #[test]
    fn hat_comitants_vanish_without_quadratic_part() {
        let h = hat_comitants(&sys([1, 2, 3, 0, 0, 0, -4, 5, 6, 0, 0, 0]));
        for f in [&h.a, &h.c, &h.g, &h.h, &h.k] {
            assert!(f.is_zero());
        }
    }

    #[test]
    fn rotation_has_unit_jacobian() {
        let det = cls_comitants(&sys([0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0]));
        assert_eq!(det.j1, int(1));
    }

    #[test]
    fn constant_plus_square() {
        // x' = 1, y' = x^2
        let c = derived_comitants(&sys([1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0]));
        assert_eq!(c.det.b4, BinaryForm::from_ints(&[1, 0, 0]));
        assert!(c.det.b2.is_zero() && c.det.b5.is_zero());
        assert!(c.mu.is_zero());
        for f in [&c.h, &c.g, &c.f, &c.p, &c.r, &c.u] {
            assert!(f.is_zero(), "{f}");
        }
        assert_eq!(c.v, BinaryForm::from_ints(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn mu_of_four_node_system() {
        let c = derived_comitants(&four_nodes());
        assert_eq!(c.mu, int(1));
        assert_eq!(c.mu1.degree(), 0);
        assert_eq!(c.d1.degree(), 0);
    }

    #[test]
    fn comitant_degrees() {
        let c = derived_comitants(&sys([2, -1, 3, 1, 4, -2, 1, 2, -1, 3, -1, 1]));
        let d = &c.det;
        assert_eq!(
            [
                d.b1.degree(),
                d.b2.degree(),
                d.b3.degree(),
                d.b4.degree(),
                d.b5.degree()
            ],
            [1, 1, 2, 2, 3]
        );
        assert_eq!(
            [c.h.degree(), c.g.degree(), c.f.degree(), c.v.degree()],
            [1, 2, 3, 4]
        );
        assert_eq!(
            [
                c.p.degree(),
                c.r.degree(),
                c.s.degree(),
                c.t.degree(),
                c.u.degree()
            ],
            [4, 2, 4, 6, 6]
        );
        assert_eq!([c.s_tilde.degree(), c.n_tilde.degree()], [2, 2]);
    }

    #[test]
    fn b3_is_h_hat() {
        let c = derived_comitants(&sys([2, -1, 3, 1, 4, -2, 1, 2, -1, 3, -1, 1]));
        assert_eq!(c.det.b3, c.hats.h);
    }

    #[test]
    fn mu_zero_gives_r_twelve_h_squared() {
        // x' = y + x^2, y' = -x: quadratic parts proportional, so μ = 0
        let c = derived_comitants(&sys([0, 0, 1, 1, 0, 0, 0, -1, 0, 0, 0, 0]));
        assert!(c.mu.is_zero());
        assert_eq!(c.r, (&c.h * &c.h).scale_int(12));
        assert!(c.g.is_zero() && c.h.is_zero());
        assert_eq!(c.f, BinaryForm::from_ints(&[1, 0, 0, 0]));
        assert_eq!(c.u, BinaryForm::from_ints(&[1, 0, 0, 0, 0, 0, 0]));
        assert!(c.p.is_zero() && c.r.is_zero());
    }

    #[test]
    fn b1_matches_printed_minors_up_to_factor() {
        // printed: |P1_x P2_y; Q1_x Q2_y| - |P1_y P2_x; Q1_y Q2_x|
        let s = sys([1, 2, -3, 1, 4, -2, 5, -1, 2, 3, -1, 2]);
        let (p1, p2, q1, q2) = (s.part(0, 1), s.part(0, 2), s.part(1, 1), s.part(1, 2));
        let minors = &(&(&p1.d1() * &q2.d2()) - &(&p2.d2() * &q1.d1()))
            - &(&(&p1.d2() * &q2.d1()) - &(&p2.d1() * &q1.d2()));
        let b1 = cls_comitants(&s).b1;
        assert_eq!(minors, b1.scale_int(-2));
        assert!(!b1.is_zero() && !Rational::is_zero(&b1.coeffs()[0]));
    }
}
