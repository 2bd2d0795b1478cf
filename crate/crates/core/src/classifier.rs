//! Partition of quadratic systems into the sets `M₁ … M₁₉` by the number and
//! multiplicity of finite singular points, the origin-center test, and the
//! center count decided from the C-invariants.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comitants::ComitantSet;
use crate::forms::BinaryForm;
use crate::invariants::{origin_invariants, InvariantTable, OriginInvariants};
use crate::poly::{resultant, UPoly};
use crate::rational::{int, sign, Rational};
use crate::scalar::{Arith, Exact};
use crate::system::{sheared, total_degree, QuadSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no row of the partition table matches (mu={mu}, D={d})")]
    NoRow { mu: String, d: String },
    #[error("several rows of the partition table match: {0:?}")]
    ManyRows(Vec<SetIndex>),
    #[error("origin is not a singular point (p00={p00}, q00={q00})")]
    NotSingularAtOrigin { p00: String, q00: String },
}

/// Signs of a list of forms at one common point where none of them vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignTranscript {
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub point: [Rational; 2],
    pub signs: Vec<(String, i8)>,
    #[serde(with = "samples_serde")]
    pub samples: Vec<[Rational; 2]>,
    pub consistent: bool,
}

impl SignTranscript {
    /// Sign recorded for `name`; `0` when the form was not evaluated.
    pub fn sign_of(&self, name: &str) -> i8 {
        self.signs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
            .unwrap_or(0)
    }
}

mod samples_serde {
    use super::*;
    use crate::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[[Rational; 2]], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|p| [format_rational(&p[0]), format_rational(&p[1])]),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[Rational; 2]>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| Ok([parse_rational(a)?, parse_rational(b)?]))
            .collect::<Result<_, _>>()
            .map_err(|e: crate::rational::ParseRationalError| serde::de::Error::custom(e))
    }
}

/// The rows of the partition table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetIndex {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    M9,
    M10,
    M11,
    M12,
    M13,
    M14,
    M15,
    M16,
    M17,
    M18,
    M19,
}

impl SetIndex {
    pub const ALL: [SetIndex; 19] = [
        SetIndex::M1,
        SetIndex::M2,
        SetIndex::M3,
        SetIndex::M4,
        SetIndex::M5,
        SetIndex::M6,
        SetIndex::M7,
        SetIndex::M8,
        SetIndex::M9,
        SetIndex::M10,
        SetIndex::M11,
        SetIndex::M12,
        SetIndex::M13,
        SetIndex::M14,
        SetIndex::M15,
        SetIndex::M16,
        SetIndex::M17,
        SetIndex::M18,
        SetIndex::M19,
    ];

    /// 1-based row number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    /// Total multiplicity of finite singular points.
    pub fn m_f(self) -> Mf {
        match self.number() {
            1..=9 => Mf::Finite(4),
            10..=13 => Mf::Finite(3),
            14..=16 => Mf::Finite(2),
            17 => Mf::Finite(1),
            18 => Mf::Finite(0),
            _ => Mf::Infinite,
        }
    }

    /// Real (`r`) and complex (`c`) points with their multiplicities.
    pub fn pattern(self) -> &'static str {
        use SetIndex::*;
        match self {
            M1 => "r1 r1 r1 r1",
            M2 => "r1 r1 c1 c1",
            M3 => "c1 c1 c1 c1",
            M4 => "r2 r1 r1",
            M5 => "r2 c1 c1",
            M6 => "r2 r2",
            M7 => "c2 c2",
            M8 => "r3 r1",
            M9 => "r4",
            M10 => "r1 r1 r1",
            M11 => "r1 c1 c1",
            M12 => "r2 r1",
            M13 => "r3",
            M14 => "r1 r1",
            M15 => "c1 c1",
            M16 => "r2",
            M17 => "r1",
            M18 | M19 => "",
        }
    }
}

impl fmt::Display for SetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.number())
    }
}

impl FromStr for SetIndex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.strip_prefix('M')
            .and_then(|n| n.parse().ok())
            .and_then(SetIndex::from_number)
            .ok_or_else(|| format!("unknown set index {s:?}"))
    }
}

impl Serialize for SetIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SetIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Total multiplicity of the finite singular points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mf {
    Finite(u8),
    Infinite,
}

impl fmt::Display for Mf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mf::Finite(n) => write!(f, "{n}"),
            Mf::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Mf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Mf::Finite(n) => s.serialize_u8(*n),
            Mf::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Mf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u8),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) if n <= 4 => Ok(Mf::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(Mf::Infinite),
            _ => Err(serde::de::Error::custom(
                "m_f must be 0..=4 or \"infinite\"",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfClassification {
    pub m_f: Mf,
    pub pattern: String,
    pub set_index: SetIndex,
    pub transcript: SignTranscript,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub m_f: Mf,
    pub pattern: String,
    pub set_index: SetIndex,
    /// `None` means not applicable.
    pub center_count: Option<u8>,
    pub fired_rule: String,
    pub transcript: SignTranscript,
    pub diagnostics: Vec<String>,
}

/// Points `(1,0), (0,1)`, then for `s = 2, 3, …` the coprime pairs
/// `(s-b, b)` for `b = 1..s` followed by the same pairs with `-b`.
pub fn point_sequence() -> impl Iterator<Item = (i64, i64)> {
    let head = [(1, 0), (0, 1)].into_iter();
    let tail = (2i64..).flat_map(|s| {
        let pos: Vec<(i64, i64)> = (1..s)
            .filter(|b| (s - b).gcd(b) == 1)
            .map(|b| (s - b, b))
            .collect();
        let neg: Vec<(i64, i64)> = pos.iter().map(|&(a, b)| (a, -b)).collect();
        pos.into_iter().chain(neg)
    });
    head.chain(tail)
}

fn rational_point((a, b): (i64, i64)) -> [Rational; 2] {
    [int(a), int(b)]
}

/// Signs of nonzero forms at the first enumerated point where none vanish,
/// cross-checked at the next three such points. Zero forms are skipped and
/// recorded with sign `0`.
pub fn sign_at_common_point(forms: &[(&str, &BinaryForm)]) -> SignTranscript {
    let live: Vec<&(&str, &BinaryForm)> = forms.iter().filter(|(_, f)| !f.is_zero()).collect();
    let mut valid = point_sequence()
        .map(rational_point)
        .filter(|p| live.iter().all(|(_, f)| !f.eval(&p[0], &p[1]).is_zero()));
    let point = valid.next().expect("point sequence is infinite");
    let signs_at = |p: &[Rational; 2]| -> Vec<(String, i8)> {
        forms
            .iter()
            .map(|(n, f)| {
                (
                    n.to_string(),
                    if f.is_zero() {
                        0
                    } else {
                        sign(&f.eval(&p[0], &p[1]))
                    },
                )
            })
            .collect()
    };
    let signs = signs_at(&point);
    let samples: Vec<[Rational; 2]> = valid.take(3).collect();
    let consistent = samples.iter().all(|p| signs_at(p) == signs);
    SignTranscript {
        point,
        signs,
        samples,
        consistent,
    }
}

struct RowInputs {
    mu: i8,
    d: i8,
    r: i8,
    s: i8,
    t: i8,
    p: i8,
    u: i8,
    v_zero: bool,
}

fn row_matches(row: SetIndex, x: &RowInputs) -> bool {
    use SetIndex::*;
    let mu0 = x.mu == 0;
    let (r0, p0, u0) = (x.r == 0, x.p == 0, x.u == 0);
    match row {
        M1 => !mu0 && x.d < 0 && x.r > 0 && x.s > 0,
        M2 => !mu0 && x.d > 0,
        M3 => !mu0 && x.d < 0 && (x.r <= 0 || x.s <= 0),
        M4 => !mu0 && x.d == 0 && x.t < 0,
        M5 => !mu0 && x.d == 0 && x.t > 0,
        M6 => !mu0 && x.d == 0 && x.t == 0 && x.p * x.r > 0,
        M7 => !mu0 && x.d == 0 && x.t == 0 && x.p * x.r < 0,
        M8 => !mu0 && x.d == 0 && x.t == 0 && p0 && !r0,
        M9 => !mu0 && x.d == 0 && x.t == 0 && p0 && r0,
        M10 => mu0 && x.d < 0 && !r0,
        M11 => mu0 && x.d > 0 && !r0,
        M12 => mu0 && x.d == 0 && !r0 && !p0,
        M13 => mu0 && x.d == 0 && !r0 && p0,
        M14 => mu0 && r0 && !p0 && x.u > 0,
        M15 => mu0 && r0 && !p0 && x.u < 0,
        M16 => mu0 && r0 && !p0 && u0,
        M17 => mu0 && r0 && p0 && !u0,
        M18 => mu0 && r0 && p0 && u0 && !x.v_zero,
        M19 => mu0 && r0 && p0 && u0 && x.v_zero,
    }
}

/// Partition row from precomputed comitants.
pub fn classify_comitants(c: &ComitantSet) -> Result<MfClassification, ClassifyError> {
    let transcript = sign_at_common_point(&c.table_forms());
    let inputs = RowInputs {
        mu: sign(&c.mu),
        d: sign(&c.d),
        r: transcript.sign_of("R"),
        s: transcript.sign_of("S"),
        t: transcript.sign_of("T"),
        p: transcript.sign_of("P"),
        u: transcript.sign_of("U"),
        v_zero: c.v.is_zero(),
    };
    let hits: Vec<SetIndex> = SetIndex::ALL
        .into_iter()
        .filter(|&row| row_matches(row, &inputs))
        .collect();
    match hits.as_slice() {
        [row] => Ok(MfClassification {
            m_f: row.m_f(),
            pattern: row.pattern().to_string(),
            set_index: *row,
            transcript,
        }),
        [] => Err(ClassifyError::NoRow {
            mu: c.mu.to_string(),
            d: c.d.to_string(),
        }),
        _ => Err(ClassifyError::ManyRows(hits)),
    }
}

pub fn classify_mf(sys: &QuadSystem) -> Result<MfClassification, ClassifyError> {
    classify_comitants(&crate::comitants::derived_comitants(sys))
}

/// Whether the origin, a singular point, is a center.
pub fn center_at_origin(sys: &QuadSystem) -> Result<bool, ClassifyError> {
    if !sys.p[0].is_zero() || !sys.q[0].is_zero() {
        return Err(ClassifyError::NotSingularAtOrigin {
            p00: sys.p[0].to_string(),
            q00: sys.q[0].to_string(),
        });
    }
    Ok(center_conditions(&Exact, &origin_invariants(sys)))
}

/// The center test on origin invariants computed in any ordered ring.
pub fn center_conditions<A: Arith>(ar: &A, o: &OriginInvariants<A::Elem>) -> bool {
    let zero = |v: &A::Elem| ar.is_zero(v);
    let linear = zero(&o.i1) && zero(&o.i6) && ar.sign(&o.i2) < 0;
    let third = zero(&ar.sub(&ar.scale(5, &o.i3), &ar.scale(2, &o.i4)))
        && zero(&ar.sub(&ar.scale(13, &o.i3), &ar.scale(10, &o.i5)));
    linear && (zero(&o.i3) || zero(&o.i13) || third)
}

pub fn count_centers(sys: &QuadSystem) -> Result<ClassificationReport, ClassifyError> {
    count_centers_with(sys, &InvariantTable::compute(sys))
}

/// The only finite singular point of a system with exactly one, which is
/// then rational.
pub fn sole_point(sys: &QuadSystem) -> Option<(Rational, Rational)> {
    let dp = total_degree(&sys.p)?;
    let dq = total_degree(&sys.q)?;
    if dp + dq < 2 {
        return None;
    }
    for step in 0..16i64 {
        let t = int(if step % 2 == 1 {
            (step + 1) / 2
        } else {
            -step / 2
        });
        let a = sheared(&sys.p, &t, dp);
        let b = sheared(&sys.q, &t, dq);
        if a[dp].is_zero() || b[dq].is_zero() {
            continue;
        }
        let r = resultant(&a, &b);
        if r.degree() != Some(1) {
            continue;
        }
        let x = -r.coeff(0) / r.coeff(1);
        let at = |c: &[UPoly]| UPoly::new(c.iter().map(|p| p.eval(&x)).collect());
        let g = UPoly::gcd(&at(&a), &at(&b));
        if g.degree() != Some(1) {
            continue;
        }
        let y = -g.coeff(0) / g.coeff(1);
        return Some((x + &t * &y, y));
    }
    None
}

/// Center count from an already computed invariant table of `sys`.
pub fn count_centers_with(
    sys: &QuadSystem,
    table: &InvariantTable,
) -> Result<ClassificationReport, ClassifyError> {
    let mf = classify_comitants(&table.comitants)?;
    let mut diagnostics = Vec::new();
    if !mf.transcript.consistent {
        diagnostics.push(format!(
            "sign pattern differs between {:?} and later sample points",
            mf.transcript.point
        ));
    }
    let located;
    let table = if mf.set_index == SetIndex::M17 {
        match sole_point(sys) {
            Some((h, k)) => {
                let mut moved = table.clone();
                moved.origin = origin_invariants(&sys.translate(&h, &k));
                located = moved;
                &located
            }
            None => {
                diagnostics.push("singular point not located; origin invariants used".to_string());
                table
            }
        }
    } else {
        table
    };
    let (count, rule) = decide(mf.set_index, table);
    if mf.set_index == SetIndex::M19 {
        diagnostics.push(if sys.is_zero() {
            "degenerate system: zero vector field".to_string()
        } else if sys.has_zero_quadratic_part() {
            "linear system: quadratic part vanishes".to_string()
        } else {
            "degenerate system".to_string()
        });
    }
    if matches!(count, Some(n) if n > 0) && !(table.c(1).is_zero() && table.c(3).is_zero()) {
        diagnostics.push("center reported although C1 or C3 is nonzero".to_string());
    }
    Ok(ClassificationReport {
        m_f: mf.m_f,
        pattern: mf.pattern,
        set_index: mf.set_index,
        center_count: count,
        fired_rule: rule,
        transcript: mf.transcript,
        diagnostics,
    })
}

fn decide(set: SetIndex, t: &InvariantTable) -> (Option<u8>, String) {
    use SetIndex::*;
    let c = |n: usize| sign(t.c(n));
    let z = |n: usize| t.c(n).is_zero();
    let mu = sign(t.mu());
    // shared first alternative of Theorems 1, 3, 5, 8
    let first = c(2) * c(4) < 0 && z(1) && z(3) && z(5);
    let lemma_ok = z(1) && z(3);

    let fired = |thm: &str, branch: &str| format!("{thm}({branch})");
    let none = |thm: &str| {
        if lemma_ok {
            (Some(0), format!("{thm}-none"))
        } else {
            (Some(0), "Lemma1-veto".to_string())
        }
    };

    match set {
        M1 => {
            if first {
                (Some(1), fired("Thm1", "i"))
            } else if z(4) && lemma_ok && mu < 0 {
                (Some(1), fired("Thm1", "ii"))
            } else if z(4) && lemma_ok && c(9) >= 0 && mu > 0 {
                (Some(2), fired("Thm1", "iii"))
            } else {
                none("Thm1")
            }
        }
        M2 => {
            let c67 = t.c(6) * t.c(6) + t.c(7) * t.c(7);
            if c(2) * c(4) < 0 && lemma_ok && (t.c(5) * c67).is_zero() {
                (Some(1), fired("Thm2", "i"))
            } else if z(4) && c(12) <= 0 && lemma_ok && mu > 0 {
                (Some(1), fired("Thm2", "ii"))
            } else if z(4) && c(12) < 0 && lemma_ok && mu < 0 && c(9) > 0 {
                (Some(2), fired("Thm2", "iii"))
            } else {
                none("Thm2")
            }
        }
        M4 => {
            if first {
                (Some(1), fired("Thm3", "i"))
            } else if z(4) && mu > 0 && lemma_ok && z(8) {
                (Some(1), fired("Thm3", "ii"))
            } else {
                none("Thm3")
            }
        }
        M8 => {
            if z(3) && z(4) && (c(9) > 0 || (c(9) == 0 && mu > 0)) {
                (Some(1), "Thm4".to_string())
            } else {
                none("Thm4")
            }
        }
        M10 => {
            if first {
                (Some(1), fired("Thm5", "i"))
            } else if z(4) && lemma_ok && z(10) && c(11) <= 0 {
                (Some(1), fired("Thm5", "ii"))
            } else {
                none("Thm5")
            }
        }
        M11 => {
            if z(3) && z(9) && z(10) && c(11) < 0 {
                (Some(1), "Thm6".to_string())
            } else {
                none("Thm6")
            }
        }
        M12 => (Some(0), "Thm7".to_string()),
        M14 => {
            let o = &t.origin;
            let s_tilde = &t.comitants.s_tilde;
            if first {
                (Some(1), fired("Thm8", "i"))
            } else if lemma_ok && z(4) && c(8) > 0 {
                (Some(1), fired("Thm8", "ii"))
            } else if s_tilde.is_zero() && t.k1.is_zero() && o.i1.is_zero() {
                (Some(1), fired("Thm8", "iii"))
            } else if lemma_ok && z(4) && c(8) < 0 && c(9) > 0 {
                (Some(2), fired("Thm8", "iv"))
            } else {
                none("Thm8")
            }
        }
        M17 => {
            let o = &t.origin;
            let n_tilde = &t.comitants.n_tilde;
            if !n_tilde.is_zero() && z(3) && z(10) && c(11) < 0 {
                (Some(1), fired("Thm9", "i"))
            } else if n_tilde.is_zero() && o.j2.is_zero() && sign(&o.j1) > 0 {
                (Some(1), fired("Thm9", "ii"))
            } else {
                none("Thm9")
            }
        }
        M3 | M15 => (Some(0), format!("{set}-no-real-points")),
        M5 | M6 | M7 | M9 | M13 | M16 => (Some(0), format!("{set}-no-simple-point")),
        M18 => (Some(0), "M18-no-finite-points".to_string()),
        M19 => (None, "M19-not-applicable".to_string()),
    }
}
