//! Independent count of centers: finds every finite singular point by
//! elimination, linearizes there, and runs the origin-center test on the
//! system translated to each candidate. Uses none of the C-invariants.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebraic::{Approx, RealRoot};
use crate::classifier::center_conditions;
use crate::invariants::origin_invariants_in;
use crate::poly::{resultant, UPoly};
use crate::rational::{int, sign, to_f64, Rational};
use crate::scalar::Arith;
use crate::system::{sheared, total_degree, QuadSystem, Tensors};

const RESIDUAL_TOL: f64 = 1e-9;
const SIGMA_ZERO: f64 = 1e-12;
const SIGMA_NONZERO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("P and Q share a common factor: infinitely many singular points")]
    Degenerate,
    #[error("{0} centers found, more than two")]
    TooManyCenters(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    CenterCandidate,
    Saddle,
    Node,
    Focus,
    Degenerate,
    Complex,
}

/// A number known exactly when rational, and always approximately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Value {
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero_f64")]
    pub im: f64,
    #[serde(
        default,
        with = "crate::rational::serde_rational_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub exact: Option<Rational>,
}

fn is_zero_f64(v: &f64) -> bool {
    *v == 0.0
}

impl Value {
    fn rational(r: Rational) -> Self {
        Value {
            re: to_f64(&r),
            im: 0.0,
            exact: Some(r),
        }
    }

    fn real(re: f64) -> Self {
        Value {
            re,
            im: 0.0,
            exact: None,
        }
    }

    fn complex(z: Complex64) -> Self {
        Value {
            re: z.re,
            im: z.im,
            exact: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub x: Value,
    pub y: Value,
    pub multiplicity: usize,
    /// Absent for complex points.
    pub sigma: Option<Value>,
    pub delta: Option<Value>,
    pub kind: PointKind,
    pub center: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub points: Vec<SingularPoint>,
    /// `None` when numeric mode cannot decide.
    pub center_count: Option<u8>,
    pub mode: Mode,
    /// Largest `max(|P|, |Q|)` over the floating-point coordinates of the real points.
    pub residuals: f64,
}

impl OracleVerdict {
    /// Sum of multiplicities over real and complex points.
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

/// Square-free factor of the resultant with root multiplicity `k`, and the
/// `Y` coordinate of the point above each of its roots as a residue mod `f`.
struct Factor {
    f: UPoly,
    k: usize,
    y: UPoly,
}

/// Result of eliminating `Y` after a shear that separates the points.
struct Elimination {
    t: Rational,
    factors: Vec<Factor>,
}

/// `y = -num / den` modulo `f`, when `den` is a unit there.
fn quotient_mod(num: &UPoly, den: &UPoly, f: &UPoly) -> Option<UPoly> {
    let (g, inv) = UPoly::gcd_inverse(den, f);
    (g.degree() == Some(0)).then(|| (&-num * &inv).rem(f))
}

/// `Y` above the roots of each factor, or `None` when two points share an `X`.
fn recover_y(a: &[UPoly], b: &[UPoly], sf: Vec<(UPoly, usize)>) -> Option<Vec<Factor>> {
    let mut out = Vec::new();
    // a linear equation in Y with constant leading coefficient pins Y
    if a.len() == 2 || b.len() == 2 {
        let lin = if a.len() == 2 { a } else { b };
        for (f, k) in sf {
            let y = quotient_mod(&lin[0], &lin[1], &f)?;
            out.push(Factor { f, k, y });
        }
        return Some(out);
    }
    let (p2, q2) = (a[2].lead(), b[2].lead());
    let l1 = &a[1].scale(&q2) - &b[1].scale(&p2);
    let l0 = &a[0].scale(&q2) - &b[0].scale(&p2);
    // where l1 vanishes both equations are proportional; a single point needs a double root
    let disc = &(&a[1] * &a[1]) - &a[0].scale(&(int(4) * &p2));
    for (f, k) in sf {
        let g = UPoly::gcd(&f, &l1);
        let h = f.div_rem(&g).0;
        if h.degree().unwrap_or(0) > 0 {
            let y = quotient_mod(&l0, &l1, &h)?;
            out.push(Factor { f: h, k, y });
        }
        if g.degree().unwrap_or(0) > 0 {
            if !disc.rem(&g).is_zero() {
                return None;
            }
            let y = a[1].scale(&(-(Rational::one() / (int(2) * &p2)))).rem(&g);
            out.push(Factor { f: g, k, y });
        }
    }
    Some(out)
}

fn eliminate(sys: &QuadSystem) -> Result<Option<Elimination>, OracleError> {
    let (dp, dq) = match (total_degree(&sys.p), total_degree(&sys.q)) {
        (None, None) => return Err(OracleError::Degenerate),
        (Some(0), _) | (_, Some(0)) => return Ok(None),
        (None, Some(_)) | (Some(_), None) => return Err(OracleError::Degenerate),
        (Some(a), Some(b)) => (a, b),
    };
    for k in 0..64i64 {
        let t = int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let a = sheared(&sys.p, &t, dp);
        let b = sheared(&sys.q, &t, dq);
        if a[dp].is_zero() || b[dq].is_zero() {
            continue;
        }
        let res = resultant(&a, &b);
        if res.is_zero() {
            return Err(OracleError::Degenerate);
        }
        if let Some(factors) = recover_y(&a, &b, res.square_free()) {
            return Ok(Some(Elimination { t, factors }));
        }
    }
    unreachable!("a separating shear exists among the first 64 integers")
}

fn tensors_at<A: Arith>(ar: &A, sys: &QuadSystem, x: &A::Elem, y: &A::Elem) -> Tensors<A::Elem> {
    let t = sys.tensors();
    let a2 = t.a2.map(|m| m.map(|r| r.map(|v| ar.lift(&v))));
    // Jacobian entries a^j_α + 2 a^j_{αβ} x^β
    let a1 = std::array::from_fn(|j| {
        std::array::from_fn(|al| {
            let lin = ar.lift(&t.a1[j][al]);
            let q = ar.add(&ar.mul(&a2[j][al][0], x), &ar.mul(&a2[j][al][1], y));
            ar.add(&lin, &ar.scale(2, &q))
        })
    });
    Tensors {
        a0: [ar.zero(), ar.zero()],
        a1,
        a2,
    }
}

fn classify_point(sigma: i8, delta: i8, disc: i8, multiplicity: usize) -> PointKind {
    if multiplicity > 1 || delta == 0 {
        PointKind::Degenerate
    } else if delta < 0 {
        PointKind::Saddle
    } else if sigma == 0 {
        PointKind::CenterCandidate
    } else if disc < 0 {
        PointKind::Focus
    } else {
        PointKind::Node
    }
}

fn coefficient_scale(sys: &QuadSystem) -> f64 {
    sys.p
        .iter()
        .chain(sys.q.iter())
        .map(|v| to_f64(v).abs())
        .fold(0.0, f64::max)
}

/// Roots of a square-free polynomial by Aberth iteration.
fn complex_roots(f: &UPoly) -> Vec<Complex64> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let lead = to_f64(&f.lead()).abs();
    let radius = 1.0
        + (0..n)
            .map(|i| to_f64(&f.coeff(i)).abs() / lead)
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = eval_complex(f, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / eval_complex(&df, z[i]);
            let repel: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repel);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn eval_complex(p: &UPoly, z: Complex64) -> Complex64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, c| acc * z + to_f64(c))
}

fn residual(sys: &QuadSystem, x: f64, y: f64) -> f64 {
    let ev = |c: &[Rational; 6]| {
        let c: Vec<f64> = c.iter().map(to_f64).collect();
        c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y
    };
    ev(&sys.p).abs().max(ev(&sys.q).abs())
}

/// Complex conjugate points of a factor, `count` of them, most imaginary first.
fn complex_points(
    t: &Rational,
    f: &UPoly,
    y_mod: &UPoly,
    count: usize,
    multiplicity: usize,
) -> Vec<SingularPoint> {
    let mut zs = complex_roots(f);
    zs.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
    let t = to_f64(t);
    zs.into_iter()
        .take(count)
        .map(|z| {
            let y = eval_complex(y_mod, z);
            let x = z + y * t;
            SingularPoint {
                x: Value::complex(x),
                y: Value::complex(y),
                multiplicity,
                sigma: None,
                delta: None,
                kind: PointKind::Complex,
                center: false,
            }
        })
        .collect()
}

/// Finite singular points in exact arithmetic.
pub fn finite_singular_points(sys: &QuadSystem) -> Result<Vec<SingularPoint>, OracleError> {
    Ok(exact_points(sys)?.0)
}

fn exact_points(sys: &QuadSystem) -> Result<(Vec<SingularPoint>, f64), OracleError> {
    let Some(e) = eliminate(sys)? else {
        return Ok((Vec::new(), 0.0));
    };
    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    for Factor { f, k, y: y_mod } in &e.factors {
        let (f, k) = (f.clone(), *k);
        let roots = f.isolate_real_roots();
        for (lo, hi) in &roots {
            let field = match f.rational_root_in(lo, hi) {
                Some(r) => RealRoot::new(UPoly::new(vec![-r.clone(), int(1)]), r.clone(), r),
                None => RealRoot::new(f.clone(), lo.clone(), hi.clone()),
            };
            let xx = field.generator();
            let y = field.reduce(y_mod);
            let x = field.add(&xx, &field.mul(&field.lift(&e.t), &y));
            let tens = tensors_at(&field, sys, &x, &y);
            let j = &tens.a1;
            let sigma = field.add(&j[0][0], &j[1][1]);
            let delta = field.sub(
                &field.mul(&j[0][0], &j[1][1]),
                &field.mul(&j[0][1], &j[1][0]),
            );
            let disc = field.sub(&field.mul(&sigma, &sigma), &field.scale(4, &delta));
            let kind = classify_point(field.sign(&sigma), field.sign(&delta), field.sign(&disc), k);
            let center = kind == PointKind::CenterCandidate
                && center_conditions(&field, &origin_invariants_in(&field, &tens));
            let value = |a: &UPoly| match (field.rational(), a.degree()) {
                (Some(r), _) => Value::rational(a.eval(&r)),
                (None, None | Some(0)) => Value::rational(a.coeff(0)),
                (None, _) => Value::real(field.approx(a)),
            };
            let (xv, yv) = (value(&x), value(&y));
            worst = worst.max(residual(sys, xv.re, yv.re));
            points.push(SingularPoint {
                x: xv,
                y: yv,
                multiplicity: k,
                sigma: Some(value(&sigma)),
                delta: Some(value(&delta)),
                kind,
                center,
            });
        }
        let n_complex = f.degree().unwrap_or(0) - roots.len();
        points.extend(complex_points(&e.t, &f, y_mod, n_complex, k));
    }
    Ok((points, worst))
}

fn count(points: &[SingularPoint]) -> Result<u8, OracleError> {
    let n = points.iter().filter(|p| p.center).count();
    if n > 2 {
        return Err(OracleError::TooManyCenters(n));
    }
    Ok(n as u8)
}

/// Exact center count over all finite singular points.
pub fn oracle_center_count(sys: &QuadSystem) -> Result<OracleVerdict, OracleError> {
    let (points, residuals) = exact_points(sys)?;
    let n = count(&points)?;
    Ok(OracleVerdict {
        points,
        center_count: Some(n),
        mode: Mode::Exact,
        residuals,
    })
}

/// Floating-point variant: exact elimination, floating roots of each
/// irrational factor, tolerance-based center test.
pub fn oracle_center_count_numeric(sys: &QuadSystem) -> Result<OracleVerdict, OracleError> {
    let Some(e) = eliminate(sys)? else {
        return Ok(OracleVerdict {
            points: Vec::new(),
            center_count: Some(0),
            mode: Mode::Numeric,
            residuals: 0.0,
        });
    };
    let scale = 1.0 + coefficient_scale(sys);
    let ar = Approx {
        tol: RESIDUAL_TOL * scale,
    };
    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    let mut undecided = false;
    let t = to_f64(&e.t);
    for Factor { f, k, y: y_mod } in &e.factors {
        let k = *k;
        if f.degree() == Some(1) {
            let (pts, w) = exact_points_of_factor(sys, &e.t, f, y_mod, k);
            worst = worst.max(w);
            points.extend(pts);
            continue;
        }
        let zs = complex_roots(f);
        let real_tol = 1e-9 * (1.0 + zs.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let mut n_complex = 0;
        for z in &zs {
            if z.im.abs() > real_tol {
                n_complex += 1;
                continue;
            }
            let xx = z.re;
            let y = y_mod.eval_f64(xx);
            let x = xx + t * y;
            let r = residual(sys, x, y);
            worst = worst.max(r);
            if r > RESIDUAL_TOL * scale {
                undecided = true;
            }
            let tens = tensors_at(&ar, sys, &x, &y);
            let j = &tens.a1;
            let sigma = j[0][0] + j[1][1];
            let delta = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let s_sign = if sigma.abs() <= SIGMA_ZERO {
                0
            } else if sigma.abs() < SIGMA_NONZERO {
                undecided = true;
                sigma.signum() as i8
            } else {
                sigma.signum() as i8
            };
            let kind = classify_point(
                s_sign,
                ar.sign(&delta),
                ar.sign(&(sigma * sigma - 4.0 * delta)),
                k,
            );
            let center = kind == PointKind::CenterCandidate
                && center_conditions(&ar, &origin_invariants_in(&ar, &tens));
            points.push(SingularPoint {
                x: Value::real(x),
                y: Value::real(y),
                multiplicity: k,
                sigma: Some(Value::real(sigma)),
                delta: Some(Value::real(delta)),
                kind,
                center,
            });
        }
        points.extend(complex_points(&e.t, f, y_mod, n_complex, k));
    }
    let n = count(&points)?;
    Ok(OracleVerdict {
        points,
        center_count: (!undecided).then_some(n),
        mode: Mode::Numeric,
        residuals: worst,
    })
}

fn exact_points_of_factor(
    sys: &QuadSystem,
    t: &Rational,
    f: &UPoly,
    y_mod: &UPoly,
    k: usize,
) -> (Vec<SingularPoint>, f64) {
    let root = -f.coeff(0) / f.coeff(1);
    let y = y_mod.eval(&root);
    let x = &root + t * &y;
    let jac = sys.jacobian(&x, &y);
    let sigma = &jac[0][0] + &jac[1][1];
    let delta = &jac[0][0] * &jac[1][1] - &jac[0][1] * &jac[1][0];
    let disc = &sigma * &sigma - int(4) * &delta;
    let kind = classify_point(sign(&sigma), sign(&delta), sign(&disc), k);
    let center = kind == PointKind::CenterCandidate
        && crate::classifier::center_at_origin(&sys.translate(&x, &y)).unwrap_or(false);
    let r = residual(sys, to_f64(&x), to_f64(&y));
    let p = SingularPoint {
        x: Value::rational(x),
        y: Value::rational(y),
        multiplicity: k,
        sigma: Some(Value::rational(sigma)),
        delta: Some(Value::rational(delta)),
        kind,
        center,
    };
    (vec![p], r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(c: [i64; 12]) -> QuadSystem {
        QuadSystem::from_ints(c)
    }

    fn coords(points: &[SingularPoint]) -> Vec<(Rational, Rational, usize)> {
        let mut v: Vec<_> = points
            .iter()
            .filter(|p| p.kind != PointKind::Complex)
            .map(|p| {
                (
                    p.x.exact.clone().unwrap(),
                    p.y.exact.clone().unwrap(),
                    p.multiplicity,
                )
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn four_separable_points() {
        let pts = finite_singular_points(&sys([0, 1, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1])).unwrap();
        assert_eq!(
            coords(&pts),
            vec![
                (int(0), int(0), 1),
                (int(0), int(1), 1),
                (int(1), int(0), 1),
                (int(1), int(1), 1)
            ]
        );
    }

    #[test]
    fn triple_point_at_origin() {
        let pts = finite_singular_points(&sys([0, 0, 0, 0, 2, 0, 0, 1, 0, -1, 0, 1])).unwrap();
        assert_eq!(coords(&pts), vec![(int(0), int(0), 3), (int(1), int(0), 1)]);
    }

    #[test]
    fn no_finite_points() {
        assert!(
            finite_singular_points(&sys([1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0]))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn worked_counts() {
        let count = |c| oracle_center_count(&sys(c)).unwrap().center_count;
        assert_eq!(count([0, 0, 1, 0, 0, -1, 0, -1, 0, 1, 0, 0]), Some(2));
        assert_eq!(count([0, 1, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1]), Some(0));
        assert_eq!(count([0, 0, 1, 1, 0, 0, 0, -1, 0, 0, 0, 0]), Some(1));
        assert_eq!(count([0, 0, 0, 0, 2, 0, 0, 1, 0, -1, 0, 1]), Some(1));
    }

    #[test]
    fn irrational_points_exact() {
        // x' = y, y' = x^2 - 2 - y: points (±√2, 0)
        let s = sys([0, 0, 1, 0, 0, 0, -2, 0, -1, 1, 0, 0]);
        let v = oracle_center_count(&s).unwrap();
        assert_eq!(v.total_multiplicity(), 2);
        let kinds: Vec<_> = v.points.iter().map(|p| p.kind).collect();
        assert!(kinds.contains(&PointKind::Saddle));
        assert!(kinds.contains(&PointKind::Focus) || kinds.contains(&PointKind::Node));
        assert!(v.residuals < 1e-9);
    }

    #[test]
    fn irrational_hamiltonian_centers() {
        // H = (x^2 + y^2)/2 - x^3/3 - 2xy^2 ... x' = H_y = y - 4xy, y' = -H_x = -x + x^2 + 2y^2
        let s = sys([0, 0, 1, 0, -4, 0, 0, -1, 0, 1, 0, 2]);
        let exact = oracle_center_count(&s).unwrap();
        let numeric = oracle_center_count_numeric(&s).unwrap();
        assert_eq!(exact.center_count, numeric.center_count);
        assert_eq!(exact.total_multiplicity(), 4);
    }

    #[test]
    fn common_factor_is_degenerate() {
        // x' = x y, y' = x (1 + y)
        let s = sys([0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0]);
        assert_eq!(oracle_center_count(&s), Err(OracleError::Degenerate));
        assert_eq!(
            oracle_center_count(&QuadSystem::zero()),
            Err(OracleError::Degenerate)
        );
    }

    #[test]
    fn homogeneous_quadruple_point() {
        // x' = 2y(y - x), y' = -x(x + 2y)
        let pts = finite_singular_points(&sys([0, 0, 0, 0, -2, 2, 0, 0, 0, -1, -2, 0])).unwrap();
        assert_eq!(coords(&pts), vec![(int(0), int(0), 4)]);
    }

    #[test]
    fn complex_points_counted() {
        // x' = x^2 + 1, y' = y^2 + 1: four complex points
        let v = oracle_center_count(&sys([1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(v.total_multiplicity(), 4);
        assert!(v.points.iter().all(|p| p.kind == PointKind::Complex));
    }
}
