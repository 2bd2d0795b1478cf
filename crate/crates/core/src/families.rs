//! Generators of test systems: random systems, systems with prescribed
//! rational singular points, Hamiltonian and reversible systems, and the
//! canonical normal forms with sampled parameters.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::oracle::finite_singular_points;
use crate::rational::{int, rat, Rational};
use crate::system::{AffineMap, QuadSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PlacedPoints,
    Hamiltonian,
    Reversible,
    Canonical,
    Random,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PlacedPoints,
        Family::Hamiltonian,
        Family::Reversible,
        Family::Canonical,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PlacedPoints => "placed-points",
            Family::Hamiltonian => "hamiltonian",
            Family::Reversible => "reversible",
            Family::Canonical => "canonical",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                format!("unknown family {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// A generated system with a short description of how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    pub system: QuadSystem,
    pub note: String,
}

/// Small rational with numerator in `-5..=5` and denominator in `1..=3`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let v = small_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random system with small rational coefficients; each coefficient is
/// zero with probability `sparsity`.
pub fn random_system<R: Rng>(rng: &mut R, sparsity: f64) -> QuadSystem {
    let c = std::array::from_fn(|_| {
        if rng.gen_bool(sparsity) {
            Rational::zero()
        } else {
            small_rational(rng)
        }
    });
    QuadSystem::from_coeffs(c)
}

/// Random invertible affine map with small rational entries.
pub fn random_affine<R: Rng>(rng: &mut R) -> AffineMap {
    loop {
        let m = std::array::from_fn(|_| std::array::from_fn(|_| small_rational(rng)));
        let b = std::array::from_fn(|_| small_rational(rng));
        let map = AffineMap { m, b };
        if map.is_invertible() {
            return map;
        }
    }
}

/// `ẋ = ∂H/∂y`, `ẏ = -∂H/∂x` for `H = Σ h[i][j] x^i y^j`, `i + j ≤ 3`.
pub fn hamiltonian(h: &[[Rational; 4]; 4]) -> QuadSystem {
    let g = |i: usize, j: usize| -> Rational {
        if i + j <= 3 {
            h[i][j].clone()
        } else {
            Rational::zero()
        }
    };
    // ∂H/∂y = Σ j h_ij x^i y^(j-1)
    let hy = |i: usize, j: usize| g(i, j + 1) * int(j as i64 + 1);
    let hx = |i: usize, j: usize| g(i + 1, j) * int(i as i64 + 1);
    let block = |f: &dyn Fn(usize, usize) -> Rational| -> [Rational; 6] {
        [f(0, 0), f(1, 0), f(0, 1), f(2, 0), f(1, 1), f(0, 2)]
    };
    QuadSystem::new(block(&hy), block(&|i, j| -hx(i, j)))
}

fn random_hamiltonian<R: Rng>(rng: &mut R) -> QuadSystem {
    loop {
        let mut h: [[Rational; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 - i {
                if i + j >= 2 || (i + j == 1 && rng.gen_bool(0.3)) {
                    h[i][j] = if rng.gen_bool(0.25) {
                        Rational::zero()
                    } else {
                        small_rational(rng)
                    };
                }
            }
        }
        let s = hamiltonian(&h);
        if !s.has_zero_quadratic_part() && finite_singular_points(&s).is_ok() {
            return s;
        }
    }
}

/// Symmetric under `(x, t) → (-x, -t)`: `P` even and `Q` odd in `x`.
fn random_reversible<R: Rng>(rng: &mut R) -> QuadSystem {
    loop {
        let mut c = [(); 12].map(|_| Rational::zero());
        // p00, p01, p20, p02, q10, q11
        for i in [0, 2, 3, 5, 7, 10] {
            if !rng.gen_bool(0.2) {
                c[i] = small_rational(rng);
            }
        }
        let s = QuadSystem::from_coeffs(c);
        let s = if rng.gen_bool(0.5) {
            s.transform(&random_affine(rng))
        } else {
            s
        };
        if !s.has_zero_quadratic_part() && finite_singular_points(&s).is_ok() {
            return s;
        }
    }
}

/// A vector in the kernel of `rows` with random coordinates along a basis.
fn random_kernel_vector<R: Rng>(rng: &mut R, rows: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][col];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut v = vec![Rational::zero(); n];
    for col in (0..n).filter(|c| !pivots.contains(c)) {
        v[col] = small_rational(rng);
    }
    for (row, &col) in pivots.iter().enumerate() {
        let s: Rational = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|c| &m[row][c] * &v[c])
            .sum();
        v[col] = -s;
    }
    v
}

fn monomials(x: &Rational, y: &Rational) -> Vec<Rational> {
    vec![Rational::one(), x.clone(), y.clone(), x * x, x * y, y * y]
}

fn distinct_points<R: Rng>(rng: &mut R, k: usize) -> Vec<(Rational, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    while pts.len() < k {
        let p = (
            rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)),
            rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)),
        );
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Random system vanishing at 1–4 random rational points, optionally
/// Hamiltonian, trace-free at the first point, or built from a reversible
/// system with rational points on its axis.
fn random_placed<R: Rng>(rng: &mut R) -> QuadSystem {
    loop {
        let s = match rng.gen_range(0..4) {
            0 => placed_generic(rng, false),
            1 => placed_generic(rng, true),
            2 => placed_hamiltonian(rng),
            _ => placed_reversible(rng),
        };
        let Some(s) = s else { continue };
        if s.has_zero_quadratic_part() {
            continue;
        }
        let Ok(points) = finite_singular_points(&s) else {
            continue;
        };
        let all_rational = points
            .iter()
            .all(|p| p.x.exact.is_some() && p.y.exact.is_some());
        if all_rational {
            return s;
        }
    }
}

fn placed_generic<R: Rng>(rng: &mut R, trace_free: bool) -> Option<QuadSystem> {
    let k = *[2usize, 3, 4].choose(rng).unwrap();
    let pts = distinct_points(rng, k);
    let mut rows = Vec::new();
    for (x, y) in &pts {
        let m = monomials(x, y);
        let mut rp = m.clone();
        rp.extend(vec![Rational::zero(); 6]);
        let mut rq = vec![Rational::zero(); 6];
        rq.extend(m);
        rows.push(rp);
        rows.push(rq);
    }
    if trace_free {
        // P_x + Q_y = 0 at the first point
        let (x, y) = &pts[0];
        let mut row = vec![Rational::zero(); 12];
        row[1] = int(1);
        row[3] = int(2) * x;
        row[4] = y.clone();
        row[8] = int(1);
        row[10] = x.clone();
        row[11] = int(2) * y;
        rows.push(row);
    }
    let v = random_kernel_vector(rng, &rows, 12);
    Some(QuadSystem::from_coeffs(v.try_into().ok()?))
}

fn placed_hamiltonian<R: Rng>(rng: &mut R) -> Option<QuadSystem> {
    let k = *[1usize, 2, 3].choose(rng).unwrap();
    let pts = distinct_points(rng, k);
    // unknowns h_ij for (i, j) with 1 ≤ i + j ≤ 3
    let idx: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4 - i).map(move |j| (i, j)))
        .filter(|(i, j)| i + j >= 1)
        .collect();
    let pow = |v: &Rational, e: usize| -> Rational { (0..e).fold(Rational::one(), |a, _| a * v) };
    let mut rows = Vec::new();
    for (x, y) in &pts {
        let hx: Vec<Rational> = idx
            .iter()
            .map(|&(i, j)| {
                if i == 0 {
                    Rational::zero()
                } else {
                    int(i as i64) * pow(x, i - 1) * pow(y, j)
                }
            })
            .collect();
        let hy: Vec<Rational> = idx
            .iter()
            .map(|&(i, j)| {
                if j == 0 {
                    Rational::zero()
                } else {
                    int(j as i64) * pow(x, i) * pow(y, j - 1)
                }
            })
            .collect();
        rows.push(hx);
        rows.push(hy);
    }
    let v = random_kernel_vector(rng, &rows, idx.len());
    let mut h: [[Rational; 4]; 4] = Default::default();
    for (&(i, j), c) in idx.iter().zip(v) {
        h[i][j] = c;
    }
    Some(hamiltonian(&h))
}

fn placed_reversible<R: Rng>(rng: &mut R) -> Option<QuadSystem> {
    // P = a (y - y1)(y - y2) + b x^2, Q = x (c + d y): axis points (0, y1), (0, y2)
    let (y1, y2) = (small_rational(rng), small_rational(rng));
    let (a, b, c, d) = (
        nonzero_rational(rng),
        small_rational(rng),
        nonzero_rational(rng),
        small_rational(rng),
    );
    let p = [
        &a * &y1 * &y2,
        Rational::zero(),
        -(&a * (&y1 + &y2)),
        b,
        Rational::zero(),
        a,
    ];
    let q = [
        Rational::zero(),
        c,
        Rational::zero(),
        Rational::zero(),
        d,
        Rational::zero(),
    ];
    Some(QuadSystem::new(p, q).transform(&random_affine(rng)))
}

/// Names of the canonical normal forms produced by [`canonical`].
pub const CANONICAL_FORMS: [&str; 11] = [
    "four-point",
    "four-point-trace-free",
    "reversible-y",
    "reversible-x",
    "weak-focus-pair",
    "three-point-saddle",
    "triple-point",
    "three-point-diagonal",
    "linear-first-quadratic",
    "linear-first-cross",
    "linear-first-square",
];

/// Canonical normal form `name` at the given parameters (missing ones are zero).
pub fn canonical(name: &str, v: &[Rational]) -> Option<QuadSystem> {
    let p = |i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
    let z = Rational::zero;
    let one = || int(1);
    let s = match name {
        // x' = cx + dy - cx^2 + 2hxy - dy^2, y' = ex + fy - ex^2 + 2mxy - fy^2
        "four-point" => {
            let (c, d, h, e, f, m) = (p(0), p(1), p(2), p(3), p(4), p(5));
            QuadSystem::new(
                [z(), c.clone(), d.clone(), -c, int(2) * h, -d],
                [z(), e.clone(), f.clone(), -e, int(2) * m, -f],
            )
        }
        // x' = cx + dy - cx^2 + 2hxy - dy^2, y' = ex - cy - ex^2 + 2cxy + cy^2
        "four-point-trace-free" => {
            let (c, d, h, e) = (p(0), p(1), p(2), p(3));
            QuadSystem::new(
                [z(), c.clone(), d.clone(), -c.clone(), int(2) * h, -d],
                [z(), e.clone(), -c.clone(), -e, int(2) * &c, c],
            )
        }
        // x' = y + 2(1-c)xy, y' = -x + dx^2 + cy^2
        "reversible-y" => {
            let (c, d) = (p(0), p(1));
            QuadSystem::new(
                [z(), z(), one(), z(), int(2) * (one() - &c), z()],
                [z(), -one(), z(), d, z(), c],
            )
        }
        // x' = -y - cx^2 - ay^2, y' = x + bx^2 + 2cxy
        "reversible-x" => {
            let (a, b, c) = (p(0), p(1), p(2));
            QuadSystem::new(
                [z(), z(), -one(), -c.clone(), z(), -a],
                [z(), one(), z(), b, int(2) * c, z()],
            )
        }
        // x' = dy + 2hxy + ky^2, y' = ex - ex^2 - hy^2
        "weak-focus-pair" => {
            let (d, h, k, e) = (p(0), p(1), p(2), p(3));
            QuadSystem::new(
                [z(), z(), d, z(), int(2) * &h, k],
                [z(), e.clone(), z(), -e, z(), -h],
            )
        }
        // x' = x + dy - x^2 + 4xy + ky^2, y' = -y + 2xy - 2y^2
        "three-point-saddle" => {
            let (d, k) = (p(0), p(1));
            QuadSystem::new(
                [z(), one(), d, -one(), int(4), k],
                [z(), z(), -one(), z(), int(2), int(-2)],
            )
        }
        // x' = 2hxy + 2fhy^2, y' = x + fy - x^2 + 2mxy + ny^2
        "triple-point" => {
            let (h, m, n, f) = (p(0), p(1), p(2), p(3));
            QuadSystem::new(
                [z(), z(), z(), z(), int(2) * &h, int(2) * &f * &h],
                [z(), one(), f, -one(), int(2) * m, n],
            )
        }
        // x' = cx + dy - cx^2, y' = ex - cy - ex^2 + 2cxy
        "three-point-diagonal" => {
            let (c, d, e) = (p(0), p(1), p(2));
            QuadSystem::new(
                [z(), c.clone(), d, -c.clone(), z(), z()],
                [z(), e.clone(), -c.clone(), -e, int(2) * c, z()],
            )
        }
        // x' = y + gx^2, y' = ex + fy + lx^2 + 2mxy
        "linear-first-quadratic" => {
            let (g, e, f, l, m) = (p(0), p(1), p(2), p(3), p(4));
            QuadSystem::new(
                [z(), z(), one(), g, z(), z()],
                [z(), e, f, l, int(2) * m, z()],
            )
        }
        // x' = cx + y, y' = ex + fy + 2cmx^2 + 2mxy
        "linear-first-cross" => {
            let (c, e, f, m) = (p(0), p(1), p(2), p(3));
            QuadSystem::new(
                [z(), c.clone(), one(), z(), z(), z()],
                [z(), e, f, int(2) * &c * &m, int(2) * m, z()],
            )
        }
        // x' = cx + y, y' = ex + fy + c^2nx^2 + 2cnxy + ny^2
        "linear-first-square" => {
            let (c, e, f, n) = (p(0), p(1), p(2), p(3));
            QuadSystem::new(
                [z(), c.clone(), one(), z(), z(), z()],
                [z(), e, f, &c * &c * &n, int(2) * &c * &n, n],
            )
        }
        _ => return None,
    };
    Some(s)
}

fn random_canonical<R: Rng>(rng: &mut R) -> (QuadSystem, String) {
    loop {
        let name = *CANONICAL_FORMS.choose(rng).unwrap();
        let v: Vec<Rational> = (0..6).map(|_| small_rational(rng)).collect();
        let s = canonical(name, &v).expect("known form");
        if !s.has_zero_quadratic_part() && finite_singular_points(&s).is_ok() {
            return (s, name.to_string());
        }
    }
}

/// One system of the given family.
pub fn generate_family<R: Rng>(kind: Family, rng: &mut R) -> (QuadSystem, String) {
    match kind {
        Family::PlacedPoints => (random_placed(rng), String::new()),
        Family::Hamiltonian => (random_hamiltonian(rng), String::new()),
        Family::Reversible => (random_reversible(rng), String::new()),
        Family::Canonical => random_canonical(rng),
        Family::Random => {
            let sparsity = rng.gen_range(0.0..0.6);
            (random_system(rng, sparsity), String::new())
        }
    }
}

/// `count` reproducible samples of `kind` from `seed`.
pub fn samples(kind: Family, seed: u64, count: usize) -> Vec<Sample> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (kind as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..count)
        .map(|i| {
            let (system, note) = generate_family(kind, &mut rng);
            Sample {
                id: format!("{kind}-{i}"),
                system,
                note,
            }
        })
        .collect()
}

/// One hand-built system per partition row, `M1` first.
pub fn representatives() -> [QuadSystem; 19] {
    [
        // x' = -y - 2y^2, y' = -2 + x^2
        [0, 0, -1, 0, 0, -2, -2, 0, 0, 1, 0, 0],
        // x' = 1 + xy, y' = 2x^2 - y^2
        [1, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, -1],
        // x' = 2x^2 - 2y^2, y' = -2 - y^2
        [0, 0, 0, 2, 0, -2, -2, 0, 0, 0, 0, -1],
        // x' = 2x - xy, y' = x^2 - 2y^2
        [0, 2, 0, 0, -1, 0, 0, 0, 0, 1, 0, -2],
        // x' = -x^2 - y^2, y' = 2y + x^2
        [0, 0, 0, -1, 0, -1, 0, 0, 2, 1, 0, 0],
        // x' = -2x - 2x^2, y' = 2y^2
        [0, -2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 2],
        // x' = 1 + 2y^2, y' = 2x^2
        [1, 0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0],
        // x' = x + x^2 + 2y^2, y' = -xy
        [0, 1, 0, 1, 0, 2, 0, 0, 0, 0, -1, 0],
        // x' = -x^2, y' = -2y^2
        [0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -2],
        // x' = -y + x^2, y' = x - xy
        [0, 0, -1, 1, 0, 0, 0, 1, 0, 0, -1, 0],
        // x' = -2xy, y' = -1 + y - 2x^2
        [0, 0, 0, 0, -2, 0, -1, 0, 1, -2, 0, 0],
        // x' = -xy + y^2, y' = x + 2xy
        [0, 0, 0, 0, -1, 1, 0, 1, 0, 0, 2, 0],
        // x' = -2xy, y' = 2y + 2x^2
        [0, 0, 0, 0, -2, 0, 0, 0, 2, 2, 0, 0],
        // x' = x - 2x^2, y' = -y
        [0, 1, 0, -2, 0, 0, 0, 0, -1, 0, 0, 0],
        // x' = 1 + y^2, y' = xy
        [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0],
        // x' = -y^2, y' = -x
        [0, 0, 0, 0, 0, -1, 0, -1, 0, 0, 0, 0],
        // x' = 2x - 2y^2, y' = 2y
        [0, 2, 0, 0, 0, -2, 0, 0, 2, 0, 0, 0],
        // x' = 2, y' = -x^2
        [2, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0],
        // x' = -y, y' = x
        [0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    ]
    .map(QuadSystem::from_ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representatives_land_in_their_rows() {
        for (i, sys) in representatives().iter().enumerate() {
            let got = crate::classify_mf(sys).unwrap().set_index;
            assert_eq!(got.number(), i + 1, "{sys}");
        }
    }

    #[test]
    fn hamiltonian_from_cubic() {
        // H = (x^2 + y^2)/2 - (x^3 + y^3)/3
        let mut h: [[Rational; 4]; 4] = Default::default();
        h[2][0] = rat(1, 2);
        h[0][2] = rat(1, 2);
        h[3][0] = rat(-1, 3);
        h[0][3] = rat(-1, 3);
        assert_eq!(
            hamiltonian(&h),
            QuadSystem::from_ints([0, 0, 1, 0, 0, -1, 0, -1, 0, 1, 0, 0])
        );
    }

    #[test]
    fn reversible_y_instance() {
        let s = canonical("reversible-y", &[int(2), int(1)]).unwrap();
        assert_eq!(
            s,
            QuadSystem::from_ints([0, 0, 1, 0, -2, 0, 0, -1, 0, 1, 0, 2])
        );
    }

    #[test]
    fn four_point_form_vanishes_at_placed_points() {
        let v: Vec<Rational> = [2, -1, 3, 1, -2, 5].iter().map(|&k| int(k)).collect();
        let s = canonical("four-point", &v).unwrap();
        for (x, y) in [(0, 0), (1, 0), (0, 1)] {
            assert!(s.eval(0, &int(x), &int(y)).is_zero());
            assert!(s.eval(1, &int(x), &int(y)).is_zero());
        }
    }

    #[test]
    fn placed_points_are_rational() {
        for s in samples(Family::PlacedPoints, 3, 20) {
            let pts = finite_singular_points(&s.system).unwrap();
            assert!(pts.iter().all(|p| p.x.exact.is_some()));
        }
    }

    #[test]
    fn samples_are_reproducible() {
        for kind in Family::ALL {
            assert_eq!(samples(kind, 11, 5), samples(kind, 11, 5));
        }
    }

    #[test]
    fn family_names_round_trip() {
        for kind in Family::ALL {
            assert_eq!(kind.name().parse::<Family>().unwrap(), kind);
        }
        assert!("bogus".parse::<Family>().is_err());
    }
}
