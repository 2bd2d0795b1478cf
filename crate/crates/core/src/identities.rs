//! Closed-form values of the invariants on three canonical families,
//! checked exactly at sampled parameters.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::families::{canonical, small_rational};
use crate::invariants::InvariantTable;
use crate::rational::{display_rational, int, rat, Rational};

/// Outcome of one closed-form identity over all sampled parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub form: String,
    pub quantity: String,
    pub checked: usize,
    pub failed: usize,
    /// First failing parameter draw with the computed and expected values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.failed == 0
    }
}

type Expected = Vec<(&'static str, Rational, Rational)>;

struct Closed {
    form: &'static str,
    params: &'static [&'static str],
    expect: fn(&[Rational], &InvariantTable, &InvariantTable) -> Expected,
}

fn reversible_y(v: &[Rational], t: &InvariantTable, _: &InvariantTable) -> Expected {
    let (c, d) = (&v[0], &v[1]);
    let cm1 = c - int(1);
    let k = d + int(2) - int(2) * c;
    vec![
        ("mu", t.comitants.mu.clone(), int(4) * c * d * &cm1 * &cm1),
        ("D", t.comitants.d.clone(), rat(1, 3) * c * &k * &k * &k),
        ("C12", t.c(12).clone(), int(-2)),
        ("C8", t.c(8).clone(), int(4) * d * &k),
        ("C1", t.c(1).clone(), int(0)),
        ("C3", t.c(3).clone(), int(0)),
    ]
}

fn reversible_x(v: &[Rational], t: &InvariantTable, _: &InvariantTable) -> Expected {
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let a2c = a - int(2) * c;
    vec![
        (
            "mu",
            t.comitants.mu.clone(),
            a * a * b * b + int(4) * a * c * c * c,
        ),
        (
            "D",
            t.comitants.d.clone(),
            rat(1, 6) * &a2c * &a2c * (int(4) * a * c - b * b - int(8) * c * c),
        ),
        ("C1", t.c(1).clone(), int(0)),
        ("C3", t.c(3).clone(), int(0)),
        ("C8", t.c(8).clone(), int(0)),
        ("C12", t.c(12).clone(), int(0)),
    ]
}

/// `mu` at the sampled `f`; `C4`, `C9` on the `f = 0` member.
fn triple_point(v: &[Rational], t: &InvariantTable, t0: &InvariantTable) -> Expected {
    let (h, m, n, f) = (&v[0], &v[1], &v[2], &v[3]);
    let hn = h + n;
    vec![
        (
            "mu",
            t.comitants.mu.clone(),
            int(4) * h * h * (f * f + int(2) * f * m - n),
        ),
        ("C4", t0.c(4).clone(), rat(2, 3) * m * h * &hn * &hn),
        ("C9", t0.c(9).clone(), h * (&hn * &hn + m * m * n)),
    ]
}

const CLOSED: [Closed; 3] = [
    Closed {
        form: "reversible-y",
        params: &["c", "d"],
        expect: reversible_y,
    },
    Closed {
        form: "reversible-x",
        params: &["a", "b", "c"],
        expect: reversible_x,
    },
    Closed {
        form: "triple-point",
        params: &["h", "m", "n", "f"],
        expect: triple_point,
    },
];

/// Names of the canonical forms with closed-form checks.
pub fn checked_forms() -> impl Iterator<Item = &'static str> {
    CLOSED.iter().map(|c| c.form)
}

/// Runs every closed-form identity of `form` over `draws` random parameter sets.
pub fn check_form(form: &str, seed: u64, draws: usize) -> Option<Vec<IdentityReport>> {
    let (index, closed) = CLOSED.iter().enumerate().find(|(_, c)| c.form == form)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let mut reports: Vec<IdentityReport> = Vec::new();
    for _ in 0..draws {
        let v: Vec<Rational> = closed
            .params
            .iter()
            .map(|_| small_rational(&mut rng))
            .collect();
        let table = InvariantTable::compute(&canonical(form, &v).expect("known form"));
        // the same form with its last parameter set to zero
        let mut v0 = v.clone();
        *v0.last_mut().expect("parameters") = int(0);
        let table0 = InvariantTable::compute(&canonical(form, &v0).expect("known form"));
        for (quantity, got, want) in (closed.expect)(&v, &table, &table0) {
            let pos = match reports.iter().position(|r| r.quantity == quantity) {
                Some(i) => i,
                None => {
                    reports.push(IdentityReport {
                        form: form.to_string(),
                        quantity: quantity.to_string(),
                        checked: 0,
                        failed: 0,
                        example: None,
                    });
                    reports.len() - 1
                }
            };
            let r = &mut reports[pos];
            r.checked += 1;
            if got != want {
                r.failed += 1;
                if r.example.is_none() {
                    let at: Vec<String> = closed
                        .params
                        .iter()
                        .zip(&v)
                        .map(|(p, x)| format!("{p}={}", display_rational(x)))
                        .collect();
                    r.example = Some(format!(
                        "got {}, expected {} at {}",
                        display_rational(&got),
                        display_rational(&want),
                        at.join(", ")
                    ));
                }
            }
        }
    }
    Some(reports)
}

/// All closed-form identities.
pub fn check_all(seed: u64, draws: usize) -> Vec<IdentityReport> {
    checked_forms()
        .flat_map(|f| check_form(f, seed, draws).expect("known form"))
        .collect()
}
