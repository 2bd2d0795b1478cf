//! Einstein-summation evaluator over indices in {1, 2}.
//!
//! Expressions are written in a compact text notation, one token per factor:
//!
//! | token    | factor               |
//! |----------|----------------------|
//! | `a^p`    | `a^p`                |
//! | `a^p_k`  | `a^p_k`              |
//! | `a^p_km` | `a^p_{km}`           |
//! | `x^a`    | `x^a`                |
//! | `e_pq`   | `ε_{pq}`             |
//! | `e^pq`   | `ε^{pq}`             |
//!
//! Index names are single ASCII letters. Every index is summed; the `x`
//! factors turn the sum into a binary form.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::BinaryForm;
use crate::rational::Rational;
use crate::system::{QuadSystem, Tensors};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("unrecognised factor token '{0}'")]
    BadToken(String),
    #[error(
        "index '{index}' appears {count} time(s) in term {term}; expected once up and once down"
    )]
    BadIndex {
        term: usize,
        index: char,
        count: usize,
    },
    #[error("index '{index}' in term {term} is not paired up/down")]
    Unpaired { term: usize, index: char },
    #[error("terms have different x-degrees ({0} vs {1})")]
    MixedDegree(usize, usize),
    #[error("empty expression")]
    Empty,
}

/// Constant Levi-Civita symbols with `ε^{12} = ε_{12} = 1`, `ε^{21} = ε_{21} = -1`.
pub struct EpsilonTensor;

impl EpsilonTensor {
    /// `ε_{pq}` for 0-based indices.
    pub fn lower(p: usize, q: usize) -> i8 {
        match (p, q) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        }
    }

    /// `ε^{pq}`; numerically identical to the lower symbol.
    pub fn upper(p: usize, q: usize) -> i8 {
        Self::lower(p, q)
    }
}

/// One tensor factor with named index slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A0 { up: char },
    A1 { up: char, lo: char },
    A2 { up: char, lo: [char; 2] },
    X { up: char },
    EpsLo([char; 2]),
    EpsUp([char; 2]),
}

impl Factor {
    fn parse(token: &str) -> Result<Factor, ContractError> {
        let bad = || ContractError::BadToken(token.to_string());
        let letters = |s: &str| -> Option<Vec<char>> {
            let v: Vec<char> = s.chars().collect();
            v.iter().all(|c| c.is_ascii_alphabetic()).then_some(v)
        };
        if let Some(rest) = token.strip_prefix("a^") {
            let (up, lo) = rest.split_once('_').unwrap_or((rest, ""));
            let up = letters(up).filter(|v| v.len() == 1).ok_or_else(bad)?[0];
            let lo = letters(lo).ok_or_else(bad)?;
            return match lo.len() {
                0 => Ok(Factor::A0 { up }),
                1 => Ok(Factor::A1 { up, lo: lo[0] }),
                2 => Ok(Factor::A2 {
                    up,
                    lo: [lo[0], lo[1]],
                }),
                _ => Err(bad()),
            };
        }
        if let Some(rest) = token.strip_prefix("x^") {
            let v = letters(rest).filter(|v| v.len() == 1).ok_or_else(bad)?;
            return Ok(Factor::X { up: v[0] });
        }
        let eps = |rest: &str| letters(rest).filter(|v| v.len() == 2).map(|v| [v[0], v[1]]);
        if let Some(rest) = token.strip_prefix("e_") {
            return eps(rest).map(Factor::EpsLo).ok_or_else(bad);
        }
        if let Some(rest) = token.strip_prefix("e^") {
            return eps(rest).map(Factor::EpsUp).ok_or_else(bad);
        }
        Err(bad())
    }

    fn upper_indices(&self) -> Vec<char> {
        match *self {
            Factor::A0 { up }
            | Factor::A1 { up, .. }
            | Factor::A2 { up, .. }
            | Factor::X { up } => {
                vec![up]
            }
            Factor::EpsUp(ix) => ix.to_vec(),
            Factor::EpsLo(_) => vec![],
        }
    }

    fn lower_indices(&self) -> Vec<char> {
        match *self {
            Factor::A1 { lo, .. } => vec![lo],
            Factor::A2 { lo, .. } => lo.to_vec(),
            Factor::EpsLo(ix) => ix.to_vec(),
            _ => vec![],
        }
    }

    fn indices(&self) -> Vec<char> {
        let mut v = self.upper_indices();
        v.extend(self.lower_indices());
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: Rational,
    factors: Vec<Factor>,
}

/// A sum of rational multiples of fully contracted tensor products.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionExpr {
    terms: Vec<Term>,
    degree: usize,
    // compiled evaluation plans, one per term
    plans: Arc<Vec<Plan>>,
}

impl ContractionExpr {
    /// Parses a single product such as `"a^p_k a^q_am a^a_ln e_pq e^kl e^mn"`.
    pub fn parse(product: &str) -> Result<Self, ContractError> {
        Self::sum([(Rational::from_integer(1.into()), product)])
    }

    /// Builds `Σ c_i · product_i`.
    pub fn sum<'a>(
        terms: impl IntoIterator<Item = (Rational, &'a str)>,
    ) -> Result<Self, ContractError> {
        let mut parsed = Vec::new();
        for (coeff, text) in terms {
            let factors = text
                .split_whitespace()
                .map(Factor::parse)
                .collect::<Result<Vec<_>, _>>()?;
            parsed.push(Term { coeff, factors });
        }
        if parsed.is_empty() {
            return Err(ContractError::Empty);
        }
        let mut degree = None;
        for (t, term) in parsed.iter().enumerate() {
            check_indices(t, &term.factors)?;
            let d = term
                .factors
                .iter()
                .filter(|f| matches!(f, Factor::X { .. }))
                .count();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(ContractError::MixedDegree(d0, d)),
                _ => {}
            }
        }
        let plans = parsed.iter().map(Plan::compile).collect();
        Ok(ContractionExpr {
            terms: parsed,
            degree: degree.unwrap_or(0),
            plans: Arc::new(plans),
        })
    }

    /// Multiplies every term by `c`.
    pub fn scaled(mut self, c: &Rational) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        let plans = self.terms.iter().map(Plan::compile).collect();
        self.plans = Arc::new(plans);
        self
    }

    /// Degree of the resulting form (number of `x` factors).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of distinct summation indices in the largest term.
    pub fn index_count(&self) -> usize {
        self.plans.iter().map(|p| p.n_indices).max().unwrap_or(0)
    }
}

fn check_indices(term: usize, factors: &[Factor]) -> Result<(), ContractError> {
    let mut ups: HashMap<char, usize> = HashMap::new();
    let mut downs: HashMap<char, usize> = HashMap::new();
    for f in factors {
        for c in f.upper_indices() {
            *ups.entry(c).or_default() += 1;
        }
        for c in f.lower_indices() {
            *downs.entry(c).or_default() += 1;
        }
    }
    let mut names: Vec<char> = ups.keys().chain(downs.keys()).copied().collect();
    names.sort_unstable();
    names.dedup();
    for index in names {
        let u = ups.get(&index).copied().unwrap_or(0);
        let d = downs.get(&index).copied().unwrap_or(0);
        if u + d != 2 {
            return Err(ContractError::BadIndex {
                term,
                index,
                count: u + d,
            });
        }
        if u != 1 {
            return Err(ContractError::Unpaired { term, index });
        }
    }
    Ok(())
}

/// Factor with index names replaced by slot numbers, ordered for early pruning.
#[derive(Debug, Clone, PartialEq)]
struct Plan {
    coeff: Rational,
    n_indices: usize,
    steps: Vec<(Factor, Vec<usize>)>,
}

impl Plan {
    fn compile(term: &Term) -> Plan {
        let rank = |f: &Factor| match f {
            Factor::EpsLo(_) | Factor::EpsUp(_) => 0,
            Factor::A0 { .. } | Factor::A1 { .. } | Factor::A2 { .. } => 1,
            Factor::X { .. } => 2,
        };
        let mut factors = term.factors.clone();
        factors.sort_by_key(rank);
        let mut slots: HashMap<char, usize> = HashMap::new();
        let steps = factors
            .into_iter()
            .map(|f| {
                let ix = f
                    .indices()
                    .into_iter()
                    .map(|c| {
                        let n = slots.len();
                        *slots.entry(c).or_insert(n)
                    })
                    .collect();
                (f, ix)
            })
            .collect();
        Plan {
            coeff: term.coeff.clone(),
            n_indices: slots.len(),
            steps,
        }
    }
}

const UNSET: u8 = u8::MAX;

/// Sums over index assignments in integers: the tensors are scaled by the
/// common denominator `l`, and each plan is divided by `l^d` once at the end.
struct Evaluator {
    t: Tensors<BigInt>,
    out: Vec<BigInt>,
}

impl Evaluator {
    fn value(&self, f: &Factor, v: &[u8]) -> Option<BigInt> {
        let i = |k: usize| v[k] as usize;
        let val = match f {
            Factor::A0 { .. } => self.t.a0[i(0)].clone(),
            Factor::A1 { .. } => self.t.a1[i(0)][i(1)].clone(),
            Factor::A2 { .. } => self.t.a2[i(0)][i(1)][i(2)].clone(),
            Factor::X { .. } => return Some(BigInt::one()),
            Factor::EpsLo(_) => EpsilonTensor::lower(i(0), i(1)).into(),
            Factor::EpsUp(_) => EpsilonTensor::upper(i(0), i(1)).into(),
        };
        (!val.is_zero()).then_some(val)
    }

    fn walk(&mut self, plan: &Plan, step: usize, assign: &mut [u8], acc: &BigInt, x2_power: usize) {
        if step == plan.steps.len() {
            self.out[x2_power] += acc;
            return;
        }
        let (factor, slots) = &plan.steps[step];
        let mut free: Vec<usize> = Vec::with_capacity(slots.len());
        for &s in slots {
            if assign[s] == UNSET && !free.contains(&s) {
                free.push(s);
            }
        }
        let mut local = vec![0u8; slots.len()];
        for bits in 0..(1u32 << free.len()) {
            for (k, &s) in free.iter().enumerate() {
                assign[s] = ((bits >> k) & 1) as u8;
            }
            for (dst, &s) in local.iter_mut().zip(slots) {
                *dst = assign[s];
            }
            if let Some(val) = self.value(factor, &local) {
                let x2 = match factor {
                    Factor::X { .. } => x2_power + local[0] as usize,
                    _ => x2_power,
                };
                let next = acc * val;
                self.walk(plan, step + 1, assign, &next, x2);
            }
        }
        for &s in &free {
            assign[s] = UNSET;
        }
    }
}

/// Evaluates the expression on a system's coefficient tensors.
pub fn contract(expr: &ContractionExpr, sys: &QuadSystem) -> BinaryForm {
    contract_tensors(expr, &sys.tensors())
}

pub(crate) fn contract_tensors(expr: &ContractionExpr, t: &Tensors<Rational>) -> BinaryForm {
    let entries =
        t.a0.iter()
            .chain(t.a1.iter().flatten())
            .chain(t.a2.iter().flatten().flatten());
    let l = entries.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let lr = Rational::from_integer(l.clone());
    let scale = |v: &Rational| (v * &lr).to_integer();
    let mut ev = Evaluator {
        t: Tensors {
            a0: t.a0.each_ref().map(scale),
            a1: t.a1.each_ref().map(|r| r.each_ref().map(scale)),
            a2: t
                .a2
                .each_ref()
                .map(|m| m.each_ref().map(|r| r.each_ref().map(scale))),
        },
        out: Vec::new(),
    };
    let mut out = vec![Rational::zero(); expr.degree + 1];
    for plan in expr.plans.iter() {
        if plan.coeff.is_zero() {
            continue;
        }
        ev.out = vec![BigInt::zero(); expr.degree + 1];
        let mut assign = vec![UNSET; plan.n_indices];
        ev.walk(plan, 0, &mut assign, &BigInt::one(), 0);
        let d = plan
            .steps
            .iter()
            .filter(|(f, _)| matches!(f, Factor::A0 { .. } | Factor::A1 { .. } | Factor::A2 { .. }))
            .count();
        let k = &plan.coeff / Rational::from_integer(num_traits::pow(l.clone(), d));
        for (o, v) in out.iter_mut().zip(ev.out.drain(..)) {
            if !v.is_zero() {
                *o += &k * Rational::from_integer(v);
            }
        }
    }
    BinaryForm::from_coeffs(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn epsilon_values() {
        assert_eq!(EpsilonTensor::upper(0, 1), 1);
        assert_eq!(EpsilonTensor::lower(1, 0), -1);
        assert_eq!(EpsilonTensor::lower(1, 1), 0);
    }

    #[test]
    fn trace_form() {
        // a^α_{αβ} x^β on x' = x^2, y' = 0 is x1
        let g = ContractionExpr::parse("a^a_ab x^b").unwrap();
        let sys = QuadSystem::from_ints([0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(contract(&g, &sys), BinaryForm::x1());
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn malformed_expressions_are_rejected() {
        assert!(matches!(
            ContractionExpr::parse("a^a_ab x^c"),
            Err(ContractError::BadIndex { .. })
        ));
        assert!(matches!(
            ContractionExpr::parse("a^p_q e^pq"),
            Err(ContractError::Unpaired { .. })
        ));
        assert!(matches!(
            ContractionExpr::parse("b^p_q"),
            Err(ContractError::BadToken(_))
        ));
        assert!(matches!(
            ContractionExpr::sum([(int(1), "a^a_a"), (int(1), "a^a_ab x^b")]),
            Err(ContractError::MixedDegree(0, 1))
        ));
    }

    #[test]
    fn sums_of_terms() {
        // trace of the linear part, twice minus once
        let e = ContractionExpr::sum([(int(2), "a^a_a"), (int(-1), "a^b_b")]).unwrap();
        let sys = QuadSystem::from_ints([0, 3, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0]);
        assert_eq!(contract(&e, &sys), BinaryForm::constant(int(7)));
    }
}
