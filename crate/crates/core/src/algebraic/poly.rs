use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{check_modulus, FieldElement};
use crate::error::{arg, capacity, Result};

/// Upper limit on `C(t + d, d)` for sampling and dense iteration.
pub const MAX_MONOMIALS: u128 = 1 << 20;

/// `C(t + d, d)`, the number of monomials of total degree at most `d` in `t`
/// variables.
pub fn monomial_count(t: usize, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (t as u128 + i) / i;
    }
    acc
}

/// Exponent vectors of total degree at most `d` in graded-lexicographic
/// order: by total degree, then lexicographically descending, so for `t = 2`
/// the order is `1, X1, X2, X1^2, X1 X2, X2^2, ...`.
pub fn monomials(t: usize, d: usize) -> Vec<Vec<u32>> {
    fn fill(rest: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == current.len() {
            current[slot] = rest;
            out.push(current.clone());
            return;
        }
        for e in (0..=rest).rev() {
            current[slot] = e;
            fill(rest - e, slot + 1, current, out);
        }
    }
    let mut out = Vec::new();
    if t == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut current = vec![0u32; t];
    for deg in 0..=d as u32 {
        fill(deg, 0, &mut current, &mut out);
    }
    out
}

/// A polynomial over `F_q` in `t` variables of total degree at most `d`.
///
/// Only nonzero terms are stored, in graded-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPolynomial {
    t: usize,
    d: usize,
    q: u64,
    terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coef: u64,
}

impl MultiPolynomial {
    pub fn zero(t: usize, d: usize, q: u64) -> Result<Self> {
        check_modulus(q)?;
        Ok(MultiPolynomial {
            t,
            d,
            q,
            terms: Vec::new(),
        })
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Coefficients
    /// are reduced mod `q`; repeated exponents are summed.
    pub fn from_terms<I>(t: usize, d: usize, q: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        check_modulus(q)?;
        let mut collected: Vec<Term> = Vec::new();
        for (exps, coef) in terms {
            if exps.len() != t {
                return arg(format!("exponent vector {exps:?} has arity {}, expected {t}", exps.len()));
            }
            let degree: u64 = exps.iter().map(|&e| u64::from(e)).sum();
            if degree > d as u64 {
                return arg(format!("monomial {exps:?} has degree {degree} > {d}"));
            }
            match collected.iter_mut().find(|term| term.exps == exps) {
                Some(term) => term.coef = (term.coef + coef % q) % q,
                None => collected.push(Term { exps, coef: coef % q }),
            }
        }
        collected.retain(|term| term.coef != 0);
        collected.sort_by(|a, b| graded_cmp(&a.exps, &b.exps));
        Ok(MultiPolynomial {
            t,
            d,
            q,
            terms: collected,
        })
    }

    pub fn variables(&self) -> usize {
        self.t
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> u64 {
        self.terms
            .iter()
            .find(|term| term.exps == exps)
            .map_or(0, |term| term.coef)
    }

    pub fn evaluate(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.t {
            return arg(format!("point has {} coordinates, expected {}", x.len(), self.t));
        }
        if let Some(bad) = x.iter().find(|e| e.modulus() != self.q) {
            return arg(format!("coordinate modulus {} differs from {}", bad.modulus(), self.q));
        }
        let raw: Vec<u64> = x.iter().map(|e| e.value()).collect();
        Ok(FieldElement::new_unchecked(self.evaluate_raw(&raw), self.q))
    }

    /// Evaluation on reduced coordinates; the caller guarantees arity.
    pub(crate) fn evaluate_raw(&self, x: &[u64]) -> u64 {
        let q = self.q;
        let mut acc = 0u64;
        for term in &self.terms {
            let mut value = term.coef;
            for (&xi, &e) in x.iter().zip(&term.exps) {
                if e > 0 {
                    value = value * FieldElement::new_unchecked(xi, q).pow(u64::from(e)).value() % q;
                }
            }
            acc = (acc + value) % q;
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomials serialise")
    }
}

fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// Draws every one of the `C(t + d, d)` coefficients independently and
/// uniformly from `F_q`, in graded-lexicographic monomial order.
pub fn sample_polynomial<R: Rng + ?Sized>(t: usize, d: usize, q: u64, rng: &mut R) -> Result<MultiPolynomial> {
    check_modulus(q)?;
    let count = monomial_count(t, d);
    if count > MAX_MONOMIALS {
        return capacity(format!("{count} monomials exceeds the limit {MAX_MONOMIALS}"));
    }
    let terms = monomials(t, d)
        .into_iter()
        .map(|exps| {
            let coef = rng.gen_range(0..q);
            Term { exps, coef }
        })
        .filter(|term| term.coef != 0)
        .collect();
    Ok(MultiPolynomial { t, d, q, terms })
}
