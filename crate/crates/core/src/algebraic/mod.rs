//! Prime-field arithmetic and random polynomials of bounded degree.

mod field;
mod poly;

pub use field::{is_prime, FieldElement, MAX_MODULUS};
pub use poly::{monomial_count, monomials, sample_polynomial, MultiPolynomial, Term, MAX_MONOMIALS};

use num_rational::Ratio;
use rand::Rng;

use crate::error::{arg, capacity, Result};

/// Whether `q > C(m, 2)` and `d >= m - 1`, the conditions under which a
/// uniformly random polynomial of degree at most `d` vanishes at `m` given
/// distinct points with probability exactly `q^-m`.
pub fn check_zero_probability_preconditions(q: u64, m: u64, d: u64) -> bool {
    let pairs = u128::from(m) * u128::from(m.saturating_sub(1)) / 2;
    u128::from(q) > pairs && d + 1 >= m
}

fn validate_points(t: usize, q: u64, points: &[Vec<u64>]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.len() != t {
            return arg(format!("point {i} has {} coordinates, expected {t}", p.len()));
        }
        if p.iter().any(|&c| c >= q) {
            return arg(format!("point {i} has a coordinate outside F_{q}"));
        }
        if points[..i].contains(p) {
            return arg(format!("point {i} duplicates an earlier point"));
        }
    }
    Ok(())
}

/// Fraction of `trials` sampled polynomials that vanish on every point.
pub fn empirical_zero_probability<R: Rng + ?Sized>(
    t: usize,
    d: usize,
    q: u64,
    points: &[Vec<u64>],
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    validate_points(t, q, points)?;
    if !check_zero_probability_preconditions(q, points.len() as u64, d as u64) {
        return arg(format!(
            "q = {q}, d = {d} do not guarantee exact vanishing probability at {} points",
            points.len()
        ));
    }
    if trials == 0 {
        return arg("at least one trial is required");
    }
    let mut hits = 0u64;
    for _ in 0..trials {
        let f = sample_polynomial(t, d, q, rng)?;
        if points.iter().all(|p| f.evaluate_raw(p) == 0) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Exact vanishing probability by iterating over every polynomial in the
/// space (feasible only when `q^C(t+d,d)` is small).
pub fn exact_zero_probability(t: usize, d: usize, q: u64, points: &[Vec<u64>]) -> Result<Ratio<u64>> {
    field::check_modulus(q)?;
    validate_points(t, q, points)?;
    let basis = monomials(t, d);
    let total = (q as u128).checked_pow(basis.len() as u32);
    let total = match total {
        Some(total) if total <= 10_000_000 => total as u64,
        _ => return capacity(format!("q^{} polynomials is too many to enumerate", basis.len())),
    };
    // values[i][j] = monomial j at point i.
    let values: Vec<Vec<u64>> = points
        .iter()
        .map(|p| {
            basis
                .iter()
                .map(|exps| {
                    let f = MultiPolynomial::from_terms(t, d, q, [(exps.clone(), 1)]).expect("basis monomial");
                    f.evaluate_raw(p)
                })
                .collect()
        })
        .collect();
    let mut coeffs = vec![0u64; basis.len()];
    let mut vanishing = 0u64;
    for _ in 0..total {
        let all_zero = values
            .iter()
            .all(|row| row.iter().zip(&coeffs).fold(0, |acc, (&v, &c)| (acc + v * c) % q) == 0);
        if all_zero {
            vanishing += 1;
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
    Ok(Ratio::new(vanishing, total))
}
