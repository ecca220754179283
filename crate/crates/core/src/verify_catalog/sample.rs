use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::manifest::field_text;
use super::{Assignment, CatalogError};
use crate::ring_core::{FiniteField, GaloisField, Polynomial, PrimeField, Ring};

/// Draws per sample, times the requested count, before giving up.
const RETRY_FACTOR: u64 = 1000;

fn value_at(constraint: &Polynomial<PrimeField>, k: &GaloisField, a: &Assignment) -> Result<u32, CatalogError> {
    let values = a.iter().map(|(s, v)| (s.clone(), *v)).collect();
    Ok(constraint.evaluate_parameters(k, &values)?)
}

/// Seeded rejection sampling of parameter assignments in `k` with
/// `constraint != 0`.
pub fn sample_parameters(
    constraint: &Polynomial<PrimeField>,
    k: &GaloisField,
    count: usize,
    seed: u64,
) -> Result<Vec<Assignment>, CatalogError> {
    if constraint.is_zero() {
        return Err(CatalogError::ZeroConstraint);
    }
    let symbols = constraint.ring().names();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = (count as u64).max(1) * RETRY_FACTOR;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts == budget {
            return Err(CatalogError::BudgetExhausted { field: field_text(k), size: k.order(), attempts });
        }
        attempts += 1;
        let a: Assignment = symbols.iter().map(|s| (s.clone(), k.element(rng.gen_range(0..k.order())))).collect();
        if !k.is_zero(&value_at(constraint, k, &a)?) {
            out.push(a);
        }
    }
    Ok(out)
}

/// Exhaustive search for an admissible assignment; `None` when the search
/// space exceeds `limit` points.
pub fn constraint_satisfiable(
    constraint: &Polynomial<PrimeField>,
    k: &GaloisField,
    limit: u64,
) -> Result<Option<bool>, CatalogError> {
    let symbols = constraint.ring().names();
    let q = k.order();
    let Some(size) = q.checked_pow(symbols.len() as u32).filter(|&s| s <= limit) else {
        return Ok(None);
    };
    for mut idx in 0..size {
        let mut a = Assignment::new();
        for s in symbols {
            a.insert(s.clone(), k.element(idx % q));
            idx /= q;
        }
        if !k.is_zero(&value_at(constraint, k, &a)?) {
            return Ok(Some(true));
        }
    }
    Ok(Some(false))
}

/// Elements of the subfield of order `order` inside `k`, in index order.
pub fn subfield_elements(k: &GaloisField, order: u64) -> Result<Vec<u32>, CatalogError> {
    let p = k.p() as u64;
    let sub_deg = crate::ring_core::log_p(order, p)
        .ok_or_else(|| CatalogError::Invalid(format!("{order} is not a power of {p}")))?;
    if sub_deg == 0 || k.degree() % sub_deg != 0 {
        return Err(CatalogError::Invalid(format!("{} has no subfield of order {order}", field_text(k))));
    }
    Ok(k.elements().into_iter().filter(|a| k.pow(a, order) == *a).collect())
}

/// Like [`sample_parameters`], but drops repeated assignments; returns fewer
/// than `count` when the admissible set is that small.
pub fn sample_distinct_parameters(
    constraint: &Polynomial<PrimeField>,
    k: &GaloisField,
    count: usize,
    seed: u64,
) -> Result<Vec<Assignment>, CatalogError> {
    let mut out: Vec<Assignment> = Vec::with_capacity(count);
    for a in sample_parameters(constraint, k, count * 20, seed)? {
        if out.len() == count {
            break;
        }
        if !out.contains(&a) {
            out.push(a);
        }
    }
    Ok(out)
}
