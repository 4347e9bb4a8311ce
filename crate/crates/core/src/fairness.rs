//! Fairness characterizations of an allocation: density agreement,
//! lexicographic optimality and the locally maximin condition.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::decomposition::DensityDecomposition;
use crate::error::{Error, Result};
use crate::instance::DualModularInstance;
use crate::mask::{self, Mask};
use crate::permutation::{induced_densities, Allocation};
use crate::rational::Rational;

/// One realized density level `ρ` and its upper level set `S^(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub density: Rational,
    pub set: Mask,
    /// `x(S) - f(S)`, zero when tight.
    pub reward_excess: Rational,
    /// `g(S) - y(S)`, zero when tight.
    pub cost_deficit: Rational,
}

impl Threshold {
    pub fn is_tight(&self) -> bool {
        self.reward_excess.is_zero() && self.cost_deficit.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximinReport {
    pub is_locally_maximin: bool,
    /// Strictly decreasing densities.
    pub thresholds: Vec<Threshold>,
    /// Index into `thresholds` of the first non-tight level.
    pub first_violation: Option<usize>,
}

/// Tests tightness at every distinct induced density; `S^(ρ)` only changes
/// at those values.
pub fn is_locally_maximin(inst: &DualModularInstance, a: &Allocation) -> Result<MaximinReport> {
    if a.len() != inst.n() {
        return Err(Error::LengthMismatch(a.len(), inst.n()));
    }
    let rho = induced_densities(a)?;
    let mut levels: Vec<&Rational> = rho.iter().collect();
    levels.sort_by(|p, q| q.cmp(p));
    levels.dedup();
    let thresholds: Vec<Threshold> = levels
        .into_iter()
        .map(|t| {
            let set = mask::from_elements((0..rho.len()).filter(|&u| rho[u] >= *t));
            Threshold {
                density: t.clone(),
                set,
                reward_excess: a.x_of(set) - inst.f(set),
                cost_deficit: inst.g(set) - a.y_of(set),
            }
        })
        .collect();
    let first_violation = thresholds.iter().position(|t| !t.is_tight());
    Ok(MaximinReport {
        is_locally_maximin: first_violation.is_none(),
        thresholds,
        first_violation,
    })
}

fn sorted_desc<T: PartialOrd + Clone>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort_by(|p, q| q.partial_cmp(p).unwrap_or(Ordering::Equal));
    s
}

/// Lexicographic comparison of sorted-descending density vectors.
/// `Less` means `a` is lex-better (smaller).
pub fn lex_compare<T: PartialOrd + Clone>(a: &[T], b: &[T]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let (sa, sb) = (sorted_desc(a), sorted_desc(b));
    Ok(sa
        .iter()
        .zip(&sb)
        .map(|(p, q)| p.partial_cmp(q).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// (i) induced densities equal `ρ*` exactly.
    pub densities_match: bool,
    /// (iii) locally maximin.
    pub locally_maximin: bool,
    /// (i) and (iii) agree.
    pub agree: bool,
    /// Sorted induced densities compared against `ρ*`.
    pub lex_vs_optimal: Ordering,
    /// (ii) relative to `ρ*`: equal when (i) holds, strictly worse when
    /// (iii) fails.
    pub lex_consistent: bool,
    pub maximin: MaximinReport,
}

pub fn equivalence_report(
    inst: &DualModularInstance,
    a: &Allocation,
    dec: &DensityDecomposition,
) -> Result<EquivalenceReport> {
    let rho = induced_densities(a)?;
    if rho.len() != dec.density_vector.len() {
        return Err(Error::LengthMismatch(rho.len(), dec.density_vector.len()));
    }
    let maximin = is_locally_maximin(inst, a)?;
    let densities_match = rho == dec.density_vector;
    let lex = lex_compare(&rho, &dec.density_vector)?;
    let lex_consistent =
        (!densities_match || lex == Ordering::Equal) && (maximin.is_locally_maximin || lex == Ordering::Greater);
    Ok(EquivalenceReport {
        densities_match,
        locally_maximin: maximin.is_locally_maximin,
        agree: densities_match == maximin.is_locally_maximin,
        lex_vs_optimal: lex,
        lex_consistent,
        maximin,
    })
}
