//! Exhaustive structure checks for the reward/cost pair.

use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::DualModularInstance;
use crate::error::{Error, Result};
use crate::mask::{self, Mask};
use crate::rational::Rational;

/// Outcome of one property check. A failed check names the first
/// violating pair `(A, B)` in ascending mask order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub witness: Option<(Mask, Mask)>,
}

impl PropertyCheck {
    fn from_witness(witness: Option<(Mask, Mask)>) -> Self {
        PropertyCheck {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// For supermodularity/submodularity the witness is a pair `(A, B)` with
/// `f(A) + f(B) > f(A ∩ B) + f(A ∪ B)` (resp. `<` for `g`); for
/// monotonicity it is `(A, A + u)` with the value failing to increase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub n: usize,
    pub f_supermodular: PropertyCheck,
    pub f_monotone: PropertyCheck,
    pub f_strictly_monotone: PropertyCheck,
    pub g_submodular: PropertyCheck,
    pub g_monotone: PropertyCheck,
    pub g_strictly_monotone: PropertyCheck,
}

impl StructureReport {
    /// Supermodular monotone `f`, submodular strictly monotone `g`.
    pub fn is_dual_modular(&self) -> bool {
        self.f_supermodular.holds && self.f_monotone.holds && self.g_submodular.holds && self.g_strictly_monotone.holds
    }

    /// Same, but only asking for a monotone cost.
    pub fn is_weakly_dual_modular(&self) -> bool {
        self.f_supermodular.holds && self.f_monotone.holds && self.g_submodular.holds && self.g_monotone.holds
    }

    pub fn checks(&self) -> [(&'static str, &PropertyCheck); 6] {
        [
            ("f_supermodular", &self.f_supermodular),
            ("f_monotone", &self.f_monotone),
            ("f_strictly_monotone", &self.f_strictly_monotone),
            ("g_submodular", &self.g_submodular),
            ("g_monotone", &self.g_monotone),
            ("g_strictly_monotone", &self.g_strictly_monotone),
        ]
    }

    /// Human-readable name and witness of the first failed check.
    pub fn first_failure(&self) -> String {
        self.checks()
            .iter()
            .find(|(_, c)| !c.holds)
            .map(|(name, c)| match c.witness {
                Some((a, b)) => format!("{name} fails at ({a:#b}, {b:#b})"),
                None => format!("{name} fails"),
            })
            .unwrap_or_else(|| "all checks pass".to_string())
    }
}

/// Brute force over all pairs of subsets. Costs `O(4^n)` evaluations, so
/// `n` must not exceed `max_n`.
pub fn verify_dual_modularity(inst: &DualModularInstance, max_n: usize) -> Result<StructureReport> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::GroundSetTooLarge { n, max_n });
    }
    let f = inst.f_spec().tabulate(n);
    let g = inst.g_spec().tabulate(n);
    let (f_super, f_mono, f_strict) = check_table(&f, n, Curvature::Super);
    let (g_sub, g_mono, g_strict) = check_table(&g, n, Curvature::Sub);
    Ok(StructureReport {
        n,
        f_supermodular: f_super,
        f_monotone: f_mono,
        f_strictly_monotone: f_strict,
        g_submodular: g_sub,
        g_monotone: g_mono,
        g_strictly_monotone: g_strict,
    })
}

#[derive(Clone, Copy)]
enum Curvature {
    Super,
    Sub,
}

fn check_table(values: &[Rational], n: usize, c: Curvature) -> (PropertyCheck, PropertyCheck, PropertyCheck) {
    match scaled_integers(values) {
        Some(ints) => check_scaled(&ints, n, c),
        None => {
            let lcm = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
            let big: Vec<BigInt> = values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
            check_scaled(&big, n, c)
        }
    }
}

/// Common-denominator numerators as `i128` when they all fit in `i64`, so
/// that sums of two never overflow.
fn scaled_integers(values: &[Rational]) -> Option<Vec<i128>> {
    let lcm = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    values
        .iter()
        .map(|v| (v.numer() * (&lcm / v.denom())).to_i64().map(i128::from))
        .collect()
}

fn check_scaled<T>(h: &[T], n: usize, c: Curvature) -> (PropertyCheck, PropertyCheck, PropertyCheck)
where
    T: Clone + Ord + Send + Sync,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let full = mask::full(n);
    let pair = (0..=full).into_par_iter().find_map_first(|a| {
        (a + 1..=full).find_map(|b| {
            let lhs = &h[a as usize] + &h[b as usize];
            let rhs = &h[(a & b) as usize] + &h[(a | b) as usize];
            let bad = match c {
                Curvature::Super => lhs > rhs,
                Curvature::Sub => lhs < rhs,
            };
            bad.then_some((a, b))
        })
    });
    let mut weak = None;
    let mut strict = None;
    'outer: for a in 0..=full {
        for u in 0..n {
            if mask::contains(a, u) {
                continue;
            }
            let b = a | mask::singleton(u);
            if strict.is_none() && h[b as usize] <= h[a as usize] {
                strict = Some((a, b));
            }
            if h[b as usize] < h[a as usize] {
                weak = Some((a, b));
                break 'outer;
            }
        }
    }
    (
        PropertyCheck::from_witness(pair),
        PropertyCheck::from_witness(weak),
        PropertyCheck::from_witness(strict),
    )
}
