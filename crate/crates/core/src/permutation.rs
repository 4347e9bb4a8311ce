//! Permutation vertices of the base polytopes, and allocations built from them.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{DualModularInstance, SetFunction};
use crate::mask::{self, Mask};
use crate::rational::{self, Rational};

/// Arrival order: `order[0]` arrives first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &u in &order {
            if u >= n || std::mem::replace(&mut seen[u], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{order:?} is not a bijection on 0..{n}"
                )));
            }
        }
        Ok(Permutation { order })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Permutation {
            order: self.order.iter().rev().copied().collect(),
        }
    }

    /// `(element, elements before it)` in arrival order.
    pub fn prefixes(&self) -> impl Iterator<Item = (usize, Mask)> + '_ {
        let mut before = 0;
        self.order.iter().map(move |&u| {
            let p = before;
            before |= mask::singleton(u);
            (u, p)
        })
    }
}

/// `h^σ(u) = h({u} | elements before u)`, indexed by element.
pub fn vertex(h: &SetFunction, sigma: &Permutation) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); sigma.len()];
    let mut prev = Rational::zero();
    let mut prefix = 0;
    for &u in sigma.order() {
        prefix |= mask::singleton(u);
        let cur = h.value(prefix);
        out[u] = &cur - &prev;
        prev = cur;
    }
    out
}

/// All orders of `0..n` in lexicographic order.
pub fn all_orders(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut p = cur.clone();
        if next_permutation(&mut p) {
            next = Some(p);
        }
        Some(cur)
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Reward shares `x` and cost shares `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl Allocation {
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(x.len(), y.len()));
        }
        Ok(Allocation { x, y })
    }

    /// The vertex `(f^σ, g^σ)`.
    pub fn vertex(inst: &DualModularInstance, sigma: &Permutation) -> Self {
        Allocation {
            x: vertex(inst.f_spec(), sigma),
            y: vertex(inst.g_spec(), sigma),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_of(&self, s: Mask) -> Rational {
        mask::elements(s).fold(Rational::zero(), |acc, u| acc + &self.x[u])
    }

    pub fn y_of(&self, s: Mask) -> Rational {
        mask::elements(s).fold(Rational::zero(), |acc, u| acc + &self.y[u])
    }

    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.x.iter().map(rational::to_f64).collect(),
            self.y.iter().map(rational::to_f64).collect(),
        )
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Allocation, lambda: &Rational) -> Result<Allocation> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let mu = Rational::from_integer(1.into()) - lambda;
        let comb = |a: &[Rational], b: &[Rational]| a.iter().zip(b).map(|(p, q)| p * lambda + q * &mu).collect();
        Ok(Allocation {
            x: comb(&self.x, &other.x),
            y: comb(&self.y, &other.y),
        })
    }
}

/// Sparse permutation distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPermutationList {
    entries: Vec<(Permutation, Rational)>,
}

impl WeightedPermutationList {
    pub fn new(entries: Vec<(Permutation, Rational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::WeightSum("0/1".into()));
        }
        let n = entries[0].0.len();
        let mut total = Rational::zero();
        for (p, w) in &entries {
            if p.len() != n {
                return Err(Error::LengthMismatch(p.len(), n));
            }
            if w.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative weight {}",
                    rational::format(w)
                )));
            }
            total += w;
        }
        if !rational::is_one(&total) {
            return Err(Error::WeightSum(rational::format(&total)));
        }
        Ok(WeightedPermutationList { entries })
    }

    pub fn single(p: Permutation) -> Self {
        WeightedPermutationList {
            entries: vec![(p, rational::int(1))],
        }
    }

    pub fn entries(&self) -> &[(Permutation, Rational)] {
        &self.entries
    }

    fn mixture(&self, h: &SetFunction, n: usize) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); n];
        for (p, w) in &self.entries {
            if p.len() != n {
                return Err(Error::LengthMismatch(p.len(), n));
            }
            for (o, v) in out.iter_mut().zip(vertex(h, p)) {
                *o += v * w;
            }
        }
        Ok(out)
    }
}

/// `x = Σ p_σ f^σ`, `y = Σ q_τ g^τ`.
pub fn allocation_from_mixture(
    inst: &DualModularInstance,
    p: &WeightedPermutationList,
    q: &WeightedPermutationList,
) -> Result<Allocation> {
    Ok(Allocation {
        x: p.mixture(inst.f_spec(), inst.n())?,
        y: q.mixture(inst.g_spec(), inst.n())?,
    })
}

/// Membership in `B≥_f` (for `x`) and `B≤_g` (for `y`). Witnesses are the
/// first violating subsets in ascending mask order; a total mismatch is
/// reported at `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub x_member: bool,
    pub x_witness: Option<Mask>,
    pub y_member: bool,
    pub y_witness: Option<Mask>,
}

impl MembershipReport {
    pub fn both(&self) -> bool {
        self.x_member && self.y_member
    }

    fn from_witnesses(x_witness: Option<Mask>, y_witness: Option<Mask>) -> Self {
        MembershipReport {
            x_member: x_witness.is_none(),
            x_witness,
            y_member: y_witness.is_none(),
            y_witness,
        }
    }
}

pub fn check_base_membership(inst: &DualModularInstance, a: &Allocation, max_n: usize) -> Result<MembershipReport> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::GroundSetTooLarge { n, max_n });
    }
    if a.len() != n {
        return Err(Error::LengthMismatch(a.len(), n));
    }
    let full = inst.full();
    let x_witness = if a.x_of(full) != inst.f(full) {
        Some(full)
    } else {
        (0..full).into_par_iter().find_first(|&s| a.x_of(s) < inst.f(s))
    };
    let y_witness = if a.y_of(full) != inst.g(full) {
        Some(full)
    } else {
        (0..full).into_par_iter().find_first(|&s| a.y_of(s) > inst.g(s))
    };
    Ok(MembershipReport::from_witnesses(x_witness, y_witness))
}

/// Floating-point variant with absolute slack `tol` on every inequality.
pub fn check_base_membership_f64(
    inst: &DualModularInstance,
    x: &[f64],
    y: &[f64],
    tol: f64,
    max_n: usize,
) -> Result<MembershipReport> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::GroundSetTooLarge { n, max_n });
    }
    if x.len() != n || y.len() != n {
        return Err(Error::LengthMismatch(x.len().max(y.len()), n));
    }
    let full = inst.full();
    let sum = |v: &[f64], s: Mask| mask::elements(s).map(|u| v[u]).sum::<f64>();
    let fv: Vec<f64> = (0..=full).map(|s| rational::to_f64(&inst.f(s))).collect();
    let gv: Vec<f64> = (0..=full).map(|s| rational::to_f64(&inst.g(s))).collect();
    let x_witness = if (sum(x, full) - fv[full as usize]).abs() > tol {
        Some(full)
    } else {
        (0..full).find(|&s| sum(x, s) < fv[s as usize] - tol)
    };
    let y_witness = if (sum(y, full) - gv[full as usize]).abs() > tol {
        Some(full)
    } else {
        (0..full).find(|&s| sum(y, s) > gv[s as usize] + tol)
    };
    Ok(MembershipReport::from_witnesses(x_witness, y_witness))
}

/// `ρ_u = x_u / y_u`.
pub fn induced_densities(a: &Allocation) -> Result<Vec<Rational>> {
    a.x.iter()
        .zip(&a.y)
        .enumerate()
        .map(|(u, (x, y))| {
            if y.is_zero() {
                Err(Error::ZeroCostCoordinate(u))
            } else {
                Ok(x / y)
            }
        })
        .collect()
}

/// Non-increasing order of `rho`, equal values by ascending element index.
pub fn sort_by_density<T: PartialOrd>(rho: &[T]) -> Permutation {
    let mut order: Vec<usize> = (0..rho.len()).collect();
    // stable, so ties keep ascending index order
    order.sort_by(|&a, &b| rho[b].partial_cmp(&rho[a]).unwrap_or(Ordering::Equal));
    Permutation { order }
}

/// Non-decreasing order, ties by ascending index.
pub fn sort_by_density_ascending<T: PartialOrd>(rho: &[T]) -> Permutation {
    let mut order: Vec<usize> = (0..rho.len()).collect();
    order.sort_by(|&a, &b| rho[a].partial_cmp(&rho[b]).unwrap_or(Ordering::Equal));
    Permutation { order }
}
