//! Exact density decomposition by subset enumeration.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::divergence::{DivergenceKind, Value};
use crate::error::{Error, Result};
use crate::instance::{DualModularInstance, GroundSet, SetFunction};
use crate::mask::{self, Mask};
use crate::rational::Rational;

/// Ordered parts `S_1, .., S_k` with densities `ρ_1 > .. > ρ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDecomposition {
    pub parts: Vec<Mask>,
    pub densities: Vec<Rational>,
    /// `ρ*_u = ρ_i` for `u ∈ S_i`.
    pub density_vector: Vec<Rational>,
    /// `f(S_i | S_<i)` and `g(S_i | S_<i)`.
    pub part_rewards: Vec<Rational>,
    pub part_costs: Vec<Rational>,
}

impl DensityDecomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `S_{≤i}` (0-based `i`).
    pub fn prefix(&self, i: usize) -> Mask {
        self.parts[..=i].iter().fold(0, |m, p| m | p)
    }

    /// Strict decrease of the part densities.
    pub fn strictly_decreasing(&self) -> bool {
        self.densities.windows(2).all(|w| w[0] > w[1])
    }
}

/// Best candidate seen so far: its reward, cost, and the running union of
/// all subsets attaining the same density.
#[derive(Clone)]
struct Best {
    f: Rational,
    g: Rational,
    union: Mask,
}

/// `f1/g1` vs `f2/g2` for positive costs.
fn cmp_density(f1: &Rational, g1: &Rational, f2: &Rational, g2: &Rational) -> Ordering {
    (f1 * g2).cmp(&(f2 * g1))
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(match cmp_density(&a.f, &a.g, &b.f, &b.g) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => Best {
                union: a.union | b.union,
                ..a
            },
        }),
    }
}

/// Densest nonempty `S ⊆ remaining` for the marginal pair
/// `f(· | given)`, `g(· | given)` over tabulated values. Returns the union
/// of all maximizers (global mask) and the density.
fn densest_in(f: &[Rational], g: &[Rational], given: Mask, remaining: Mask) -> Result<(Mask, Rational)> {
    let elems: Vec<usize> = mask::elements(remaining).collect();
    let m = elems.len();
    let lift = |k: u64| -> Mask {
        let mut s = 0;
        for (i, &e) in elems.iter().enumerate() {
            if k >> i & 1 == 1 {
                s |= mask::singleton(e);
            }
        }
        s
    };
    let f0 = &f[given as usize];
    let g0 = &g[given as usize];
    let marg = |s: Mask| {
        let i = (s | given) as usize;
        (&f[i] - f0, &g[i] - g0)
    };

    let infinite = (1..1u64 << m).into_par_iter().find_first(|&k| {
        let (fs, gs) = marg(lift(k));
        gs.is_zero() && fs.is_positive()
    });
    if let Some(k) = infinite {
        return Err(Error::InfiniteDensity(lift(k)));
    }

    let best = (1..1u64 << m)
        .into_par_iter()
        .fold(
            || None,
            |acc, k| {
                let s = lift(k);
                let (fs, gs) = marg(s);
                if gs.is_zero() {
                    // 0/0: no density
                    return acc;
                }
                merge(acc, Some(Best { f: fs, g: gs, union: s }))
            },
        )
        .reduce(|| None, merge)
        .ok_or(Error::UndefinedDensity)?;

    let density = &best.f / &best.g;
    let (fu, gu) = marg(best.union);
    if gu.is_zero() || fu / gu != density {
        return Err(Error::NotDualModular(
            "the union of densest subsets is not densest; f is not supermodular or g is not submodular".into(),
        ));
    }
    Ok((best.union, density))
}

fn check_size(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        Err(Error::GroundSetTooLarge { n, max_n })
    } else {
        Ok(())
    }
}

/// The union of all subsets of maximum density `f(S)/g(S)`, with that density.
pub fn maximal_densest_subset(inst: &DualModularInstance, max_n: usize) -> Result<(Mask, Rational)> {
    check_size(inst.n(), max_n)?;
    let f = inst.f_spec().tabulate(inst.n());
    let g = inst.g_spec().tabulate(inst.n());
    densest_in(&f, &g, 0, inst.full())
}

/// The subinstance on `V \ S` with the marginal functions `f(· | S)`, `g(· | S)`.
pub fn residual_instance(inst: &DualModularInstance, s: Mask) -> Result<DualModularInstance> {
    inst.check_mask(s)?;
    let full = inst.full();
    if s == full {
        return Err(Error::EmptyResidual);
    }
    if s == 0 {
        return Ok(inst.clone());
    }
    let elements: Vec<usize> = mask::elements(full & !s).collect();
    let ground = GroundSet::new(elements.iter().map(|&u| inst.ground().label(u).to_string()).collect())?;
    let f = marginal_spec(inst.f_spec(), s, &elements);
    let g = marginal_spec(inst.g_spec(), s, &elements);
    DualModularInstance::new(ground, f, g)
}

fn marginal_spec(h: &SetFunction, given: Mask, elements: &[usize]) -> SetFunction {
    match h {
        // flatten so that nested residuals evaluate the original function once
        SetFunction::Marginal {
            base,
            given: g0,
            elements: e0,
        } => SetFunction::Marginal {
            base: base.clone(),
            given: mask::elements(given).fold(*g0, |m, i| m | mask::singleton(e0[i])),
            elements: elements.iter().map(|&i| e0[i]).collect(),
        },
        _ => SetFunction::Marginal {
            base: Box::new(h.clone()),
            given,
            elements: elements.to_vec(),
        },
    }
}

/// Repeatedly extracts the maximal densest subset of the residual instance.
/// `max_n` bounds the ground set size (each level enumerates `2^|V_i|` subsets).
pub fn density_decomposition(inst: &DualModularInstance, max_n: usize) -> Result<DensityDecomposition> {
    let n = inst.n();
    check_size(n, max_n)?;
    let f = inst.f_spec().tabulate(n);
    let g = inst.g_spec().tabulate(n);
    let full = inst.full();

    let mut dec = DensityDecomposition {
        parts: Vec::new(),
        densities: Vec::new(),
        density_vector: vec![Rational::zero(); n],
        part_rewards: Vec::new(),
        part_costs: Vec::new(),
    };
    let mut done: Mask = 0;
    while done != full {
        let (part, rho) = densest_in(&f, &g, done, full & !done)?;
        if let Some(prev) = dec.densities.last() {
            if *prev <= rho {
                return Err(Error::NotDualModular(format!(
                    "part densities do not strictly decrease ({} then {})",
                    crate::rational::format(prev),
                    crate::rational::format(&rho)
                )));
            }
        }
        for u in mask::elements(part) {
            dec.density_vector[u] = rho.clone();
        }
        let next = done | part;
        dec.part_rewards.push(&f[next as usize] - &f[done as usize]);
        dec.part_costs.push(&g[next as usize] - &g[done as usize]);
        dec.parts.push(part);
        dec.densities.push(rho);
        done = next;
    }
    Ok(dec)
}

/// `Σ_i g(S_i | S_<i) · ϑ(ρ_i)`, the optimum of the convex program.
pub fn optimal_objective(dec: &DensityDecomposition, kind: &DivergenceKind) -> Result<Value> {
    let mut exact = Rational::zero();
    let mut approx = 0.0;
    for (cost, rho) in dec.part_costs.iter().zip(&dec.densities) {
        match kind.theta(rho)? {
            Value::Exact(t) => exact += cost * t,
            Value::Approx(t) => approx += crate::rational::to_f64(cost) * t,
        }
    }
    Ok(if kind.is_exact() {
        Value::Exact(exact)
    } else {
        Value::Approx(approx)
    })
}

/// Same, from the instance directly.
pub fn optimal_objective_of(inst: &DualModularInstance, kind: &DivergenceKind, max_n: usize) -> Result<Value> {
    let dec = density_decomposition(inst, max_n)?;
    optimal_objective(&dec, kind)
}
