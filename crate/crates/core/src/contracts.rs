//! Combinatorial contracts: the agent picks `S` maximizing `α f(S) - g(S)`,
//! the principal keeps `(1 - α) f(S)`.

use num_traits::{One, Signed, Zero};

use crate::decomposition::DensityDecomposition;
use crate::divergence::{divergence, DivergenceKind};
use crate::error::{Error, Result};
use crate::instance::DualModularInstance;
use crate::mask::Mask;
use crate::permutation::Allocation;
use crate::rational::{self, Rational};

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha > Rational::one() {
        Err(Error::AlphaOutOfRange(rational::format(alpha)))
    } else {
        Ok(())
    }
}

/// `S_{≤i}` for the largest `i` with `ρ_i ≥ 1/α` (`∅` if none, and at `α = 0`).
/// Ties at `ρ_i = 1/α` resolve to the larger prefix, which the principal
/// prefers.
pub fn best_response(dec: &DensityDecomposition, alpha: &Rational) -> Result<Mask> {
    check_alpha(alpha)?;
    if alpha.is_zero() {
        return Ok(0);
    }
    // ρ_i ≥ 1/α  ⇔  α ρ_i ≥ 1
    let mut s = 0;
    for (part, rho) in dec.parts.iter().zip(&dec.densities) {
        if alpha * rho >= Rational::one() {
            s |= part;
        } else {
            break;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResponse {
    pub set: Mask,
    /// `α f(S) - g(S)`.
    pub value: Rational,
    /// Number of subsets attaining `value`.
    pub maximizers: usize,
}

/// Exhaustive `argmax_S α f(S) - g(S)`. Among maximizers: larger `f(S)`
/// first; then the union of the remaining candidates when it is itself one
/// of them; then the lowest mask.
pub fn best_response_bruteforce(
    inst: &DualModularInstance,
    alpha: &Rational,
    max_n: usize,
) -> Result<BruteForceResponse> {
    check_alpha(alpha)?;
    let n = inst.n();
    if n > max_n {
        return Err(Error::GroundSetTooLarge { n, max_n });
    }
    let mut best_value: Option<Rational> = None;
    let mut tied: Vec<(Mask, Rational)> = Vec::new();
    for s in 0..=inst.full() {
        let f = inst.f(s);
        let v = alpha * &f - inst.g(s);
        match &best_value {
            Some(b) if v < *b => {}
            Some(b) if v == *b => tied.push((s, f)),
            _ => {
                best_value = Some(v);
                tied.clear();
                tied.push((s, f));
            }
        }
    }
    let value = best_value.expect("the empty set is always a candidate");
    let maximizers = tied.len();
    let top_f = tied.iter().map(|(_, f)| f).max().cloned().expect("nonempty");
    let candidates: Vec<Mask> = tied.into_iter().filter(|(_, f)| *f == top_f).map(|(s, _)| s).collect();
    let union = candidates.iter().fold(0, |m, s| m | s);
    let set = if candidates.contains(&union) {
        union
    } else {
        candidates[0]
    };
    Ok(BruteForceResponse { set, value, maximizers })
}

/// `{1/ρ_i : ρ_i > 0} ∩ [0, 1]`, ascending.
pub fn critical_values(dec: &DensityDecomposition) -> Vec<Rational> {
    let mut out: Vec<Rational> = dec
        .densities
        .iter()
        .filter(|r| r.is_positive() && **r >= Rational::one())
        .map(|r| r.recip())
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalContract {
    pub alpha: Rational,
    pub set: Mask,
    pub principal_utility: Rational,
}

/// Best `(1 - α) f(best_response(α))` over critical `α`, ties to the
/// smaller `α`. Without critical values the principal gets nothing.
pub fn optimal_contract(inst: &DualModularInstance, dec: &DensityDecomposition) -> Result<OptimalContract> {
    let mut best = OptimalContract {
        alpha: Rational::zero(),
        set: 0,
        principal_utility: Rational::zero(),
    };
    let mut found = false;
    for alpha in critical_values(dec) {
        let s = best_response(dec, &alpha)?;
        let up = (Rational::one() - &alpha) * inst.f(s);
        if !found || up > best.principal_utility {
            best = OptimalContract {
                alpha,
                set: s,
                principal_utility: up,
            };
            found = true;
        }
    }
    Ok(best)
}

/// `HS_γ(x‖y) - (f(S) - γ g(S))`, non-negative for feasible allocations.
pub fn duality_gap(inst: &DualModularInstance, s: Mask, a: &Allocation, gamma: &Rational) -> Result<Rational> {
    inst.check_mask(s)?;
    let hs = divergence(&DivergenceKind::HockeyStick(gamma.clone()), &a.x, &a.y)?;
    let hs = hs.exact().cloned().expect("hockey stick is exact");
    Ok(hs - (inst.f(s) - gamma * inst.g(s)))
}

/// Binary64 variant for approximate allocations from the solver.
pub fn duality_gap_f64(inst: &DualModularInstance, s: Mask, x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    inst.check_mask(s)?;
    if x.len() != inst.n() || y.len() != inst.n() {
        return Err(Error::LengthMismatch(x.len(), inst.n()));
    }
    if let Some(u) = y.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroCostCoordinate(u));
    }
    let hs: f64 = x.iter().zip(y).map(|(a, b)| (a - gamma * b).max(0.0)).sum();
    Ok(hs - (rational::to_f64(&inst.f(s)) - gamma * rational::to_f64(&inst.g(s))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractRow {
    pub alpha: Rational,
    pub response: Mask,
    pub agent_utility: Rational,
    pub principal_utility: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractAnalysis {
    pub critical_values: Vec<Rational>,
    pub rows: Vec<ContractRow>,
    pub optimal: OptimalContract,
}

fn row(inst: &DualModularInstance, dec: &DensityDecomposition, alpha: Rational) -> Result<ContractRow> {
    let s = best_response(dec, &alpha)?;
    let f = inst.f(s);
    Ok(ContractRow {
        agent_utility: &alpha * &f - inst.g(s),
        principal_utility: (Rational::one() - &alpha) * f,
        response: s,
        alpha,
    })
}

pub fn analyze(inst: &DualModularInstance, dec: &DensityDecomposition) -> Result<ContractAnalysis> {
    let critical = critical_values(dec);
    let rows = critical
        .iter()
        .map(|a| row(inst, dec, a.clone()))
        .collect::<Result<_>>()?;
    Ok(ContractAnalysis {
        critical_values: critical,
        rows,
        optimal: optimal_contract(inst, dec)?,
    })
}

/// A single query at `α`.
pub fn query(inst: &DualModularInstance, dec: &DensityDecomposition, alpha: &Rational) -> Result<ContractRow> {
    row(inst, dec, alpha.clone())
}

/// Nonempty subsets with `f(S) - γ g(S) > 0`, i.e. positive agent utility
/// at `α = 1/γ`.
pub fn positive_utility_sets(inst: &DualModularInstance, gamma: &Rational) -> Vec<Mask> {
    (1..=inst.full())
        .filter(|&s| inst.f(s) - gamma * inst.g(s) > Rational::zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::density_decomposition;
    use crate::instance::{Edge, GroundSet, SetFunction};
    use crate::rational::{int, ratio};

    fn tri_iso() -> DualModularInstance {
        let f = SetFunction::EdgesInside(vec![Edge::unit(0, 1), Edge::unit(1, 2), Edge::unit(0, 2)]).scaled(int(3));
        DualModularInstance::new(GroundSet::indexed(4).unwrap(), f, SetFunction::linear_uniform(4)).unwrap()
    }

    #[test]
    fn best_responses_on_triangle_plus_isolated() {
        let inst = tri_iso();
        let dec = density_decomposition(&inst, 18).unwrap();
        assert_eq!(best_response(&dec, &int(0)).unwrap(), 0);
        assert_eq!(best_response(&dec, &ratio(1, 2)).unwrap(), 0b0111);
        // γ = 3 = ρ_1 exactly
        assert_eq!(best_response(&dec, &ratio(1, 3)).unwrap(), 0b0111);
        assert!(best_response(&dec, &ratio(3, 2)).is_err());
        let bf = best_response_bruteforce(&inst, &ratio(1, 2), 20).unwrap();
        assert_eq!((bf.set, bf.value, bf.maximizers), (0b0111, ratio(3, 2), 1));
    }

    #[test]
    fn critical_values_and_optimal_contract() {
        let inst = tri_iso();
        let dec = density_decomposition(&inst, 18).unwrap();
        assert_eq!(critical_values(&dec), vec![ratio(1, 3)]);
        let opt = optimal_contract(&inst, &dec).unwrap();
        assert_eq!(
            (opt.alpha, opt.set, opt.principal_utility),
            (ratio(1, 3), 0b0111, int(6))
        );
    }

    #[test]
    fn no_critical_values_means_no_contract() {
        let inst = DualModularInstance::new(
            GroundSet::indexed(2).unwrap(),
            SetFunction::linear_uniform(2),
            SetFunction::Linear(vec![int(2), int(2)]),
        )
        .unwrap();
        let dec = density_decomposition(&inst, 18).unwrap();
        assert!(critical_values(&dec).is_empty());
        let opt = optimal_contract(&inst, &dec).unwrap();
        assert_eq!((opt.alpha, opt.set, opt.principal_utility), (int(0), 0, int(0)));
    }

    #[test]
    fn proportional_tie_selects_everything() {
        let inst = DualModularInstance::new(
            GroundSet::indexed(3).unwrap(),
            SetFunction::linear_uniform(3),
            SetFunction::linear_uniform(3),
        )
        .unwrap();
        let bf = best_response_bruteforce(&inst, &int(1), 20).unwrap();
        assert_eq!((bf.set, bf.maximizers), (0b111, 8));
    }

    #[test]
    fn duality_gap_vanishes_at_full_set_for_zero_gamma() {
        let inst = tri_iso();
        let a = Allocation::vertex(&inst, &crate::permutation::Permutation::identity(4));
        assert_eq!(duality_gap(&inst, 0b1111, &a, &int(0)).unwrap(), int(0));
    }
}
