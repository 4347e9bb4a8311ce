//! The density-sorting gradient oracle and the partial derivative it minimizes.

use num_traits::{Signed, Zero};

use crate::divergence::{DivergenceKind, Value};
use crate::error::{Error, Result};
use crate::instance::DualModularInstance;
use crate::permutation::{self, Permutation};
use crate::rational::{self, Rational};

/// Elements by non-increasing density, ties by ascending index. The same
/// permutation serves every convex `ϑ`.
pub fn gradient_oracle<T: PartialOrd>(inst: &DualModularInstance, rho: &[T]) -> Result<Permutation> {
    if rho.len() != inst.n() {
        return Err(Error::LengthMismatch(rho.len(), inst.n()));
    }
    Ok(permutation::sort_by_density(rho))
}

/// `∂Φ/∂p_σ = Σ_v f^σ_v ϑ'(ρ_v) + Σ_v g^σ_v (ϑ(ρ_v) - ρ_v ϑ'(ρ_v))`.
///
/// Exact for the quadratic kind; binary64 for the logarithmic kinds, which
/// need `ρ_v > 0`. The hockey stick is not differentiable.
pub fn partial_derivative(
    inst: &DualModularInstance,
    rho: &[Rational],
    sigma: &Permutation,
    kind: &DivergenceKind,
) -> Result<Value> {
    check(inst, rho.len(), sigma)?;
    match kind {
        DivergenceKind::Quadratic => {
            let fs = permutation::vertex(inst.f_spec(), sigma);
            let gs = permutation::vertex(inst.g_spec(), sigma);
            let two = rational::int(2);
            let v = rho
                .iter()
                .zip(fs.iter().zip(&gs))
                .fold(Rational::zero(), |acc, (r, (f, g))| acc + f * &two * r - g * r * r);
            Ok(Value::Exact(v))
        }
        DivergenceKind::HockeyStick(_) => Err(Error::Domain(format!("{kind} is not differentiable"))),
        _ => {
            if let Some(u) = rho.iter().position(|r| !r.is_positive()) {
                return Err(Error::Domain(format!(
                    "{kind}: density of element {u} must be positive"
                )));
            }
            let rf: Vec<f64> = rho.iter().map(rational::to_f64).collect();
            partial_derivative_f64(inst, &rf, sigma, kind).map(Value::Approx)
        }
    }
}

pub fn partial_derivative_f64(
    inst: &DualModularInstance,
    rho: &[f64],
    sigma: &Permutation,
    kind: &DivergenceKind,
) -> Result<f64> {
    check(inst, rho.len(), sigma)?;
    let fs = permutation::vertex(inst.f_spec(), sigma);
    let gs = permutation::vertex(inst.g_spec(), sigma);
    let mut total = 0.0;
    for (u, &r) in rho.iter().enumerate() {
        total += rational::to_f64(&fs[u]) * kind.theta_prime_f64(r)? + rational::to_f64(&gs[u]) * kind.zeta_f64(r)?;
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::Domain(format!(
            "{kind}: derivative is not finite at the given densities"
        )))
    }
}

fn check(inst: &DualModularInstance, len: usize, sigma: &Permutation) -> Result<()> {
    if len != inst.n() {
        return Err(Error::LengthMismatch(len, inst.n()));
    }
    if sigma.len() != inst.n() {
        return Err(Error::LengthMismatch(sigma.len(), inst.n()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{GroundSet, SetFunction};
    use crate::rational::int;

    #[test]
    fn single_element_quadratic() {
        let inst = DualModularInstance::new(
            GroundSet::indexed(1).unwrap(),
            SetFunction::linear_uniform(1),
            SetFunction::linear_uniform(1),
        )
        .unwrap();
        let v = partial_derivative(&inst, &[int(1)], &Permutation::identity(1), &DivergenceKind::Quadratic).unwrap();
        assert_eq!(v, Value::Exact(int(1)));
        assert!(partial_derivative(
            &inst,
            &[int(1)],
            &Permutation::identity(1),
            &DivergenceKind::HockeyStick(int(1))
        )
        .is_err());
        assert!(partial_derivative(&inst, &[int(0)], &Permutation::identity(1), &DivergenceKind::EntropyKL).is_err());
    }

    #[test]
    fn oracle_checks_length() {
        let inst = DualModularInstance::new(
            GroundSet::indexed(2).unwrap(),
            SetFunction::linear_uniform(2),
            SetFunction::linear_uniform(2),
        )
        .unwrap();
        assert!(gradient_oracle(&inst, &[1.0]).is_err());
        assert_eq!(gradient_oracle(&inst, &[1.0, 2.0]).unwrap().order(), &[1, 0]);
    }
}
