//! A-priori Frank-Wolfe error bounds.
//!
//! The chain runs on the normalized instance (`f(V) = g(V) = 1`):
//! curvature `C ≤ Diam² · ‖∇²Φ‖ ≤ 4 · H`, objective gap `≤ 2C/(T+2)`, and
//! the strong-convexity-type lower bound on the objective along the segment
//! to the optimum turns the gap into a bound on `‖ρ - ρ*‖₂`. Results are
//! reported back in the units of the instance as given.

use super::DivergenceKind;
use crate::error::{Error, Result};
use crate::instance::{extremes, normalize, DualModularInstance};
use crate::rational;

/// Leading exponents of the absolute density bound in `g_min` and `T + 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundExponents {
    pub g_min: f64,
    pub iterations: f64,
}

/// The constants of the chain for given extremal marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChain {
    pub hessian_upper: f64,
    pub curvature_upper: f64,
    pub objective_gap_upper: f64,
    pub absolute_density_upper: f64,
    /// `None` when `f_min = 0`.
    pub multiplicative_density_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBounds {
    pub kind: DivergenceKind,
    pub iterations: usize,
    /// Curvature constant of the normalized objective.
    pub curvature_upper: f64,
    /// `Φ(x^(T), y^(T)) - Φ*` in the instance's own units.
    pub objective_gap_upper: f64,
    /// `‖ρ^(T) - ρ*‖₂` in the instance's own units.
    pub absolute_density_upper: f64,
    /// `max_u |ρ^(T)_u - ρ*_u| / ρ*_u`; suppressed when `f_min = 0`.
    pub multiplicative_density_upper: Option<f64>,
    /// The chain on the normalized instance.
    pub normalized: BoundChain,
    pub f_min: f64,
    pub f_max: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub exponents: BoundExponents,
    pub warnings: Vec<String>,
}

impl DivergenceKind {
    fn bound_exponents(&self) -> BoundExponents {
        let g_min = match self {
            DivergenceKind::Quadratic => -2.5,
            _ => -2.0,
        };
        BoundExponents {
            g_min,
            iterations: -0.5,
        }
    }
}

/// The chain for normalized extremal marginals. The Hessian bound takes
/// `x_u ≤ 1` and `y_u ≤ 1`, which holds after normalization.
pub fn bound_chain(kind: &DivergenceKind, f_min: f64, g_min: f64, g_max: f64, iterations: usize) -> Result<BoundChain> {
    let inv = |v: f64| if v > 0.0 { 1.0 / v } else { f64::INFINITY };
    let hessian_upper = match kind {
        DivergenceKind::Quadratic => 4.0 * inv(g_min).powi(3),
        DivergenceKind::EntropyKL => inv(g_min).powi(2) + inv(f_min),
        DivergenceKind::EisenbergGale => inv(g_min) + inv(f_min).powi(2),
        DivergenceKind::HockeyStick(_) => return Err(Error::NotStrictlyConvex(kind.name())),
    };
    let curvature_upper = 4.0 * hessian_upper;
    let gap = 2.0 * curvature_upper / (iterations as f64 + 2.0);
    let abs_sq = match kind {
        DivergenceKind::Quadratic => gap * g_max * inv(g_min).powi(2),
        DivergenceKind::EntropyKL => 2.0 * gap * inv(f_min) * inv(g_min).powi(2),
        _ => 2.0 * gap * inv(g_min).powi(3),
    };
    let absolute = abs_sq.sqrt();
    // ρ*_u ≥ f_min / g_max
    let multiplicative = (f_min > 0.0).then(|| absolute * g_max / f_min);
    Ok(BoundChain {
        hessian_upper,
        curvature_upper,
        objective_gap_upper: gap,
        absolute_density_upper: absolute,
        multiplicative_density_upper: multiplicative,
    })
}

/// Bounds after `T` Frank-Wolfe steps. Works on any instance: the chain
/// is evaluated on the normalized copy and rescaled.
pub fn error_bounds(inst: &DualModularInstance, kind: &DivergenceKind, iterations: usize) -> Result<ErrorBounds> {
    if !kind.is_strictly_convex() {
        return Err(Error::NotStrictlyConvex(kind.name()));
    }
    let fv = rational::to_f64(&inst.f_total());
    let gv = rational::to_f64(&inst.g_total());
    let norm = normalize(inst)?;
    let ext = extremes(&norm);
    let (f_min, f_max, g_min, g_max) = (
        rational::to_f64(&ext.f_min),
        rational::to_f64(&ext.f_max),
        rational::to_f64(&ext.g_min),
        rational::to_f64(&ext.g_max),
    );
    let chain = bound_chain(kind, f_min, g_min, g_max, iterations)?;
    let mut warnings = Vec::new();
    if g_min == 0.0 {
        warnings.push(format!(
            "g_min = 0 at element {}; the cost is not strictly monotone and no bound is finite",
            inst.ground().label(ext.g_min_at)
        ));
    }
    if f_min == 0.0 {
        warnings.push(format!(
            "f_min = 0 at element {}; the multiplicative bound is suppressed",
            inst.ground().label(ext.f_min_at)
        ));
    }
    let gap_scale = match kind {
        DivergenceKind::Quadratic => fv * fv / gv,
        DivergenceKind::EntropyKL => fv,
        _ => gv,
    };
    Ok(ErrorBounds {
        kind: kind.clone(),
        iterations,
        curvature_upper: chain.curvature_upper,
        objective_gap_upper: chain.objective_gap_upper * gap_scale,
        absolute_density_upper: chain.absolute_density_upper * fv / gv,
        multiplicative_density_upper: chain.multiplicative_density_upper,
        normalized: chain,
        f_min,
        f_max,
        g_min,
        g_max,
        exponents: kind.bound_exponents(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Edge, GroundSet, SetFunction};

    fn p3() -> DualModularInstance {
        DualModularInstance::new(
            GroundSet::indexed(3).unwrap(),
            SetFunction::EdgesInside(vec![Edge::unit(0, 1), Edge::unit(1, 2)]),
            SetFunction::linear_uniform(3),
        )
        .unwrap()
    }

    #[test]
    fn quadratic_constants_on_p3() {
        let b = error_bounds(&normalize(&p3()).unwrap(), &DivergenceKind::Quadratic, 98).unwrap();
        assert!((b.curvature_upper - 432.0).abs() < 1e-9);
        assert!((b.objective_gap_upper - 8.64).abs() < 1e-12);
        assert!(b.multiplicative_density_upper.is_none());
        assert_eq!(b.warnings.len(), 1);
        // raw units: gap scales by f(V)^2 / g(V) = 4/3
        let raw = error_bounds(&p3(), &DivergenceKind::Quadratic, 98).unwrap();
        assert!((raw.objective_gap_upper - 8.64 * 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn bounds_vanish_as_iterations_grow() {
        let a = bound_chain(&DivergenceKind::EntropyKL, 0.2, 0.3, 0.5, 10).unwrap();
        let b = bound_chain(&DivergenceKind::EntropyKL, 0.2, 0.3, 0.5, 1_000_000).unwrap();
        assert!(b.objective_gap_upper < a.objective_gap_upper / 1000.0);
        assert!(b.multiplicative_density_upper.unwrap() < a.multiplicative_density_upper.unwrap());
    }

    #[test]
    fn hockey_stick_has_no_bounds() {
        assert!(error_bounds(&p3(), &DivergenceKind::HockeyStick(rational::int(1)), 10).is_err());
    }
}
