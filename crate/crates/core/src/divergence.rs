//! ϑ-divergences `D_ϑ(x‖y) = Σ_u y_u ϑ(x_u / y_u)` and the convex-program objective.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::DualModularInstance;
use crate::mask::{self, Mask};
use crate::permutation::Allocation;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DivergenceKind {
    /// `ϑ(t) = t²`
    Quadratic,
    /// `ϑ(t) = t log t`
    EntropyKL,
    /// `ϑ(t) = -log t`
    EisenbergGale,
    /// `ϑ(t) = max(t - γ, 0)`, convex but not strictly.
    HockeyStick(Rational),
}

/// Exact for the algebraic kinds, binary64 for the logarithmic ones.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational::to_f64(r),
            Value::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}", rational::format(r)),
            Value::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl DivergenceKind {
    pub const STRICTLY_CONVEX: [DivergenceKind; 3] = [
        DivergenceKind::Quadratic,
        DivergenceKind::EntropyKL,
        DivergenceKind::EisenbergGale,
    ];

    pub fn is_strictly_convex(&self) -> bool {
        !matches!(self, DivergenceKind::HockeyStick(_))
    }

    /// Whether values are exact rationals.
    pub fn is_exact(&self) -> bool {
        matches!(self, DivergenceKind::Quadratic | DivergenceKind::HockeyStick(_))
    }

    pub fn name(&self) -> String {
        match self {
            DivergenceKind::Quadratic => "quadratic".into(),
            DivergenceKind::EntropyKL => "kl".into(),
            DivergenceKind::EisenbergGale => "eg".into(),
            DivergenceKind::HockeyStick(g) => format!("hs:{}", rational::format(g)),
        }
    }

    /// `ϑ(t)` for `t >= 0`.
    pub fn theta(&self, t: &Rational) -> Result<Value> {
        if t.is_negative() {
            return Err(Error::Domain(format!(
                "{}: negative argument {}",
                self.name(),
                rational::format(t)
            )));
        }
        Ok(match self {
            DivergenceKind::Quadratic => Value::Exact(t * t),
            DivergenceKind::HockeyStick(g) => Value::Exact(hinge(t - g)),
            DivergenceKind::EntropyKL => Value::Approx(self.theta_f64(rational::to_f64(t))),
            DivergenceKind::EisenbergGale => {
                if t.is_zero() {
                    return Err(Error::Domain("eg: -log 0 is undefined".into()));
                }
                Value::Approx(self.theta_f64(rational::to_f64(t)))
            }
        })
    }

    /// `ϑ(t)` in binary64; `0 log 0 = 0` and `-log 0 = +inf`.
    pub fn theta_f64(&self, t: f64) -> f64 {
        match self {
            DivergenceKind::Quadratic => t * t,
            DivergenceKind::EntropyKL => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            DivergenceKind::EisenbergGale => -t.ln(),
            DivergenceKind::HockeyStick(g) => (t - rational::to_f64(g)).max(0.0),
        }
    }

    /// `ϑ'(t)`; the hockey stick has none at `t = γ` and is rejected.
    pub fn theta_prime_f64(&self, t: f64) -> Result<f64> {
        match self {
            DivergenceKind::Quadratic => Ok(2.0 * t),
            DivergenceKind::EntropyKL => Ok(t.ln() + 1.0),
            DivergenceKind::EisenbergGale => Ok(-1.0 / t),
            DivergenceKind::HockeyStick(_) => Err(Error::Domain(format!("{} is not differentiable", self.name()))),
        }
    }

    /// `ζ(t) = ϑ(t) - t ϑ'(t)`.
    pub fn zeta_f64(&self, t: f64) -> Result<f64> {
        match self {
            DivergenceKind::Quadratic => Ok(-t * t),
            DivergenceKind::EntropyKL => Ok(-t),
            DivergenceKind::EisenbergGale => Ok(1.0 - t.ln()),
            DivergenceKind::HockeyStick(_) => Err(Error::Domain(format!("{} is not differentiable", self.name()))),
        }
    }

    /// Spectral norm of the `2x2` Hessian block of `(x, y) ↦ y ϑ(x/y)`.
    /// The block is rank one, so the norm is its trace.
    pub fn hessian_block_norm(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            DivergenceKind::Quadratic => Ok(2.0 * (x * x + y * y) / (y * y * y)),
            DivergenceKind::EntropyKL => Ok(1.0 / x + x / (y * y)),
            DivergenceKind::EisenbergGale => Ok(1.0 / y + y / (x * x)),
            DivergenceKind::HockeyStick(_) => Err(Error::NotStrictlyConvex(self.name())),
        }
    }
}

fn hinge(v: Rational) -> Rational {
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;

    /// `quadratic`, `kl`, `eg`, or `hs:γ` with a rational `γ >= 0`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quadratic" | "t2" => Ok(DivergenceKind::Quadratic),
            "kl" | "entropy" => Ok(DivergenceKind::EntropyKL),
            "eg" | "eisenberg-gale" => Ok(DivergenceKind::EisenbergGale),
            other => {
                let gamma = other
                    .strip_prefix("hs:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown divergence kind {s:?}")))?;
                let gamma = rational::parse(gamma)?;
                if gamma.is_negative() {
                    return Err(Error::InvalidArgument("hockey-stick gamma must be non-negative".into()));
                }
                Ok(DivergenceKind::HockeyStick(gamma))
            }
        }
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_pair<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        Err(Error::LengthMismatch(x.len(), y.len()))
    } else {
        Ok(())
    }
}

/// `Σ_u y_u ϑ(x_u / y_u)`. Every `y_u` must be positive.
pub fn divergence(kind: &DivergenceKind, x: &[Rational], y: &[Rational]) -> Result<Value> {
    check_pair(x, y)?;
    for (u, (xu, yu)) in x.iter().zip(y).enumerate() {
        if yu.is_zero() {
            return Err(Error::ZeroCostCoordinate(u));
        }
        if yu.is_negative() || xu.is_negative() {
            return Err(Error::Domain(format!("coordinate {u} is negative")));
        }
        if *kind == DivergenceKind::EisenbergGale && xu.is_zero() {
            return Err(Error::Domain(format!("eg: reward coordinate {u} is zero")));
        }
    }
    Ok(match kind {
        DivergenceKind::Quadratic => Value::Exact(x.iter().zip(y).map(|(a, b)| a * a / b).sum()),
        DivergenceKind::HockeyStick(g) => Value::Exact(x.iter().zip(y).map(|(a, b)| hinge(a - g * b)).sum()),
        _ => {
            let (xf, yf): (Vec<f64>, Vec<f64>) = x
                .iter()
                .zip(y)
                .map(|(a, b)| (rational::to_f64(a), rational::to_f64(b)))
                .unzip();
            Value::Approx(divergence_f64(kind, &xf, &yf))
        }
    })
}

/// Binary64 evaluation without domain checks; callers guarantee `y > 0`.
pub fn divergence_f64(kind: &DivergenceKind, x: &[f64], y: &[f64]) -> f64 {
    match kind {
        // y ϑ(x/y) simplified per kind to avoid a division where possible
        DivergenceKind::EntropyKL => x
            .iter()
            .zip(y)
            .map(|(&a, &b)| if a == 0.0 { 0.0 } else { a * (a / b).ln() })
            .sum(),
        DivergenceKind::EisenbergGale => x.iter().zip(y).map(|(&a, &b)| b * (b / a).ln()).sum(),
        _ => x.iter().zip(y).map(|(&a, &b)| b * kind.theta_f64(a / b)).sum(),
    }
}

/// `sup_S x(S) - γ y(S)` by enumeration (the empty set gives 0). The
/// reported subset is the union of all maximizers, itself a maximizer
/// since the objective is modular.
pub fn hockey_stick_sup_form(
    x: &[Rational],
    y: &[Rational],
    gamma: &Rational,
    max_n: usize,
) -> Result<(Rational, Mask)> {
    check_pair(x, y)?;
    let n = x.len();
    if n > max_n {
        return Err(Error::GroundSetTooLarge { n, max_n });
    }
    let w: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - gamma * b).collect();
    let mut best = Rational::zero();
    let mut union: Mask = 0;
    for s in 1..=mask::full(n) {
        let v: Rational = mask::elements(s).map(|u| &w[u]).sum();
        if v > best {
            best = v;
            union = s;
        } else if v == best {
            union |= s;
        }
    }
    debug_assert_eq!(mask::elements(union).map(|u| &w[u]).sum::<Rational>(), best);
    Ok((best, union))
}

/// `Φ_ϑ` at an allocation: `D_ϑ(x‖y)`.
pub fn objective(inst: &DualModularInstance, a: &Allocation, kind: &DivergenceKind) -> Result<Value> {
    if a.len() != inst.n() {
        return Err(Error::LengthMismatch(a.len(), inst.n()));
    }
    divergence(kind, &a.x, &a.y)
}

/// Closed-form spectral norm of the Hessian of `Φ(x, y)` at an interior
/// point: the maximum over the per-element blocks.
pub fn hessian_norm(kind: &DivergenceKind, x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    x.iter()
        .zip(y)
        .map(|(&a, &b)| kind.hessian_block_norm(a, b))
        .try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)))
}
