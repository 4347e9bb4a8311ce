//! Ground sets and dual-modular instances.

mod function;
mod verify;

use std::collections::HashSet;

use num_traits::{One, Zero};

pub use function::{Edge, SetFunction};
pub use verify::{verify_dual_modularity, PropertyCheck, StructureReport};

use crate::error::{Error, Result};
use crate::mask::{self, Mask};
use crate::permutation::{self, Permutation};
use crate::rational::{self, Rational};

/// Labelled ground set `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::schema("labels", "ground set must have at least one element"));
        }
        if labels.len() > mask::MAX_ELEMENTS {
            return Err(Error::schema(
                "labels",
                format!(
                    "at most {} elements are supported, got {}",
                    mask::MAX_ELEMENTS,
                    labels.len()
                ),
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::schema("labels", format!("duplicate label {l:?}")));
            }
        }
        Ok(GroundSet { labels })
    }

    /// Labels `"0"`, `"1"`, ...
    pub fn indexed(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn full_mask(&self) -> Mask {
        mask::full(self.size())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of(&self, labels: &[&str]) -> Result<Mask> {
        labels.iter().try_fold(0, |m, l| {
            self.index_of(l)
                .map(|u| m | mask::singleton(u))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown label {l:?}")))
        })
    }

    pub fn labels_of(&self, s: Mask) -> Vec<String> {
        mask::elements(s).map(|u| self.labels[u].clone()).collect()
    }
}

/// A ground set with reward `f` and cost `g`.
///
/// Construction only checks the cheap invariants: well-formed specs,
/// `f(V) >= 0`, `g(V) > 0`, and `f(V) = g(V) = 1` when `normalized` is set.
/// Super/submodularity is asserted by [`verify_dual_modularity`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualModularInstance {
    ground: GroundSet,
    f: SetFunction,
    g: SetFunction,
    normalized: bool,
}

impl DualModularInstance {
    pub fn new(ground: GroundSet, f: SetFunction, g: SetFunction) -> Result<Self> {
        Self::with_flag(ground, f, g, false)
    }

    pub fn with_flag(ground: GroundSet, f: SetFunction, g: SetFunction, normalized: bool) -> Result<Self> {
        let n = ground.size();
        f.validate(n, "f")?;
        g.validate(n, "g")?;
        let full = ground.full_mask();
        if g.value(full) <= Rational::zero() {
            return Err(Error::ZeroTotal);
        }
        if normalized && !(f.value(full).is_one() && g.value(full).is_one()) {
            return Err(Error::schema(
                "normalized",
                "flag is set but f(V) = g(V) = 1 does not hold",
            ));
        }
        Ok(DualModularInstance {
            ground,
            f,
            g,
            normalized,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn full(&self) -> Mask {
        self.ground.full_mask()
    }

    pub fn f_spec(&self) -> &SetFunction {
        &self.f
    }

    pub fn g_spec(&self) -> &SetFunction {
        &self.g
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn f(&self, s: Mask) -> Rational {
        self.f.value(s)
    }

    pub fn g(&self, s: Mask) -> Rational {
        self.g.value(s)
    }

    pub fn f_total(&self) -> Rational {
        self.f(self.full())
    }

    pub fn g_total(&self) -> Rational {
        self.g(self.full())
    }

    pub fn check_mask(&self, s: Mask) -> Result<()> {
        if mask::is_valid(s, self.n()) {
            Ok(())
        } else {
            Err(Error::InvalidMask { mask: s, n: self.n() })
        }
    }

    /// Same ground set, new functions.
    pub fn with_functions(&self, f: SetFunction, g: SetFunction) -> Result<Self> {
        DualModularInstance::new(self.ground.clone(), f, g)
    }
}

/// `g(S) + eta * |S|`, strictly monotone for any `eta > 0` when `g` is monotone.
pub fn perturb_strict(g: &SetFunction, eta: Rational) -> Result<SetFunction> {
    if eta < Rational::zero() {
        return Err(Error::NegativeEta(rational::format(&eta)));
    }
    Ok(SetFunction::Perturbed {
        base: Box::new(g.clone()),
        eta,
    })
}

fn complement_of(h: &SetFunction, n: usize) -> SetFunction {
    match h {
        // h(empty) = 0 makes complementing an involution
        SetFunction::ComplementOf { base, n: m } if *m == n => (**base).clone(),
        _ => SetFunction::ComplementOf {
            base: Box::new(h.clone()),
            n,
        },
    }
}

/// The instance `(V; g_bar, f_bar)` with `g_bar(S) = g(V) - g(V \ S)` as
/// reward and `f_bar(S) = f(V) - f(V \ S)` as cost.
///
/// Requires a verified dual-modular instance whose reward is strictly
/// monotone as well, so that the new cost is.
pub fn complement_instance(inst: &DualModularInstance, max_n: usize) -> Result<DualModularInstance> {
    let report = verify_dual_modularity(inst, max_n)?;
    if !report.f_supermodular.holds || !report.g_submodular.holds || !report.f_monotone.holds {
        return Err(Error::NotDualModular(report.first_failure()));
    }
    for (name, check) in [("f", &report.f_strictly_monotone), ("g", &report.g_strictly_monotone)] {
        if !check.holds {
            let (a, b) = check.witness.expect("failed checks carry a witness");
            return Err(Error::NotStrictlyMonotone(format!(
                "{name}({:?}) >= {name}({:?})",
                inst.ground.labels_of(a),
                inst.ground.labels_of(b)
            )));
        }
    }
    let n = inst.n();
    DualModularInstance::with_flag(
        inst.ground.clone(),
        complement_of(&inst.g, n),
        complement_of(&inst.f, n),
        inst.normalized,
    )
}

/// Rescales so that `f(V) = g(V) = 1`.
pub fn normalize(inst: &DualModularInstance) -> Result<DualModularInstance> {
    if inst.normalized {
        return Ok(inst.clone());
    }
    let (fv, gv) = (inst.f_total(), inst.g_total());
    if fv.is_zero() || gv.is_zero() {
        return Err(Error::ZeroTotal);
    }
    let f = inst.f.clone().scaled(fv.recip());
    let g = inst.g.clone().scaled(gv.recip());
    DualModularInstance::with_flag(inst.ground.clone(), f, g, true)
}

/// Permutation-extremal marginals over all vertices `f^σ`, `g^σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub f_min: Rational,
    pub f_max: Rational,
    pub g_min: Rational,
    pub g_max: Rational,
    /// Elements attaining `f_min` and `g_min`.
    pub f_min_at: usize,
    pub g_min_at: usize,
    /// Result of the exhaustive cross-check over all `n!` permutations,
    /// when it was run (`n <= 7`).
    pub brute_force_agrees: Option<bool>,
}

const EXTREMES_CROSS_CHECK_N: usize = 7;

/// Closed forms valid on dual-modular instances:
/// `f_min = min f({u})`, `f_max = max f({u} | V - u)`,
/// `g_min = min g({u} | V - u)`, `g_max = max g({u})`.
pub fn extremes(inst: &DualModularInstance) -> Extremes {
    let n = inst.n();
    let full = inst.full();
    let f_first: Vec<Rational> = (0..n).map(|u| inst.f(mask::singleton(u))).collect();
    let f_last: Vec<Rational> = (0..n)
        .map(|u| inst.f.marginal(mask::singleton(u), full & !mask::singleton(u)))
        .collect();
    let g_first: Vec<Rational> = (0..n).map(|u| inst.g(mask::singleton(u))).collect();
    let g_last: Vec<Rational> = (0..n)
        .map(|u| inst.g.marginal(mask::singleton(u), full & !mask::singleton(u)))
        .collect();

    let argmin = |v: &[Rational]| (0..v.len()).min_by(|&a, &b| v[a].cmp(&v[b])).expect("n >= 1");
    let max = |v: &[Rational]| v.iter().max().cloned().expect("n >= 1");
    let f_min_at = argmin(&f_first);
    let g_min_at = argmin(&g_last);
    let mut out = Extremes {
        f_min: f_first[f_min_at].clone(),
        f_max: max(&f_last),
        g_min: g_last[g_min_at].clone(),
        g_max: max(&g_first),
        f_min_at,
        g_min_at,
        brute_force_agrees: None,
    };
    if n <= EXTREMES_CROSS_CHECK_N {
        let (mut fmin, mut fmax, mut gmin, mut gmax): (
            Option<Rational>,
            Option<Rational>,
            Option<Rational>,
            Option<Rational>,
        ) = (None, None, None, None);
        for order in permutation::all_orders(n) {
            let sigma = Permutation::new(order).expect("generated orders are valid");
            for v in permutation::vertex(&inst.f, &sigma) {
                fmin = Some(fmin.map_or(v.clone(), |m| m.min(v.clone())));
                fmax = Some(fmax.map_or(v.clone(), |m| m.max(v)));
            }
            for v in permutation::vertex(&inst.g, &sigma) {
                gmin = Some(gmin.map_or(v.clone(), |m| m.min(v.clone())));
                gmax = Some(gmax.map_or(v.clone(), |m| m.max(v)));
            }
        }
        out.brute_force_agrees = Some(
            fmin.as_ref() == Some(&out.f_min)
                && fmax.as_ref() == Some(&out.f_max)
                && gmin.as_ref() == Some(&out.g_min)
                && gmax.as_ref() == Some(&out.g_max),
        );
    }
    out
}

impl Extremes {
    pub fn f_min_is_zero(&self) -> bool {
        self.f_min.is_zero()
    }

    pub fn unit_maxima(&self) -> bool {
        self.f_max.is_one() && self.g_max.is_one()
    }
}
