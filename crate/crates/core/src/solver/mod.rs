//! Frank-Wolfe over `B≥_f × B≤_g` and the Greedy++ variant for linear costs.
//!
//! Each step sorts the elements by their current induced density; the
//! resulting permutation vertex `(f^σ, g^σ)` is the linear minimizer for
//! every convex `ϑ`, so the iteration itself does not depend on the
//! divergence kind. The kind only selects which objective is reported.

mod bounds;
mod oracle;
mod trace;

use std::fmt;

use num_traits::Zero;

pub use bounds::{bound_chain, error_bounds, BoundChain, BoundExponents, ErrorBounds};
pub use oracle::{gradient_oracle, partial_derivative, partial_derivative_f64};
pub use trace::{SolverTrace, TraceRecord};

use crate::divergence::{divergence_f64, DivergenceKind};
use crate::error::{Error, Result};
use crate::instance::DualModularInstance;
use crate::mask;
use crate::permutation::{self, Allocation, Permutation};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Step `2/(k+2)`, density-sorted vertex.
    FrankWolfe,
    /// Step `1/(k+1)`, peeling order; requires a linear cost.
    GreedyPlusPlus,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fw" | "frank-wolfe" => Ok(Variant::FrankWolfe),
            "greedypp" | "greedy++" => Ok(Variant::GreedyPlusPlus),
            _ => Err(Error::InvalidArgument(format!(
                "unknown variant {s:?}; expected fw or greedypp"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::FrankWolfe => "fw",
            Variant::GreedyPlusPlus => "greedypp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Rational,
    Binary64,
}

/// How the density sort orders equal densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    LowerIndexFirst,
    /// Used by the complement mirror run, whose orders are reversed.
    HigherIndexFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub variant: Variant,
    pub iterations: usize,
    /// For reporting and bounds only.
    pub kind: DivergenceKind,
    /// Starting vertex; identity when `None`.
    pub initial: Option<Permutation>,
    pub arithmetic: Arithmetic,
    /// Density snapshots every `stride` iterations.
    pub stride: usize,
    pub tie_break: TieBreak,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            variant: Variant::FrankWolfe,
            iterations: 1000,
            kind: DivergenceKind::Quadratic,
            initial: None,
            arithmetic: Arithmetic::Binary64,
            stride: 10,
            tie_break: TieBreak::LowerIndexFirst,
        }
    }
}

impl SolverConfig {
    pub fn new(iterations: usize, kind: DivergenceKind) -> Self {
        SolverConfig {
            iterations,
            kind,
            ..Default::default()
        }
    }

    pub fn rational(mut self) -> Self {
        self.arithmetic = Arithmetic::Rational;
        self
    }
}

/// Field operations the iteration needs; implemented for `f64` and exact
/// rationals.
pub trait Scalar: Clone + PartialOrd + Send + Sync + fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero_value(&self) -> bool;
    fn fraction(p: usize, q: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn fraction(p: usize, q: usize) -> Self {
        p as f64 / q as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn fraction(p: usize, q: usize) -> Self {
        rational::ratio(p as i64, q as i64)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Ground sets up to this size get their set functions tabulated.
const TABLE_LIMIT: usize = 16;

/// Iteration state. [`frank_wolfe`] and [`greedy_plus_plus`] drive it to
/// completion; tests can step it by hand to compare iterates.
pub struct Run<'a, S: Scalar> {
    inst: &'a DualModularInstance,
    cfg: SolverConfig,
    k: usize,
    x: Vec<S>,
    y: Vec<S>,
    f_table: Option<Vec<S>>,
    g_table: Option<Vec<S>>,
    weights: Option<Vec<S>>,
}

impl<'a, S: Scalar> Run<'a, S> {
    pub fn new(inst: &'a DualModularInstance, cfg: SolverConfig) -> Result<Self> {
        if cfg.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if cfg.stride == 0 {
            return Err(Error::InvalidArgument("stride must be at least 1".into()));
        }
        let n = inst.n();
        let weights = match cfg.variant {
            Variant::GreedyPlusPlus => {
                let w = inst.g_spec().linear_weights().ok_or(Error::NotLinearCost)?;
                if let Some(u) = w.iter().position(|v| v.is_zero()) {
                    return Err(Error::ZeroCostCoordinate(u));
                }
                Some(w.iter().map(S::from_rational).collect())
            }
            Variant::FrankWolfe => None,
        };
        let initial = match &cfg.initial {
            Some(p) if p.len() != n => return Err(Error::LengthMismatch(p.len(), n)),
            Some(p) => p.clone(),
            None => Permutation::identity(n),
        };
        let tab = |h: &crate::instance::SetFunction| {
            (n <= TABLE_LIMIT).then(|| h.tabulate(n).iter().map(S::from_rational).collect())
        };
        let mut run = Run {
            inst,
            f_table: tab(inst.f_spec()),
            g_table: tab(inst.g_spec()),
            cfg,
            k: 0,
            x: Vec::new(),
            y: Vec::new(),
            weights,
        };
        run.x = run.vertex(true, &initial);
        run.y = run.vertex(false, &initial);
        Ok(run)
    }

    fn value(&self, reward: bool, s: mask::Mask) -> S {
        let table = if reward { &self.f_table } else { &self.g_table };
        match table {
            Some(t) => t[s as usize].clone(),
            None => {
                let h = if reward { self.inst.f_spec() } else { self.inst.g_spec() };
                S::from_rational(&h.value(s))
            }
        }
    }

    fn vertex(&self, reward: bool, sigma: &Permutation) -> Vec<S> {
        let mut out = vec![S::fraction(0, 1); sigma.len()];
        let mut prev = S::fraction(0, 1);
        let mut prefix = 0;
        for &u in sigma.order() {
            prefix |= mask::singleton(u);
            let cur = self.value(reward, prefix);
            out[u] = cur.sub(&prev);
            prev = cur;
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> &[S] {
        &self.x
    }

    pub fn y(&self) -> &[S] {
        &self.y
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// `ρ^(k) = x^(k) / y^(k)`.
    pub fn densities(&self) -> Result<Vec<S>> {
        self.x
            .iter()
            .zip(&self.y)
            .enumerate()
            .map(|(u, (a, b))| {
                if b.is_zero_value() {
                    Err(Error::ZeroCostCoordinate(u))
                } else {
                    Ok(a.div(b))
                }
            })
            .collect()
    }

    fn oracle(&self, rho: &[S]) -> Permutation {
        match self.cfg.tie_break {
            TieBreak::LowerIndexFirst => permutation::sort_by_density(rho),
            TieBreak::HigherIndexFirst => permutation::sort_by_density_ascending(rho).reversed(),
        }
    }

    /// Peeling order: repeatedly remove the element minimizing
    /// `((1-γ) x(u) + γ f({u} | W - u)) / w_u` (ascending index on ties)
    /// and put it at the front.
    fn peeling_order(&self, gamma: &S) -> Permutation {
        let w = self.weights.as_ref().expect("greedy++ has weights");
        let keep = S::fraction(1, 1).sub(gamma);
        let n = self.inst.n();
        let mut remaining = mask::full(n);
        let mut order = Vec::with_capacity(n);
        while remaining != 0 {
            let f_w = self.value(true, remaining);
            let mut best: Option<(usize, S)> = None;
            for u in mask::elements(remaining) {
                let rest = remaining & !mask::singleton(u);
                let marginal = f_w.sub(&self.value(true, rest));
                let score = keep.mul(&self.x[u]).add(&gamma.mul(&marginal)).div(&w[u]);
                if best.as_ref().is_none_or(|(_, b)| score < *b) {
                    best = Some((u, score));
                }
            }
            let (u, _) = best.expect("remaining is nonempty");
            order.push(u);
            remaining &= !mask::singleton(u);
        }
        // removed last means arrives first
        order.reverse();
        Permutation::new(order).expect("peeling visits every element once")
    }

    /// One iteration; returns the vertex permutation it moved towards.
    pub fn step(&mut self) -> Result<Permutation> {
        let k = self.k;
        let (sigma, gamma) = match self.cfg.variant {
            Variant::FrankWolfe => {
                let rho = self.densities()?;
                (self.oracle(&rho), S::fraction(2, k + 2))
            }
            Variant::GreedyPlusPlus => {
                let gamma = S::fraction(1, k + 1);
                (self.peeling_order(&gamma), gamma)
            }
        };
        let c = self.vertex(true, &sigma);
        let d = self.vertex(false, &sigma);
        let keep = S::fraction(1, 1).sub(&gamma);
        for (xu, cu) in self.x.iter_mut().zip(&c) {
            *xu = keep.mul(xu).add(&gamma.mul(cu));
        }
        for (yu, du) in self.y.iter_mut().zip(&d) {
            *yu = keep.mul(yu).add(&gamma.mul(du));
        }
        self.k += 1;
        Ok(sigma)
    }

    fn record(&self, permutation: Option<&Permutation>) -> TraceRecord {
        let x: Vec<f64> = self.x.iter().map(S::to_f64).collect();
        let y: Vec<f64> = self.y.iter().map(S::to_f64).collect();
        let snapshot = self.k.is_multiple_of(self.cfg.stride) || self.k == self.cfg.iterations;
        TraceRecord {
            k: self.k,
            phi_quadratic: divergence_f64(&DivergenceKind::Quadratic, &x, &y),
            phi_kl: divergence_f64(&DivergenceKind::EntropyKL, &x, &y),
            phi_eg: divergence_f64(&DivergenceKind::EisenbergGale, &x, &y),
            phi: divergence_f64(&self.cfg.kind, &x, &y),
            permutation: permutation.map(|p| p.order().to_vec()),
            densities: snapshot.then(|| x.iter().zip(&y).map(|(a, b)| a / b).collect()),
        }
    }

    /// Runs the remaining iterations and collects the trace. Also returns
    /// the final iterate in the run's own arithmetic.
    pub fn finish(mut self) -> Result<(SolverTrace, Vec<S>, Vec<S>)> {
        let mut records = Vec::with_capacity(self.cfg.iterations + 1);
        while self.k < self.cfg.iterations {
            let mut rec = self.record(None);
            rec.permutation = Some(self.step()?.order().to_vec());
            records.push(rec);
        }
        self.densities()?;
        records.push(self.record(None));
        let final_x: Vec<f64> = self.x.iter().map(S::to_f64).collect();
        let final_y: Vec<f64> = self.y.iter().map(S::to_f64).collect();
        let final_rho = final_x.iter().zip(&final_y).map(|(a, b)| a / b).collect();
        let trace = SolverTrace {
            variant: self.cfg.variant,
            kind: self.cfg.kind.clone(),
            iterations: self.cfg.iterations,
            labels: self.inst.ground().labels().to_vec(),
            records,
            final_x,
            final_y,
            final_rho,
            final_exact: None,
        };
        Ok((trace, self.x, self.y))
    }
}

fn run_with<S: Scalar>(inst: &DualModularInstance, cfg: SolverConfig) -> Result<(SolverTrace, Vec<S>, Vec<S>)> {
    Run::<S>::new(inst, cfg)?.finish()
}

/// Runs the configured variant in the configured arithmetic.
pub fn solve(inst: &DualModularInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    match cfg.arithmetic {
        Arithmetic::Binary64 => run_with::<f64>(inst, cfg.clone()).map(|(t, _, _)| t),
        Arithmetic::Rational => {
            let (mut trace, x, y) = run_with::<Rational>(inst, cfg.clone())?;
            trace.final_exact = Some(Allocation { x, y });
            Ok(trace)
        }
    }
}

/// Algorithm with step `2/(k+2)` towards the density-sorted vertex.
pub fn frank_wolfe(inst: &DualModularInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    let cfg = SolverConfig {
        variant: Variant::FrankWolfe,
        ..cfg.clone()
    };
    solve(inst, &cfg)
}

/// Greedy++ peeling with step `1/(k+1)`; the cost must be linear.
pub fn greedy_plus_plus(inst: &DualModularInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    let cfg = SolverConfig {
        variant: Variant::GreedyPlusPlus,
        ..cfg.clone()
    };
    solve(inst, &cfg)
}
