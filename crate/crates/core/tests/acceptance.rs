//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dualmod::contracts::{best_response, best_response_bruteforce, critical_values, duality_gap, duality_gap_f64};
use dualmod::decomposition::{maximal_densest_subset, optimal_objective, residual_instance};
use dualmod::divergence::{divergence, divergence_f64, hessian_norm, objective};
use dualmod::fairness::equivalence_report;
use dualmod::instance::{complement_instance, verify_dual_modularity};
use dualmod::mask;
use dualmod::permutation::{all_orders, check_base_membership, induced_densities};
use dualmod::rational::{self, int, ratio};
use dualmod::solver::{error_bounds, gradient_oracle, partial_derivative, solve, Run, SolverConfig, TieBreak};
use dualmod::{
    density_decomposition, fixtures, Allocation, DensityDecomposition, DivergenceKind, DualModularInstance, Error,
    Mask, Permutation, Rational, Value,
};
use num_traits::{One, Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_set(s: Mask) -> String {
    format!("{:?}", mask::elements(s).collect::<Vec<_>>())
}

// ---------------------------------------------------------------- 1

fn worked_example() -> Outcome {
    let inst = fixtures::sec32();
    let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;
    let aw = inst.ground().mask_of(&["a", "w"]).unwrap();
    let a = inst.ground().mask_of(&["a"]).unwrap();
    let b = inst.ground().mask_of(&["b"]).unwrap();
    ensure(dec.parts == vec![aw, b], || format!("parts {:?}", dec.parts))?;
    ensure(dec.densities == vec![int(1), ratio(1, 2)], || {
        format!("densities {:?}", dec.densities)
    })?;
    ensure(dec.density_vector[1] == int(1), || "rho*_w != 1".into())?;

    let report = verify_dual_modularity(&inst, 12).map_err(|e| e.to_string())?;
    ensure(report.g_submodular.holds && report.g_monotone.holds, || {
        "g should be monotone submodular".into()
    })?;
    ensure(report.f_supermodular.holds && report.f_monotone.holds, || {
        "f should be monotone supermodular".into()
    })?;
    ensure(!report.g_strictly_monotone.holds, || {
        "g reported strictly monotone".into()
    })?;
    ensure(report.g_strictly_monotone.witness == Some((a, aw)), || {
        format!("witness {:?}", report.g_strictly_monotone.witness)
    })?;

    let alloc =
        Allocation::new(vec![int(1), int(0), int(1)], vec![int(1), int(0), int(2)]).map_err(|e| e.to_string())?;
    let m = check_base_membership(&inst, &alloc, 20).map_err(|e| e.to_string())?;
    ensure(m.both(), || format!("membership {m:?}"))?;
    match induced_densities(&alloc) {
        Err(Error::ZeroCostCoordinate(1)) => {}
        other => return Err(format!("density induction gave {other:?}")),
    }
    Ok("parts {a,w},{b}; densities 1, 1/2; witness {a} < {a,w}".into())
}

// ---------------------------------------------------------------- 2

fn instance_seeds() -> impl Iterator<Item = (u64, usize)> {
    (0..500u64).map(|s| (s, 2 + (s as usize % 7)))
}

fn generated(seed: u64, n: usize) -> DualModularInstance {
    common::random_instance(&mut common::rng(1_000 + seed), n, seed.is_multiple_of(3))
}

/// Independent oracle: the maximal densest subset of `V \ q` for the
/// marginals given `q`, by direct enumeration with cross-multiplication.
fn oracle_densest(inst: &DualModularInstance, q: Mask) -> (Mask, Rational) {
    let rest = inst.full() & !q;
    let (fq, gq) = (inst.f(q), inst.g(q));
    let mut best: Option<(Rational, Rational)> = None;
    let mut union = 0;
    for s in mask::submasks(rest).filter(|&s| s != 0) {
        let (fs, gs) = (inst.f(s | q) - &fq, inst.g(s | q) - &gq);
        match &best {
            Some((bf, bg)) if &fs * bg < bf * &gs => {}
            Some((bf, bg)) if &fs * bg == bf * &gs => union |= s,
            _ => {
                best = Some((fs, gs));
                union = s;
            }
        }
    }
    let (bf, bg) = best.expect("nonempty residual");
    (union, bf / bg)
}

fn decomposition_oracle() -> Outcome {
    let mut parts_seen = 0;
    for (seed, n) in instance_seeds() {
        let inst = generated(seed, n);
        let report = verify_dual_modularity(&inst, 12).map_err(|e| e.to_string())?;
        ensure(report.is_dual_modular(), || {
            format!("seed {seed}: generated instance not dual-modular")
        })?;
        let dec = density_decomposition(&inst, 18).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(dec.strictly_decreasing(), || {
            format!("seed {seed}: densities {:?}", dec.densities)
        })?;
        ensure(dec.parts.iter().fold(0, |m, p| m | p) == inst.full(), || {
            format!("seed {seed}: parts do not cover V")
        })?;

        // every part is the maximal densest subset of its residual
        let mut q = 0;
        for (i, (&part, rho)) in dec.parts.iter().zip(&dec.densities).enumerate() {
            let (s, r) = oracle_densest(&inst, q);
            ensure(s == part && r == *rho, || {
                format!("seed {seed}: part {i} {} vs oracle {}", fmt_set(part), fmt_set(s))
            })?;
            q |= part;
        }
        // the decomposition of the first residual is the tail
        let (first, _) = maximal_densest_subset(&inst, 18).map_err(|e| e.to_string())?;
        ensure(first == dec.parts[0], || format!("seed {seed}: maximal densest subset"))?;
        if dec.len() > 1 {
            let res = residual_instance(&inst, first).map_err(|e| e.to_string())?;
            let tail = density_decomposition(&res, 18).map_err(|e| e.to_string())?;
            let local: Vec<usize> = mask::elements(inst.full() & !first).collect();
            let lift = |s: Mask| mask::elements(s).fold(0, |m, j| m | mask::singleton(local[j]));
            let lifted: Vec<Mask> = tail.parts.iter().map(|&p| lift(p)).collect();
            ensure(lifted == dec.parts[1..] && tail.densities == dec.densities[1..], || {
                format!("seed {seed}: residual decomposition differs")
            })?;
        }
        parts_seen += dec.len();
    }
    Ok(format!("500 instances, {parts_seen} parts"))
}

// ---------------------------------------------------------------- 3

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn gradient_oracle_optimality() -> Outcome {
    let kinds = [
        DivergenceKind::Quadratic,
        DivergenceKind::EntropyKL,
        DivergenceKind::EisenbergGale,
    ];
    let mut checked = 0;
    for seed in 0..100u64 {
        let n = 2 + seed as usize % 5;
        let mut rng = common::rng(2_000 + seed);
        // strictly monotone f keeps every induced density positive
        let inst = common::random_instance(&mut rng, n, true);
        let a = common::random_allocation(&mut rng, &inst);
        let rho = induced_densities(&a).map_err(|e| e.to_string())?;
        let sigma = gradient_oracle(&inst, &rho).map_err(|e| e.to_string())?;
        for kind in &kinds {
            let at = partial_derivative(&inst, &rho, &sigma, kind).map_err(|e| e.to_string())?;
            for order in all_orders(n) {
                let tau = Permutation::new(order).unwrap();
                let other = partial_derivative(&inst, &rho, &tau, kind).map_err(|e| e.to_string())?;
                let ok = match (&at, &other) {
                    (Value::Exact(p), Value::Exact(q)) => p <= q,
                    _ => at.to_f64() <= other.to_f64() || rel_close(at.to_f64(), other.to_f64(), 1e-9),
                };
                ensure(ok, || {
                    format!(
                        "seed {seed} {}: sorted order {:?} beaten by {:?}",
                        kind.name(),
                        sigma.order(),
                        tau.order()
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} permutation comparisons"))
}

// ---------------------------------------------------------------- 4

fn l2(a: &[f64], b: &[Rational]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - rational::to_f64(q)).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn fw_within_bounds() -> Outcome {
    let mut notes = Vec::new();
    for (name, inst) in [("p3", fixtures::p3()), ("tri_iso", fixtures::tri_iso())] {
        let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;
        for kind in [
            DivergenceKind::Quadratic,
            DivergenceKind::EntropyKL,
            DivergenceKind::EisenbergGale,
        ] {
            let opt = match optimal_objective(&dec, &kind) {
                Ok(v) => v.to_f64(),
                // an element with zero density makes -log 0 part of every objective value
                Err(Error::Domain(_))
                    if dec.densities.iter().any(|r| r.is_zero()) && kind == DivergenceKind::EisenbergGale =>
                {
                    notes.push(format!("{name}/{} undefined (zero density)", kind.name()));
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            for t in [10, 100, 1000, 10000] {
                let trace = solve(&inst, &SolverConfig::new(t, kind.clone())).map_err(|e| e.to_string())?;
                let b = error_bounds(&inst, &kind, t).map_err(|e| e.to_string())?;
                let err = l2(&trace.final_rho, &dec.density_vector);
                if b.objective_gap_upper.is_finite() {
                    let gap = trace.final_phi() - opt;
                    ensure(gap <= b.objective_gap_upper * (1.0 + 1e-12), || {
                        format!("{name} {} T={t}: gap {gap} > {}", kind.name(), b.objective_gap_upper)
                    })?;
                }
                if b.absolute_density_upper.is_finite() {
                    ensure(err <= b.absolute_density_upper, || {
                        format!(
                            "{name} {} T={t}: |rho - rho*| {err} > {}",
                            kind.name(),
                            b.absolute_density_upper
                        )
                    })?;
                } else if t == 10 {
                    notes.push(format!("{name}/{} bound infinite (f_min = 0)", kind.name()));
                }
            }
        }
    }
    let p3 = fixtures::p3();
    let trace = solve(&p3, &SolverConfig::new(2000, DivergenceKind::Quadratic)).map_err(|e| e.to_string())?;
    let err = l2(&trace.final_rho, &[ratio(2, 3), ratio(2, 3), ratio(2, 3)]);
    ensure(err <= 1e-2, || format!("p3 T=2000: |rho - rho*| = {err}"))?;
    notes.push(format!("p3 T=2000 error {err:.2e}"));
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- 5

fn hockey_stick_duality() -> Outcome {
    let gammas = [int(0), ratio(1, 2), int(1), int(2)];
    let (mut worst_gap, mut worst_tie): (f64, f64) = (0.0, 0.0);
    let mut fw_pairs = 0;
    let mut violations = Vec::new();
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 7;
        let mut rng = common::rng(5_000 + seed);
        let inst = common::random_instance(&mut rng, n, seed % 2 == 0);
        for _ in 0..3 {
            let a = common::random_allocation(&mut rng, &inst);
            for gamma in &gammas {
                let hs =
                    divergence(&DivergenceKind::HockeyStick(gamma.clone()), &a.x, &a.y).map_err(|e| e.to_string())?;
                let hs = hs.exact().unwrap().clone();
                // independent evaluation of the sum form
                let direct: Rational =
                    a.x.iter()
                        .zip(&a.y)
                        .map(|(x, y)| {
                            let d = x - gamma * y;
                            if d.is_positive() {
                                d
                            } else {
                                Rational::zero()
                            }
                        })
                        .sum();
                ensure(hs == direct, || format!("seed {seed}: HS value mismatch"))?;
                for s in 0..=inst.full() {
                    ensure(inst.f(s) - gamma * inst.g(s) <= hs, || {
                        format!(
                            "seed {seed} gamma {}: S = {} beats HS",
                            rational::format(gamma),
                            fmt_set(s)
                        )
                    })?;
                }
            }
        }
        // converged FW allocation against the best-response prefix
        let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;
        let exact = common::locally_maximin(&inst, &dec);
        let trace = solve(&inst, &SolverConfig::new(5000, DivergenceKind::Quadratic)).map_err(|e| e.to_string())?;
        for gamma in &gammas {
            let s = dec
                .parts
                .iter()
                .zip(&dec.densities)
                .filter(|(_, r)| *r >= gamma)
                .fold(0, |m, (p, _)| m | p);
            let zero = duality_gap(&inst, s, &exact, gamma).map_err(|e| e.to_string())?;
            ensure(zero.is_zero(), || {
                format!(
                    "seed {seed}: gap {} at an exact locally maximin allocation",
                    rational::format(&zero)
                )
            })?;

            let gap = duality_gap_f64(&inst, s, &trace.final_x, &trace.final_y, rational::to_f64(gamma))
                .map_err(|e| e.to_string())?;
            fw_pairs += 1;
            let tie = dec.densities.contains(gamma);
            if tie {
                worst_tie = worst_tie.max(gap);
            } else {
                worst_gap = worst_gap.max(gap);
            }
            if gap > 1e-6 {
                violations.push(format!(
                    "seed {seed} gamma {} gap {gap:.2e}{}",
                    rational::format(gamma),
                    if tie { " (gamma equals a part density)" } else { "" }
                ));
            }
        }
    }
    let summary = format!(
        "{fw_pairs} FW (instance, gamma) pairs; worst gap {worst_gap:.2e} off ties, {worst_tie:.2e} at gamma = rho_i"
    );
    if !violations.is_empty() {
        return Err(format!(
            "{} pairs exceed 1e-6: {}; {summary}",
            violations.len(),
            violations.join(", ")
        ));
    }
    Ok(summary)
}

// ---------------------------------------------------------------- 6

fn contracts_oracle() -> Outcome {
    let mut unique_checks = 0;
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 7;
        let mut rng = common::rng(6_000 + seed);
        let inst = common::random_instance(&mut rng, n, seed % 2 == 1);
        let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;

        let mut expected: Vec<Rational> = dec
            .densities
            .iter()
            .filter(|r| **r >= Rational::one())
            .map(|r| r.recip())
            .collect();
        expected.sort();
        let crit = critical_values(&dec);
        ensure(crit == expected, || format!("seed {seed}: critical values"))?;

        // half the queries land exactly on a critical value when there is one
        let alpha = if !crit.is_empty() && rng.gen_bool(0.5) {
            crit[rng.gen_range(0..crit.len())].clone()
        } else {
            let q = rng.gen_range(1..=12);
            ratio(rng.gen_range(0..=q), q)
        };
        let br = best_response(&dec, &alpha).map_err(|e| e.to_string())?;
        let bf = best_response_bruteforce(&inst, &alpha, 20).map_err(|e| e.to_string())?;
        ensure(br == bf.set, || {
            format!(
                "seed {seed} alpha {}: prefix {} vs brute force {}",
                rational::format(&alpha),
                fmt_set(br),
                fmt_set(bf.set)
            )
        })?;

        // strictly between two densities the maximizer is unique
        if !alpha.is_zero() {
            let gamma = alpha.recip();
            let above = dec.densities.contains(&gamma);
            if !above {
                ensure(bf.maximizers == 1, || {
                    format!("seed {seed}: {} maximizers off a critical value", bf.maximizers)
                })?;
                unique_checks += 1;
            }
        }
    }
    Ok(format!("200 queries, {unique_checks} uniqueness checks"))
}

// ---------------------------------------------------------------- 7

fn symmetry() -> Outcome {
    for seed in 0..100u64 {
        let n = 2 + seed as usize % 7;
        let mut rng = common::rng(7_000 + seed);
        let inst = common::random_instance(&mut rng, n, true);
        let comp = complement_instance(&inst, 12).map_err(|e| format!("seed {seed}: {e}"))?;
        let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;
        let cdec = density_decomposition(&comp, 18).map_err(|e| e.to_string())?;
        for u in 0..n {
            ensure((&dec.density_vector[u] * &cdec.density_vector[u]).is_one(), || {
                format!("seed {seed}: rho*({u}) rho-bar*({u}) != 1")
            })?;
        }

        let cfg = SolverConfig::new(50, DivergenceKind::Quadratic).rational();
        let mut fwd = Run::<Rational>::new(&inst, cfg.clone()).map_err(|e| e.to_string())?;
        let mirror_cfg = SolverConfig {
            initial: Some(Permutation::identity(n).reversed()),
            tie_break: TieBreak::HigherIndexFirst,
            ..cfg
        };
        let mut bwd = Run::<Rational>::new(&comp, mirror_cfg).map_err(|e| e.to_string())?;
        for k in 0..=50 {
            ensure(fwd.x() == bwd.y() && fwd.y() == bwd.x(), || {
                format!("seed {seed}: iterates differ at k = {k}")
            })?;
            if k < 50 {
                fwd.step().map_err(|e| e.to_string())?;
                bwd.step().map_err(|e| e.to_string())?;
            }
        }
    }
    Ok("100 instances, 51 iterates each".into())
}

// ---------------------------------------------------------------- 8

fn closed_form(dec: &DensityDecomposition, kind: &DivergenceKind) -> f64 {
    dec.part_costs
        .iter()
        .zip(&dec.densities)
        .map(|(c, r)| {
            let t = rational::to_f64(r);
            let theta = match kind {
                DivergenceKind::EntropyKL if t == 0.0 => 0.0,
                DivergenceKind::EntropyKL => t * t.ln(),
                DivergenceKind::EisenbergGale => -t.ln(),
                _ => unreachable!(),
            };
            rational::to_f64(c) * theta
        })
        .sum()
}

fn closed_form_exact(dec: &DensityDecomposition, kind: &DivergenceKind) -> Rational {
    dec.part_costs
        .iter()
        .zip(&dec.densities)
        .map(|(c, r)| {
            c * match kind {
                DivergenceKind::Quadratic => r * r,
                DivergenceKind::HockeyStick(g) => {
                    let d = r - g;
                    if d.is_positive() {
                        d
                    } else {
                        Rational::zero()
                    }
                }
                _ => unreachable!(),
            }
        })
        .sum()
}

fn fairness_equivalence() -> Outcome {
    let mut negatives = 0;
    for (seed, n) in instance_seeds() {
        let inst = generated(seed, n);
        let dec = density_decomposition(&inst, 18).map_err(|e| e.to_string())?;
        let a = common::locally_maximin(&inst, &dec);
        let m = check_base_membership(&inst, &a, 20).map_err(|e| e.to_string())?;
        ensure(m.both(), || {
            format!("seed {seed}: constructed allocation infeasible {m:?}")
        })?;
        let rep = equivalence_report(&inst, &a, &dec).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(rep.densities_match && rep.locally_maximin && rep.agree, || {
            format!("seed {seed}: {rep:?}")
        })?;

        for kind in [
            DivergenceKind::Quadratic,
            DivergenceKind::HockeyStick(int(1)),
            DivergenceKind::HockeyStick(ratio(1, 2)),
        ] {
            let phi = objective(&inst, &a, &kind).map_err(|e| e.to_string())?;
            ensure(phi.exact() == Some(&closed_form_exact(&dec, &kind)), || {
                format!("seed {seed}: {} objective", kind.name())
            })?;
        }
        for kind in [DivergenceKind::EntropyKL, DivergenceKind::EisenbergGale] {
            let zero_part = dec.densities.iter().any(|r| r.is_zero());
            if kind == DivergenceKind::EisenbergGale && zero_part {
                // -log 0: both sides are undefined
                let lhs = objective(&inst, &a, &kind);
                let rhs = optimal_objective(&dec, &kind);
                ensure(
                    matches!((&lhs, &rhs), (Err(Error::Domain(_)), Err(Error::Domain(_)))),
                    || format!("seed {seed}: eg with a zero density gave {lhs:?} / {rhs:?}"),
                )?;
                continue;
            }
            let phi = objective(&inst, &a, &kind).map_err(|e| e.to_string())?.to_f64();
            let want = closed_form(&dec, &kind);
            ensure(rel_close(phi, want, 1e-9), || {
                format!("seed {seed}: {} objective {phi} vs {want}", kind.name())
            })?;
        }

        // a random vertex: (i) and (iii) must still agree
        let mut rng = common::rng(8_000 + seed);
        let b = common::random_allocation(&mut rng, &inst);
        let rep = equivalence_report(&inst, &b, &dec).map_err(|e| e.to_string())?;
        ensure(rep.agree, || {
            format!("seed {seed}: (i) and (iii) disagree on a random allocation")
        })?;
        if !rep.locally_maximin {
            negatives += 1;
        }
    }
    Ok(format!(
        "500 constructed allocations; {negatives} random non-maximin controls"
    ))
}

// ---------------------------------------------------------------- 9

fn hessian_checks() -> Outcome {
    use nalgebra::{DMatrix, SymmetricEigen};
    let mut rng = common::rng(9_000);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = 1 + i % 4;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        for kind in [
            DivergenceKind::Quadratic,
            DivergenceKind::EntropyKL,
            DivergenceKind::EisenbergGale,
        ] {
            let phi = |z: &[f64]| divergence_f64(&kind, &z[..n], &z[n..]);
            let z: Vec<f64> = x.iter().chain(&y).copied().collect();
            let h = 1e-4;
            let mut hess = DMatrix::<f64>::zeros(2 * n, 2 * n);
            for a in 0..2 * n {
                for b in 0..2 * n {
                    let at = |da: f64, db: f64| {
                        let mut w = z.clone();
                        w[a] += da;
                        w[b] += db;
                        phi(&w)
                    };
                    hess[(a, b)] = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
                }
            }
            let eig = SymmetricEigen::new(hess)
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::MIN, f64::max);
            let formula = (0..n)
                .map(|u| {
                    let (a, b) = (x[u], y[u]);
                    match kind {
                        DivergenceKind::Quadratic => 2.0 * (a * a + b * b) / (b * b * b),
                        DivergenceKind::EntropyKL => 1.0 / a + a / (b * b),
                        _ => 1.0 / b + b / (a * a),
                    }
                })
                .fold(f64::MIN, f64::max);
            let lib = hessian_norm(&kind, &x, &y).map_err(|e| e.to_string())?;
            let rel = (eig - formula).abs() / formula;
            worst = worst.max(rel);
            ensure(rel <= 1e-4, || {
                format!("point {i} {}: eigenvalue {eig} vs closed form {formula}", kind.name())
            })?;
            ensure(rel_close(lib, formula, 1e-12), || {
                format!("point {i} {}: library {lib} vs {formula}", kind.name())
            })?;
        }
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked example", worked_example, Duration::from_secs(1)),
        (
            "decomposition oracle equivalence",
            decomposition_oracle,
            Duration::from_secs(120),
        ),
        (
            "gradient-oracle optimality",
            gradient_oracle_optimality,
            Duration::from_secs(300),
        ),
        (
            "Frank-Wolfe within error bounds",
            fw_within_bounds,
            Duration::from_secs(60),
        ),
        ("hockey-stick duality", hockey_stick_duality, Duration::from_secs(180)),
        (
            "contracts oracle equivalence",
            contracts_oracle,
            Duration::from_secs(120),
        ),
        ("reward/cost symmetry", symmetry, Duration::from_secs(120)),
        ("fairness equivalence", fairness_equivalence, Duration::from_secs(300)),
        ("Hessian closed forms", hessian_checks, Duration::from_secs(60)),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({elapsed:.2?}) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
