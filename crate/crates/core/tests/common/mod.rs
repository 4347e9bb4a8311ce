//! Random instance generators and an exact locally-maximin constructor
//! shared by the integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use dualmod::instance::Edge;
use dualmod::mask;
use dualmod::rational::{int, ratio};
use dualmod::{
    Allocation, DensityDecomposition, DualModularInstance, GroundSet, Mask, Permutation, Rational, SetFunction,
};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `EdgesInside` of a random graph plus a linear lift. With `strict` every
/// lift weight is positive, which makes `f` strictly monotone.
pub fn random_f(rng: &mut impl Rng, n: usize, strict: bool) -> SetFunction {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push(Edge::new(u, v, int(rng.gen_range(1..=4))));
            }
        }
    }
    let lo = if strict { 1 } else { 0 };
    let lift = (0..n)
        .map(|_| ratio(rng.gen_range(lo..=4), rng.gen_range(1..=2)))
        .collect();
    SetFunction::Sum(vec![SetFunction::EdgesInside(edges), SetFunction::Linear(lift)])
}

/// A concave function of the cardinality (sometimes plus a linear term),
/// perturbed by `eta |S|` with `eta > 0` so it is strictly monotone.
pub fn random_g(rng: &mut impl Rng, n: usize) -> SetFunction {
    let mut steps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
    steps.sort_unstable_by(|a, b| b.cmp(a));
    let mut phi = vec![int(0)];
    for s in steps {
        let last = phi.last().unwrap().clone();
        phi.push(last + int(s));
    }
    let concave = SetFunction::ConcaveOfCardinality(phi);
    let base = if rng.gen_bool(0.5) {
        SetFunction::Sum(vec![
            concave,
            SetFunction::Linear((0..n).map(|_| int(rng.gen_range(0..=2))).collect()),
        ])
    } else {
        concave
    };
    SetFunction::Perturbed {
        base: Box::new(base),
        eta: ratio(1, rng.gen_range(1..=4)),
    }
}

pub fn random_instance(rng: &mut impl Rng, n: usize, strict_f: bool) -> DualModularInstance {
    let f = random_f(rng, n, strict_f);
    let g = random_g(rng, n);
    DualModularInstance::new(GroundSet::indexed(n).unwrap(), f, g).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::new(order).unwrap()
}

/// A convex combination of a few random permutation vertices.
pub fn random_allocation(rng: &mut impl Rng, inst: &DualModularInstance) -> Allocation {
    let n = inst.n();
    let mut a = Allocation::vertex(inst, &random_permutation(rng, n));
    for k in 2..=rng.gen_range(1..=4) {
        let b = Allocation::vertex(inst, &random_permutation(rng, n));
        // keeps weights uniform over the vertices drawn so far
        a = a.mix(&b, &ratio(k as i64 - 1, k as i64)).unwrap();
    }
    a
}

/// A locally maximin allocation, built part by part: on part `S_i` (with
/// `Q = S_{<i}`) it finds a `y` that is a base of `g(.|Q)` and satisfies
/// `ρ_i y(A) ≥ f(A|Q)` for all `A`, then sets `x = ρ_i y`. Such `y` is a
/// common base of two polymatroids and is found exactly with shortest
/// augmenting paths.
pub fn locally_maximin(inst: &DualModularInstance, dec: &DensityDecomposition) -> Allocation {
    let n = inst.n();
    let mut x = vec![Rational::zero(); n];
    let mut y = vec![Rational::zero(); n];
    let mut prefix: Mask = 0;
    for (&part, rho) in dec.parts.iter().zip(&dec.densities) {
        let elems: Vec<usize> = mask::elements(part).collect();
        let m = elems.len();
        let lift = |a: usize| -> Mask { mask::elements(a as Mask).fold(0, |s, j| s | mask::singleton(elems[j])) };
        let gq = inst.g(prefix);
        let fq = inst.f(prefix);
        let b1: Vec<Rational> = (0..1usize << m).map(|a| inst.g(lift(a) | prefix) - &gq).collect();
        let c = b1[(1 << m) - 1].clone();
        let local_y = if rho.is_zero() {
            // x = 0 is feasible since f(S_i|Q) = 0; any base of g(.|Q) works
            greedy_base(&b1, m)
        } else {
            let h: Vec<Rational> = (0..1usize << m)
                .map(|a| (inst.f(lift(a) | prefix) - &fq) / rho)
                .collect();
            let full = (1usize << m) - 1;
            let b2: Vec<Rational> = (0..1usize << m).map(|a| &c - &h[full & !a]).collect();
            common_base(&b1, &b2, m, &c)
        };
        for (j, &u) in elems.iter().enumerate() {
            x[u] = rho * &local_y[j];
            y[u] = local_y[j].clone();
        }
        prefix |= part;
    }
    Allocation { x, y }
}

fn greedy_base(b: &[Rational], m: usize) -> Vec<Rational> {
    let mut prev = Rational::zero();
    (0..m)
        .map(|j| {
            let cur = b[(1 << (j + 1)) - 1].clone();
            let d = &cur - &prev;
            prev = cur;
            d
        })
        .collect()
}

fn sums(y: &[Rational], m: usize) -> Vec<Rational> {
    let mut s = vec![Rational::zero(); 1 << m];
    for a in 1..1usize << m {
        let low = a.trailing_zeros() as usize;
        s[a] = &s[a & (a - 1)] + &y[low];
    }
    s
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Inc(usize),
    Dec(usize),
}

fn common_base(b1: &[Rational], b2: &[Rational], m: usize, c: &Rational) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); m];
    for _ in 0..10_000 {
        let ys = sums(&y, m);
        if ys[(1 << m) - 1] == *c {
            return y;
        }
        let tight = |b: &[Rational]| -> Vec<usize> { (1..1usize << m).filter(|&a| ys[a] == b[a]).collect() };
        let (t1, t2) = (tight(b1), tight(b2));
        let can_inc = |t: &[usize], u: usize| t.iter().all(|&a| a >> u & 1 == 0);
        // raise u, lower v
        let can_swap = |t: &[usize], u: usize, v: usize| {
            y[v].is_positive() && t.iter().all(|&a| a >> u & 1 == 0 || a >> v & 1 == 1)
        };

        let idx = |s: Step| match s {
            Step::Inc(u) => u,
            Step::Dec(v) => m + v,
        };
        let mut prev: Vec<Option<Step>> = vec![None; 2 * m];
        let mut seen = vec![false; 2 * m];
        let mut queue = VecDeque::new();
        for (u, seen_u) in seen.iter_mut().enumerate().take(m) {
            if can_inc(&t1, u) {
                *seen_u = true;
                queue.push_back(Step::Inc(u));
            }
        }
        let mut end = None;
        while let Some(s) = queue.pop_front() {
            match s {
                Step::Inc(u) => {
                    if can_inc(&t2, u) {
                        end = Some(s);
                        break;
                    }
                    for v in (0..m).filter(|&v| v != u && can_swap(&t2, u, v)) {
                        let next = Step::Dec(v);
                        if !seen[idx(next)] {
                            seen[idx(next)] = true;
                            prev[idx(next)] = Some(s);
                            queue.push_back(next);
                        }
                    }
                }
                Step::Dec(v) => {
                    for w in (0..m).filter(|&w| w != v && can_swap(&t1, w, v)) {
                        let next = Step::Inc(w);
                        if !seen[idx(next)] {
                            seen[idx(next)] = true;
                            prev[idx(next)] = Some(s);
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        let mut cur = end.expect("no augmenting path: the two polymatroids have no common base");
        let mut d = vec![0i64; m];
        loop {
            match cur {
                Step::Inc(u) => d[u] += 1,
                Step::Dec(v) => d[v] -= 1,
            }
            match prev[idx(cur)] {
                Some(p) => cur = p,
                None => break,
            }
        }
        // largest step keeping every constraint
        let mut eps: Option<Rational> = None;
        let mut cap = |v: Rational| {
            if eps.as_ref().is_none_or(|e| v < *e) {
                eps = Some(v);
            }
        };
        for a in 1..1usize << m {
            let slope: i64 = (0..m).filter(|&u| a >> u & 1 == 1).map(|u| d[u]).sum();
            if slope > 0 {
                cap((&b1[a] - &ys[a]) / int(slope));
                cap((&b2[a] - &ys[a]) / int(slope));
            }
        }
        for u in 0..m {
            if d[u] < 0 {
                cap(&y[u] / int(-d[u]));
            }
        }
        let eps = eps.expect("the path raises the total");
        assert!(eps.is_positive(), "degenerate augmenting step");
        for u in 0..m {
            y[u] += &eps * int(d[u]);
        }
    }
    panic!("common base search did not terminate");
}
