//! Small instances used by the docs, tests and the shipped `fixtures/*.json`.

use crate::error::Result;
use crate::instance::{DualModularInstance, Edge, GroundSet, SetFunction};
use crate::mask;
use crate::rational::{int, Rational};

fn labelled(labels: &[&str]) -> GroundSet {
    GroundSet::new(labels.iter().map(|s| s.to_string()).collect()).expect("fixture labels are distinct")
}

fn table(values: &[i64]) -> SetFunction {
    SetFunction::Table(values.iter().map(|&v| int(v)).collect())
}

/// Three elements `a, w, b` where `g({a}) = g({a, w})`: `g` is monotone but
/// not strictly, and `w` gets zero cost at the optimum.
pub fn sec32() -> DualModularInstance {
    //          ∅  a  w  aw b  ab wb V
    let f = table(&[0, 1, 0, 1, 0, 1, 1, 2]);
    let g = table(&[0, 1, 1, 1, 2, 3, 3, 3]);
    DualModularInstance::new(labelled(&["a", "w", "b"]), f, g).expect("valid fixture")
}

/// The path `1 - 2 - 3` with unit costs; every element has density 2/3.
pub fn p3() -> DualModularInstance {
    let f = SetFunction::EdgesInside(vec![Edge::unit(0, 1), Edge::unit(1, 2)]);
    DualModularInstance::new(labelled(&["1", "2", "3"]), f, SetFunction::linear_uniform(3)).expect("valid fixture")
}

/// A triangle plus an isolated vertex, edge weights 3, unit costs.
/// Densities `(3, 3, 3, 0)`.
pub fn tri_iso() -> DualModularInstance {
    let f = SetFunction::EdgesInside(vec![Edge::unit(0, 1), Edge::unit(1, 2), Edge::unit(0, 2)]).scaled(int(3));
    DualModularInstance::new(labelled(&["1", "2", "3", "4"]), f, SetFunction::linear_uniform(4)).expect("valid fixture")
}

/// Two blocks `S1` (`n1` elements of cost 1) and `S2` (`n2` elements of cost
/// `10 n1`). The reward is `2 n1` once `S1` is complete plus `10 n1 n2` once
/// everything is, so `S1` has density 2 and `S2` density 1, and no subset
/// other than the blocks earns anything.
pub fn hardness(n1: usize, n2: usize) -> Result<DualModularInstance> {
    let n = n1 + n2;
    let ground = GroundSet::new(
        (0..n1)
            .map(|i| format!("s1_{}", i + 1))
            .chain((0..n2).map(|i| format!("s2_{}", i + 1)))
            .collect(),
    )?;
    let s1 = mask::full(n1);
    let v = mask::full(n);
    let (n1r, n2r) = (int(n1 as i64), int(n2 as i64));
    let bonus = int(10) * &n1r * &n2r;
    let f = SetFunction::Table(
        (0..=v)
            .map(|s| {
                let mut val = Rational::from_integer(0.into());
                if mask::is_subset(s1, s) {
                    val += int(2) * &n1r;
                }
                if s == v {
                    val += &bonus;
                }
                val
            })
            .collect(),
    );
    let g = SetFunction::Linear((0..n).map(|u| if u < n1 { int(1) } else { int(10) * &n1r }).collect());
    DualModularInstance::new(ground, f, g)
}

/// Name and builder of every shipped fixture file.
pub fn shipped() -> Vec<(&'static str, DualModularInstance)> {
    vec![
        ("sec32", sec32()),
        ("p3", p3()),
        ("tri_iso", tri_iso()),
        ("hardness", hardness(2, 2).expect("valid fixture")),
    ]
}
