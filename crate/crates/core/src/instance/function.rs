use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mask::{self, Mask};
use crate::rational::{self, Rational};

/// A weighted edge `{u, v}` of a graph on the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: Rational) -> Self {
        Edge { u, v, weight }
    }

    pub fn unit(u: usize, v: usize) -> Self {
        Edge::new(u, v, rational::int(1))
    }
}

/// A set function `h : 2^V -> Q` given by one of a few closed forms.
///
/// Values are exact. The function does not know its ground set size except
/// where the form needs it (`ComplementOf`); callers validate the pairing
/// through [`SetFunction::validate`] once, after which [`SetFunction::value`]
/// is infallible.
#[derive(Debug, Clone, PartialEq)]
pub enum SetFunction {
    /// One value per subset, indexed by mask.
    Table(Vec<Rational>),
    /// Total weight of edges with both endpoints inside the subset.
    EdgesInside(Vec<Edge>),
    /// Sum of per-element weights.
    Linear(Vec<Rational>),
    /// `phi(|S|)` for a concave sequence `phi(0..=n)` with `phi(0) = 0`.
    ConcaveOfCardinality(Vec<Rational>),
    Scaled {
        base: Box<SetFunction>,
        factor: Rational,
    },
    /// `base(S) + eta * |S|`.
    Perturbed {
        base: Box<SetFunction>,
        eta: Rational,
    },
    /// `base(V) - base(V \ S)` on a ground set of size `n`.
    ComplementOf {
        base: Box<SetFunction>,
        n: usize,
    },
    Sum(Vec<SetFunction>),
    /// `base(lift(S) | given)`, where `lift` sends local element `i` to the
    /// parent element `elements[i]`. This is how residual instances are built.
    Marginal {
        base: Box<SetFunction>,
        given: Mask,
        elements: Vec<usize>,
    },
}

impl SetFunction {
    pub fn linear_uniform(n: usize) -> Self {
        SetFunction::Linear(vec![rational::int(1); n])
    }

    pub fn scaled(self, factor: Rational) -> Self {
        SetFunction::Scaled {
            base: Box::new(self),
            factor,
        }
    }

    /// Exact value at `s`. `s` must be a valid mask for the validated size.
    pub fn value(&self, s: Mask) -> Rational {
        match self {
            SetFunction::Table(values) => values[s as usize].clone(),
            SetFunction::EdgesInside(edges) => edges
                .iter()
                .filter(|e| mask::contains(s, e.u) && mask::contains(s, e.v))
                .fold(Rational::zero(), |acc, e| acc + &e.weight),
            SetFunction::Linear(weights) => mask::elements(s).fold(Rational::zero(), |acc, u| acc + &weights[u]),
            SetFunction::ConcaveOfCardinality(phi) => phi[mask::len(s)].clone(),
            SetFunction::Scaled { base, factor } => base.value(s) * factor,
            SetFunction::Perturbed { base, eta } => base.value(s) + eta * Rational::from_integer(mask::len(s).into()),
            SetFunction::ComplementOf { base, n } => {
                let full = mask::full(*n);
                base.value(full) - base.value(full & !s)
            }
            SetFunction::Sum(terms) => terms.iter().fold(Rational::zero(), |acc, t| acc + t.value(s)),
            SetFunction::Marginal { base, given, elements } => {
                let lifted = mask::elements(s).fold(*given, |m, i| m | mask::singleton(elements[i]));
                base.value(lifted) - base.value(*given)
            }
        }
    }

    /// `h(S | A) = h(S ∪ A) - h(A)`.
    pub fn marginal(&self, s: Mask, given: Mask) -> Rational {
        self.value(s | given) - self.value(given)
    }

    /// Checked evaluation against a ground set of size `n`.
    pub fn evaluate(&self, n: usize, s: Mask) -> Result<Rational> {
        if !mask::is_valid(s, n) {
            return Err(Error::InvalidMask { mask: s, n });
        }
        self.validate(n, "h")?;
        Ok(self.value(s))
    }

    /// Structural checks: sizes match `n`, `h(∅) = 0`, and every
    /// coefficient is non-negative. `field` names the function in errors.
    pub fn validate(&self, n: usize, field: &str) -> Result<()> {
        let negative = |what: &str, r: &Rational| -> Result<()> {
            if r.is_negative() {
                Err(Error::schema(
                    field,
                    format!("{what} must be non-negative, got {}", rational::format(r)),
                ))
            } else {
                Ok(())
            }
        };
        match self {
            SetFunction::Table(values) => {
                if n >= 32 || values.len() != 1usize << n {
                    return Err(Error::schema(
                        field,
                        format!("explicit table needs exactly 2^{n} entries, got {}", values.len()),
                    ));
                }
                if !values[0].is_zero() {
                    return Err(Error::schema(field, "value on the empty set must be 0"));
                }
                for (m, v) in values.iter().enumerate() {
                    negative(&format!("table entry {m}"), v)?;
                }
            }
            SetFunction::EdgesInside(edges) => {
                for (i, e) in edges.iter().enumerate() {
                    if e.u >= n || e.v >= n {
                        return Err(Error::schema(field, format!("edge {i} has an endpoint outside 0..{n}")));
                    }
                    negative(&format!("edge {i} weight"), &e.weight)?;
                }
            }
            SetFunction::Linear(weights) => {
                if weights.len() != n {
                    return Err(Error::schema(
                        field,
                        format!("expected {n} weights, got {}", weights.len()),
                    ));
                }
                for (i, w) in weights.iter().enumerate() {
                    negative(&format!("weight {i}"), w)?;
                }
            }
            SetFunction::ConcaveOfCardinality(phi) => {
                if phi.len() != n + 1 {
                    return Err(Error::schema(
                        field,
                        format!("expected {} values phi(0..={n}), got {}", n + 1, phi.len()),
                    ));
                }
                if !phi[0].is_zero() {
                    return Err(Error::schema(field, "phi(0) must be 0"));
                }
                for (i, p) in phi.iter().enumerate() {
                    negative(&format!("phi({i})"), p)?;
                }
                for i in 1..n {
                    if phi[i + 1].clone() - &phi[i] > phi[i].clone() - &phi[i - 1] {
                        return Err(Error::schema(
                            field,
                            format!("increments of phi must be non-increasing (at {i})"),
                        ));
                    }
                }
            }
            SetFunction::Scaled { base, factor } => {
                if !factor.is_positive() {
                    return Err(Error::schema(field, "scale factor must be positive"));
                }
                base.validate(n, field)?;
            }
            SetFunction::Perturbed { base, eta } => {
                if eta.is_negative() {
                    return Err(Error::NegativeEta(rational::format(eta)));
                }
                base.validate(n, field)?;
            }
            SetFunction::ComplementOf { base, n: m } => {
                if *m != n {
                    return Err(Error::schema(
                        field,
                        format!("complement built for size {m}, used with {n}"),
                    ));
                }
                base.validate(n, field)?;
                if n <= 16 {
                    let full = mask::full(n);
                    let top = base.value(full);
                    for s in 0..=full {
                        if base.value(s) > top {
                            return Err(Error::schema(
                                field,
                                "complement of a non-monotone function is negative",
                            ));
                        }
                    }
                }
            }
            SetFunction::Sum(terms) => {
                for t in terms {
                    t.validate(n, field)?;
                }
            }
            SetFunction::Marginal { given, elements, .. } => {
                if elements.len() != n {
                    return Err(Error::schema(
                        field,
                        "marginal element map does not match the ground set",
                    ));
                }
                if elements.iter().any(|&e| mask::contains(*given, e)) {
                    return Err(Error::schema(field, "marginal elements overlap the conditioning set"));
                }
                // the base was validated against the parent ground set
            }
        }
        Ok(())
    }

    /// True when the function is a plain per-element sum.
    pub fn linear_weights(&self) -> Option<Vec<Rational>> {
        match self {
            SetFunction::Linear(w) => Some(w.clone()),
            SetFunction::Scaled { base, factor } => base
                .linear_weights()
                .map(|w| w.into_iter().map(|x| x * factor).collect()),
            SetFunction::Perturbed { base, eta } => {
                base.linear_weights().map(|w| w.into_iter().map(|x| x + eta).collect())
            }
            _ => None,
        }
    }

    /// Materializes all `2^n` values.
    pub fn tabulate(&self, n: usize) -> Vec<Rational> {
        (0..=mask::full(n)).map(|s| self.value(s)).collect()
    }
}
