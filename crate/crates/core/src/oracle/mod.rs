//! Ground truth by linear programming over the credal set of a p-box.
//!
//! The natural extension is the upper envelope of all probability mass
//! functions whose cumulative sums stay between the two bounds; each query
//! here solves that optimization exactly instead of using a closed form.

pub mod enumerate;
pub mod simplex;

use std::collections::HashMap;

use crate::chain::{Chain, Event};
use crate::error::{Error, Result};
use crate::pbox::PBox;
use crate::possibility::PossDist;
use crate::rational::{self, Rational};

use simplex::{Constraint, LpOutcome, Relation};

/// Event-pair sweeps are limited to this many labels.
pub const MAX_PAIR_LABELS: usize = 10;

/// Possibility constraint systems list one constraint per event, so they
/// are limited to this many labels.
pub const MAX_CONSTRAINT_LABELS: usize = 8;

/// Linear description of a credal set: nonnegative masses, one per variable,
/// summing to one, plus the listed constraints.
#[derive(Debug, Clone)]
pub struct CredalLp {
    variables: usize,
    constraints: Vec<Constraint>,
}

impl CredalLp {
    fn simplex_only(variables: usize) -> Self {
        CredalLp {
            variables,
            constraints: vec![Constraint {
                coeffs: vec![rational::one(); variables],
                relation: Relation::Eq,
                rhs: rational::one(),
            }],
        }
    }

    /// Adds `lower ≤ Σ mass over vars ≤ upper` for the cumulative sums of
    /// `weights` (one weight vector per class).
    fn with_cdf_bounds(mut self, p: &PBox, weights: impl Fn(usize) -> Vec<Rational>) -> Self {
        for i in 0..p.chain().len() {
            let coeffs = weights(i);
            self.constraints.push(Constraint {
                coeffs: coeffs.clone(),
                relation: Relation::Le,
                rhs: p.upper()[i].clone(),
            });
            self.constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs: p.lower()[i].clone() });
        }
        self
    }

    /// One mass per quotient class.
    pub fn class_level(p: &PBox) -> Self {
        let m = p.chain().len();
        CredalLp::simplex_only(m).with_cdf_bounds(p, |i| {
            (0..m).map(|j| if j <= i { rational::one() } else { rational::zero() }).collect()
        })
    }

    /// One mass per label, in [`Chain::labels`] order.
    pub fn element_level(p: &PBox) -> Self {
        let classes: Vec<usize> =
            p.chain().labels().map(|l| p.chain().class_of(l).expect("own label")).collect();
        CredalLp::simplex_only(classes.len()).with_cdf_bounds(p, |i| {
            classes.iter().map(|&c| if c <= i { rational::one() } else { rational::zero() }).collect()
        })
    }

    /// Probability mass functions on `variables` points, unconstrained.
    pub fn unconstrained(variables: usize) -> Self {
        CredalLp::simplex_only(variables)
    }

    /// Adds the constraint `Σ_{selected} mass ≤ bound`.
    pub fn with_upper_bound(mut self, selected: &[bool], bound: Rational) -> Self {
        assert_eq!(selected.len(), self.variables);
        self.constraints.push(Constraint {
            coeffs: selected.iter().map(|&s| if s { rational::one() } else { rational::zero() }).collect(),
            relation: Relation::Le,
            rhs: bound,
        });
        self
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Maximum total mass on the selected variables.
    pub fn maximize(&self, selected: &[bool]) -> LpOutcome {
        let objective: Vec<Rational> =
            selected.iter().map(|&s| if s { rational::one() } else { rational::zero() }).collect();
        simplex::maximize(&objective, &self.constraints)
    }

    fn upper(&self, selected: &[bool]) -> Rational {
        match self.maximize(selected) {
            LpOutcome::Optimal { value, .. } => value,
            // the credal set of a valid p-box is a non-empty polytope
            other => panic!("credal program has no optimum: {other:?}"),
        }
    }
}

fn label_mask(chain: &Chain, event: &Event) -> Result<Vec<bool>> {
    chain.check(event)?;
    Ok(chain.labels().map(|l| event.contains(l)).collect())
}

/// Upper probability of an event as the maximum of `P(A)` over the credal
/// set. A class meeting the event can carry all of its mass inside it.
pub fn credal_upper_lp(p: &PBox, event: &Event) -> Result<Rational> {
    let hits = p.chain().hit_classes(event)?;
    Ok(CredalLp::class_level(p).upper(&hits))
}

/// The same optimum with one mass per label.
pub fn credal_upper_lp_elements(p: &PBox, event: &Event) -> Result<Rational> {
    let mask = label_mask(p.chain(), event)?;
    Ok(CredalLp::element_level(p).upper(&mask))
}

pub fn credal_lower_lp(p: &PBox, event: &Event) -> Result<Rational> {
    let complement = p.chain().complement(event)?;
    Ok(rational::one() - credal_upper_lp(p, &complement)?)
}

/// Whether the credal optimum reproduces the p-box on its own domain:
/// `F̄(x)` on every `[0, x]` and `1 - F̲(y)` on every `(y, 1]`.
pub fn check_coherence(p: &PBox) -> bool {
    let chain = p.chain();
    let lp = CredalLp::class_level(p);
    let m = chain.len();
    (0..m).all(|i| {
        let down: Vec<bool> = (0..m).map(|j| j <= i).collect();
        let up: Vec<bool> = (0..m).map(|j| j > i).collect();
        lp.upper(&down) == p.upper()[i] && lp.upper(&up) == rational::one() - &p.lower()[i]
    })
}

/// First pair of events `(A, B)` with `P̄(A ∪ B) ≠ max(P̄(A), P̄(B))`, where
/// `P̄` is the credal-set optimum.
pub fn max_preserving_witness(p: &PBox) -> Result<Option<(Event, Event)>> {
    let chain = p.chain();
    if chain.num_labels() > MAX_PAIR_LABELS {
        return Err(Error::TooLarge { size: chain.num_labels(), limit: MAX_PAIR_LABELS });
    }
    let events = chain.events()?;
    let lp = CredalLp::class_level(p);
    let mut cache: HashMap<Vec<bool>, Rational> = HashMap::new();
    let mut uppers = Vec::with_capacity(events.len());
    for e in &events {
        let hits = chain.hit_classes(e)?;
        let v = cache.entry(hits.clone()).or_insert_with(|| lp.upper(&hits)).clone();
        uppers.push(v);
    }
    // events are indexed by label bitmask, so the union is a bitwise or
    for a in 0..events.len() {
        for b in a + 1..events.len() {
            let union = &uppers[a | b];
            if *union != (&uppers[a]).max(&uppers[b]).clone() {
                return Ok(Some((events[a].clone(), events[b].clone())));
            }
        }
    }
    Ok(None)
}

/// Whether the credal upper probability is maximum-preserving on every pair
/// of events.
pub fn exhaustive_maxpreserving(p: &PBox) -> Result<bool> {
    Ok(max_preserving_witness(p)?.is_none())
}

/// First event on which the p-box credal set and the intersection of the two
/// possibility credal sets have different upper probabilities.
pub fn credal_intersection_witness(p: &PBox, pi1: &PossDist, pi2: &PossDist) -> Result<Option<Event>> {
    let chain = p.chain();
    if !pi1.matches_chain(chain) || !pi2.matches_chain(chain) {
        return Err(Error::ChainMismatch);
    }
    if chain.num_labels() > MAX_CONSTRAINT_LABELS {
        return Err(Error::TooLarge { size: chain.num_labels(), limit: MAX_CONSTRAINT_LABELS });
    }
    let events = chain.events()?;
    let pbox_lp = CredalLp::element_level(p);
    let mut poss_lp = CredalLp::unconstrained(chain.num_labels());
    for e in events.iter().filter(|e| !e.is_empty()) {
        let mask = label_mask(chain, e)?;
        for pi in [pi1, pi2] {
            poss_lp = poss_lp.with_upper_bound(&mask, pi.measure(e)?);
        }
    }
    for e in &events {
        let mask = label_mask(chain, e)?;
        let poss = match poss_lp.maximize(&mask) {
            LpOutcome::Optimal { value, .. } => value,
            // an empty intersection cannot equal a non-empty p-box credal set
            _ => return Ok(Some(Event::empty())),
        };
        if pbox_lp.upper(&mask) != poss {
            return Ok(Some(e.clone()));
        }
    }
    Ok(None)
}

pub fn credal_intersection_equal(p: &PBox, pi1: &PossDist, pi2: &PossDist) -> Result<bool> {
    Ok(credal_intersection_witness(p, pi1, pi2)?.is_none())
}
