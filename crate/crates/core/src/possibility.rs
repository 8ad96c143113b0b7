//! Possibility distributions and their correspondence with p-boxes.

use std::collections::BTreeMap;

use crate::chain::{Chain, Event};
use crate::error::{Error, Result};
use crate::maxitive::{self, zero_one_view};
use crate::pbox::PBox;
use crate::rational::{self, Rational};

/// Exhaustive checks over events are limited to chains with at most this
/// many classes.
pub const MAX_VERIFIED_CLASSES: usize = 16;

/// A normalized possibility distribution over a finite label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossDist {
    values: BTreeMap<String, Rational>,
}

impl PossDist {
    pub fn new<I, S>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, value) in values {
            let label = label.into();
            if !rational::in_unit_interval(&value) {
                return Err(Error::PossibilityOutOfRange(label));
            }
            if map.insert(label.clone(), value).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
        }
        let max = rational::max_of(map.values()).ok_or(Error::EmptyDistribution)?;
        if max != rational::one() {
            return Err(Error::NotNormalized(rational::format(&max)));
        }
        Ok(PossDist { values: map })
    }

    pub fn parse<'a, I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let parsed = values
            .into_iter()
            .map(|(l, v)| rational::parse(v).map(|v| (l.to_string(), v)))
            .collect::<Result<Vec<_>>>()?;
        PossDist::new(parsed)
    }

    pub fn values(&self) -> &BTreeMap<String, Rational> {
        &self.values
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.values.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, label: &str) -> Result<&Rational> {
        self.values.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn universe(&self) -> Event {
        Event::from_labels(self.labels())
    }

    pub fn complement(&self, event: &Event) -> Result<Event> {
        for l in event.iter() {
            self.value(l)?;
        }
        Ok(Event::from_labels(self.labels().filter(|l| !event.contains(l))))
    }

    /// Π(A) = max of π over A, 0 for the empty event.
    pub fn measure(&self, event: &Event) -> Result<Rational> {
        let mut best = rational::zero();
        for label in event.iter() {
            let v = self.value(label)?;
            if *v > best {
                best = v.clone();
            }
        }
        Ok(best)
    }

    /// Conjugate necessity, `1 - Π(Aᶜ)`.
    pub fn necessity(&self, event: &Event) -> Result<Rational> {
        Ok(rational::one() - self.measure(&self.complement(event)?)?)
    }

    /// Whether the label set equals the chain's label set.
    pub fn matches_chain(&self, chain: &Chain) -> bool {
        self.len() == chain.num_labels() && chain.labels().all(|l| self.values.contains_key(l))
    }
}

/// Outcome of testing whether a p-box is a possibility measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PossibilityCheck {
    Possibility(PossDist),
    /// `witness` is an event whose upper probability differs from the
    /// maximum over its singletons.
    NotPossibility {
        witness: Event,
    },
}

impl PossibilityCheck {
    pub fn distribution(&self) -> Option<&PossDist> {
        match self {
            PossibilityCheck::Possibility(pi) => Some(pi),
            PossibilityCheck::NotPossibility { .. } => None,
        }
    }
}

/// First union of whole classes on which `upper_ext` differs from the
/// maximum of the per-class singleton values.
fn lemma_witness(p: &PBox, singleton: &[Rational]) -> Result<Option<Event>> {
    let chain = p.chain();
    let m = chain.len();
    if m > MAX_VERIFIED_CLASSES {
        return Err(Error::TooLarge { size: m, limit: MAX_VERIFIED_CLASSES });
    }
    for bits in 0u32..1 << m {
        let mask: Vec<bool> = (0..m).map(|i| bits >> i & 1 == 1).collect();
        let event = chain.event_from_classes(&mask);
        let expected = rational::max_of(mask.iter().zip(singleton).filter(|(&h, _)| h).map(|(_, v)| v))
            .unwrap_or_else(rational::zero);
        if p.upper_ext(&event)? != expected {
            return Ok(Some(event));
        }
    }
    Ok(None)
}

/// Returns the possibility distribution `π(x) = upper_ext({x})` when the
/// natural extension of `p` is a possibility measure. The identity
/// `upper_ext(A) = max over x ∈ A of π(x)` is verified on every union of
/// classes before the distribution is returned.
pub fn pbox_to_possibility(p: &PBox) -> Result<PossibilityCheck> {
    let chain = p.chain();
    let singleton: Vec<Rational> =
        (0..chain.len() as isize).map(|i| p.upper_at(i) - p.lower_at(i - 1)).collect();
    if let Some(witness) = lemma_witness(p, &singleton)? {
        return Ok(PossibilityCheck::NotPossibility { witness });
    }
    debug_assert!(maxitive::is_maxitive(p));
    let values = chain
        .classes()
        .iter()
        .zip(&singleton)
        .flat_map(|(class, v)| class.iter().map(move |l| (l.clone(), v.clone())));
    Ok(PossibilityCheck::Possibility(PossDist::new(values)?))
}

/// The p-box on the preorder induced by π: classes are the level sets of π
/// in increasing order, the lower CDF is vacuous and the upper CDF is π.
pub fn possibility_to_pbox(pi: &PossDist) -> Result<(Chain, PBox)> {
    let mut levels: BTreeMap<&Rational, Vec<String>> = BTreeMap::new();
    for (label, value) in pi.values() {
        levels.entry(value).or_default().push(label.clone());
    }
    let upper: Vec<Rational> = levels.keys().map(|v| (*v).clone()).collect();
    let chain = Chain::new(levels.into_values())?;
    let mut lower = vec![rational::zero(); chain.len()];
    *lower.last_mut().expect("non-empty chain") = rational::one();
    let pbox = PBox::new(chain.clone(), lower, upper)?;
    Ok((chain, pbox))
}

/// The 0–1 possibility distribution of a p-box whose bounds are both
/// 0–1-valued: 1 exactly on `(max C, min Bᶜ]`. On a finite chain the maximum
/// and minimum always exist.
pub fn zero_one_possibility(p: &PBox) -> Result<PossDist> {
    let view = zero_one_view(p);
    if !(view.lower_is_01 && view.upper_is_01) {
        return Err(Error::Precondition("p-box is not 0-1-valued on both sides"));
    }
    let min_bc = view.b + 1;
    let values = p.chain().classes().iter().enumerate().flat_map(|(i, class)| {
        let i = i as isize;
        let v = if view.c < i && i <= min_bc { rational::one() } else { rational::zero() };
        class.iter().map(move |l| (l.clone(), v.clone()))
    });
    PossDist::new(values)
}

/// The two possibility distributions whose credal sets intersect to the
/// p-box's: `π₁(x) = 1 - F̲(x-)` and `π₂(x) = F̄(x)`.
pub fn conjunction_decompose(p: &PBox) -> Result<(PossDist, PossDist)> {
    let chain = p.chain();
    let per_class = |f: &dyn Fn(isize) -> Rational| {
        chain
            .classes()
            .iter()
            .enumerate()
            .flat_map(|(i, class)| {
                let v = f(i as isize);
                class.iter().map(move |l| (l.clone(), v.clone()))
            })
            .collect::<Vec<_>>()
    };
    let pi1 = PossDist::new(per_class(&|i| rational::one() - p.lower_at(i - 1)))?;
    let pi2 = PossDist::new(per_class(&|i| p.upper_at(i)))?;
    Ok((pi1, pi2))
}

/// Outer bounds on the p-box from its two possibility components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctionBounds {
    pub approx_lower: Rational,
    pub approx_upper: Rational,
}

pub fn conjunction_bounds(p: &PBox, event: &Event) -> Result<ConjunctionBounds> {
    p.chain().check(event)?;
    let (pi1, pi2) = conjunction_decompose(p)?;
    let approx_upper = pi1.measure(event)?.min(pi2.measure(event)?);
    let approx_lower = pi1.necessity(event)?.max(pi2.necessity(event)?);
    Ok(ConjunctionBounds { approx_lower, approx_upper })
}
