//! Finite totally preordered spaces, stored through their quotient chain.
//!
//! Class `0` holds the smallest elements and class `m - 1` the largest. The
//! extra bottom element sitting below every class is never materialized as a
//! label; wherever a class index may point at it, the index `-1` is used.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::pbox::{HSet, HalfOpen};

/// Index of the bottom sentinel below class `0`.
pub const SENTINEL: isize = -1;

/// Events are capped at this many labels whenever all of them are listed.
pub const MAX_ENUMERATED_LABELS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    classes: Vec<Vec<String>>,
    index: BTreeMap<String, usize>,
}

impl Chain {
    pub fn new<I, C, S>(classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let classes: Vec<Vec<String>> =
            classes.into_iter().map(|c| c.into_iter().map(Into::into).collect()).collect();
        if classes.is_empty() {
            return Err(Error::EmptyClassList);
        }
        let mut index = BTreeMap::new();
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::EmptyClass(i));
            }
            for label in class {
                if index.insert(label.clone(), i).is_some() {
                    return Err(Error::DuplicateLabel(label.clone()));
                }
            }
        }
        Ok(Chain { classes, index })
    }

    /// One singleton class per label, in the given order.
    pub fn singletons<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Chain::new(labels.into_iter().map(|l| vec![l.into()]))
    }

    /// Number of equivalence classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn num_labels(&self) -> usize {
        self.index.len()
    }

    /// Labels in class order, preserving the order within each class.
    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.classes.iter().flatten().map(String::as_str)
    }

    pub fn class_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// `Less` for x ≺ y, `Equal` for x ≃ y, `Greater` for x ≻ y.
    pub fn compare(&self, x: &str, y: &str) -> Result<Ordering> {
        Ok(self.class_of(x)?.cmp(&self.class_of(y)?))
    }

    pub fn event<I, S>(&self, labels: I) -> Result<Event>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let event = Event::from_labels(labels);
        self.check(&event)?;
        Ok(event)
    }

    pub fn check(&self, event: &Event) -> Result<()> {
        match event.iter().find(|l| !self.contains(l)) {
            Some(label) => Err(Error::UnknownLabel(label.to_string())),
            None => Ok(()),
        }
    }

    pub fn universe(&self) -> Event {
        Event::from_labels(self.labels())
    }

    pub fn complement(&self, event: &Event) -> Result<Event> {
        self.check(event)?;
        Ok(Event::from_labels(self.labels().filter(|l| !event.contains(l))))
    }

    /// All labels of the classes whose index lies in `lo..=hi` (clamped).
    pub fn class_range_event(&self, lo: isize, hi: isize) -> Event {
        let lo = lo.max(0);
        let hi = hi.min(self.top() as isize);
        if lo > hi {
            return Event::default();
        }
        Event::from_labels(self.classes[lo as usize..=hi as usize].iter().flatten().cloned())
    }

    /// The union of whole classes selected by `mask`.
    pub fn event_from_classes(&self, mask: &[bool]) -> Event {
        Event::from_labels(
            self.classes.iter().zip(mask).filter(|(_, &hit)| hit).flat_map(|(c, _)| c.iter().cloned()),
        )
    }

    /// For each class, whether the event intersects it.
    pub fn hit_classes(&self, event: &Event) -> Result<Vec<bool>> {
        let mut hits = vec![false; self.len()];
        for label in event.iter() {
            hits[self.class_of(label)?] = true;
        }
        Ok(hits)
    }

    /// The ⊆-least union of half-open quotient intervals containing `event`:
    /// each maximal run of consecutive classes meeting the event becomes one
    /// interval `(start - 1, end]`.
    pub fn minimal_cover(&self, event: &Event) -> Result<HSet> {
        let hits = self.hit_classes(event)?;
        Ok(HSet::from_class_mask(&hits))
    }

    /// Every subset of the label set, ordered by bitmask over
    /// [`Chain::labels`].
    pub fn events(&self) -> Result<Vec<Event>> {
        let labels: Vec<&str> = self.labels().collect();
        if labels.len() > MAX_ENUMERATED_LABELS {
            return Err(Error::TooLarge { size: labels.len(), limit: MAX_ENUMERATED_LABELS });
        }
        Ok((0u32..1 << labels.len())
            .map(|bits| {
                Event::from_labels(
                    labels.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, l)| *l),
                )
            })
            .collect())
    }

    /// The element set of an interval union, as an event.
    pub fn hset_event(&self, set: &HSet) -> Event {
        let mask: Vec<bool> = (0..self.len()).map(|i| set.contains_class(i)).collect();
        self.event_from_classes(&mask)
    }

    /// The runs of an interval union rendered with class representatives,
    /// e.g. `(0-, a] ∪ (b, c]`.
    pub fn describe(&self, set: &HSet) -> String {
        if set.is_empty() {
            return "∅".to_string();
        }
        let name = |i: isize| {
            if i == SENTINEL {
                "0-".to_string()
            } else {
                self.classes[i as usize][0].clone()
            }
        };
        set.runs()
            .iter()
            .map(|HalfOpen { left, right }| format!("({}, {}]", name(*left), name(*right as isize)))
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

/// A finite set of element labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(BTreeSet<String>);

impl Event {
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Event(labels.into_iter().map(Into::into).collect())
    }

    pub fn empty() -> Self {
        Event::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Event) -> Event {
        Event(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}
