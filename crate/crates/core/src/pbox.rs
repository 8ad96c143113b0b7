//! Probability boxes and their exact natural extension to all events.

use crate::chain::{Chain, Event, SENTINEL};
use crate::error::{Bound, Error, Result};
use crate::rational::{self, Rational};

/// The half-open quotient interval `(class left, class right]`; `left` may be
/// the sentinel `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfOpen {
    pub left: isize,
    pub right: usize,
}

/// A finite union of separated half-open quotient intervals. Every member of
/// the lattice generated by the p-box domain events has exactly one such
/// canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HSet {
    runs: Vec<HalfOpen>,
}

impl HSet {
    /// Validates that runs lie within a chain of `m` classes, are non-empty,
    /// increasing and separated by at least one class.
    pub fn new(m: usize, runs: Vec<HalfOpen>) -> Result<Self> {
        let mut prev_right: Option<usize> = None;
        for run in &runs {
            if run.left < SENTINEL || run.right >= m || run.left >= run.right as isize {
                return Err(Error::MalformedHSet(format!(
                    "({}, {}] is not a non-empty interval of a {m}-class chain",
                    run.left, run.right
                )));
            }
            if let Some(p) = prev_right {
                if run.left <= p as isize {
                    return Err(Error::MalformedHSet(format!(
                        "({}, {}] touches or overlaps the previous interval",
                        run.left, run.right
                    )));
                }
            }
            prev_right = Some(run.right);
        }
        Ok(HSet { runs })
    }

    /// Maximal runs of `true` entries, one interval each.
    pub fn from_class_mask(mask: &[bool]) -> Self {
        let mut runs = Vec::new();
        let mut start: Option<usize> = None;
        for (i, &hit) in mask.iter().enumerate() {
            match (hit, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push(HalfOpen { left: s as isize - 1, right: i - 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push(HalfOpen { left: s as isize - 1, right: mask.len() - 1 });
        }
        HSet { runs }
    }

    pub fn runs(&self) -> &[HalfOpen] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains_class(&self, class: usize) -> bool {
        self.runs.iter().any(|r| r.left < class as isize && class <= r.right)
    }
}

/// An interval of the chain named by its endpoint labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalEvent<'a> {
    /// `(x, y]`
    LeftOpen(&'a str, &'a str),
    /// `[x, y]`
    Closed(&'a str, &'a str),
    /// `(x, y)`
    Open(&'a str, &'a str),
    /// `[x, y)`
    RightOpen(&'a str, &'a str),
    /// `{x}`, which on a preorder is the whole class of `x`
    Singleton(&'a str),
}

impl IntervalEvent<'_> {
    /// Class index range `lo..=hi` covered by the interval (possibly empty).
    fn class_range(&self, chain: &Chain) -> Result<(isize, isize)> {
        let pair = |x: &str, y: &str| -> Result<(isize, isize)> {
            let (i, j) = (chain.class_of(x)? as isize, chain.class_of(y)? as isize);
            if i >= j {
                return Err(Error::NotStrictlyOrdered { x: x.into(), y: y.into() });
            }
            Ok((i, j))
        };
        Ok(match *self {
            IntervalEvent::LeftOpen(x, y) => {
                let (i, j) = pair(x, y)?;
                (i + 1, j)
            }
            IntervalEvent::Closed(x, y) => pair(x, y)?,
            IntervalEvent::Open(x, y) => {
                let (i, j) = pair(x, y)?;
                (i + 1, j - 1)
            }
            IntervalEvent::RightOpen(x, y) => {
                let (i, j) = pair(x, y)?;
                (i, j - 1)
            }
            IntervalEvent::Singleton(x) => {
                let i = chain.class_of(x)? as isize;
                (i, i)
            }
        })
    }

    /// The set of elements the interval denotes.
    pub fn to_event(&self, chain: &Chain) -> Result<Event> {
        let (lo, hi) = self.class_range(chain)?;
        Ok(chain.class_range_event(lo, hi))
    }
}

/// A pair of lower and upper cumulative distribution functions, one value per
/// quotient class. Both vanish at the sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBox {
    chain: Chain,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl PBox {
    pub fn new(chain: Chain, lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        let m = chain.len();
        for (which, values) in [(Bound::Lower, &lower), (Bound::Upper, &upper)] {
            if values.len() != m {
                return Err(Error::LengthMismatch { which, expected: m, found: values.len() });
            }
            if let Some(index) = values.iter().position(|v| !rational::in_unit_interval(v)) {
                return Err(Error::OutOfRange { which, index });
            }
            if let Some(index) = (1..m).find(|&i| values[i] < values[i - 1]) {
                return Err(Error::NotMonotone { which, index });
            }
        }
        if let Some(index) = (0..m).find(|&i| lower[i] > upper[i]) {
            return Err(Error::BoundOrder { index });
        }
        for (which, values) in [(Bound::Lower, &lower), (Bound::Upper, &upper)] {
            if values[m - 1] != rational::one() {
                return Err(Error::TopNotOne { which });
            }
        }
        Ok(PBox { chain, lower, upper })
    }

    /// Parses both bounds from their textual form.
    pub fn parse(chain: Chain, lower: &[&str], upper: &[&str]) -> Result<Self> {
        let lower = lower.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
        let upper = upper.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
        PBox::new(chain, lower, upper)
    }

    /// Lower bound equal to the indicator of the top class, upper bound ≡ 1.
    pub fn vacuous(chain: Chain) -> Self {
        let m = chain.len();
        let mut lower = vec![rational::zero(); m];
        lower[m - 1] = rational::one();
        PBox { chain, lower, upper: vec![rational::one(); m] }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn is_precise(&self) -> bool {
        self.lower == self.upper
    }

    /// Lower CDF at a class index, `0` at the sentinel.
    pub fn lower_at(&self, index: isize) -> Rational {
        if index < 0 {
            rational::zero()
        } else {
            self.lower[index as usize].clone()
        }
    }

    /// Upper CDF at a class index, `0` at the sentinel.
    pub fn upper_at(&self, index: isize) -> Rational {
        if index < 0 {
            rational::zero()
        } else {
            self.upper[index as usize].clone()
        }
    }

    /// Upper probability of an interval union: one minus the lower
    /// probabilities of the gaps between consecutive intervals, with the
    /// sentinel before the first interval and the top class after the last.
    pub fn upper_on_h(&self, set: &HSet) -> Result<Rational> {
        let m = self.chain.len();
        if let Some(bad) = set.runs().iter().find(|r| r.right >= m) {
            return Err(Error::MalformedHSet(format!(
                "({}, {}] exceeds a {m}-class chain",
                bad.left, bad.right
            )));
        }
        let mut total = rational::one();
        let mut prev_right = SENTINEL;
        let lefts = set
            .runs()
            .iter()
            .map(|r| (r.left, r.right as isize))
            .chain(std::iter::once((self.chain.top() as isize, 0)));
        for (left, right) in lefts {
            let gap = self.lower_at(left) - self.upper_at(prev_right);
            if gap > rational::zero() {
                total -= gap;
            }
            prev_right = right;
        }
        Ok(total)
    }

    /// Natural extension of the p-box to an arbitrary event, through the
    /// least interval union covering it.
    pub fn upper_ext(&self, event: &Event) -> Result<Rational> {
        let cover = self.chain.minimal_cover(event)?;
        self.upper_on_h(&cover)
    }

    /// Conjugate lower probability, `1 - upper_ext(Ω ∖ A)`.
    pub fn lower_ext(&self, event: &Event) -> Result<Rational> {
        let complement = self.chain.complement(event)?;
        Ok(rational::one() - self.upper_ext(&complement)?)
    }

    /// Closed-form upper probability of an interval. On a finite chain every
    /// class above the bottom one has an immediate predecessor, so `z-` is
    /// read as the previous class (or the sentinel).
    pub fn interval_upper(&self, interval: IntervalEvent<'_>) -> Result<Rational> {
        let class = |l: &str| self.chain.class_of(l).map(|i| i as isize);
        let ordered = |x: &str, y: &str| -> Result<(isize, isize)> {
            let (i, j) = (class(x)?, class(y)?);
            if i >= j {
                return Err(Error::NotStrictlyOrdered { x: x.into(), y: y.into() });
            }
            Ok((i, j))
        };
        Ok(match interval {
            IntervalEvent::LeftOpen(x, y) => {
                let (i, j) = ordered(x, y)?;
                self.upper_at(j) - self.lower_at(i)
            }
            IntervalEvent::Closed(x, y) => {
                let (i, j) = ordered(x, y)?;
                self.upper_at(j) - self.lower_at(i - 1)
            }
            IntervalEvent::Open(x, y) => {
                let (i, j) = ordered(x, y)?;
                // (x, y) is empty when y immediately follows x
                if j == i + 1 {
                    rational::zero()
                } else {
                    self.upper_at(j - 1) - self.lower_at(i)
                }
            }
            IntervalEvent::RightOpen(x, y) => {
                let (i, j) = ordered(x, y)?;
                self.upper_at(j - 1) - self.lower_at(i - 1)
            }
            IntervalEvent::Singleton(x) => {
                let i = class(x)?;
                self.upper_at(i) - self.lower_at(i - 1)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn abc() -> Chain {
        Chain::singletons(["a", "b", "c"]).unwrap()
    }

    fn p1() -> PBox {
        PBox::parse(abc(), &["0", "0", "1"], &["1/2", "4/5", "1"]).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(PBox::parse(abc(), &["0", "0", "1"], &["1/2", "0.8", "1"]).is_ok());
        assert_eq!(
            PBox::parse(abc(), &["0", "1/2", "1"], &["0", "2/5", "1"]),
            Err(Error::BoundOrder { index: 1 })
        );
        assert_eq!(
            PBox::parse(abc(), &["0", "0", "0.9"], &["1", "1", "1"]),
            Err(Error::TopNotOne { which: Bound::Lower })
        );
        assert_eq!(
            PBox::parse(abc(), &["0", "1/2", "1/4"], &["1", "1", "1"]),
            Err(Error::NotMonotone { which: Bound::Lower, index: 2 })
        );
        assert_eq!(
            PBox::parse(abc(), &["0", "1"], &["1", "1", "1"]),
            Err(Error::LengthMismatch { which: Bound::Lower, expected: 3, found: 2 })
        );
        assert_eq!(
            PBox::parse(abc(), &["0", "0", "1"], &["-1/2", "1", "1"]),
            Err(Error::OutOfRange { which: Bound::Upper, index: 0 })
        );
    }

    #[test]
    fn upper_on_h_examples() {
        let p = p1();
        let set =
            HSet::new(3, vec![HalfOpen { left: -1, right: 0 }, HalfOpen { left: 1, right: 2 }]).unwrap();
        assert_eq!(p.upper_on_h(&set).unwrap(), int(1));
        let set = HSet::new(3, vec![HalfOpen { left: 0, right: 1 }]).unwrap();
        assert_eq!(p.upper_on_h(&set).unwrap(), ratio(4, 5));
        let set = HSet::new(3, vec![HalfOpen { left: -1, right: 2 }]).unwrap();
        assert_eq!(p.upper_on_h(&set).unwrap(), int(1));
        assert_eq!(p.upper_on_h(&HSet::default()).unwrap(), int(0));
    }

    #[test]
    fn malformed_hsets() {
        assert!(HSet::new(3, vec![HalfOpen { left: 0, right: 0 }]).is_err());
        assert!(HSet::new(3, vec![HalfOpen { left: -1, right: 3 }]).is_err());
        assert!(HSet::new(3, vec![HalfOpen { left: -2, right: 1 }]).is_err());
        assert!(HSet::new(3, vec![HalfOpen { left: -1, right: 0 }, HalfOpen { left: 0, right: 2 }]).is_err());
        let too_big = HSet::new(5, vec![HalfOpen { left: 0, right: 4 }]).unwrap();
        assert!(p1().upper_on_h(&too_big).is_err());
    }

    #[test]
    fn upper_and_lower_examples() {
        let p = p1();
        let c = p.chain().clone();
        assert_eq!(p.upper_ext(&c.event(["a"]).unwrap()).unwrap(), ratio(1, 2));
        assert_eq!(p.upper_ext(&Event::empty()).unwrap(), int(0));
        assert_eq!(p.upper_ext(&c.event(["a", "c"]).unwrap()).unwrap(), int(1));
        assert_eq!(p.lower_ext(&c.universe()).unwrap(), int(1));
        assert_eq!(p.lower_ext(&c.event(["a"]).unwrap()).unwrap(), int(0));
        assert_eq!(p.lower_ext(&c.event(["c"]).unwrap()).unwrap(), ratio(1, 5));
        assert!(p.upper_ext(&Event::from_labels(["zz"])).is_err());
    }

    #[test]
    fn interval_examples() {
        let p = p1();
        assert_eq!(p.interval_upper(IntervalEvent::Singleton("b")).unwrap(), ratio(4, 5));
        assert_eq!(p.interval_upper(IntervalEvent::Closed("a", "b")).unwrap(), ratio(4, 5));
        assert_eq!(p.interval_upper(IntervalEvent::Open("a", "c")).unwrap(), ratio(4, 5));
        assert_eq!(p.interval_upper(IntervalEvent::Open("a", "b")).unwrap(), int(0));
        assert_eq!(
            p.interval_upper(IntervalEvent::LeftOpen("b", "a")),
            Err(Error::NotStrictlyOrdered { x: "b".into(), y: "a".into() })
        );
        assert!(p.interval_upper(IntervalEvent::Closed("a", "a")).is_err());
    }

    #[test]
    fn domain_events_reproduce_bounds() {
        let p = p1();
        let c = p.chain();
        for i in 0..3 {
            let down = c.class_range_event(0, i);
            let up = c.class_range_event(i + 1, 2);
            assert_eq!(p.upper_ext(&down).unwrap(), p.upper()[i as usize]);
            assert_eq!(p.upper_ext(&up).unwrap(), int(1) - &p.lower()[i as usize]);
        }
    }
}
