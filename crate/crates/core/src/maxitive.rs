//! Maximum-preserving p-boxes and the closed forms of their natural
//! extension when one or both bounds take only the values 0 and 1.
//!
//! Infima and suprema over the extended space are evaluated by scanning the
//! `m + 1` indices `-1..m`; an empty infimum is 1 and an empty supremum is 0.
//! The empty set is below and above everything.

use crate::chain::{Event, SENTINEL};
use crate::error::{Error, Result};
use crate::pbox::PBox;
use crate::rational::{self, Rational};

/// The zero sets of both bounds as prefixes of the extended chain.
///
/// `b` is the last index (possibly the sentinel) where the lower CDF is 0,
/// so B = `-1..=b`; likewise `c` for the upper CDF and C = `-1..=c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroOneView {
    pub b: isize,
    pub c: isize,
    pub lower_is_01: bool,
    pub upper_is_01: bool,
}

impl ZeroOneView {
    pub fn in_b(&self, index: isize) -> bool {
        index <= self.b
    }

    pub fn in_c(&self, index: isize) -> bool {
        index <= self.c
    }
}

fn is_01(values: &[Rational]) -> bool {
    values.iter().all(|v| *v == rational::zero() || *v == rational::one())
}

fn last_zero(values: &[Rational]) -> isize {
    values.iter().rposition(|v| *v == rational::zero()).map_or(SENTINEL, |i| i as isize)
}

pub fn zero_one_view(p: &PBox) -> ZeroOneView {
    ZeroOneView {
        b: last_zero(p.lower()),
        c: last_zero(p.upper()),
        lower_is_01: is_01(p.lower()),
        upper_is_01: is_01(p.upper()),
    }
}

/// A p-box is maximum-preserving exactly when one of its bounds is 0–1-valued.
pub fn is_maxitive(p: &PBox) -> bool {
    let view = zero_one_view(p);
    view.lower_is_01 || view.upper_is_01
}

/// Sorted class indices met by the event.
fn hit_indices(p: &PBox, event: &Event) -> Result<Vec<isize>> {
    let hits = p.chain().hit_classes(event)?;
    Ok(hits.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i as isize).collect())
}

/// Natural extension for a 0–1-valued lower CDF:
/// `min over y ∈ Bᶜ of inf { F̄(x) : A ∩ [0, y] ⪯ x }`.
pub fn upper_ext_01lower(p: &PBox, event: &Event) -> Result<Rational> {
    let view = zero_one_view(p);
    if !view.lower_is_01 {
        return Err(Error::Precondition("lower CDF is not 0-1-valued"));
    }
    let hits = hit_indices(p, event)?;
    let top = p.chain().top() as isize;
    let mut best = rational::one();
    for y in view.b + 1..=top {
        // sup of A ∩ [0, y]; the sentinel when the intersection is empty
        let sup = hits.iter().copied().filter(|&i| i <= y).max().unwrap_or(SENTINEL);
        let inf =
            (SENTINEL..=top).filter(|&x| x >= sup).map(|x| p.upper_at(x)).min().unwrap_or_else(rational::one);
        if inf < best {
            best = inf;
        }
    }
    Ok(best)
}

/// Natural extension for a 0–1-valued upper CDF:
/// `1 - max over x ∈ C of sup { F̲(y) : y ≺ A ∩ (x, 1] }`.
pub fn upper_ext_01upper(p: &PBox, event: &Event) -> Result<Rational> {
    let view = zero_one_view(p);
    if !view.upper_is_01 {
        return Err(Error::Precondition("upper CDF is not 0-1-valued"));
    }
    let hits = hit_indices(p, event)?;
    let top = p.chain().top() as isize;
    let mut worst = rational::zero();
    for x in SENTINEL..=view.c {
        // inf of A ∩ (x, 1]; past the top when the intersection is empty
        let inf = hits.iter().copied().filter(|&i| i > x).min().unwrap_or(top + 1);
        let sup =
            (SENTINEL..=top).filter(|&y| y < inf).map(|y| p.lower_at(y)).max().unwrap_or_else(rational::zero);
        if sup > worst {
            worst = sup;
        }
    }
    Ok(rational::one() - worst)
}

/// Natural extension when both bounds are 0–1-valued: it is 0 if some x ∈ C
/// bounds A ∩ C from above, A misses B ∖ C, and some y ∈ Bᶜ lies strictly
/// below A ∩ Bᶜ; otherwise 1. With B = C this is the precise 0–1 case.
pub fn upper_ext_01both(p: &PBox, event: &Event) -> Result<Rational> {
    let view = zero_one_view(p);
    if !(view.lower_is_01 && view.upper_is_01) {
        return Err(Error::Precondition("p-box is not 0-1-valued on both sides"));
    }
    let hits = hit_indices(p, event)?;
    let top = p.chain().top() as isize;

    let in_c: Vec<isize> = hits.iter().copied().filter(|&i| view.in_c(i)).collect();
    let bounded_in_c = (SENTINEL..=view.c).any(|x| in_c.iter().all(|&i| i <= x));
    let misses_gap = !hits.iter().any(|&i| view.in_b(i) && !view.in_c(i));
    let in_bc: Vec<isize> = hits.iter().copied().filter(|&i| !view.in_b(i)).collect();
    let below_in_bc = (view.b + 1..=top).any(|y| in_bc.iter().all(|&i| y < i));

    Ok(if bounded_in_c && misses_gap && below_in_bc { rational::zero() } else { rational::one() })
}
