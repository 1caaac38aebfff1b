//! Enumerations, fair interleaving, fuelled semi-decisions and the fixed codings.
//!
//! An [`Enumeration`] is a pure function from a step index to a [`Step`], so
//! querying it never mutates anything and two runs with the same schedule see
//! the same results. Productivity is explicit: a step may emit nothing.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// The result of a single query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step<T> {
    Item(T),
    Pass,
}

/// A possibly infinite, queryable source of items.
///
/// Steps at or beyond the horizon of a finite source are [`Step::Pass`].
#[derive(Clone)]
pub struct Enumeration<T> {
    source: Arc<dyn Fn(usize) -> Step<T> + Send + Sync>,
    horizon: Option<usize>,
}

impl<T> fmt::Debug for Enumeration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Enumeration")
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

impl<T: Clone + Send + Sync + 'static> Enumeration<T> {
    /// An unbounded enumeration.
    pub fn from_fn(f: impl Fn(usize) -> Step<T> + Send + Sync + 'static) -> Self {
        Self {
            source: Arc::new(f),
            horizon: None,
        }
    }

    /// Emits `items` in order, one per step, then exhausts.
    pub fn finite(items: Vec<T>) -> Self {
        let horizon = items.len();
        Self {
            source: Arc::new(move |t| match items.get(t) {
                Some(x) => Step::Item(x.clone()),
                None => Step::Pass,
            }),
            horizon: Some(horizon),
        }
    }

    pub fn empty() -> Self {
        Self::finite(Vec::new())
    }

    /// Declares that every step from `horizon` on is a pass.
    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = Some(self.horizon.map_or(horizon, |h| h.min(horizon)));
        self
    }

    pub fn query(&self, step: usize) -> Step<T> {
        if self.is_exhausted_at(step) {
            Step::Pass
        } else {
            (self.source)(step)
        }
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn is_exhausted_at(&self, step: usize) -> bool {
        self.horizon.is_some_and(|h| step >= h)
    }

    /// Items emitted during the first `steps` queries, in emission order.
    pub fn prefix(&self, steps: usize) -> Vec<T> {
        (0..steps)
            .filter_map(|t| match self.query(t) {
                Step::Item(x) => Some(x),
                Step::Pass => None,
            })
            .collect()
    }

    pub fn map<U: Clone + Send + Sync + 'static>(
        self,
        f: impl Fn(T) -> U + Send + Sync + 'static,
    ) -> Enumeration<U> {
        let source = self.source;
        Enumeration {
            source: Arc::new(move |t| match source(t) {
                Step::Item(x) => Step::Item(f(x)),
                Step::Pass => Step::Pass,
            }),
            horizon: self.horizon,
        }
    }
}

/// Round-robin interleaving: step `t` queries source `t mod k` at its own step `t div k`.
///
/// Items are tagged with the index of the source that produced them.
///
/// # Panics
///
/// Panics if `sources` is empty.
pub fn dovetail<T: Clone + Send + Sync + 'static>(
    sources: Vec<Enumeration<T>>,
) -> Enumeration<(usize, T)> {
    assert!(!sources.is_empty(), "dovetail needs at least one source");
    let k = sources.len();
    let horizon = sources
        .iter()
        .map(Enumeration::horizon)
        .collect::<Option<Vec<_>>>()
        .map(|hs| k * hs.into_iter().max().unwrap_or(0));
    let out = Enumeration::from_fn(move |t| {
        let i = t % k;
        match sources[i].query(t / k) {
            Step::Item(x) => Step::Item((i, x)),
            Step::Pass => Step::Pass,
        }
    });
    match horizon {
        Some(h) => out.with_horizon(h),
        None => out,
    }
}

/// Budget of enumeration queries a semi-decision may spend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fuel(pub usize);

impl Default for Fuel {
    fn default() -> Self {
        Fuel(10_000)
    }
}

/// Answer of a semi-decision: `Unknown` only means the budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semi {
    Yes,
    Unknown,
}

/// A computably enumerable set: everything its enumeration ever emits.
#[derive(Clone, Debug)]
pub struct CeSet<T = usize> {
    enumeration: Enumeration<T>,
    known: Option<BTreeSet<T>>,
}

impl<T: Clone + Ord + Send + Sync + 'static> CeSet<T> {
    pub fn finite(items: impl IntoIterator<Item = T>) -> Self {
        let known: BTreeSet<T> = items.into_iter().collect();
        Self {
            enumeration: Enumeration::finite(known.iter().cloned().collect()),
            known: Some(known),
        }
    }

    pub fn from_enumeration(enumeration: Enumeration<T>) -> Self {
        Self {
            enumeration,
            known: None,
        }
    }

    pub fn enumeration(&self) -> &Enumeration<T> {
        &self.enumeration
    }

    /// The element set, when the set was built from a finite list.
    pub fn elements(&self) -> Option<&BTreeSet<T>> {
        self.known.as_ref()
    }

    /// Exact membership for finite sets.
    pub fn contains(&self, x: &T) -> Option<bool> {
        self.known.as_ref().map(|k| k.contains(x))
    }
}

/// Searches the enumeration of `set` for `n`, spending at most `fuel` queries.
pub fn member<T: Clone + Ord + Send + Sync + 'static>(set: &CeSet<T>, n: &T, fuel: Fuel) -> Semi {
    let e = set.enumeration();
    for t in 0..fuel.0 {
        if e.is_exhausted_at(t) {
            break;
        }
        if let Step::Item(x) = e.query(t) {
            if &x == n {
                return Semi::Yes;
            }
        }
    }
    Semi::Unknown
}

/// Cantor pairing `ℕ×ℕ → ℕ`.
pub fn pair(a: usize, b: usize) -> usize {
    let s = a + b;
    s * (s + 1) / 2 + b
}

/// Inverse of [`pair`].
pub fn unpair(n: usize) -> (usize, usize) {
    // w = largest integer with w(w+1)/2 <= n
    let mut w = ((((8 * n + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    let b = n - w * (w + 1) / 2;
    (w - b, b)
}

/// Bit-set code of a finite set: element `i` sets bit `i`.
///
/// Returns `None` when an element does not fit in a machine word.
pub fn set_encode(set: &BTreeSet<usize>) -> Option<usize> {
    set.iter().try_fold(0usize, |acc, &i| {
        (i < usize::BITS as usize).then(|| acc | (1usize << i))
    })
}

pub fn set_decode(code: usize) -> BTreeSet<usize> {
    (0..usize::BITS as usize)
        .filter(|i| code >> i & 1 == 1)
        .collect()
}
