//! Exhaustive enumeration of sequences with ideal two-level autocorrelation.
//!
//! Candidates are visited as base-`p` digit tuples in lexicographic order
//! (the last index varies fastest). With balance pruning on, a subtree is
//! cut as soon as some element occurs more than `t = (N + 1) / p` times,
//! and inadmissible periods are rejected outright; both are sound because
//! every ideal sequence is almost balanced with `N = p t - 1`.
//!
//! Work can be split by fixing a prefix of digits: [`search_prefix`] covers
//! exactly the candidates starting with that prefix, and the counters of
//! disjoint prefixes add up to those of the full search.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::{first_non_ideal_shift, period_admissible};
use crate::gf::check_prime;
use crate::sequence::Sequence;

/// Hard cap on `p^N`.
pub const SEARCH_BUDGET: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpec {
    pub p: u32,
    pub period: usize,
    /// Report one lexicographically least representative per orbit under
    /// rotation and constant shift.
    pub canonicalize: bool,
    pub prune_balance: bool,
}

impl SearchSpec {
    pub fn new(p: u32, period: usize) -> Self {
        SearchSpec {
            p,
            period,
            canonicalize: false,
            prune_balance: true,
        }
    }

    /// `p^N`, or `None` beyond [`SEARCH_BUDGET`].
    pub fn candidate_count(&self) -> Option<u64> {
        let mut total: u64 = 1;
        for _ in 0..self.period {
            total = total
                .checked_mul(self.p as u64)
                .filter(|&t| t <= SEARCH_BUDGET)?;
        }
        Some(total)
    }

    pub fn validate(&self) -> Result<u64, SearchError> {
        check_prime(self.p).map_err(|_| SearchError::NotPrime(self.p))?;
        if self.period == 0 {
            return Err(SearchError::EmptyPeriod);
        }
        self.candidate_count().ok_or(SearchError::BudgetExceeded {
            p: self.p,
            period: self.period,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    NotPrime(u32),
    EmptyPeriod,
    BudgetExceeded {
        p: u32,
        period: usize,
    },
    /// A prefix digit is not a residue or the prefix is longer than `N`.
    BadPrefix,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::NotPrime(p) => write!(f, "{p} is not a supported prime"),
            SearchError::EmptyPeriod => write!(f, "period must be at least 1"),
            SearchError::BudgetExceeded { p, period } => {
                write!(
                    f,
                    "{p}^{period} candidates exceed the search budget of 2^34"
                )
            }
            SearchError::BadPrefix => write!(f, "invalid search prefix"),
        }
    }
}

/// Why a search came back empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// `N + 1` is not a multiple of `p`; nothing was enumerated.
    PeriodNotAdmissible,
    /// Every candidate was examined and none qualified.
    Exhausted,
}

impl EmptyReason {
    pub fn code(&self) -> &'static str {
        match self {
            EmptyReason::PeriodNotAdmissible => "period_not_admissible",
            EmptyReason::Exhausted => "exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Sorted and duplicate-free.
    pub sequences: Vec<Sequence>,
    /// Candidates that reached the correlation test.
    pub enumerated: u64,
    /// Candidates discarded by balance pruning without a correlation test.
    pub pruned: u64,
    pub reason: Option<EmptyReason>,
}

/// Lexicographically least member of the orbit of `a` under constant
/// shifts combined with rotations.
pub fn canonical_form(a: &Sequence) -> Sequence {
    let n = a.period();
    let mut best: Option<Sequence> = None;
    for delta in 0..a.p() {
        let shifted = a.add_constant(delta);
        let doubled: Vec<u32> = shifted
            .data()
            .iter()
            .chain(shifted.data())
            .copied()
            .collect();
        for k in 0..n {
            let window = &doubled[k..k + n];
            if best.as_ref().is_none_or(|b| window < b.data()) {
                best = Some(Sequence::from_parts_unchecked(a.p(), window.to_vec()));
            }
        }
    }
    best.expect("sequences are nonempty")
}

struct Walker<'a> {
    spec: &'a SearchSpec,
    /// Max occurrences per element, when pruning.
    cap: Option<u64>,
    /// `weight[i] = p^(N - i)`, the number of completions below depth `i`.
    weight: Vec<u64>,
    digits: Vec<u32>,
    counts: Vec<u64>,
    scratch: Vec<u64>,
    found: Vec<Vec<u32>>,
    enumerated: u64,
    pruned: u64,
}

impl Walker<'_> {
    fn descend(&mut self, depth: usize) {
        let n = self.spec.period;
        if depth == n {
            self.enumerated += 1;
            if first_non_ideal_shift(self.spec.p, &self.digits, &mut self.scratch).is_none() {
                self.found.push(self.digits.clone());
            }
            return;
        }
        for c in 0..self.spec.p {
            if let Some(cap) = self.cap {
                if self.counts[c as usize] == cap {
                    self.pruned += self.weight[depth + 1];
                    continue;
                }
            }
            self.digits[depth] = c;
            self.counts[c as usize] += 1;
            self.descend(depth + 1);
            self.counts[c as usize] -= 1;
        }
    }
}

/// Searches the candidates that begin with `prefix`.
///
/// The returned sequences are in lexicographic order but not canonicalized;
/// [`finish`] merges partial results.
pub fn search_prefix(spec: &SearchSpec, prefix: &[u32]) -> Result<SearchResult, SearchError> {
    let total = spec.validate()?;
    let n = spec.period;
    if prefix.len() > n || prefix.iter().any(|&c| c >= spec.p) {
        return Err(SearchError::BadPrefix);
    }
    let p = spec.p as u64;
    let subtree = p.pow((n - prefix.len()) as u32);
    let empty = |pruned, reason| SearchResult {
        sequences: Vec::new(),
        enumerated: 0,
        pruned,
        reason: Some(reason),
    };

    let check = period_admissible(spec.p, n as u64);
    // N = 1 is vacuously ideal and never pruned
    let cap = match (spec.prune_balance, check.t) {
        (false, _) => None,
        (true, _) if n == 1 => None,
        (true, None) => return Ok(empty(subtree, EmptyReason::PeriodNotAdmissible)),
        (true, Some(t)) => Some(t),
    };

    let mut counts = vec![0u64; spec.p as usize];
    for &c in prefix {
        counts[c as usize] += 1;
    }
    if let Some(cap) = cap {
        if counts.iter().any(|&c| c > cap) {
            return Ok(empty(subtree, EmptyReason::Exhausted));
        }
    }
    let mut digits = vec![0u32; n];
    digits[..prefix.len()].copy_from_slice(prefix);
    let mut walker = Walker {
        spec,
        cap,
        weight: (0..=n).map(|i| p.pow((n - i) as u32)).collect(),
        digits,
        counts,
        scratch: vec![0u64; spec.p as usize],
        found: Vec::new(),
        enumerated: 0,
        pruned: 0,
    };
    walker.descend(prefix.len());
    debug_assert_eq!(walker.enumerated + walker.pruned, subtree);
    debug_assert!(subtree <= total);

    let sequences: Vec<Sequence> = walker
        .found
        .into_iter()
        .map(|d| Sequence::from_parts_unchecked(spec.p, d))
        .collect();
    let reason = sequences.is_empty().then_some(EmptyReason::Exhausted);
    Ok(SearchResult {
        sequences,
        enumerated: walker.enumerated,
        pruned: walker.pruned,
        reason,
    })
}

/// Merges partial results of disjoint prefixes: sums the counters, applies
/// canonicalization if requested and sorts the sequences.
pub fn finish(spec: &SearchSpec, parts: impl IntoIterator<Item = SearchResult>) -> SearchResult {
    let mut set = BTreeSet::new();
    let (mut enumerated, mut pruned) = (0, 0);
    let mut not_admissible = false;
    for part in parts {
        enumerated += part.enumerated;
        pruned += part.pruned;
        not_admissible |= part.reason == Some(EmptyReason::PeriodNotAdmissible);
        for s in part.sequences {
            set.insert(if spec.canonicalize {
                canonical_form(&s)
            } else {
                s
            });
        }
    }
    let sequences: Vec<Sequence> = set.into_iter().collect();
    let reason = match (sequences.is_empty(), not_admissible) {
        (false, _) => None,
        (true, true) => Some(EmptyReason::PeriodNotAdmissible),
        (true, false) => Some(EmptyReason::Exhausted),
    };
    SearchResult {
        sequences,
        enumerated,
        pruned,
        reason,
    }
}

/// Single-threaded search over the whole space.
pub fn search_itla(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let all = search_prefix(spec, &[])?;
    Ok(finish(spec, [all]))
}

/// All prefixes of length `len` in lexicographic order.
pub fn prefixes(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|pre| {
                (0..p).map(move |c| {
                    let mut next = pre.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}
