//! Balance and autocorrelation verdicts for periodic p-ary sequences.
//!
//! Every correlation value `R(k) = ∑ ω^(a_n - a_(n+k))` is an element of
//! Z[ω] determined by the counts of the differences `a_n - a_(n+k) mod p`,
//! so all decisions here are made with integers. Ideal two-level
//! autocorrelation at shift `k` is the statement that those counts have the
//! shape `(t - 1, t, .., t)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclotomic::CyclotomicInt;
use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    ShiftOutOfRange { k: usize, period: usize },
    TupleTooShort { len: usize },
    NonPositiveEntry { index: usize },
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::ShiftOutOfRange { k, period } => {
                write!(f, "shift {k} out of range for period {period}")
            }
            AnalysisError::TupleTooShort { len } => {
                write!(f, "need at least 2 values, got {len}")
            }
            AnalysisError::NonPositiveEntry { index } => {
                write!(f, "value at index {index} is not a positive integer")
            }
        }
    }
}

/// `mu[c]` = number of `n` in one period with `a_n = c`. The counts sum to
/// the period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityProfile {
    p: u32,
    mu: Vec<u64>,
}

impl MultiplicityProfile {
    /// Wraps raw counts; `mu.len()` must equal `p`.
    pub fn from_counts(p: u32, mu: Vec<u64>) -> Option<Self> {
        (mu.len() == p as usize && p >= 2).then_some(MultiplicityProfile { p, mu })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn counts(&self) -> &[u64] {
        &self.mu
    }

    pub fn total(&self) -> u64 {
        self.mu.iter().sum()
    }
}

pub fn multiplicity_profile(a: &Sequence) -> MultiplicityProfile {
    let mut mu = vec![0u64; a.p() as usize];
    for &v in a.data() {
        mu[v as usize] += 1;
    }
    MultiplicityProfile { p: a.p(), mu }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BalanceVerdict {
    /// One element occurs `t - 1` times, every other element `t` times.
    AlmostBalanced {
        exceptional: u32,
        t: u64,
    },
    /// Every element occurs equally often.
    StrictlyBalanced,
    Other,
}

impl BalanceVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            BalanceVerdict::AlmostBalanced { .. } => "almost_balanced",
            BalanceVerdict::StrictlyBalanced => "strictly_balanced",
            BalanceVerdict::Other => "other",
        }
    }

    pub fn exceptional(&self) -> Option<u32> {
        match *self {
            BalanceVerdict::AlmostBalanced { exceptional, .. } => Some(exceptional),
            _ => None,
        }
    }

    pub fn t(&self) -> Option<u64> {
        match *self {
            BalanceVerdict::AlmostBalanced { t, .. } => Some(t),
            _ => None,
        }
    }

    pub fn is_almost_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::AlmostBalanced { .. })
    }
}

pub fn balance_verdict(profile: &MultiplicityProfile) -> BalanceVerdict {
    let mu = profile.counts();
    let max = mu.iter().copied().max().unwrap_or(0);
    let min = mu.iter().copied().min().unwrap_or(0);
    if max == min {
        return BalanceVerdict::StrictlyBalanced;
    }
    let below: Vec<usize> = (0..mu.len()).filter(|&c| mu[c] != max).collect();
    match below.as_slice() {
        [c] if mu[*c] + 1 == max => BalanceVerdict::AlmostBalanced {
            exceptional: *c as u32,
            t: max,
        },
        _ => BalanceVerdict::Other,
    }
}

/// Outcome of the period test `N = p t - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodCheck {
    pub admissible: bool,
    /// `(N + 1) / p` when admissible.
    pub t: Option<u64>,
    /// For `p = 2` only: whether `N ≡ 3 (mod 4)`, the sharper binary
    /// necessary condition.
    pub binary_mod4: Option<bool>,
}

pub fn period_admissible(p: u32, period: u64) -> PeriodCheck {
    let admissible = (period + 1).is_multiple_of(p as u64);
    PeriodCheck {
        admissible,
        t: admissible.then(|| (period + 1) / p as u64),
        binary_mod4: (p == 2).then_some(period % 4 == 3),
    }
}

/// Counts of `a_n - a_(n+k) mod p` over one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceProfile {
    pub k: usize,
    pub d: Vec<u64>,
}

impl DifferenceProfile {
    pub fn total(&self) -> u64 {
        self.d.iter().sum()
    }

    /// Whether the counts are `(t - 1, t, .., t)` for some `t`, which is
    /// exactly `R(k) = -1`.
    pub fn is_ideal(&self) -> bool {
        let t = self.d[0] + 1;
        self.d[1..].iter().all(|&c| c == t)
    }
}

fn count_differences(p: u32, data: &[u32], k: usize, d: &mut [u64]) {
    d.iter_mut().for_each(|c| *c = 0);
    let n = data.len();
    let (head, tail) = data.split_at(k);
    // a_n paired with a_(n+k): first the non-wrapping part, then the wrap
    for (&x, &y) in data[..n - k].iter().zip(tail) {
        d[diff_mod(x, y, p)] += 1;
    }
    for (&x, &y) in data[n - k..].iter().zip(head) {
        d[diff_mod(x, y, p)] += 1;
    }
}

#[inline]
fn diff_mod(x: u32, y: u32, p: u32) -> usize {
    let s = x + p - y;
    (if s >= p { s - p } else { s }) as usize
}

pub fn difference_profile(a: &Sequence, k: usize) -> Result<DifferenceProfile, AnalysisError> {
    if k == 0 || k >= a.period() {
        return Err(AnalysisError::ShiftOutOfRange {
            k,
            period: a.period(),
        });
    }
    let mut d = vec![0u64; a.p() as usize];
    count_differences(a.p(), a.data(), k, &mut d);
    Ok(DifferenceProfile { k, d })
}

fn correlation_from_counts(p: u32, d: &[u64]) -> CyclotomicInt {
    CyclotomicInt::from_counts(p, d).expect("counts are bounded by the period")
}

/// `R(k) = ∑_n ω^(a_n) ω^(-a_(n+k))` as an exact cyclotomic integer,
/// `0 <= k < N`.
pub fn shift_correlation_exact(a: &Sequence, k: usize) -> Result<CyclotomicInt, AnalysisError> {
    if k == 0 {
        return Ok(CyclotomicInt::from_int(a.p(), a.period() as i64).expect("prime checked"));
    }
    let profile = difference_profile(a, k)?;
    Ok(correlation_from_counts(a.p(), &profile.d))
}

/// `R(k)` for every `k = 0 .. N-1`, O(N^2).
pub fn correlation_spectrum_exact(a: &Sequence) -> Vec<CyclotomicInt> {
    let n = a.period();
    let mut d = vec![0u64; a.p() as usize];
    let mut out = Vec::with_capacity(n);
    out.push(CyclotomicInt::from_int(a.p(), n as i64).expect("prime checked"));
    for k in 1..n {
        count_differences(a.p(), a.data(), k, &mut d);
        out.push(correlation_from_counts(a.p(), &d));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ItlaVerdict {
    pub itla: bool,
    /// Smallest `k >= 1` with `R(k) != -1`.
    pub first_failing_shift: Option<usize>,
    /// Period 1: there are no out-of-phase shifts and the verdict is vacuous.
    pub degenerate: bool,
}

pub(crate) fn first_non_ideal_shift(p: u32, data: &[u32], scratch: &mut [u64]) -> Option<usize> {
    (1..data.len()).find(|&k| {
        count_differences(p, data, k, scratch);
        !correlation_from_counts(p, scratch).eq_int(-1)
    })
}

/// Decides ideal two-level autocorrelation exactly, stopping at the first
/// shift whose correlation is not `-1`.
pub fn is_ideal_two_level(a: &Sequence) -> ItlaVerdict {
    let n = a.period();
    if n == 1 {
        return ItlaVerdict {
            itla: true,
            first_failing_shift: None,
            degenerate: true,
        };
    }
    let mut scratch = vec![0u64; a.p() as usize];
    let failing = first_non_ideal_shift(a.p(), a.data(), &mut scratch);
    // an inadmissible period always fails already at k = 1
    debug_assert!(period_admissible(a.p(), n as u64).admissible || failing == Some(1));
    ItlaVerdict {
        itla: failing.is_none(),
        first_failing_shift: failing,
        degenerate: false,
    }
}

/// `|∑ ω^(a_n)|^2 = S · conj(S)` with `S = ∑ mu_c ω^c`.
pub fn sum_magnitude_sq(a: &Sequence) -> CyclotomicInt {
    let profile = multiplicity_profile(a);
    let s = correlation_from_counts(a.p(), profile.counts());
    s.mul(&s.conj()).expect("squared counts are bounded by N^2")
}

/// `B_n = ∑_k mu_k mu_(k+n)`, indices mod p.
pub fn bn_convolution(profile: &MultiplicityProfile) -> Vec<u64> {
    let mu = profile.counts();
    let p = mu.len();
    (0..p)
        .map(|n| (0..p).map(|k| mu[k] * mu[(k + n) % p]).sum())
        .collect()
}

/// The two circular sums of squared differences examined by
/// [`near_constant_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircularSum {
    /// `∑ (A_n - A_(n+1))^2`, required to be 2 for `k >= 2`.
    Adjacent,
    /// `∑ (A_n - A_(n+2))^2`, required to be 2 for `k >= 4`.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearConstantVerdict {
    /// `A_index = base + sign` and every other entry equals `base`.
    Exceptional {
        index: usize,
        base: u64,
        sign: i8,
    },
    Violated {
        sum: CircularSum,
        value: u128,
    },
    /// Both sums hold but no single entry stands out.
    NotNearConstant,
}

pub(crate) fn circular_square_sum(values: &[u64], step: usize) -> u128 {
    let k = values.len();
    (0..k)
        .map(|n| {
            let diff = values[n].abs_diff(values[(n + step) % k]) as u128;
            diff * diff
        })
        .sum()
}

/// Checks that the circular squared-difference sums at steps 1 and 2 are
/// both 2 (the step-2 sum only for four or more values), then locates the
/// single entry that differs from the rest by one.
///
/// For two values the exceptional index is taken to be 1 with `base = A_0`.
pub fn near_constant_check(values: &[u64]) -> Result<NearConstantVerdict, AnalysisError> {
    let k = values.len();
    if k < 2 {
        return Err(AnalysisError::TupleTooShort { len: k });
    }
    if let Some(index) = values.iter().position(|&v| v == 0) {
        return Err(AnalysisError::NonPositiveEntry { index });
    }
    let adjacent = circular_square_sum(values, 1);
    if adjacent != 2 {
        return Ok(NearConstantVerdict::Violated {
            sum: CircularSum::Adjacent,
            value: adjacent,
        });
    }
    if k >= 4 {
        let skip = circular_square_sum(values, 2);
        if skip != 2 {
            return Ok(NearConstantVerdict::Violated {
                sum: CircularSum::Skip,
                value: skip,
            });
        }
    }
    let verdict = if k == 2 {
        Some((1, values[0]))
    } else {
        // the base value is shared by all but one entry
        let base = if values[0] == values[1] || values[0] == values[2] {
            values[0]
        } else {
            values[1]
        };
        let mut outliers = (0..k).filter(|&i| values[i] != base);
        match (outliers.next(), outliers.next()) {
            (Some(i), None) => Some((i, base)),
            _ => None,
        }
    };
    Ok(match verdict {
        Some((index, base)) if values[index].abs_diff(base) == 1 => {
            NearConstantVerdict::Exceptional {
                index,
                base,
                sign: if values[index] > base { 1 } else { -1 },
            }
        }
        _ => NearConstantVerdict::NotNearConstant,
    })
}

/// Everything [`analyze`] determines about one sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub p: u32,
    pub period: usize,
    pub profile: MultiplicityProfile,
    pub balance: BalanceVerdict,
    pub period_check: PeriodCheck,
    pub itla: bool,
    pub first_failing_shift: Option<usize>,
    pub sum_mag_sq: CyclotomicInt,
    pub degenerate: bool,
}

impl AnalysisReport {
    pub fn period_admissible(&self) -> bool {
        self.period_check.admissible
    }

    pub fn sum_mag_sq_is_one(&self) -> bool {
        self.sum_mag_sq.eq_int(1)
    }
}

pub fn analyze(a: &Sequence) -> AnalysisReport {
    let profile = multiplicity_profile(a);
    let balance = balance_verdict(&profile);
    let period_check = period_admissible(a.p(), a.period() as u64);
    let verdict = is_ideal_two_level(a);
    let report = AnalysisReport {
        p: a.p(),
        period: a.period(),
        balance,
        period_check,
        itla: verdict.itla,
        first_failing_shift: verdict.first_failing_shift,
        sum_mag_sq: sum_magnitude_sq(a),
        degenerate: verdict.degenerate,
        profile,
    };
    debug_assert!(
        !report.itla
            || report.degenerate
            || (report.period_admissible()
                && report.balance.is_almost_balanced()
                && report.sum_mag_sq_is_one())
    );
    report
}
