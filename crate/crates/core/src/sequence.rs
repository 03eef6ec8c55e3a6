//! Periodic p-ary sequences, m-sequence generation and the two group
//! actions used throughout: constant shift and cyclic shift.

use alloc::vec::Vec;
use core::fmt;

use crate::gf::{check_prime, FieldCtx, GfError};

/// Longest m-sequence [`mseq_generate`] will materialize.
pub const MAX_MSEQ_PERIOD: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceError {
    NotPrime(u64),
    Empty,
    EntryOutOfRange {
        index: usize,
        value: u32,
        p: u32,
    },
    /// m-sequences need a context whose generator is primitive.
    NotPrimitive,
    PeriodTooLong {
        period: u64,
    },
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceError::NotPrime(p) => write!(f, "{p} is not a supported prime"),
            SequenceError::Empty => write!(f, "a sequence needs at least one entry"),
            SequenceError::EntryOutOfRange { index, value, p } => {
                write!(f, "entry {index} = {value} is not a residue mod {p}")
            }
            SequenceError::NotPrimitive => write!(f, "field context is not primitive"),
            SequenceError::PeriodTooLong { period } => {
                write!(f, "period {period} exceeds the limit {MAX_MSEQ_PERIOD}")
            }
        }
    }
}

impl From<GfError> for SequenceError {
    fn from(e: GfError) -> Self {
        match e {
            GfError::NotPrime(p) => SequenceError::NotPrime(p),
            _ => unreachable!("only primality is checked here"),
        }
    }
}

/// One period of a purely periodic sequence over GF(p), index 0 first.
///
/// Ordering is lexicographic on the entries (after `p`), which is the
/// order search results are emitted in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    p: u32,
    data: Vec<u32>,
}

impl Sequence {
    pub fn new(p: u32, data: Vec<u32>) -> Result<Self, SequenceError> {
        check_prime(p)?;
        if data.is_empty() {
            return Err(SequenceError::Empty);
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, &v)| v >= p) {
            return Err(SequenceError::EntryOutOfRange { index, value, p });
        }
        Ok(Sequence { p, data })
    }

    /// Caller guarantees `p` prime, `data` nonempty and every entry `< p`.
    pub(crate) fn from_parts_unchecked(p: u32, data: Vec<u32>) -> Self {
        debug_assert!(!data.is_empty() && data.iter().all(|&v| v < p));
        Sequence { p, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn period(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u32> {
        self.data
    }

    /// Entry `n` of the periodic extension.
    pub fn at(&self, n: usize) -> u32 {
        self.data[n % self.data.len()]
    }

    /// Entrywise `a_n - c_prime + c (mod p)`.
    pub fn constant_shift(&self, c_prime: u32, c: u32) -> Result<Sequence, SequenceError> {
        for (index, value) in [(0, c_prime), (1, c)] {
            if value >= self.p {
                return Err(SequenceError::EntryOutOfRange {
                    index,
                    value,
                    p: self.p,
                });
            }
        }
        let delta = (c + self.p - c_prime) % self.p;
        Ok(self.add_constant(delta))
    }

    pub(crate) fn add_constant(&self, delta: u32) -> Sequence {
        let p = self.p;
        let data = self
            .data
            .iter()
            .map(|&v| {
                let s = v + delta;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Sequence { p, data }
    }

    /// Entry `n` of the result is `a_(n+k mod N)`; negative `k` rotates the
    /// other way.
    pub fn cyclic_shift(&self, k: i64) -> Sequence {
        let n = self.data.len() as i64;
        let k = k.rem_euclid(n) as usize;
        let mut data = Vec::with_capacity(self.data.len());
        data.extend_from_slice(&self.data[k..]);
        data.extend_from_slice(&self.data[..k]);
        Sequence { p: self.p, data }
    }

    /// Smallest `d` with `a_(n+d) = a_n` for all `n`; always divides the
    /// stored period.
    pub fn least_period(&self) -> usize {
        let n = self.data.len();
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (0..n).all(|i| self.data[i] == self.data[(i + d) % n]))
            .unwrap_or(n)
    }
}

/// The m-sequence `a_n = Tr(α^n)`, `n = 0 .. p^m - 2`, where `α` is the class
/// of `x` in a context with a verified primitive reduction polynomial.
pub fn mseq_generate(ctx: &FieldCtx) -> Result<Sequence, SequenceError> {
    if !ctx.primitivity_verified() {
        return Err(SequenceError::NotPrimitive);
    }
    let period = ctx.group_order();
    if period > MAX_MSEQ_PERIOD {
        return Err(SequenceError::PeriodTooLong { period });
    }
    let p = ctx.p() as u64;
    // the trace is GF(p)-linear: tabulate it on the basis 1, x, .., x^(m-1)
    let basis_trace: Vec<u64> = (0..ctx.m() as u64)
        .map(|i| {
            let e = ctx.pow(&ctx.generator(), i).expect("valid element");
            ctx.trace(&e).expect("valid element") as u64
        })
        .collect();
    let alpha = ctx.generator();
    let mut power = ctx.one();
    let mut data = Vec::with_capacity(period as usize);
    for _ in 0..period {
        let t = power
            .coeffs()
            .iter()
            .zip(&basis_trace)
            .fold(0u64, |acc, (&c, &b)| (acc + c as u64 * b) % p);
        data.push(t as u32);
        power = ctx.mul(&power, &alpha).expect("valid element");
    }
    debug_assert_eq!(power, ctx.one());
    Ok(Sequence::from_parts_unchecked(ctx.p(), data))
}
