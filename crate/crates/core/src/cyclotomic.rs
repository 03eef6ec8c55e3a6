//! Exact arithmetic in Z[ω], ω = e^(2πi/p).
//!
//! A value is stored as all `p` coefficients of `c_0 + c_1 ω + ... +
//! c_(p-1) ω^(p-1)`. Since `1 + ω + ... + ω^(p-1) = 0`, adding a constant to
//! every coefficient leaves the value unchanged; the canonical
//! representative is the one whose smallest coefficient is zero. Two values
//! are equal exactly when their canonical tuples coincide, because the only
//! integer relations among the powers of ω are multiples of the cyclotomic
//! polynomial.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::{check_prime, GfError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    NotPrime(u64),
    /// Operands live in different rings Z[ω_p].
    PrimeMismatch {
        left: u32,
        right: u32,
    },
    WrongLength {
        expected: usize,
        found: usize,
    },
    Overflow,
}

impl fmt::Display for CyclotomicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclotomicError::NotPrime(p) => write!(f, "{p} is not a supported prime"),
            CyclotomicError::PrimeMismatch { left, right } => {
                write!(f, "operands over different primes ({left} and {right})")
            }
            CyclotomicError::WrongLength { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            CyclotomicError::Overflow => write!(f, "cyclotomic coefficient overflow"),
        }
    }
}

impl From<GfError> for CyclotomicError {
    fn from(e: GfError) -> Self {
        match e {
            GfError::NotPrime(p) => CyclotomicError::NotPrime(p),
            _ => unreachable!("only primality is checked here"),
        }
    }
}

/// A cyclotomic integer in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    fn canonical(p: u32, mut coeffs: Vec<i64>) -> Result<Self, CyclotomicError> {
        let min = coeffs.iter().copied().min().unwrap_or(0);
        for c in coeffs.iter_mut() {
            *c = c.checked_sub(min).ok_or(CyclotomicError::Overflow)?;
        }
        Ok(CyclotomicInt { p, coeffs })
    }

    /// `∑ coeffs[k] ω^k` for arbitrary signed coefficients.
    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> Result<Self, CyclotomicError> {
        check_prime(p)?;
        if coeffs.len() != p as usize {
            return Err(CyclotomicError::WrongLength {
                expected: p as usize,
                found: coeffs.len(),
            });
        }
        Self::canonical(p, coeffs)
    }

    /// `∑ counts[k] ω^k`, the shape every correlation value takes.
    pub fn from_counts(p: u32, counts: &[u64]) -> Result<Self, CyclotomicError> {
        let coeffs = counts
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| CyclotomicError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(p, coeffs)
    }

    /// The rational integer `n`.
    pub fn from_int(p: u32, n: i64) -> Result<Self, CyclotomicError> {
        check_prime(p)?;
        let mut coeffs = vec![0i64; p as usize];
        coeffs[0] = n;
        Self::canonical(p, coeffs)
    }

    /// ω^k.
    pub fn root_power(p: u32, k: u64) -> Result<Self, CyclotomicError> {
        check_prime(p)?;
        let mut coeffs = vec![0i64; p as usize];
        coeffs[(k % p as u64) as usize] = 1;
        Self::canonical(p, coeffs)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical coefficients, minimum entry zero.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn same_ring(&self, other: &Self) -> Result<(), CyclotomicError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CyclotomicError::PrimeMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a.checked_add(b).ok_or(CyclotomicError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::canonical(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        // canonical coefficients are nonnegative, so negation cannot overflow
        let coeffs = self.coeffs.iter().map(|&c| -c).collect();
        Self::canonical(self.p, coeffs).expect("negation of canonical form")
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.add(&other.neg())
    }

    /// Product: cyclic convolution of coefficients, exponents mod p.
    pub fn mul(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.same_ring(other)?;
        let p = self.p as usize;
        let mut out = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % p;
                let term = a.checked_mul(b).ok_or(CyclotomicError::Overflow)?;
                out[k] = out[k].checked_add(term).ok_or(CyclotomicError::Overflow)?;
            }
        }
        Self::canonical(self.p, out)
    }

    /// Complex conjugate: ω^k ↦ ω^(p-k).
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut coeffs = vec![0i64; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[(p - k) % p] = c;
        }
        // permutation keeps the minimum at zero
        CyclotomicInt { p: self.p, coeffs }
    }

    /// Whether the value equals the rational integer `n`: after subtracting
    /// `n` from the constant coefficient all coefficients must agree.
    pub fn eq_int(&self, n: i64) -> bool {
        let Some(c0) = self.coeffs[0].checked_sub(n) else {
            return false;
        };
        self.coeffs[1..].iter().all(|&c| c == c0)
    }

    /// The rational integer this value equals, if it is one.
    pub fn as_int(&self) -> Option<i64> {
        let c1 = *self.coeffs.get(1)?;
        if self.coeffs[1..].iter().all(|&c| c == c1) {
            self.coeffs[0].checked_sub(c1)
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_int() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ if c == 1 => write!(f, "ω^{k}")?,
                _ => write!(f, "{c}ω^{k}")?,
            }
        }
        Ok(())
    }
}
