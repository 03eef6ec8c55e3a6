//! Arithmetic in GF(p) and GF(p^m).
//!
//! Elements use a polynomial basis with the constant term first. A
//! [`FieldCtx`] owns the monic reduction polynomial; elements are plain
//! coefficient vectors validated against the context on every operation.
//! Scalars of GF(p) are degree-0 elements, so `m = 1` goes through the same
//! code as proper extensions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Exclusive upper bound on the characteristic.
pub const MAX_PRIME: u32 = 1 << 16;

/// Exclusive upper bound on the multiplicative group order `p^m - 1`.
pub const MAX_GROUP_ORDER: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfError {
    /// The modulus is not a prime below [`MAX_PRIME`].
    NotPrime(u64),
    /// Extension degree must be at least one.
    ZeroDegree,
    /// `p^m - 1` does not fit under [`MAX_GROUP_ORDER`].
    Capacity {
        p: u64,
        m: usize,
    },
    NotMonic,
    Reducible,
    /// A polynomial that was required to be primitive is not.
    NotPrimitive,
    WrongLength {
        expected: usize,
        found: usize,
    },
    CoefficientOutOfRange {
        value: u32,
        p: u32,
    },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotPrime(p) => write!(f, "{p} is not a prime below {MAX_PRIME}"),
            GfError::ZeroDegree => write!(f, "extension degree must be at least 1"),
            GfError::Capacity { p, m } => {
                write!(f, "{p}^{m} - 1 exceeds the supported group order 2^40")
            }
            GfError::NotMonic => write!(f, "reduction polynomial is not monic"),
            GfError::Reducible => write!(f, "reduction polynomial is reducible"),
            GfError::NotPrimitive => write!(f, "reduction polynomial is not primitive"),
            GfError::WrongLength { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            GfError::CoefficientOutOfRange { value, p } => {
                write!(f, "coefficient {value} is not a residue mod {p}")
            }
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn check_prime(p: u32) -> Result<(), GfError> {
    if p < MAX_PRIME && is_prime(p as u64) {
        Ok(())
    } else {
        Err(GfError::NotPrime(p as u64))
    }
}

fn group_order(p: u32, m: usize) -> Result<u64, GfError> {
    let mut size: u64 = 1;
    for _ in 0..m {
        size = size
            .checked_mul(p as u64)
            .filter(|&s| s <= MAX_GROUP_ORDER)
            .ok_or(GfError::Capacity { p: p as u64, m })?;
    }
    if size > MAX_GROUP_ORDER {
        return Err(GfError::Capacity { p: p as u64, m });
    }
    Ok(size - 1)
}

/// An element of GF(p^m): `m` residues, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Arithmetic context for GF(p^m). Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    m: usize,
    /// `m + 1` coefficients, constant term first, leading coefficient 1.
    reduction_poly: Vec<u32>,
    primitivity_verified: bool,
}

impl FieldCtx {
    /// Builds a context from a monic irreducible polynomial given as `m + 1`
    /// coefficients, constant term first. Primitivity is tested and recorded.
    pub fn new(p: u32, reduction_poly: Vec<u32>) -> Result<Self, GfError> {
        check_prime(p)?;
        if reduction_poly.len() < 2 {
            return Err(GfError::ZeroDegree);
        }
        if let Some(&value) = reduction_poly.iter().find(|&&c| c >= p) {
            return Err(GfError::CoefficientOutOfRange { value, p });
        }
        if *reduction_poly.last().unwrap() != 1 {
            return Err(GfError::NotMonic);
        }
        let m = reduction_poly.len() - 1;
        group_order(p, m)?;
        let mut ctx = FieldCtx {
            p,
            m,
            reduction_poly,
            primitivity_verified: false,
        };
        if !ctx.is_irreducible() {
            return Err(GfError::Reducible);
        }
        ctx.primitivity_verified = ctx.generator_is_primitive();
        Ok(ctx)
    }

    /// Like [`FieldCtx::new`] but rejects polynomials that are not primitive.
    pub fn new_primitive(p: u32, reduction_poly: Vec<u32>) -> Result<Self, GfError> {
        let ctx = Self::new(p, reduction_poly)?;
        if ctx.primitivity_verified {
            Ok(ctx)
        } else {
            Err(GfError::NotPrimitive)
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn reduction_poly(&self) -> &[u32] {
        &self.reduction_poly
    }

    pub fn primitivity_verified(&self) -> bool {
        self.primitivity_verified
    }

    /// Number of field elements, `p^m`.
    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.m as u32)
    }

    /// Order of the multiplicative group, `p^m - 1`.
    pub fn group_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The prime-field scalar `c mod p` as a degree-0 element.
    pub fn scalar(&self, c: u32) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// The residue class of `x` modulo the reduction polynomial.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            self.scalar((self.p - self.reduction_poly[0]) % self.p)
        } else {
            let mut e = self.zero();
            e.coeffs[1] = 1;
            e
        }
    }

    /// Validates a coefficient vector as an element of this field.
    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement, GfError> {
        self.validate(&coeffs)?;
        Ok(FieldElement { coeffs })
    }

    /// The element whose base-`p` digits (least significant first) are
    /// the coefficients of `index`. Enumerates the field for `index < p^m`.
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
        e
    }

    fn validate(&self, coeffs: &[u32]) -> Result<(), GfError> {
        if coeffs.len() != self.m {
            return Err(GfError::WrongLength {
                expected: self.m,
                found: coeffs.len(),
            });
        }
        if let Some(&value) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(GfError::CoefficientOutOfRange { value, p: self.p });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.validate(&a.coeffs)?;
        self.validate(&b.coeffs)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| ((x as u64 + y as u64) % self.p as u64) as u32)
            .collect();
        Ok(FieldElement { coeffs })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.validate(&a.coeffs)?;
        self.validate(&b.coeffs)?;
        Ok(FieldElement {
            coeffs: self.mul_raw(&a.coeffs, &b.coeffs),
        })
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> Result<FieldElement, GfError> {
        self.validate(&a.coeffs)?;
        Ok(FieldElement {
            coeffs: self.pow_raw(&a.coeffs, e),
        })
    }

    /// Absolute trace `a + a^p + ... + a^(p^(m-1))`, returned as a residue.
    pub fn trace(&self, a: &FieldElement) -> Result<u32, GfError> {
        self.validate(&a.coeffs)?;
        let p = self.p as u64;
        let mut acc = a.coeffs.clone();
        let mut conj = a.coeffs.clone();
        for _ in 1..self.m {
            conj = self.pow_raw(&conj, p);
            for (s, &c) in acc.iter_mut().zip(&conj) {
                *s = ((*s as u64 + c as u64) % p) as u32;
            }
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace left GF(p)");
        Ok(acc[0])
    }

    // Product in GF(p)[x]/(f); does not require f to be irreducible.
    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let m = self.m;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            // subtract lead * x^(d-m) * f
            let neg = p - lead;
            for (i, &f) in self.reduction_poly[..m].iter().enumerate() {
                prod[d - m + i] = (prod[d - m + i] + neg * f as u64) % p;
            }
            prod[d] = 0;
        }
        prod.truncate(m);
        prod.into_iter().map(|c| c as u32).collect()
    }

    pub(crate) fn pow_raw(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = self.one().coeffs;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        result
    }

    /// Rabin's test: `f | x^(p^m) - x` and `gcd(f, x^(p^(m/q)) - x) = 1` for
    /// every prime `q | m`.
    fn is_irreducible(&self) -> bool {
        if self.m == 1 {
            return true;
        }
        let p = self.p as u64;
        let x = self.generator().coeffs;
        // frob[i] = x^(p^i) mod f
        let mut frob = Vec::with_capacity(self.m + 1);
        frob.push(x.clone());
        for i in 0..self.m {
            let next = self.pow_raw(&frob[i], p);
            frob.push(next);
        }
        if frob[self.m] != x {
            return false;
        }
        prime_factors(self.m as u64).into_iter().all(|q| {
            let mut h = frob[self.m / q as usize].clone();
            h[1] = (h[1] + self.p - 1) % self.p;
            let g = poly_gcd(self.reduction_poly.clone(), h, self.p);
            g.len() == 1
        })
    }

    /// Whether the class of `x` has multiplicative order exactly `p^m - 1`.
    fn generator_is_primitive(&self) -> bool {
        let order = self.group_order();
        let g = self.generator().coeffs;
        let one = self.one().coeffs;
        if self.pow_raw(&g, order) != one {
            return false;
        }
        prime_factors(order)
            .into_iter()
            .all(|q| self.pow_raw(&g, order / q) != one)
    }
}

impl fmt::Display for FieldCtx {
    /// Formats the reduction polynomial, e.g. `x^2 + 2x + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.reduction_poly.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (deg, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (d, 1) => write!(f, "x^{d}")?,
                (d, c) => write!(f, "{c}x^{d}")?,
            }
        }
        Ok(())
    }
}

fn trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime
    let (mut base, mut e, mut acc) = (a as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Monic gcd of two polynomials over GF(p), constant term first.
fn poly_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a <- a mod b
        let lead_inv = inv_mod(*b.last().unwrap(), p) as u64;
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let factor = *a.last().unwrap() as u64 * lead_inv % p as u64;
            for (i, &c) in b.iter().enumerate() {
                let sub = factor * c as u64 % p as u64;
                a[shift + i] = ((a[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            debug_assert_eq!(*a.last().unwrap(), 0);
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            trim(&mut a);
            if b.len() == 1 {
                // b is a nonzero constant; remainder is zero
                a = vec![0];
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    let lead_inv = inv_mod(*a.last().unwrap(), p) as u64;
    a.iter()
        .map(|&c| (c as u64 * lead_inv % p as u64) as u32)
        .collect()
}

/// First primitive polynomial of degree `m` over GF(p).
///
/// Candidates `x^m - (g_(m-1) x^(m-1) + ... + g_0)` are visited in
/// lexicographic order of the feedback taps `(g_(m-1), ..., g_0)`, so the
/// result is the recurrence `x^m = g(x)` with the smallest tap tuple.
pub fn find_primitive_poly(p: u32, m: usize) -> Result<FieldCtx, GfError> {
    check_prime(p)?;
    if m == 0 {
        return Err(GfError::ZeroDegree);
    }
    let order = group_order(p, m)?;
    let size = order + 1;
    for taps in 0..size {
        let mut poly = vec![0u32; m + 1];
        let mut rest = taps;
        for c in poly.iter_mut().take(m) {
            let g = (rest % p as u64) as u32;
            *c = (p - g) % p;
            rest /= p as u64;
        }
        poly[m] = 1;
        if poly[0] == 0 {
            continue;
        }
        let raw = FieldCtx {
            p,
            m,
            reduction_poly: poly,
            primitivity_verified: false,
        };
        // x of full order forces the quotient ring to be a field
        if raw.generator_is_primitive() {
            return FieldCtx::new_primitive(p, raw.reduction_poly);
        }
    }
    unreachable!("GF({p}^{m}) has a primitive element")
}
