//! Exact arithmetic in GF(p^k).
//!
//! Elements are coefficient vectors (low degree first) modulo a fixed monic
//! irreducible polynomial. The modulus is chosen canonically (lexicographically
//! smallest when coefficients are read from the leading one downwards) so that
//! every structure built on top of a field is reproducible bit for bit.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const ORDER_CAP: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose q = p^k with p prime, k >= 1.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0usize;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Field element: exactly `k` residues mod p, low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GfElem {
    coeffs: Vec<u64>,
}

impl GfElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A concrete presentation of GF(p^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfParams {
    p: u64,
    k: usize,
    /// monic modulus, low degree first, length k+1
    modulus: Vec<u64>,
    order: u64,
}

impl GfParams {
    /// Field with the canonical (lex-smallest) irreducible modulus.
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let modulus = find_irreducible(p, k)?;
        Ok(GfParams { p, k, order: p.pow(k as u32), modulus })
    }

    /// Field with a caller-supplied modulus; checked monic irreducible of degree k.
    pub fn with_modulus(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::BadDegree);
        }
        check_order_cap(p, k)?;
        if modulus.len() != k + 1 || modulus[k] != 1 {
            return Err(Error::NotMonic);
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadCoefficient(*modulus.iter().find(|&&c| c >= p).unwrap(), p));
        }
        if !is_irreducible_mod_p(p, &modulus) {
            return Err(Error::Reducible);
        }
        Ok(GfParams { p, k, order: p.pow(k as u32), modulus })
    }

    /// Field of a given prime-power order with the canonical modulus.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        GfParams::new(p, k)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> GfElem {
        GfElem { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> GfElem {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = 1;
        GfElem { coeffs }
    }

    pub fn elem(&self, coeffs: Vec<u64>) -> Result<GfElem> {
        if coeffs.len() != self.k {
            return Err(Error::FieldMismatch);
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::BadCoefficient(c, self.p));
        }
        Ok(GfElem { coeffs })
    }

    /// Embed an integer through repeated addition of 1 (lands in the prime subfield).
    pub fn from_int(&self, n: i64) -> GfElem {
        let p = self.p as i64;
        let r = n.rem_euclid(p) as u64;
        let mut coeffs = vec![0; self.k];
        coeffs[0] = r;
        GfElem { coeffs }
    }

    /// Element at position `idx` of the enumeration order.
    pub fn elem_at(&self, idx: u64) -> GfElem {
        debug_assert!(idx < self.order);
        // enumeration is lexicographic on the coefficient vector, so the
        // constant coefficient is the most significant digit
        let mut coeffs = vec![0; self.k];
        let mut rest = idx;
        for i in (0..self.k).rev() {
            coeffs[i] = rest % self.p;
            rest /= self.p;
        }
        GfElem { coeffs }
    }

    /// Position of an element in the enumeration order.
    pub fn index_of(&self, a: &GfElem) -> u64 {
        let mut idx = 0u64;
        for &c in &a.coeffs {
            idx = idx * self.p + c;
        }
        idx
    }

    /// All Q elements, zero first, in lexicographic coefficient order.
    pub fn enumerate(&self) -> Vec<GfElem> {
        (0..self.order).map(|i| self.elem_at(i)).collect()
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        GfElem { coeffs }
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        GfElem { coeffs }
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let k = self.k;
        let mut prod = vec![0u64; 2 * k];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // reduce modulo the monic modulus
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let sub = (c * self.modulus[i]) % self.p;
                prod[d - k + i] = (prod[d - k + i] + self.p * self.p - sub) % self.p;
            }
        }
        prod.truncate(k);
        GfElem { coeffs: prod }
    }

    pub fn pow(&self, a: &GfElem, mut e: u64) -> GfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &GfElem) -> Result<GfElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }
}

fn check_order_cap(p: u64, k: usize) -> Result<()> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > ORDER_CAP {
            return Err(Error::OrderCap(q));
        }
    }
    Ok(())
}

/// The lexicographically smallest (coefficients read from the leading term
/// down) monic irreducible polynomial of degree k over F_p. Deterministic.
pub fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 1 {
        return Err(Error::BadDegree);
    }
    check_order_cap(p, k)?;
    if k == 1 {
        // x itself, the smallest monic linear polynomial
        return Ok(vec![0, 1]);
    }
    // iterate (c_{k-1}, ..., c_0) lexicographically, c_{k-1} most significant
    let total = p.pow(k as u32);
    for idx in 0..total {
        let mut cand = vec![0u64; k + 1];
        cand[k] = 1;
        let mut rest = idx;
        for pos in 0..k {
            cand[pos] = rest % p;
            rest /= p;
        }
        if is_irreducible_mod_p(p, &cand) {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Trial division by every monic polynomial of degree <= deg/2.
fn is_irreducible_mod_p(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = vec![0u64; d + 1];
            div[d] = 1;
            let mut rest = idx;
            for pos in 0..d {
                div[pos] = rest % p;
                rest /= p;
            }
            if poly_rem_is_zero(p, poly, &div) {
                return false;
            }
        }
    }
    true
}

/// Does `div` (monic) divide `poly` over F_p?
fn poly_rem_is_zero(p: u64, poly: &[u64], div: &[u64]) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for i in 0..=dd {
                let sub = (lead * div[i]) % p;
                rem[shift + i] = (rem[shift + i] + p * p - sub) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}
