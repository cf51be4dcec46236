//! Polynomials over GF(q): the minimum needed to build quotient rings
//! F_q[y]/(f^s) and to parse user-supplied moduli.

use crate::error::{Error, Result};
use crate::gf::{GfElem, GfParams};

/// Dense polynomial, low degree first, no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<GfElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(field: &GfParams, mut coeffs: Vec<GfElem>) -> Self {
        let _ = field;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(field: &GfParams, c: GfElem) -> Self {
        Poly::from_coeffs(field, vec![c])
    }

    /// The monomial y.
    pub fn y(field: &GfParams) -> Self {
        Poly { coeffs: vec![field.zero(), field.one()] }
    }

    pub fn one(field: &GfParams) -> Self {
        Poly { coeffs: vec![field.one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GfElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &GfParams) -> GfElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| !c.is_zero() && c.coeffs()[1..].iter().all(|&x| x == 0) && c.coeffs()[0] == 1)
    }

    pub fn add(&self, other: &Poly, field: &GfParams) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(i, field), &other.coeff(i, field)));
        }
        Poly::from_coeffs(field, out)
    }

    pub fn neg(&self, field: &GfParams) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Poly, field: &GfParams) -> Poly {
        self.add(&other.neg(field), field)
    }

    pub fn mul(&self, other: &Poly, field: &GfParams) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Poly::from_coeffs(field, out)
    }

    pub fn pow(&self, e: usize, field: &GfParams) -> Poly {
        let mut acc = Poly::one(field);
        for _ in 0..e {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// (quotient, remainder) with `div` nonzero.
    pub fn divmod(&self, div: &Poly, field: &GfParams) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead_inv = field.inv(div.coeffs.last().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = rem.last().unwrap().clone();
            let shift = rem.len() - 1 - dd;
            if !lead.is_zero() {
                let factor = field.mul(&lead, &lead_inv);
                for i in 0..=dd {
                    let s = field.mul(&factor, &div.coeffs[i]);
                    rem[shift + i] = field.sub(&rem[shift + i], &s);
                }
                quot[shift] = factor;
            }
            rem.pop();
            while rem.len() > dd && rem.last().unwrap().is_zero() {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(field, quot), Poly::from_coeffs(field, rem)))
    }

    pub fn rem(&self, div: &Poly, field: &GfParams) -> Result<Poly> {
        Ok(self.divmod(div, field)?.1)
    }

    pub fn eval(&self, x: &GfElem, field: &GfParams) -> GfElem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// Trial division by every monic polynomial of degree <= deg/2.
    pub fn is_irreducible(&self, field: &GfParams) -> bool {
        let deg = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let elems = field.enumerate();
        for d in 1..=deg / 2 {
            let count = field.order().pow(d as u32);
            for idx in 0..count {
                let mut cs = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    cs.push(elems[(rest % field.order()) as usize].clone());
                    rest /= field.order();
                }
                cs.push(field.one());
                let div = Poly::from_coeffs(field, cs);
                if self.rem(&div, field).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Extended Euclid: returns (g, u, v) with u*self + v*other = g, g monic when nonzero.
    pub fn ext_gcd(&self, other: &Poly, field: &GfParams) -> Result<(Poly, Poly, Poly)> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(field), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, field)?;
            let u = u0.sub(&q.mul(&u1, field), field);
            let v = v0.sub(&q.mul(&v1, field), field);
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, u);
            v0 = std::mem::replace(&mut v1, v);
        }
        if let Some(lead) = r0.coeffs.last().cloned() {
            let li = field.inv(&lead)?;
            let scale = Poly::constant(field, li);
            r0 = r0.mul(&scale, field);
            u0 = u0.mul(&scale, field);
            v0 = v0.mul(&scale, field);
        }
        Ok((r0, u0, v0))
    }

    /// Render as a human-readable polynomial in y.
    pub fn display(&self, field: &GfParams) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.coeffs()[1..].iter().all(|&x| x == 0) {
                c.coeffs()[0].to_string()
            } else {
                format!("[{}]", c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            };
            let term = match i {
                0 => cs,
                1 if cs == "1" => "y".to_string(),
                1 => format!("{cs}*y"),
                _ if cs == "1" => format!("y^{i}"),
                _ => format!("{cs}*y^{i}"),
            };
            terms.push(term);
        }
        let _ = field;
        terms.join(" + ")
    }
}

/// Parse a polynomial in `y` (or `x`) with integer coefficients over the prime
/// subfield, e.g. `"y^2 + y + 1"`, `"2*y^3 - 1"`, `"5"`.
pub fn parse_poly(src: &str, field: &GfParams) -> Result<Poly> {
    const MAX_EXP: usize = 64;
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = s.as_bytes();
    let mut acc = Poly::zero();
    let mut pos = 0usize;
    let mut sign_next: i64 = 1;
    // leading sign
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign_next = if bytes[0] == b'-' { -1 } else { 1 };
        pos = 1;
        if pos == bytes.len() {
            return Err(Error::Parse("dangling sign".into()));
        }
    }
    while pos < bytes.len() {
        // term: [int] [* ] [var [^int]]
        let start = pos;
        let mut coef: Option<i64> = None;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let d = (bytes[pos] - b'0') as i64;
            let c = coef.unwrap_or(0);
            if c > (i64::MAX - d) / 10 {
                return Err(Error::Parse("coefficient too large".into()));
            }
            coef = Some(c * 10 + d);
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'*' {
            if coef.is_none() {
                return Err(Error::Parse(format!("stray '*' at byte {pos}")));
            }
            pos += 1;
        }
        let mut exp = 0usize;
        if pos < bytes.len() && (bytes[pos] == b'y' || bytes[pos] == b'x') {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let estart = pos;
                let mut e = 0usize;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    e = e * 10 + (bytes[pos] - b'0') as usize;
                    if e > MAX_EXP {
                        return Err(Error::Parse(format!("exponent exceeds {MAX_EXP}")));
                    }
                    pos += 1;
                }
                if pos == estart {
                    return Err(Error::Parse("missing exponent after '^'".into()));
                }
                exp = e;
            }
        }
        if pos == start {
            return Err(Error::Parse(format!("unexpected character '{}'", &s[pos..pos + 1])));
        }
        if coef.is_none() && exp == 0 {
            return Err(Error::Parse("term with neither coefficient nor variable".into()));
        }
        let c = field.from_int(sign_next * coef.unwrap_or(1));
        let mut term = vec![field.zero(); exp + 1];
        term[exp] = c;
        acc = acc.add(&Poly::from_coeffs(field, term), field);
        // separator
        if pos < bytes.len() {
            match bytes[pos] {
                b'+' => sign_next = 1,
                b'-' => sign_next = -1,
                _ => return Err(Error::Parse(format!("expected '+' or '-' at byte {pos}"))),
            }
            pos += 1;
            if pos == bytes.len() {
                return Err(Error::Parse("trailing operator".into()));
            }
        }
    }
    Ok(acc)
}
