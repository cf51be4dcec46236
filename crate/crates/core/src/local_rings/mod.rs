//! Finite local principal rings F_q[y]/(f^s) and 3x3 matrix groups over them.

mod groups;
mod mat3;

pub use groups::{
    brute_force_counts, ceil_log, commuting_pair_bound_check, count_cube_roots,
    enumerate_pgl3_size, frobenius_unipotent_order, group_order, CommutingMode, CommutingReport,
    FrobeniusReport, GroupKind,
};
pub use mat3::Mat3;

use crate::error::{Error, Result};
use crate::gf::{GfElem, GfParams};
use crate::poly::Poly;

/// Largest ring cardinality for which elements can be enumerated.
pub const RING_SIZE_CAP: u64 = 1 << 16;
/// Multiplication tables are built up to this cardinality.
const TABLE_CAP: u64 = 256;

/// F_q[y]/(f^s) with f monic irreducible of degree d: a local principal ring
/// with maximal ideal (f), residue field of order Q = q^d and length s.
#[derive(Clone, Debug)]
pub struct LocalRing {
    base: GfParams,
    f: Poly,
    s: usize,
    d: usize,
    modulus: Poly,
    size: u64,
    residue_order: u64,
    tables: Option<RingTables>,
}

/// Ring element: the canonical representative of degree < d*s, stored with
/// exactly d*s coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RingElem {
    coeffs: Vec<GfElem>,
}

impl LocalRing {
    /// Quotient by (f^s) for any monic irreducible f over the base field.
    pub fn new(base: GfParams, f: Poly, s: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::BadLength);
        }
        let d = match f.degree() {
            Some(d) if d >= 1 && f.is_monic() => d,
            _ => return Err(Error::NotMonic),
        };
        if !f.is_irreducible(&base) {
            return Err(Error::Reducible);
        }
        let mut size: u64 = 1;
        for _ in 0..d * s {
            size = size.saturating_mul(base.order());
            if size > RING_SIZE_CAP {
                return Err(Error::RingCap(size, RING_SIZE_CAP));
            }
        }
        let residue_order = base.order().pow(d as u32);
        let modulus = f.pow(s, &base);
        let mut ring = LocalRing { base, f, s, d, modulus, size, residue_order, tables: None };
        if size <= TABLE_CAP {
            ring.tables = Some(RingTables::build(&ring));
        }
        Ok(ring)
    }

    /// Congruence parameters: additionally requires f coprime to y and y+1,
    /// matching the ideals available in F_q[y, 1/y, 1/(1+y)].
    pub fn congruence(base: GfParams, f: Poly, s: usize) -> Result<Self> {
        let at_zero = f.eval(&base.zero(), &base);
        if at_zero.is_zero() {
            return Err(Error::NotCoprime(format!("f({}) = 0 at y = 0", f.display(&base))));
        }
        let minus_one = base.neg(&base.one());
        if f.eval(&minus_one, &base).is_zero() {
            return Err(Error::NotCoprime(format!("f({}) = 0 at y = -1", f.display(&base))));
        }
        LocalRing::new(base, f, s)
    }

    /// The local principal ring with residue field of order Q and length s,
    /// realized as GF(Q)[y]/(y^s); every finite local principal ring of prime
    /// characteristic with those invariants is isomorphic to it.
    pub fn canonical(residue_order: u64, s: usize) -> Result<Self> {
        let base = GfParams::for_order(residue_order)?;
        let f = Poly::y(&base);
        LocalRing::new(base, f, s)
    }

    pub fn base(&self) -> &GfParams {
        &self.base
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn length(&self) -> usize {
        self.s
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn residue_order(&self) -> u64 {
        self.residue_order
    }

    fn width(&self) -> usize {
        self.d * self.s
    }

    pub(crate) fn tables(&self) -> Option<&RingTables> {
        self.tables.as_ref()
    }

    pub fn zero(&self) -> RingElem {
        RingElem { coeffs: vec![self.base.zero(); self.width()] }
    }

    pub fn one(&self) -> RingElem {
        let mut coeffs = vec![self.base.zero(); self.width()];
        coeffs[0] = self.base.one();
        RingElem { coeffs }
    }

    pub fn from_poly(&self, p: &Poly) -> RingElem {
        let reduced = p.rem(&self.modulus, &self.base).expect("modulus is nonzero");
        let mut coeffs = reduced.coeffs().to_vec();
        coeffs.resize(self.width(), self.base.zero());
        RingElem { coeffs }
    }

    pub fn to_poly(&self, e: &RingElem) -> Poly {
        Poly::from_coeffs(&self.base, e.coeffs.clone())
    }

    /// Element at position idx in the enumeration; coefficient of y^0 is the
    /// least significant digit.
    pub fn elem_at(&self, idx: u64) -> RingElem {
        debug_assert!(idx < self.size);
        let b = self.base.order();
        let mut coeffs = Vec::with_capacity(self.width());
        let mut rest = idx;
        for _ in 0..self.width() {
            coeffs.push(self.base.elem_at(rest % b));
            rest /= b;
        }
        RingElem { coeffs }
    }

    pub fn index_of(&self, e: &RingElem) -> u64 {
        let b = self.base.order();
        let mut idx = 0u64;
        for c in e.coeffs.iter().rev() {
            idx = idx * b + self.base.index_of(c);
        }
        idx
    }

    pub fn enumerate(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size).map(|i| self.elem_at(i))
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| self.base.add(x, y))
            .collect();
        RingElem { coeffs }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem { coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect() }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let pa = self.to_poly(a);
        let pb = self.to_poly(b);
        self.from_poly(&pa.mul(&pb, &self.base))
    }

    pub fn pow(&self, a: &RingElem, mut e: u64) -> RingElem {
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

    /// Units are exactly the representatives not divisible by f.
    pub fn is_unit(&self, a: &RingElem) -> bool {
        !self.to_poly(a).rem(&self.f, &self.base).expect("f nonzero").is_zero()
    }

    /// Inverse by the extended Euclidean algorithm against f^s.
    pub fn inv(&self, a: &RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let pa = self.to_poly(a);
        let (g, u, _) = pa.ext_gcd(&self.modulus, &self.base)?;
        debug_assert_eq!(g.degree(), Some(0), "unit representative is coprime to f^s");
        let ginv = self.base.inv(&g.coeff(0, &self.base))?;
        let scaled = u.mul(&Poly::constant(&self.base, ginv), &self.base);
        Ok(self.from_poly(&scaled))
    }

    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.enumerate().filter(|e| self.is_unit(e))
    }
}

/// Index-based operation tables for small rings; these carry the exhaustive
/// matrix sweeps.
#[derive(Clone, Debug)]
pub(crate) struct RingTables {
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
    /// u16::MAX marks non-units
    pub inv: Vec<u16>,
    pub unit: Vec<bool>,
    pub zero: u16,
    pub one: u16,
}

impl RingTables {
    fn build(ring: &LocalRing) -> Self {
        let n = ring.size as usize;
        let elems: Vec<RingElem> = ring.enumerate().collect();
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        let mut inv = vec![u16::MAX; n];
        let mut unit = vec![false; n];
        for (i, a) in elems.iter().enumerate() {
            neg[i] = ring.index_of(&ring.neg(a)) as u16;
            unit[i] = ring.is_unit(a);
            if unit[i] {
                inv[i] = ring.index_of(&ring.inv(a).unwrap()) as u16;
            }
            for (j, b) in elems.iter().enumerate().skip(i) {
                let s = ring.index_of(&ring.add(a, b)) as u16;
                let p = ring.index_of(&ring.mul(a, b)) as u16;
                add[i * n + j] = s;
                add[j * n + i] = s;
                mul[i * n + j] = p;
                mul[j * n + i] = p;
            }
        }
        RingTables {
            size: n,
            add,
            mul,
            neg,
            inv,
            unit,
            zero: ring.index_of(&ring.zero()) as u16,
            one: ring.index_of(&ring.one()) as u16,
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn gf(q: u64) -> GfParams {
        GfParams::for_order(q).unwrap()
    }

    #[test]
    fn congruence_guard_rejects_y_and_y_plus_one() {
        let f2 = gf(2);
        let y = Poly::y(&f2);
        assert!(matches!(LocalRing::congruence(f2.clone(), y, 1), Err(Error::NotCoprime(_))));
        let y1 = parse_poly("y+1", &f2).unwrap();
        assert!(matches!(LocalRing::congruence(f2.clone(), y1, 1), Err(Error::NotCoprime(_))));
        // y^2+y+1 is fine
        let f = parse_poly("y^2+y+1", &f2).unwrap();
        assert!(LocalRing::congruence(f2, f, 1).is_ok());
    }

    #[test]
    fn ring_isomorphic_to_gf4_matches_field_inverse() {
        let f2 = gf(2);
        let f = parse_poly("y^2+y+1", &f2).unwrap();
        let ring = LocalRing::congruence(f2, f, 1).unwrap();
        assert_eq!(ring.size(), 4);
        assert_eq!(ring.residue_order(), 4);
        let gf4 = gf(4);
        // same modulus polynomial, so inverses agree coefficientwise
        for idx in 1..4 {
            let a = ring.elem_at(idx);
            let inv_ring = ring.inv(&a).unwrap();
            let a_field = gf4.elem(a.coeffs.iter().map(|c| c.coeffs()[0]).collect()).unwrap();
            let inv_field = gf4.inv(&a_field).unwrap();
            let expect: Vec<u64> = inv_ring.coeffs.iter().map(|c| c.coeffs()[0]).collect();
            assert_eq!(inv_field.coeffs(), &expect[..]);
        }
    }

    #[test]
    fn nilpotency_at_length_two() {
        let f2 = gf(2);
        let f = parse_poly("y^2+y+1", &f2).unwrap();
        let ring = LocalRing::new(f2, f.clone(), 2).unwrap();
        let fe = ring.from_poly(&f);
        assert!(!ring.is_unit(&fe));
        assert_eq!(ring.mul(&fe, &fe), ring.zero());
        assert!(matches!(ring.inv(&fe), Err(Error::NonUnit)));
    }

    #[test]
    fn canonical_ring_unit_count() {
        // |units| = Q^(s-1) (Q-1)
        for (q, s, want) in [(2u64, 1usize, 1u64), (2, 2, 2), (3, 2, 6), (4, 1, 3), (4, 2, 12)] {
            let ring = LocalRing::canonical(q, s).unwrap();
            assert_eq!(ring.units().count() as u64, want, "q={q} s={s}");
        }
    }

    #[test]
    fn ring_axioms_and_inverses_small() {
        for (q, s) in [(2u64, 2usize), (3, 2), (4, 1)] {
            let ring = LocalRing::canonical(q, s).unwrap();
            let elems: Vec<RingElem> = ring.enumerate().collect();
            for a in &elems {
                for b in &elems {
                    assert_eq!(ring.mul(a, b), ring.mul(b, a));
                    for c in &elems {
                        assert_eq!(ring.mul(&ring.mul(a, b), c), ring.mul(a, &ring.mul(b, c)));
                        assert_eq!(
                            ring.mul(a, &ring.add(b, c)),
                            ring.add(&ring.mul(a, b), &ring.mul(a, c))
                        );
                    }
                }
                if ring.is_unit(a) {
                    assert_eq!(ring.mul(&ring.inv(a).unwrap(), a), ring.one());
                }
            }
        }
    }

    #[test]
    fn tables_match_direct_arithmetic() {
        let ring = LocalRing::canonical(3, 2).unwrap();
        let t = ring.tables().unwrap();
        for i in 0..ring.size() {
            for j in 0..ring.size() {
                let a = ring.elem_at(i);
                let b = ring.elem_at(j);
                assert_eq!(
                    t.mul(i as u16, j as u16) as u64,
                    ring.index_of(&ring.mul(&a, &b))
                );
                assert_eq!(
                    t.add(i as u16, j as u16) as u64,
                    ring.index_of(&ring.add(&a, &b))
                );
            }
        }
    }

    #[test]
    fn size_cap_enforced() {
        assert!(matches!(LocalRing::canonical(16, 5), Err(Error::RingCap(..))));
        let f2 = gf(2);
        assert!(matches!(LocalRing::new(f2.clone(), Poly::y(&f2), 0), Err(Error::BadLength)));
    }
}
