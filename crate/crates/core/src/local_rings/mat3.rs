//! 3x3 matrices over a local ring, plus the packed index representation used
//! by the exhaustive sweeps.

use super::{LocalRing, RingElem, RingTables};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat3 {
    pub entries: [[RingElem; 3]; 3],
}

impl Mat3 {
    pub fn identity(ring: &LocalRing) -> Self {
        let z = ring.zero();
        let o = ring.one();
        Mat3 {
            entries: [
                [o.clone(), z.clone(), z.clone()],
                [z.clone(), o.clone(), z.clone()],
                [z.clone(), z.clone(), o],
            ],
        }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> RingElem) -> Self {
        Mat3 {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))),
        }
    }

    pub fn mul(&self, other: &Mat3, ring: &LocalRing) -> Mat3 {
        Mat3::from_fn(|r, c| {
            let mut acc = ring.zero();
            for t in 0..3 {
                acc = ring.add(&acc, &ring.mul(&self.entries[r][t], &other.entries[t][c]));
            }
            acc
        })
    }

    pub fn det(&self, ring: &LocalRing) -> RingElem {
        let e = &self.entries;
        let m = |a: &RingElem, b: &RingElem| ring.mul(a, b);
        let minor = |a: &RingElem, b: &RingElem, c: &RingElem, d: &RingElem| {
            ring.sub(&m(a, d), &m(b, c))
        };
        let t0 = m(&e[0][0], &minor(&e[1][1], &e[1][2], &e[2][1], &e[2][2]));
        let t1 = m(&e[0][1], &minor(&e[1][0], &e[1][2], &e[2][0], &e[2][2]));
        let t2 = m(&e[0][2], &minor(&e[1][0], &e[1][1], &e[2][0], &e[2][1]));
        ring.add(&ring.sub(&t0, &t1), &t2)
    }

    pub fn is_invertible(&self, ring: &LocalRing) -> bool {
        ring.is_unit(&self.det(ring))
    }

    pub fn scalar_mul(&self, a: &RingElem, ring: &LocalRing) -> Mat3 {
        Mat3::from_fn(|r, c| ring.mul(a, &self.entries[r][c]))
    }

    #[cfg(test)]
    pub(crate) fn to_packed(&self, ring: &LocalRing) -> PackedMat {
        std::array::from_fn(|i| ring.index_of(&self.entries[i / 3][i % 3]) as u16)
    }
}

/// Row-major element indices into the ring enumeration.
pub(crate) type PackedMat = [u16; 9];

pub(crate) fn pidentity(t: &RingTables) -> PackedMat {
    let mut m = [t.zero; 9];
    m[0] = t.one;
    m[4] = t.one;
    m[8] = t.one;
    m
}

#[inline]
pub(crate) fn pmul(t: &RingTables, a: &PackedMat, b: &PackedMat) -> PackedMat {
    let mut out = [t.zero; 9];
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = t.mul(a[r * 3], b[c]);
            acc = t.add(acc, t.mul(a[r * 3 + 1], b[3 + c]));
            acc = t.add(acc, t.mul(a[r * 3 + 2], b[6 + c]));
            out[r * 3 + c] = acc;
        }
    }
    out
}

pub(crate) fn pdet(t: &RingTables, m: &PackedMat) -> u16 {
    let minor = |a, b, c, d| t.sub(t.mul(a, d), t.mul(b, c));
    let t0 = t.mul(m[0], minor(m[4], m[5], m[7], m[8]));
    let t1 = t.mul(m[1], minor(m[3], m[5], m[6], m[8]));
    let t2 = t.mul(m[2], minor(m[3], m[4], m[6], m[7]));
    t.add(t.sub(t0, t1), t2)
}

/// Projective normalization: scale so the first unit entry in row-major order
/// becomes 1. Well-defined on images in PGL3 because scaling by a unit
/// permutes no entry between units and non-units.
pub(crate) fn pcanon(t: &RingTables, m: &PackedMat) -> PackedMat {
    let lead = m
        .iter()
        .copied()
        .find(|&e| t.unit[e as usize])
        .expect("invertible matrices have a unit entry");
    if lead == t.one {
        return *m;
    }
    let li = t.inv[lead as usize];
    std::array::from_fn(|i| t.mul(li, m[i]))
}
