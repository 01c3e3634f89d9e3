//! Square matrices over a finite local ring, with exact determinant
//! and inverse. Matrices are flat row-major vectors of ring elements;
//! the ring descriptor is passed to each operation.

use crate::error::{Error, Result};
use crate::galois_ring::{LocalRing, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    pub n: usize,
    pub entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn from_entries(n: usize, entries: Vec<RingElement>) -> Self {
        assert_eq!(entries.len(), n * n);
        RingMatrix { n, entries }
    }

    pub fn zero(ring: &LocalRing, n: usize) -> Self {
        RingMatrix {
            n,
            entries: vec![ring.zero(); n * n],
        }
    }

    pub fn identity(ring: &LocalRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n);
        for i in 0..n {
            *m.get_mut(i, i) = ring.one();
        }
        m
    }

    /// I + r e_ij (i != j), the elementary transvection.
    pub fn transvection(ring: &LocalRing, n: usize, i: usize, j: usize, r: &RingElement) -> Self {
        assert_ne!(i, j);
        let mut m = Self::identity(ring, n);
        *m.get_mut(i, j) = r.clone();
        m
    }

    /// r e_ij, a matrix unit scaled by r.
    pub fn unit_matrix(ring: &LocalRing, n: usize, i: usize, j: usize, r: &RingElement) -> Self {
        let mut m = Self::zero(ring, n);
        *m.get_mut(i, j) = r.clone();
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut RingElement {
        &mut self.entries[i * self.n + j]
    }

    pub fn add(&self, ring: &LocalRing, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        RingMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, ring: &LocalRing, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        RingMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, ring: &LocalRing) -> Self {
        RingMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| ring.neg(a)).collect(),
        }
    }

    pub fn scalar_mul(&self, ring: &LocalRing, r: &RingElement) -> Self {
        RingMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| ring.mul(r, a)).collect(),
        }
    }

    pub fn scalar_mul_int(&self, ring: &LocalRing, k: u64) -> Self {
        RingMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| ring.mul_int(a, k)).collect(),
        }
    }

    pub fn mul(&self, ring: &LocalRing, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(ring, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let prod = ring.mul(a, other.get(k, j));
                    let cur = ring.add(out.get(i, j), &prod);
                    *out.get_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn trace(&self, ring: &LocalRing) -> RingElement {
        let mut t = ring.zero();
        for i in 0..self.n {
            t = ring.add(&t, self.get(i, i));
        }
        t
    }

    pub fn is_identity(&self, ring: &LocalRing) -> bool {
        *self == Self::identity(ring, self.n)
    }

    /// Determinant by Laplace expansion along the first row (the sizes
    /// in play are n <= 4).
    pub fn det(&self, ring: &LocalRing) -> RingElement {
        match self.n {
            0 => ring.one(),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = ring.zero();
                for j in 0..self.n {
                    let a = self.get(0, j);
                    if ring.is_zero(a) {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let term = ring.mul(a, &minor.det(ring));
                    if j % 2 == 0 {
                        acc = ring.add(&acc, &term);
                    } else {
                        acc = ring.sub(&acc, &term);
                    }
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        RingMatrix { n: n - 1, entries }
    }

    /// Inverse by Gauss-Jordan elimination. Over a local ring a matrix
    /// is invertible iff every column admits a unit pivot during the
    /// sweep; otherwise the determinant is a non-unit.
    pub fn inverse(&self, ring: &LocalRing) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(ring, n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| ring.is_unit(a.get(r, col)))
                .ok_or(Error::NonUnitDeterminant)?;
            if pivot_row != col {
                for j in 0..n {
                    a.entries.swap(col * n + j, pivot_row * n + j);
                    inv.entries.swap(col * n + j, pivot_row * n + j);
                }
            }
            let scale = ring.inv(a.get(col, col))?;
            for j in 0..n {
                *a.get_mut(col, j) = ring.mul(&scale, a.get(col, j));
                *inv.get_mut(col, j) = ring.mul(&scale, inv.get(col, j));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if ring.is_zero(&factor) {
                    continue;
                }
                for j in 0..n {
                    let t = ring.mul(&factor, a.get(col, j));
                    *a.get_mut(r, j) = ring.sub(a.get(r, j), &t);
                    let t = ring.mul(&factor, inv.get(col, j));
                    *inv.get_mut(r, j) = ring.sub(inv.get(r, j), &t);
                }
            }
        }
        Ok(inv)
    }

    /// Flat digit key for hashing and canonical ordering.
    pub fn key(&self) -> Vec<u64> {
        let mut k = Vec::with_capacity(self.entries.len() * self.entries[0].coeffs.len());
        for e in &self.entries {
            k.extend_from_slice(&e.coeffs);
        }
        k
    }

    /// Entrywise image under a ring map.
    pub fn map_entries(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        RingMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}
