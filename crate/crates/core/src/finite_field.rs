//! Arithmetic in GF(p^d) with the canonical irreducible modulus.
//!
//! Elements are coefficient vectors of length d with entries in [0, p),
//! ascending degree. The modulus for given (p, d) is the
//! lexicographically least monic irreducible polynomial (comparing
//! coefficient vectors from the constant term up), so two descriptors
//! with equal (p, d) are identical.

use crate::error::{Error, Result};

pub const MAX_FIELD_SIZE: u64 = 512;
pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: u32,
    d: usize,
    /// Monic, length d+1, ascending degree.
    modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

// ---- polynomial helpers over F_p (ascending-degree coefficient vectors) ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    out.iter().map(|&v| (v % p as u64) as u32).collect()
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = ((r[idx] as u64 + (p as u64 - mc as u64) * lead as u64) % p as u64) as u32;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_is_divisible(a: &[u32], b: &[u32], p: u32) -> bool {
    // b monic
    poly_rem(a, b, p).is_empty()
}

/// Irreducibility of a monic polynomial by trial division over F_p.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // Trial-divide by all monic polynomials of degree 1..=d/2.
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut rest = idx;
            for _ in 0..deg {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if poly_is_divisible(f, &g, p) {
                return false;
            }
        }
    }
    true
}

impl FieldDescriptor {
    /// The field GF(p^d) with the canonical modulus.
    pub fn new(p: u32, d: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if d < 1 || d > MAX_DEGREE || (p as u64).pow(d as u32) > MAX_FIELD_SIZE {
            return Err(Error::UnsupportedSize(format!("p^d = {}^{}", p, d)));
        }
        Ok(FieldDescriptor {
            p,
            d,
            modulus: canonical_modulus(p, d),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.d as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.d],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.d];
        c[0] = 1;
        FieldElement { coeffs: c }
    }

    /// Class of the polynomial variable x (a generator of GF(p^d) over
    /// GF(p) as a ring, not necessarily of the multiplicative group).
    pub fn gen_x(&self) -> FieldElement {
        let mut c = vec![0; self.d];
        if self.d > 1 {
            c[1] = 1;
        } else {
            // x reduces mod the degree-1 modulus x to 0.
            c[0] = 0;
        }
        FieldElement { coeffs: c }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let mut c: Vec<u32> = coeffs.iter().map(|&v| v % self.p).collect();
        c.resize(self.d, 0);
        FieldElement { coeffs: c }
    }

    pub fn from_u32(&self, v: u32) -> FieldElement {
        let mut c = vec![0; self.d];
        c[0] = v % self.p;
        FieldElement { coeffs: c }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.d, 0);
        FieldElement { coeffs: r }
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut r = self.one();
        let mut b = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// The Frobenius automorphism a -> a^p.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// All p^d elements, index i having base-p digits of i as
    /// coefficients (constant term least significant); element 0 first.
    pub fn enumerate(&self) -> Vec<FieldElement> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    pub fn element_at(&self, idx: u64) -> FieldElement {
        let mut c = Vec::with_capacity(self.d);
        let mut rest = idx;
        for _ in 0..self.d {
            c.push((rest % self.p as u64) as u32);
            rest /= self.p as u64;
        }
        FieldElement { coeffs: c }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.p as u64 + c as u64;
        }
        idx
    }

    pub fn element_order(&self, a: &FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut cur = a.clone();
        for k in 1..=self.order() {
            if cur == self.one() {
                return Some(k);
            }
            cur = self.mul(&cur, a);
        }
        None
    }

    /// First element in enumeration order with multiplicative order p^d - 1.
    pub fn multiplicative_generator(&self) -> FieldElement {
        let target = self.order() - 1;
        for a in self.enumerate() {
            if a.is_zero() {
                continue;
            }
            if self.element_order(&a) == Some(target) {
                return a;
            }
        }
        unreachable!("GF(p^d) has a cyclic multiplicative group")
    }

    /// Evaluates a polynomial over GF(p) (ascending coefficients) at an
    /// element of this field.
    pub fn eval_poly(&self, poly: &[u32], at: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, &self.from_u32(c));
        }
        acc
    }

    /// The F_p-basis 1, x, ..., x^{d-1}.
    pub fn power_basis(&self) -> Vec<FieldElement> {
        (0..self.d)
            .map(|i| {
                let mut c = vec![0; self.d];
                c[i] = 1;
                FieldElement { coeffs: c }
            })
            .collect()
    }
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

fn canonical_modulus(p: u32, d: usize) -> Vec<u32> {
    if d == 1 {
        return vec![0, 1]; // x
    }
    // Lexicographically least (c_0, ..., c_{d-1}) with x^d + sum c_i x^i irreducible.
    let total = (p as u64).pow(d as u32);
    for idx in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut rest = idx;
        let mut digits = Vec::with_capacity(d);
        for _ in 0..d {
            digits.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        // idx counts with c_{d-1} least significant so that c_0 varies slowest:
        // we want lexicographic order on (c_0, c_1, ...), smallest first.
        digits.reverse();
        c.extend(digits);
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// A field homomorphism k -> k', determined by the image of the class of x.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub source: FieldDescriptor,
    pub target: FieldDescriptor,
    image_of_x: FieldElement,
}

impl FieldEmbedding {
    /// Canonical embedding: sends the class of x to the least root (in
    /// enumeration order) of the source modulus inside the target.
    pub fn new(source: &FieldDescriptor, target: &FieldDescriptor) -> Result<Self> {
        if source.p() != target.p() || target.degree() % source.degree() != 0 {
            return Err(Error::NoEmbedding);
        }
        if source == target {
            return Ok(FieldEmbedding {
                source: source.clone(),
                target: target.clone(),
                image_of_x: target.gen_x(),
            });
        }
        for cand in target.enumerate() {
            if target.eval_poly(source.modulus(), &cand).is_zero() {
                return Ok(FieldEmbedding {
                    source: source.clone(),
                    target: target.clone(),
                    image_of_x: cand,
                });
            }
        }
        Err(Error::NoEmbedding)
    }

    pub fn map(&self, a: &FieldElement) -> FieldElement {
        self.target.eval_poly(&a.coeffs, &self.image_of_x)
    }
}
