//! Finite local Artinian coefficient rings: the Galois ring
//! GR(p^m, d) = (Z/p^m)[x]/(f), where f is the integer-coefficient lift
//! of the canonical modulus of GF(p^d), and the dual numbers k[eps]
//! with eps^2 = 0. Provides Teichmuller lifts, Teichmuller-digit
//! expansions, the digit-padding section into the next level, reduction
//! and residue maps, and subring generation from Teichmuller lifts.

use crate::error::{Error, Result};
use crate::finite_field::{FieldDescriptor, FieldElement, FieldEmbedding};
use crate::fp::FpVec;
use std::collections::HashMap;

pub const MAX_RING_SIZE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalRing {
    GaloisRing {
        p: u32,
        m: u32,
        d: usize,
        /// p^m.
        pm: u64,
        /// Monic modulus lift, length d+1, entries in [0, p^m).
        modulus: Vec<u64>,
        field: FieldDescriptor,
    },
    DualNumbers {
        field: FieldDescriptor,
    },
}

/// Ring element as a flat digit vector; interpretation depends on the
/// descriptor (length d mod p^m for Galois rings, length 2d mod p for
/// dual numbers: constant digits then eps digits).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

impl LocalRing {
    /// GR(p^m, d); for m = 1 this is GF(p^d) in ring form.
    pub fn galois_ring(p: u32, m: u32, d: usize) -> Result<Self> {
        let field = FieldDescriptor::new(p, d)?;
        if m < 1 {
            return Err(Error::UnsupportedSize("m must be >= 1".into()));
        }
        let bits = (m as u64) * (d as u64) * (64 - (p as u64 - 1).leading_zeros() as u64 + 1);
        if bits > 64 && (p as u64).checked_pow(m * d as u32).is_none() {
            return Err(Error::UnsupportedSize(format!("p^(m d) = {}^{}", p, m * d as u32)));
        }
        let size = (p as u64)
            .checked_pow(m * d as u32)
            .ok_or_else(|| Error::UnsupportedSize(format!("{}^{}", p, m * d as u32)))?;
        if size > MAX_RING_SIZE {
            return Err(Error::UnsupportedSize(format!("|GR| = {}", size)));
        }
        let pm = (p as u64).pow(m);
        let modulus = field.modulus().iter().map(|&c| c as u64).collect();
        Ok(LocalRing::GaloisRing {
            p,
            m,
            d,
            pm,
            modulus,
            field,
        })
    }

    /// The dual numbers k[eps] over GF(p^d).
    pub fn dual_numbers(p: u32, d: usize) -> Result<Self> {
        let field = FieldDescriptor::new(p, d)?;
        Ok(LocalRing::DualNumbers { field })
    }

    pub fn residue_field(&self) -> &FieldDescriptor {
        match self {
            LocalRing::GaloisRing { field, .. } => field,
            LocalRing::DualNumbers { field } => field,
        }
    }

    pub fn p(&self) -> u32 {
        self.residue_field().p()
    }

    /// Number of digits in an element's coefficient vector.
    pub fn digit_count(&self) -> usize {
        match self {
            LocalRing::GaloisRing { d, .. } => *d,
            LocalRing::DualNumbers { field } => 2 * field.degree(),
        }
    }

    /// Modulus each digit is reduced by.
    pub fn digit_modulus(&self) -> u64 {
        match self {
            LocalRing::GaloisRing { pm, .. } => *pm,
            LocalRing::DualNumbers { field } => field.p() as u64,
        }
    }

    pub fn order(&self) -> u64 {
        let q = self.digit_modulus();
        (0..self.digit_count()).fold(1u64, |acc, _| acc * q)
    }

    /// Nilpotency degree of the maximal ideal.
    pub fn nilpotency_degree(&self) -> u32 {
        match self {
            LocalRing::GaloisRing { m, .. } => *m,
            LocalRing::DualNumbers { .. } => 2,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            coeffs: vec![0; self.digit_count()],
        }
    }

    pub fn one(&self) -> RingElement {
        let mut c = vec![0; self.digit_count()];
        c[0] = 1;
        RingElement { coeffs: c }
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.digit_modulus();
        RingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % q)
                .collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.digit_modulus();
        RingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + q - y) % q)
                .collect(),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match self {
            LocalRing::GaloisRing { pm, modulus, d, .. } => {
                let mut prod = vec![0u64; 2 * d - 1];
                for (i, &x) in a.coeffs.iter().enumerate() {
                    for (j, &y) in b.coeffs.iter().enumerate() {
                        prod[i + j] =
                            (prod[i + j] + ((x as u128 * y as u128) % *pm as u128) as u64) % pm;
                    }
                }
                // Reduce modulo the monic modulus.
                let dm = modulus.len() - 1;
                let mut r = prod;
                for idx in (dm..r.len()).rev() {
                    let lead = r[idx];
                    if lead != 0 {
                        let shift = idx - dm;
                        for (i, &mc) in modulus.iter().enumerate() {
                            let sub = (mc as u128 * lead as u128) % *pm as u128;
                            r[shift + i] = ((r[shift + i] as u128 + *pm as u128 - sub)
                                % *pm as u128) as u64;
                        }
                    }
                }
                r.truncate(*d);
                r.resize(*d, 0);
                RingElement { coeffs: r }
            }
            LocalRing::DualNumbers { field } => {
                let (a0, a1) = self.dual_parts(a);
                let (b0, b1) = self.dual_parts(b);
                let c0 = field.mul(&a0, &b0);
                let c1 = field.add(&field.mul(&a0, &b1), &field.mul(&a1, &b0));
                self.dual_from_parts(&c0, &c1)
            }
        }
    }

    pub fn mul_int(&self, a: &RingElement, k: u64) -> RingElement {
        let q = self.digit_modulus();
        let k = k % q;
        RingElement {
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| ((x as u128 * k as u128) % q as u128) as u64)
                .collect(),
        }
    }

    pub fn pow(&self, a: &RingElement, e: u64) -> RingElement {
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

    pub fn is_unit(&self, a: &RingElement) -> bool {
        !self.residue(a).is_zero()
    }

    /// Inverse of a unit (Hensel/Newton iteration from the residue inverse).
    pub fn inv(&self, a: &RingElement) -> Result<RingElement> {
        if !self.is_unit(a) {
            return Err(Error::DivisionByZero);
        }
        match self {
            LocalRing::GaloisRing { .. } => {
                let field = self.residue_field();
                let y0 = field.inv(&self.residue(a))?;
                let mut y = self.lift_naive(&y0);
                let one = self.one();
                for _ in 0..8 {
                    let e = self.mul(a, &y);
                    if e == one {
                        return Ok(y);
                    }
                    let two_minus = self.sub(&self.add(&one, &one), &e);
                    y = self.mul(&y, &two_minus);
                }
                debug_assert_eq!(self.mul(a, &y), one);
                Ok(y)
            }
            LocalRing::DualNumbers { field } => {
                let (a0, a1) = self.dual_parts(a);
                let i0 = field.inv(&a0)?;
                // (a0 + a1 eps)^-1 = a0^-1 - a0^-2 a1 eps
                let i1 = field.neg(&field.mul(&field.mul(&i0, &i0), &a1));
                Ok(self.dual_from_parts(&i0, &i1))
            }
        }
    }

    /// Reduction to the residue field.
    pub fn residue(&self, a: &RingElement) -> FieldElement {
        match self {
            LocalRing::GaloisRing { p, field, .. } => field.from_coeffs(
                &a.coeffs
                    .iter()
                    .map(|&c| (c % *p as u64) as u32)
                    .collect::<Vec<_>>(),
            ),
            LocalRing::DualNumbers { field } => {
                let (a0, _) = self.dual_parts(a);
                field.from_coeffs(&a0.coeffs)
            }
        }
    }

    /// Coefficientwise lift of a residue-field element (not Teichmuller
    /// in general).
    pub fn lift_naive(&self, a: &FieldElement) -> RingElement {
        match self {
            LocalRing::GaloisRing { d, .. } => {
                let mut c: Vec<u64> = a.coeffs.iter().map(|&x| x as u64).collect();
                c.resize(*d, 0);
                RingElement { coeffs: c }
            }
            LocalRing::DualNumbers { field } => {
                self.dual_from_parts(a, &field.zero())
            }
        }
    }

    /// The Teichmuller lift: the unique t with t^{p^d} = t and
    /// t = a mod p. Computed by iterating y -> y^{p^d}, which converges
    /// one p-adic level per step.
    pub fn teichmuller(&self, a: &FieldElement) -> RingElement {
        let q = self.residue_field().order();
        let mut t = self.lift_naive(a);
        for _ in 0..self.nilpotency_degree() + 1 {
            let next = self.pow(&t, q);
            if next == t {
                break;
            }
            t = next;
        }
        debug_assert_eq!(self.pow(&t, q), t);
        debug_assert_eq!(&self.residue(&t), a);
        t
    }

    fn dual_parts(&self, a: &RingElement) -> (FieldElement, FieldElement) {
        let field = self.residue_field();
        let d = field.degree();
        let c0: Vec<u32> = a.coeffs[..d].iter().map(|&x| x as u32).collect();
        let c1: Vec<u32> = a.coeffs[d..].iter().map(|&x| x as u32).collect();
        (field.from_coeffs(&c0), field.from_coeffs(&c1))
    }

    fn dual_from_parts(&self, a0: &FieldElement, a1: &FieldElement) -> RingElement {
        let mut c: Vec<u64> = a0.coeffs.iter().map(|&x| x as u64).collect();
        c.extend(a1.coeffs.iter().map(|&x| x as u64));
        RingElement { coeffs: c }
    }

    /// eps-part of a dual-number element.
    pub fn dual_eps_part(&self, a: &RingElement) -> FieldElement {
        self.dual_parts(a).1
    }

    /// Builds a + b eps in a dual-number ring.
    pub fn dual_element(&self, constant: &FieldElement, eps: &FieldElement) -> RingElement {
        self.dual_from_parts(constant, eps)
    }

    /// Teichmuller-digit expansion: x = sum teichmuller(a_i) p^i with
    /// a_i in the residue field, computed by peel-and-divide down the
    /// ring tower. Galois rings only.
    pub fn teichmuller_digits(&self, x: &RingElement) -> Vec<FieldElement> {
        let (p, m, d) = match self {
            LocalRing::GaloisRing { p, m, d, .. } => (*p, *m, *d),
            LocalRing::DualNumbers { .. } => panic!("digits are defined for Galois rings"),
        };
        let mut digits = Vec::with_capacity(m as usize);
        let mut ring = self.clone();
        let mut cur = x.clone();
        for level in (1..=m).rev() {
            let a = ring.residue(&cur);
            digits.push(a.clone());
            if level == 1 {
                break;
            }
            let t = ring.teichmuller(&a);
            let diff = ring.sub(&cur, &t);
            let next = LocalRing::galois_ring(p, level - 1, d).expect("smaller ring");
            let pm_next = next.digit_modulus();
            cur = RingElement {
                coeffs: diff
                    .coeffs
                    .iter()
                    .map(|&c| {
                        debug_assert_eq!(c % p as u64, 0);
                        (c / p as u64) % pm_next
                    })
                    .collect(),
            };
            ring = next;
        }
        digits
    }

    /// Digit-padding section GR(p^m, d) -> GR(p^{m+1}, d): re-sums the
    /// Teichmuller digits in the larger ring. Sends Teichmuller lifts
    /// to Teichmuller lifts and satisfies reduce . s = id.
    pub fn section_up(&self, x: &RingElement) -> Result<RingElement> {
        let (p, m, d) = match self {
            LocalRing::GaloisRing { p, m, d, .. } => (*p, *m, *d),
            LocalRing::DualNumbers { .. } => {
                return Err(Error::UnsupportedSize("section on a dual ring".into()))
            }
        };
        let up = LocalRing::galois_ring(p, m + 1, d)?;
        let digits = self.teichmuller_digits(x);
        let mut acc = up.zero();
        let mut scale = 1u64;
        for a in &digits {
            let t = up.teichmuller(a);
            acc = up.add(&acc, &up.mul_int(&t, scale));
            scale *= p as u64;
        }
        Ok(acc)
    }

    /// Reduction GR(p^m, d) -> GR(p^{m'}, d) for m' <= m.
    pub fn reduce_to(&self, x: &RingElement, target_m: u32) -> Result<(LocalRing, RingElement)> {
        let (p, m, d) = match self {
            LocalRing::GaloisRing { p, m, d, .. } => (*p, *m, *d),
            LocalRing::DualNumbers { .. } => {
                return Err(Error::UnsupportedSize("reduce on a dual ring".into()))
            }
        };
        if target_m > m {
            return Err(Error::UnsupportedSize("target level above source".into()));
        }
        let tgt = LocalRing::galois_ring(p, target_m, d)?;
        let q = tgt.digit_modulus();
        Ok((
            tgt,
            RingElement {
                coeffs: x.coeffs.iter().map(|&c| c % q).collect(),
            },
        ))
    }

    /// Generators of the maximal ideal.
    pub fn maximal_ideal_gens(&self) -> Vec<RingElement> {
        match self {
            LocalRing::GaloisRing { m, .. } => {
                if *m == 1 {
                    vec![]
                } else {
                    vec![self.mul_int(&self.one(), self.p() as u64)]
                }
            }
            LocalRing::DualNumbers { field } => {
                vec![self.dual_from_parts(&field.zero(), &field.one())]
            }
        }
    }

    /// Enumerates all ring elements, digit-lexicographic, zero first.
    pub fn enumerate(&self) -> Vec<RingElement> {
        let q = self.digit_modulus();
        let n = self.digit_count();
        let total: u64 = (0..n).fold(1u64, |acc, _| acc * q);
        (0..total)
            .map(|idx| {
                let mut c = Vec::with_capacity(n);
                let mut rest = idx;
                for _ in 0..n {
                    c.push(rest % q);
                    rest /= q;
                }
                RingElement { coeffs: c }
            })
            .collect()
    }
}

/// The subring of `ring` generated by the Teichmuller lifts of the
/// subfield k (embedded canonically into the residue field): additive
/// and multiplicative closure, returned in deterministic BFS order.
pub fn witt_subring(ring: &LocalRing, k: &FieldDescriptor) -> Result<Vec<RingElement>> {
    let emb = FieldEmbedding::new(k, ring.residue_field())?;
    let mut seeds: Vec<RingElement> = k
        .enumerate()
        .iter()
        .map(|a| ring.teichmuller(&emb.map(a)))
        .collect();
    seeds.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    seeds.dedup();
    let mut elems: Vec<RingElement> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut queue: Vec<RingElement> = Vec::new();
    for s in seeds {
        if seen.insert(s.coeffs.clone(), elems.len()).is_none() {
            elems.push(s.clone());
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        let snapshot: Vec<RingElement> = elems.clone();
        for other in &snapshot {
            for val in [ring.add(&cur, other), ring.mul(&cur, other)] {
                if seen.insert(val.coeffs.clone(), elems.len()).is_none() {
                    elems.push(val.clone());
                    queue.push(val);
                }
            }
        }
    }
    Ok(elems)
}

/// A surjection of supported Artinian local rings with
/// m_A . ker = 0; the kernel is a one-dimensional vector space over
/// the residue field, with a fixed F_p-basis.
#[derive(Clone, Debug)]
pub struct RingSurjection {
    pub source: LocalRing,
    pub target: LocalRing,
    kind: SurjKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SurjKind {
    /// GR(p^{m}, d) -> GR(p^{m-1}, d), kernel p^{m-1} GR = k.
    GrOneLevel,
    /// k[eps] -> k (as GR(p, 1, d)), kernel eps k.
    DualAugmentation,
    Identity,
}

impl RingSurjection {
    /// Reduction of GR(p^m, d) by one level (requires m >= 2 so that
    /// the kernel is killed by the maximal ideal).
    pub fn gr_one_level(p: u32, m: u32, d: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::UnsupportedSize("need m >= 2".into()));
        }
        Ok(RingSurjection {
            source: LocalRing::galois_ring(p, m, d)?,
            target: LocalRing::galois_ring(p, m - 1, d)?,
            kind: SurjKind::GrOneLevel,
        })
    }

    /// Augmentation k[eps] -> k.
    pub fn dual_augmentation(p: u32, d: usize) -> Result<Self> {
        Ok(RingSurjection {
            source: LocalRing::dual_numbers(p, d)?,
            target: LocalRing::galois_ring(p, 1, d)?,
            kind: SurjKind::DualAugmentation,
        })
    }

    pub fn identity(ring: &LocalRing) -> Self {
        RingSurjection {
            source: ring.clone(),
            target: ring.clone(),
            kind: SurjKind::Identity,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == SurjKind::Identity
    }

    pub fn map(&self, a: &RingElement) -> RingElement {
        match self.kind {
            SurjKind::GrOneLevel => {
                let q = self.target.digit_modulus();
                RingElement {
                    coeffs: a.coeffs.iter().map(|&c| c % q).collect(),
                }
            }
            SurjKind::DualAugmentation => {
                self.target.lift_naive(&self.source.residue(a))
            }
            SurjKind::Identity => a.clone(),
        }
    }

    /// Canonical multiplicative-friendly section target -> source:
    /// Teichmuller-digit padding for Galois rings, constant lift for
    /// the dual numbers. Satisfies map . section = id and
    /// section(0) = 0, section(1) = 1.
    pub fn section(&self, b: &RingElement) -> RingElement {
        match self.kind {
            SurjKind::GrOneLevel => self.target.section_up(b).expect("levels match"),
            SurjKind::DualAugmentation => {
                self.source.lift_naive(&self.target.residue(b))
            }
            SurjKind::Identity => b.clone(),
        }
    }

    /// F_p-basis of the kernel (digit basis of k, scaled into the
    /// kernel).
    pub fn kernel_basis(&self) -> Vec<RingElement> {
        let field = self.source.residue_field();
        match self.kind {
            SurjKind::GrOneLevel => {
                let scale = self.target.digit_modulus(); // p^{m-1}
                field
                    .power_basis()
                    .iter()
                    .map(|b| self.source.mul_int(&self.source.lift_naive(b), scale))
                    .collect()
            }
            SurjKind::DualAugmentation => field
                .power_basis()
                .iter()
                .map(|b| {
                    let z = field.zero();
                    self.source.dual_element(&z, b)
                })
                .collect(),
            SurjKind::Identity => vec![],
        }
    }

    /// Dimension of the kernel as an F_p-space.
    pub fn kernel_dim(&self) -> usize {
        match self.kind {
            SurjKind::Identity => 0,
            _ => self.source.residue_field().degree(),
        }
    }

    pub fn in_kernel(&self, a: &RingElement) -> bool {
        self.source.is_zero(a) || self.target.is_zero(&self.map(a))
    }

    /// Coordinates of a kernel element in the kernel basis; the kernel
    /// is identified with the residue field k digitwise.
    pub fn kernel_coords(&self, a: &RingElement) -> FpVec {
        let p = self.source.p();
        let d = self.source.residue_field().degree();
        debug_assert!(self.in_kernel(a));
        match self.kind {
            SurjKind::GrOneLevel => {
                let scale = self.target.digit_modulus();
                let vals: Vec<u32> = a.coeffs.iter().map(|&c| ((c / scale) % p as u64) as u32).collect();
                FpVec::from_entries(p, &vals)
            }
            SurjKind::DualAugmentation => {
                let eps = self.source.dual_eps_part(a);
                FpVec::from_entries(p, &eps.coeffs)
            }
            SurjKind::Identity => FpVec::zero(p, d),
        }
    }

    /// The kernel element with the given coordinates.
    pub fn kernel_from_coords(&self, v: &FpVec) -> RingElement {
        let mut acc = self.source.zero();
        for (i, b) in self.kernel_basis().iter().enumerate() {
            let c = v.get(i);
            if c != 0 {
                acc = self.source.add(&acc, &self.source.mul_int(b, c as u64));
            }
        }
        acc
    }

    /// The kernel element identified with a residue-field value.
    pub fn kernel_from_field(&self, a: &FieldElement) -> RingElement {
        let v = FpVec::from_entries(self.source.p(), &a.coeffs);
        self.kernel_from_coords(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr_descriptors() {
        let r = LocalRing::galois_ring(2, 2, 2).unwrap(); // GR(4,2)
        assert_eq!(r.enumerate().len(), 16);
        let z2 = LocalRing::galois_ring(2, 1, 1).unwrap();
        assert_eq!(z2.enumerate().len(), 2);
        let z9 = LocalRing::galois_ring(3, 2, 1).unwrap();
        assert_eq!(z9.enumerate().len(), 9);
        assert!(LocalRing::galois_ring(2, 21, 1).is_err());
    }

    #[test]
    fn gr42_x_cubed_is_one() {
        // In Z_4[x]/(x^2+x+1): x^3 = 1 by direct expansion.
        let r = LocalRing::galois_ring(2, 2, 2).unwrap();
        let x = RingElement { coeffs: vec![0, 1] };
        assert_eq!(r.pow(&x, 3), r.one());
    }

    #[test]
    fn teichmuller_examples() {
        let r = LocalRing::galois_ring(2, 2, 2).unwrap();
        let k = r.residue_field().clone();
        assert_eq!(r.teichmuller(&k.zero()), r.zero());
        assert_eq!(r.teichmuller(&k.one()), r.one());
        let w = k.gen_x();
        // The class of x is already Teichmuller in GR(4,2) since x^3 = 1.
        assert_eq!(r.teichmuller(&w), RingElement { coeffs: vec![0, 1] });

        // Z/9: the Teichmuller lift of 2 is found by exhaustive search
        // over all nine elements for t^3 = t, t = 2 mod 3.
        let z9 = LocalRing::galois_ring(3, 2, 1).unwrap();
        let f3 = z9.residue_field().clone();
        let two = f3.from_u32(2);
        let mut oracle = None;
        for t in z9.enumerate() {
            if z9.pow(&t, 3) == t && z9.residue(&t) == two {
                assert!(oracle.is_none(), "Teichmuller lift must be unique");
                oracle = Some(t);
            }
        }
        assert_eq!(oracle, Some(RingElement { coeffs: vec![8] }));
        assert_eq!(z9.teichmuller(&two), RingElement { coeffs: vec![8] });
    }

    #[test]
    fn teichmuller_multiplicative_and_fixed() {
        for ring in [
            LocalRing::galois_ring(2, 2, 2).unwrap(),
            LocalRing::galois_ring(3, 2, 1).unwrap(),
            LocalRing::galois_ring(2, 3, 2).unwrap(),
            LocalRing::dual_numbers(5, 1).unwrap(),
        ] {
            let k = ring.residue_field().clone();
            let q = k.order();
            for a in k.enumerate() {
                let ta = ring.teichmuller(&a);
                assert_eq!(ring.pow(&ta, q), ta);
                for b in k.enumerate() {
                    let tb = ring.teichmuller(&b);
                    assert_eq!(ring.mul(&ta, &tb), ring.teichmuller(&k.mul(&a, &b)));
                }
            }
        }
    }

    #[test]
    fn digits_z9() {
        let z9 = LocalRing::galois_ring(3, 2, 1).unwrap();
        let f3 = z9.residue_field().clone();
        // Peel-and-divide: 5 = t(2) + 3 t(2) since t(2) = 8 and
        // 8 + 3*8 = 32 = 5 mod 9 (re-summing oracle).
        let five = RingElement { coeffs: vec![5] };
        let digits = z9.teichmuller_digits(&five);
        assert_eq!(digits, vec![f3.from_u32(2), f3.from_u32(2)]);
        let mut acc = z9.zero();
        let mut scale = 1;
        for a in &digits {
            acc = z9.add(&acc, &z9.mul_int(&z9.teichmuller(a), scale));
            scale *= 3;
        }
        assert_eq!(acc, five);
    }

    #[test]
    fn digit_roundtrip_exhaustive() {
        for ring in [
            LocalRing::galois_ring(2, 2, 2).unwrap(),
            LocalRing::galois_ring(3, 2, 1).unwrap(),
            LocalRing::galois_ring(2, 3, 2).unwrap(),
            LocalRing::galois_ring(5, 2, 1).unwrap(),
        ] {
            let p = ring.p() as u64;
            for x in ring.enumerate() {
                let digits = ring.teichmuller_digits(&x);
                let mut acc = ring.zero();
                let mut scale = 1u64;
                for a in &digits {
                    acc = ring.add(&acc, &ring.mul_int(&ring.teichmuller(a), scale));
                    scale *= p;
                }
                assert_eq!(acc, x);
                // digits of a Teichmuller lift are (a, 0, ..., 0)
            }
            let k = ring.residue_field().clone();
            for a in k.enumerate() {
                let digits = ring.teichmuller_digits(&ring.teichmuller(&a));
                assert_eq!(digits[0], a);
                assert!(digits[1..].iter().all(|d| d.is_zero()));
            }
        }
    }

    #[test]
    fn section_examples() {
        let z3 = LocalRing::galois_ring(3, 1, 1).unwrap();
        let s2 = z3.section_up(&RingElement { coeffs: vec![2] }).unwrap();
        assert_eq!(s2, RingElement { coeffs: vec![8] });
        assert_eq!(z3.section_up(&z3.zero()).unwrap().coeffs, vec![0]);
        assert_eq!(z3.section_up(&z3.one()).unwrap().coeffs, vec![1]);

        // GR(4,2) -> GR(8,2): the section of the class of x is the
        // Teichmuller element over omega.
        let r = LocalRing::galois_ring(2, 2, 2).unwrap();
        let up = LocalRing::galois_ring(2, 3, 2).unwrap();
        let x = RingElement { coeffs: vec![0, 1] };
        let w = r.residue(&x);
        assert_eq!(r.section_up(&x).unwrap(), up.teichmuller(&w));
    }

    #[test]
    fn section_properties_exhaustive() {
        for ring in [
            LocalRing::galois_ring(2, 2, 2).unwrap(),
            LocalRing::galois_ring(3, 2, 1).unwrap(),
        ] {
            let surj = match &ring {
                LocalRing::GaloisRing { p, m, d, .. } => {
                    RingSurjection::gr_one_level(*p, m + 1, *d).unwrap()
                }
                _ => unreachable!(),
            };
            let mut additive = true;
            for x in ring.enumerate() {
                let s = ring.section_up(&x).unwrap();
                assert_eq!(surj.map(&s), x); // reduce . s = id
                for y in ring.enumerate() {
                    let sx_plus_sy = surj.source.add(&s, &ring.section_up(&y).unwrap());
                    if sx_plus_sy != ring.section_up(&ring.add(&x, &y)).unwrap() {
                        additive = false;
                    }
                }
            }
            // s is a section but not additive in general.
            assert!(!additive);
        }
    }

    #[test]
    fn witt_subring_examples() {
        let gr42 = LocalRing::galois_ring(2, 2, 2).unwrap();
        let f4 = gr42.residue_field().clone();
        assert_eq!(witt_subring(&gr42, &f4).unwrap().len(), 16);

        let dual = LocalRing::dual_numbers(2, 2).unwrap();
        let sub = witt_subring(&dual, &f4).unwrap();
        assert_eq!(sub.len(), 4);
        for e in &sub {
            assert!(dual.dual_eps_part(e).is_zero());
        }

        let z9 = LocalRing::galois_ring(3, 2, 1).unwrap();
        let f3 = FieldDescriptor::new(3, 1).unwrap();
        assert_eq!(witt_subring(&z9, &f3).unwrap().len(), 9);
    }

    #[test]
    fn surjection_validity() {
        for surj in [
            RingSurjection::gr_one_level(2, 2, 2).unwrap(),
            RingSurjection::gr_one_level(3, 2, 1).unwrap(),
            RingSurjection::dual_augmentation(2, 2).unwrap(),
            RingSurjection::dual_augmentation(5, 1).unwrap(),
        ] {
            let a_ring = surj.source.clone();
            // homomorphism by exhaustion on small rings
            let elems = a_ring.enumerate();
            for a in &elems {
                for b in &elems {
                    assert_eq!(surj.map(&a_ring.add(a, b)), surj.target.add(&surj.map(a), &surj.map(b)));
                    assert_eq!(surj.map(&a_ring.mul(a, b)), surj.target.mul(&surj.map(a), &surj.map(b)));
                }
            }
            // m_A . ker = 0
            for g in a_ring.maximal_ideal_gens() {
                for kb in surj.kernel_basis() {
                    assert!(a_ring.is_zero(&a_ring.mul(&g, &kb)));
                }
            }
            // kernel coordinates round-trip
            for kb in surj.kernel_basis() {
                let coords = surj.kernel_coords(&kb);
                assert_eq!(surj.kernel_from_coords(&coords), kb);
            }
            // section is a section fixing 0 and 1
            for b in surj.target.enumerate() {
                assert_eq!(surj.map(&surj.section(&b)), b);
            }
            assert_eq!(surj.section(&surj.target.zero()), surj.source.zero());
            assert_eq!(surj.section(&surj.target.one()), surj.source.one());
        }
    }

    #[test]
    fn inverse_of_units() {
        for ring in [
            LocalRing::galois_ring(2, 2, 2).unwrap(),
            LocalRing::galois_ring(3, 2, 1).unwrap(),
            LocalRing::dual_numbers(2, 2).unwrap(),
            LocalRing::dual_numbers(5, 1).unwrap(),
        ] {
            for a in ring.enumerate() {
                if ring.is_unit(&a) {
                    let inv = ring.inv(&a).unwrap();
                    assert_eq!(ring.mul(&a, &inv), ring.one());
                } else {
                    assert!(ring.inv(&a).is_err());
                }
            }
        }
    }
}
