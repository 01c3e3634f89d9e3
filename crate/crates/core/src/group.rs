//! Enumerated finite groups with a generator set and a multiplication
//! oracle. Three element backends share one engine: matrix groups over
//! a finite local ring, cocycle-twisted products (module, base-group)
//! pairs, and quotient groups by coset labels. Elements are discovered
//! by BFS from the generators; the traversal tree (every non-identity
//! element is an earlier element times a generator) is retained because
//! the cohomology solvers recurse along it.

use crate::error::{Error, Result};
use crate::finite_field::{FieldDescriptor, FieldEmbedding};
use crate::fp::{Eliminator, FpMat, FpVec};
use crate::galois_ring::{LocalRing, RingSurjection};
use crate::matrix::RingMatrix;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

pub const CLOSURE_CAP: usize = 1 << 20;
/// Groups up to this order get a cached multiplication table.
const TABLE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElem {
    Mat(RingMatrix),
    /// Element (v, g) of a twisted product; v is an F_p coordinate
    /// vector, g an index into the base group.
    Pair { v: Vec<u32>, g: usize },
    /// Coset of a quotient group, labelled by the least parent-group
    /// element index it contains.
    Label(usize),
}

impl GroupElem {
    pub fn key(&self) -> Vec<u64> {
        match self {
            GroupElem::Mat(m) => m.key(),
            GroupElem::Pair { v, g } => {
                let mut k = Vec::with_capacity(v.len() + 1);
                k.push(*g as u64);
                k.extend(v.iter().map(|&c| c as u64));
                k
            }
            GroupElem::Label(i) => vec![*i as u64],
        }
    }

    pub fn as_matrix(&self) -> &RingMatrix {
        match self {
            GroupElem::Mat(m) => m,
            _ => panic!("not a matrix element"),
        }
    }
}

#[derive(Clone)]
pub enum Backend {
    Matrix {
        ring: LocalRing,
        n: usize,
    },
    Twisted {
        base: Arc<FiniteGroup>,
        p: u32,
        dim: usize,
        /// Action matrix of each base element on the module.
        act: Arc<Vec<FpMat>>,
        /// Normalized 2-cocycle table, indexed g1 * |base| + g2.
        x: Arc<Vec<FpVec>>,
    },
    Quotient {
        parent: Arc<FiniteGroup>,
        /// Coset label (least member index) of each parent element.
        coset_of: Arc<Vec<usize>>,
    },
}

impl Backend {
    pub fn identity_elem(&self) -> GroupElem {
        match self {
            Backend::Matrix { ring, n } => GroupElem::Mat(RingMatrix::identity(ring, *n)),
            Backend::Twisted { p, dim, .. } => GroupElem::Pair {
                v: FpVec::zero(*p, *dim).entries(),
                g: 0,
            },
            Backend::Quotient { coset_of, .. } => GroupElem::Label(coset_of[0]),
        }
    }

    pub fn mul_elems(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (self, a, b) {
            (Backend::Matrix { ring, .. }, GroupElem::Mat(x), GroupElem::Mat(y)) => {
                GroupElem::Mat(x.mul(ring, y))
            }
            (
                Backend::Twisted { base, p, dim, act, x },
                GroupElem::Pair { v: v1, g: g1 },
                GroupElem::Pair { v: v2, g: g2 },
            ) => {
                let nb = base.order();
                let mut v = x[g1 * nb + g2].clone();
                let w1 = FpVec::from_entries(*p, v1);
                let w2 = FpVec::from_entries(*p, v2);
                v.add_assign(&w1);
                v.add_assign(&act[*g1].apply(&w2));
                debug_assert_eq!(v.len(), *dim);
                GroupElem::Pair {
                    v: v.entries(),
                    g: base.mult(*g1, *g2),
                }
            }
            (
                Backend::Quotient { parent, coset_of },
                GroupElem::Label(i),
                GroupElem::Label(j),
            ) => GroupElem::Label(coset_of[parent.mult(*i, *j)]),
            _ => panic!("element does not match backend"),
        }
    }

    pub fn inv_elem(&self, a: &GroupElem) -> GroupElem {
        match (self, a) {
            (Backend::Matrix { ring, .. }, GroupElem::Mat(x)) => {
                GroupElem::Mat(x.inverse(ring).expect("group element invertible"))
            }
            (Backend::Twisted { base, p, act, x, .. }, GroupElem::Pair { v, g }) => {
                let nb = base.order();
                let gi = base.inverse(*g);
                // (v,g)^{-1} = (act(g^{-1})(-x(g,g^{-1}) - v), g^{-1})
                let mut w = x[*g * nb + gi].clone();
                w.add_assign(&FpVec::from_entries(*p, v));
                w.neg();
                GroupElem::Pair {
                    v: act[gi].apply(&w).entries(),
                    g: gi,
                }
            }
            (Backend::Quotient { parent, coset_of }, GroupElem::Label(i)) => {
                GroupElem::Label(coset_of[parent.inverse(*i)])
            }
            _ => panic!("element does not match backend"),
        }
    }
}

pub struct FiniteGroup {
    pub backend: Backend,
    elems: Vec<GroupElem>,
    index: HashMap<Vec<u64>, usize>,
    gens: Vec<usize>,
    /// For non-identity element i: (j, t) with elems[i] =
    /// elems[j] * elems[gens[t]], j discovered before i.
    parent: Vec<Option<(usize, usize)>>,
    inv_table: OnceLock<Vec<usize>>,
    mult_table: OnceLock<Option<Vec<u32>>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {}, {} gens)", self.order(), self.gens.len())
    }
}

impl FiniteGroup {
    /// BFS closure of the generators; deterministic element order
    /// (identity first, then discovery order).
    pub fn closure(backend: Backend, gen_elems: &[GroupElem], cap: usize) -> Result<Self> {
        let mut elems: Vec<GroupElem> = Vec::new();
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
        let id = backend.identity_elem();
        index.insert(id.key(), 0);
        elems.push(id);
        parent.push(None);
        let mut gens: Vec<usize> = Vec::new();
        let mut gen_list: Vec<GroupElem> = Vec::new();
        for g in gen_elems {
            let key = g.key();
            let next = elems.len();
            let idx = *index.entry(key).or_insert_with(|| {
                elems.push(g.clone());
                next
            });
            if idx == next {
                parent.push(Some((0, gens.len())));
            }
            if idx != 0 && !gens.contains(&idx) {
                gens.push(idx);
                gen_list.push(g.clone());
            }
        }
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            for (t, g) in gen_list.iter().enumerate() {
                let prod = backend.mul_elems(&cur, g);
                let key = prod.key();
                if !index.contains_key(&key) {
                    if elems.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    index.insert(key, elems.len());
                    elems.push(prod);
                    parent.push(Some((head, t)));
                }
            }
            head += 1;
        }
        Ok(FiniteGroup {
            backend,
            elems,
            index,
            gens,
            parent,
            inv_table: OnceLock::new(),
            mult_table: OnceLock::new(),
        })
    }

    pub fn matrix_group(ring: &LocalRing, n: usize, gens: &[RingMatrix], cap: usize) -> Result<Self> {
        let gen_elems: Vec<GroupElem> = gens.iter().map(|m| GroupElem::Mat(m.clone())).collect();
        Self::closure(Backend::Matrix { ring: ring.clone(), n }, &gen_elems, cap)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elem(&self, i: usize) -> &GroupElem {
        &self.elems[i]
    }

    pub fn matrix(&self, i: usize) -> &RingMatrix {
        self.elems[i].as_matrix()
    }

    pub fn gen_indices(&self) -> &[usize] {
        &self.gens
    }

    pub fn bfs_parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    pub fn index_of(&self, e: &GroupElem) -> Option<usize> {
        self.index.get(&e.key()).copied()
    }

    pub fn index_of_key(&self, key: &[u64]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn contains_matrix(&self, m: &RingMatrix) -> bool {
        self.index.contains_key(&m.key())
    }

    fn table(&self) -> Option<&Vec<u32>> {
        self.mult_table
            .get_or_init(|| {
                let n = self.order();
                if n > TABLE_LIMIT {
                    return None;
                }
                let mut t = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let prod = self.backend.mul_elems(&self.elems[i], &self.elems[j]);
                        t[i * n + j] = self.index[&prod.key()] as u32;
                    }
                }
                Some(t)
            })
            .as_ref()
    }

    pub fn mult(&self, i: usize, j: usize) -> usize {
        if let Some(t) = self.table() {
            return t[i * self.order() + j] as usize;
        }
        let prod = self.backend.mul_elems(&self.elems[i], &self.elems[j]);
        self.index[&prod.key()]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv_table.get_or_init(|| {
            (0..self.order())
                .map(|j| {
                    let inv = self.backend.inv_elem(&self.elems[j]);
                    self.index[&inv.key()]
                })
                .collect()
        })[i]
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mult(self.mult(g, h), self.inverse(g))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut n = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.mult(cur, i);
            n += 1;
        }
        n
    }

    /// Subgroup generated by a subset (greedy small generating set:
    /// scan the subset in order, adjoin anything not yet generated).
    pub fn subgroup(self: &Arc<Self>, subset: &[usize]) -> Result<SubgroupView> {
        let mut gens: Vec<usize> = Vec::new();
        let mut members: Vec<bool> = vec![false; self.order()];
        members[0] = true;
        let mut size = 1usize;
        for &i in subset {
            if members[i] {
                continue;
            }
            gens.push(i);
            // Re-close with the enlarged generating set.
            members = vec![false; self.order()];
            members[0] = true;
            size = 1;
            let mut queue = vec![0usize];
            let mut head = 0;
            while head < queue.len() {
                let cur = queue[head];
                head += 1;
                for &g in &gens {
                    let next = self.mult(cur, g);
                    if !members[next] {
                        members[next] = true;
                        size += 1;
                        queue.push(next);
                    }
                }
            }
        }
        Ok(SubgroupView {
            parent: Arc::clone(self),
            gens,
            members,
            size,
        })
    }

    /// Subgroup as a standalone FiniteGroup (same backend), generated
    /// by the given element indices.
    pub fn subgroup_group(&self, gens: &[usize], cap: usize) -> Result<FiniteGroup> {
        let gen_elems: Vec<GroupElem> = gens.iter().map(|&i| self.elems[i].clone()).collect();
        FiniteGroup::closure(self.backend.clone(), &gen_elems, cap)
    }

    /// Quotient by a normal subgroup given as a member mask, as a
    /// label-backed FiniteGroup together with the projection.
    pub fn quotient(self: &Arc<Self>, normal: &[usize]) -> Result<(Arc<FiniteGroup>, GroupHom)> {
        let n = self.order();
        let mut in_n = vec![false; n];
        for &i in normal {
            in_n[i] = true;
        }
        if !in_n[0] {
            return Err(Error::NotClosed("normal subgroup lacks identity".into()));
        }
        // closure and normality checks
        for &a in normal {
            for &b in normal {
                if !in_n[self.mult(a, b)] {
                    return Err(Error::NotClosed("subgroup not closed".into()));
                }
            }
        }
        for &g in &self.gens {
            for &a in normal {
                if !in_n[self.conjugate(g, a)] {
                    return Err(Error::NotClosed("subgroup not normal".into()));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; n];
        for i in 0..n {
            if coset_of[i] != usize::MAX {
                continue;
            }
            // coset i*N; label = least member index
            let members: Vec<usize> = normal.iter().map(|&a| self.mult(i, a)).collect();
            let label = *members.iter().min().unwrap();
            for &m in &members {
                coset_of[m] = label;
            }
        }
        let backend = Backend::Quotient {
            parent: Arc::clone(self),
            coset_of: Arc::new(coset_of.clone()),
        };
        let gen_elems: Vec<GroupElem> = self
            .gens
            .iter()
            .map(|&g| GroupElem::Label(coset_of[g]))
            .collect();
        let q = Arc::new(FiniteGroup::closure(backend, &gen_elems, n)?);
        debug_assert_eq!(q.order() * normal.len(), n);
        let map: Vec<usize> = (0..n)
            .map(|i| q.index_of(&GroupElem::Label(coset_of[i])).unwrap())
            .collect();
        let hom = GroupHom {
            source: Arc::clone(self),
            target: Arc::clone(&q),
            map,
        };
        Ok((q, hom))
    }

    /// Deterministic Sylow p-subgroup: start from the first p-element
    /// and climb normalizers, adjoining p-power elements of N_G(P),
    /// until the full p-part of |G| is reached.
    pub fn sylow(self: &Arc<Self>, p: u32) -> Result<SubgroupView> {
        let n = self.order();
        let mut p_part = 1usize;
        let mut rest = n;
        while rest % p as usize == 0 {
            rest /= p as usize;
            p_part *= p as usize;
        }
        let mut current = self.subgroup(&[])?;
        let mut member_list: Vec<usize> = current.member_indices();
        while current.size < p_part {
            let normalizer: Vec<usize> = (0..n)
                .filter(|&g| member_list.iter().all(|&i| current.members[self.conjugate(g, i)]))
                .collect();
            let mut extended = false;
            for &g in &normalizer {
                if current.members[g] {
                    continue;
                }
                let t = self.element_order(g);
                let mut r = t;
                while r % p as usize == 0 {
                    r /= p as usize;
                }
                // h = g^r has p-power order; <P, h> is a p-group since
                // P is normal in the normalizer.
                let mut h = 0usize;
                for _ in 0..r {
                    h = self.mult(h, g);
                }
                if h != 0 && !current.members[h] {
                    let mut gens = current.gens.clone();
                    gens.push(h);
                    current = self.subgroup(&gens)?;
                    member_list = current.member_indices();
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Err(Error::NotClosed("sylow climb stalled".into()));
            }
        }
        Ok(current)
    }
}

/// A subgroup of an enumerated group, kept as a member mask on the
/// parent's indices plus a small generating set.
#[derive(Clone)]
pub struct SubgroupView {
    pub parent: Arc<FiniteGroup>,
    pub gens: Vec<usize>,
    pub members: Vec<bool>,
    pub size: usize,
}

impl SubgroupView {
    pub fn member_indices(&self) -> Vec<usize> {
        (0..self.parent.order()).filter(|&i| self.members[i]).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    /// The subgroup as a standalone group with the same backend.
    pub fn as_group(&self) -> Result<FiniteGroup> {
        self.parent.subgroup_group(&self.gens, self.parent.order())
    }
}

/// A homomorphism between enumerated groups, stored as the full image
/// index map.
#[derive(Clone)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn kernel_indices(&self) -> Vec<usize> {
        (0..self.source.order()).filter(|&i| self.map[i] == 0).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &m in &self.map {
            hit[m] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Homomorphism property on all generator pairs.
    pub fn check(&self) -> bool {
        if self.map[0] != 0 {
            return false;
        }
        for &a in self.source.gen_indices() {
            for b in 0..self.source.order() {
                if self.map[self.source.mult(a, b)]
                    != self.target.mult(self.map[a], self.map[b])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Generators of SL_n over the given ring restricted to the Teichmuller
/// subring of k: all transvections I + t e_ij with t ranging over
/// Teichmuller lifts of an F_p-basis of k.
pub fn sl_generators(ring: &LocalRing, n: usize, k: &FieldDescriptor) -> Result<Vec<RingMatrix>> {
    let emb = FieldEmbedding::new(k, ring.residue_field())?;
    let mut gens = Vec::new();
    for b in k.power_basis() {
        let t = ring.teichmuller(&emb.map(&b));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    gens.push(RingMatrix::transvection(ring, n, i, j, &t));
                }
            }
        }
    }
    Ok(gens)
}

/// SL_n over the full ring (k = the residue field).  For Galois rings
/// the Teichmuller transvections already generate everything; over the
/// dual numbers the subring they generate is only the constants, so
/// eps-multiples of the transvection entries are appended.
pub fn sl_group(ring: &LocalRing, n: usize, cap: usize) -> Result<Arc<FiniteGroup>> {
    let mut gens = sl_generators(ring, n, ring.residue_field())?;
    if let LocalRing::DualNumbers { .. } = ring {
        let k = ring.residue_field().clone();
        for b in k.power_basis() {
            let eb = ring.dual_element(&k.zero(), &b);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        gens.push(RingMatrix::transvection(ring, n, i, j, &eb));
                    }
                }
            }
        }
    }
    Ok(Arc::new(FiniteGroup::matrix_group(ring, n, &gens, cap)?))
}

/// Entrywise application of a ring surjection to a matrix group:
/// returns the enumerated image group and the induced homomorphism.
pub fn induced_hom(
    g: &Arc<FiniteGroup>,
    surj: &RingSurjection,
) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    let n = match &g.backend {
        Backend::Matrix { n, .. } => *n,
        _ => return Err(Error::NotClosed("induced_hom needs a matrix group".into())),
    };
    let push = |m: &RingMatrix| m.map_entries(|e| surj.map(e));
    let image_gens: Vec<RingMatrix> = g
        .gen_indices()
        .iter()
        .map(|&i| push(g.matrix(i)))
        .collect();
    let target = Arc::new(FiniteGroup::matrix_group(
        &surj.target,
        n,
        &image_gens,
        g.order(),
    )?);
    let map: Vec<usize> = (0..g.order())
        .map(|i| {
            target
                .index_of(&GroupElem::Mat(push(g.matrix(i))))
                .expect("image closed under products")
        })
        .collect();
    let hom = GroupHom {
        source: Arc::clone(g),
        target: Arc::clone(&target),
        map,
    };
    Ok((target, hom))
}

/// The F_p-subspace {v : I + v in H, pi(I + v) = I} of matrices over
/// ker(pi), in flat entry-digit coordinates (dimension n^2 * d).
/// Returns (basis, all member vectors). Errors with NotClosed if the
/// extracted set is not closed under addition.
pub fn kernel_module_vectors(
    h: &FiniteGroup,
    surj: &RingSurjection,
) -> Result<(Vec<FpVec>, Vec<FpVec>)> {
    let (ring, n) = match &h.backend {
        Backend::Matrix { ring, n } => (ring.clone(), *n),
        _ => return Err(Error::NotClosed("kernel extraction needs a matrix group".into())),
    };
    let p = ring.p();
    let d = ring.residue_field().degree();
    let dim = n * n * d;
    let id = RingMatrix::identity(&ring, n);
    let mut vectors: Vec<FpVec> = Vec::new();
    for i in 0..h.order() {
        let m = h.matrix(i);
        let diff = m.sub(&ring, &id);
        if diff.entries.iter().all(|e| surj.in_kernel(e)) {
            let mut v = FpVec::zero(p, dim);
            for (idx, e) in diff.entries.iter().enumerate() {
                let coords = surj.kernel_coords(e);
                for t in 0..d {
                    v.set(idx * d + t, coords.get(t));
                }
            }
            vectors.push(v);
        }
    }
    // Subspace closure check by exhaustion.
    let keyset: std::collections::HashSet<Vec<u32>> =
        vectors.iter().map(|v| v.entries()).collect();
    for a in &vectors {
        for b in &vectors {
            let mut s = a.clone();
            s.add_assign(b);
            if !keyset.contains(&s.entries()) {
                return Err(Error::NotClosed("kernel vectors not closed under addition".into()));
            }
        }
    }
    let mut elim = Eliminator::new(p, dim);
    for v in &vectors {
        elim.insert(v.clone());
    }
    let basis: Vec<FpVec> = elim.row_basis();
    debug_assert_eq!((p as usize).pow(basis.len() as u32), vectors.len());
    Ok((basis, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sl2_field_order(q: usize) -> usize {
        q * (q * q - 1)
    }

    #[test]
    fn sl2_orders_match_formula() {
        // |SL_2(GR(p^m,d))| = |SL_2(GF(p^d))| * p^{3d(m-1)}
        let cases = [
            (2u32, 1u32, 1usize, sl2_field_order(2)),            // 6
            (2, 1, 2, sl2_field_order(4)),                       // 60
            (3, 1, 1, sl2_field_order(3)),                       // 24
            (2, 2, 1, sl2_field_order(2) * 8),                   // 48
            (3, 2, 1, sl2_field_order(3) * 27),                  // 648
            (2, 2, 2, sl2_field_order(4) * 64),                  // 3840
        ];
        for (p, m, d, expected) in cases {
            let ring = LocalRing::galois_ring(p, m, d).unwrap();
            let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
            assert_eq!(g.order(), expected, "SL_2(GR({}^{},{}))", p, m, d);
        }
    }

    #[test]
    fn closure_independent_of_generator_order() {
        let ring = LocalRing::galois_ring(2, 1, 2).unwrap();
        let mut gens = sl_generators(&ring, 2, ring.residue_field()).unwrap();
        let g1 = FiniteGroup::matrix_group(&ring, 2, &gens, CLOSURE_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            gens.shuffle(&mut rng);
            let g2 = FiniteGroup::matrix_group(&ring, 2, &gens, CLOSURE_CAP).unwrap();
            assert_eq!(g1.order(), g2.order());
            for i in 0..g2.order() {
                assert!(g1.contains_matrix(g2.matrix(i)));
            }
        }
    }

    #[test]
    fn inverses_and_associativity() {
        let ring = LocalRing::galois_ring(3, 1, 1).unwrap();
        let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), 24);
        for i in 0..g.order() {
            assert_eq!(g.mult(i, g.inverse(i)), 0);
            assert_eq!(g.mult(g.inverse(i), i), 0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..500 {
            let (a, b, c) = (
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
            );
            assert_eq!(g.mult(g.mult(a, b), c), g.mult(a, g.mult(b, c)));
        }
    }

    #[test]
    fn reduction_hom_and_kernel() {
        let ring = LocalRing::galois_ring(2, 2, 2).unwrap();
        let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
        let surj = RingSurjection::gr_one_level(2, 2, 2).unwrap();
        let (image, hom) = induced_hom(&g, &surj).unwrap();
        assert_eq!(image.order(), 60);
        assert!(hom.is_surjective());
        assert!(hom.check());
        assert_eq!(hom.kernel_indices().len(), 64);
        let (basis, vectors) = kernel_module_vectors(&g, &surj).unwrap();
        assert_eq!(vectors.len(), 64);
        assert_eq!(basis.len(), 6); // trace-zero 2x2 over F_4, F_2-dim 6
    }

    #[test]
    fn quotient_by_center() {
        // SL_2(Z/9) has center {I, -I}; the quotient has order 324.
        let ring = LocalRing::galois_ring(3, 2, 1).unwrap();
        let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
        let minus_i = RingMatrix::identity(&ring, 2).scalar_mul_int(&ring, 8);
        let z = vec![0, g.index_of(&GroupElem::Mat(minus_i)).unwrap()];
        let (q, hom) = g.quotient(&z).unwrap();
        assert_eq!(q.order(), 324);
        assert!(hom.check());
        assert!(hom.is_surjective());
    }

    #[test]
    fn sylow_subgroups() {
        let cases = [
            (2u32, 1u32, 1usize, 2u32, 2usize),  // SL_2(F_2): order 6, Sylow-2 = 2
            (2, 1, 2, 2, 4),                     // SL_2(F_4): order 60, Sylow-2 = 4
            (3, 1, 1, 3, 3),                     // SL_2(F_3): order 24, Sylow-3 = 3
            (3, 2, 1, 3, 81),                    // SL_2(Z/9): order 648, Sylow-3 = 81
            (5, 1, 1, 5, 5),                     // SL_2(F_5): order 120, Sylow-5 = 5
        ];
        for (p, m, d, sp, expected) in cases {
            let ring = LocalRing::galois_ring(p, m, d).unwrap();
            let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
            let syl = g.sylow(sp).unwrap();
            assert_eq!(syl.size, expected);
            // p-group check
            for i in syl.member_indices() {
                let o = g.element_order(i);
                assert!(o == 1 || o % sp as usize == 0);
                let mut o = o;
                while o % sp as usize == 0 {
                    o /= sp as usize;
                }
                assert_eq!(o, 1);
            }
        }
    }

    #[test]
    fn subgroup_greedy_generators() {
        let ring = LocalRing::galois_ring(2, 1, 2).unwrap();
        let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
        let all: Vec<usize> = (0..g.order()).collect();
        let sub = g.subgroup(&all).unwrap();
        assert_eq!(sub.size, 60);
        assert!(sub.gens.len() <= 4);
        let as_grp = sub.as_group().unwrap();
        assert_eq!(as_grp.order(), 60);
    }

    #[test]
    fn element_orders() {
        let ring = LocalRing::galois_ring(2, 1, 2).unwrap();
        let g = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
        // SL_2(F_4) = A_5 has elements of order 1,2,3,5 only.
        let mut seen = std::collections::HashSet::new();
        for i in 0..g.order() {
            seen.insert(g.element_order(i));
        }
        let mut orders: Vec<usize> = seen.into_iter().collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 3, 5]);
    }
}
