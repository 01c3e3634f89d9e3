//! Exact linear algebra over prime fields F_p.
//!
//! Vectors carry their own storage: bit-packed words for p = 2, dense
//! `u32` entries otherwise. All elimination maintains reduced row
//! echelon form incrementally with the lowest-index pivot winning, so
//! results are deterministic regardless of insertion batching.

/// A vector over F_p.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FpVec {
    Bits { len: usize, words: Vec<u64> },
    Dense { p: u32, vals: Vec<u32> },
}

impl FpVec {
    pub fn zero(p: u32, len: usize) -> Self {
        if p == 2 {
            FpVec::Bits {
                len,
                words: vec![0u64; len.div_ceil(64)],
            }
        } else {
            FpVec::Dense {
                p,
                vals: vec![0u32; len],
            }
        }
    }

    pub fn from_entries(p: u32, entries: &[u32]) -> Self {
        let mut v = FpVec::zero(p, entries.len());
        for (i, &e) in entries.iter().enumerate() {
            v.set(i, e % p);
        }
        v
    }

    pub fn p(&self) -> u32 {
        match self {
            FpVec::Bits { .. } => 2,
            FpVec::Dense { p, .. } => *p,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FpVec::Bits { len, .. } => *len,
            FpVec::Dense { vals, .. } => vals.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> u32 {
        match self {
            FpVec::Bits { words, .. } => ((words[i / 64] >> (i % 64)) & 1) as u32,
            FpVec::Dense { vals, .. } => vals[i],
        }
    }

    pub fn set(&mut self, i: usize, v: u32) {
        match self {
            FpVec::Bits { words, .. } => {
                if v & 1 == 1 {
                    words[i / 64] |= 1 << (i % 64);
                } else {
                    words[i / 64] &= !(1 << (i % 64));
                }
            }
            FpVec::Dense { p, vals } => vals[i] = v % *p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FpVec::Bits { words, .. } => words.iter().all(|&w| w == 0),
            FpVec::Dense { vals, .. } => vals.iter().all(|&v| v == 0),
        }
    }

    pub fn add_assign(&mut self, other: &FpVec) {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: ow, .. }) => {
                for (a, b) in words.iter_mut().zip(ow) {
                    *a ^= b;
                }
            }
            (FpVec::Dense { p, vals }, FpVec::Dense { vals: ov, .. }) => {
                for (a, b) in vals.iter_mut().zip(ov) {
                    *a = (*a + b) % *p;
                }
            }
            _ => panic!("mixed FpVec storage"),
        }
    }

    pub fn sub_assign(&mut self, other: &FpVec) {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: ow, .. }) => {
                for (a, b) in words.iter_mut().zip(ow) {
                    *a ^= b;
                }
            }
            (FpVec::Dense { p, vals }, FpVec::Dense { vals: ov, .. }) => {
                for (a, b) in vals.iter_mut().zip(ov) {
                    *a = (*a + *p - b) % *p;
                }
            }
            _ => panic!("mixed FpVec storage"),
        }
    }

    /// self += c * other.
    pub fn axpy(&mut self, c: u32, other: &FpVec) {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: ow, .. }) => {
                if c & 1 == 1 {
                    for (a, b) in words.iter_mut().zip(ow) {
                        *a ^= b;
                    }
                }
            }
            (FpVec::Dense { p, vals }, FpVec::Dense { vals: ov, .. }) => {
                let c = c % *p;
                if c != 0 {
                    let pp = *p as u64;
                    for (a, b) in vals.iter_mut().zip(ov) {
                        *a = ((*a as u64 + c as u64 * *b as u64) % pp) as u32;
                    }
                }
            }
            _ => panic!("mixed FpVec storage"),
        }
    }

    pub fn scale(&mut self, c: u32) {
        match self {
            FpVec::Bits { words, .. } => {
                if c & 1 == 0 {
                    for w in words.iter_mut() {
                        *w = 0;
                    }
                }
            }
            FpVec::Dense { p, vals } => {
                let c = (c % *p) as u64;
                let pp = *p as u64;
                for v in vals.iter_mut() {
                    *v = ((*v as u64 * c) % pp) as u32;
                }
            }
        }
    }

    pub fn neg(&mut self) {
        match self {
            FpVec::Bits { .. } => {}
            FpVec::Dense { p, vals } => {
                for v in vals.iter_mut() {
                    *v = (*p - *v) % *p;
                }
            }
        }
    }

    /// First nonzero coordinate at index >= from, with its value.
    pub fn first_nonzero(&self, from: usize) -> Option<(usize, u32)> {
        match self {
            FpVec::Bits { len, words } => {
                let mut wi = from / 64;
                if wi >= words.len() {
                    return None;
                }
                let mut w = words[wi] & (!0u64 << (from % 64));
                loop {
                    if w != 0 {
                        let i = wi * 64 + w.trailing_zeros() as usize;
                        return if i < *len { Some((i, 1)) } else { None };
                    }
                    wi += 1;
                    if wi >= words.len() {
                        return None;
                    }
                    w = words[wi];
                }
            }
            FpVec::Dense { vals, .. } => vals
                .iter()
                .enumerate()
                .skip(from)
                .find(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, v)),
        }
    }

    pub fn dot(&self, other: &FpVec) -> u32 {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: ow, .. }) => {
                let mut acc = 0u32;
                for (a, b) in words.iter().zip(ow) {
                    acc ^= (a & b).count_ones() & 1;
                }
                acc
            }
            (FpVec::Dense { p, vals }, FpVec::Dense { vals: ov, .. }) => {
                let pp = *p as u64;
                let mut acc = 0u64;
                for (a, b) in vals.iter().zip(ov) {
                    acc = (acc + *a as u64 * *b as u64) % pp;
                }
                acc as u32
            }
            _ => panic!("mixed FpVec storage"),
        }
    }

    pub fn entries(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Concatenation of two vectors over the same p.
    pub fn concat(&self, other: &FpVec) -> FpVec {
        let mut out = FpVec::zero(self.p(), self.len() + other.len());
        for i in 0..self.len() {
            out.set(i, self.get(i));
        }
        for i in 0..other.len() {
            out.set(self.len() + i, other.get(i));
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> FpVec {
        let mut out = FpVec::zero(self.p(), len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    /// Writes `block` into self starting at `offset`.
    pub fn write_block(&mut self, offset: usize, block: &FpVec) {
        for i in 0..block.len() {
            self.set(offset + i, block.get(i));
        }
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small; Fermat.
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Incremental Gauss-Jordan eliminator over F_p.
///
/// Rows inserted through [`Eliminator::insert`] are reduced against the
/// current pivot set; independent rows are normalised, back-substituted
/// into earlier pivots and stored. Only columns below `pivot_limit` are
/// eligible as pivots, which supports augmented-row solving.
pub struct Eliminator {
    p: u32,
    ncols: usize,
    pivot_limit: usize,
    /// (pivot column, row) sorted by pivot column.
    pivots: Vec<(usize, FpVec)>,
}

impl Eliminator {
    pub fn new(p: u32, ncols: usize) -> Self {
        Eliminator {
            p,
            ncols,
            pivot_limit: ncols,
            pivots: Vec::new(),
        }
    }

    pub fn with_pivot_limit(p: u32, ncols: usize, pivot_limit: usize) -> Self {
        Eliminator {
            p,
            ncols,
            pivot_limit,
            pivots: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Fully reduces `v` against the pivot rows.
    pub fn reduce(&self, mut v: FpVec) -> FpVec {
        for (col, row) in &self.pivots {
            let c = v.get(*col);
            if c != 0 {
                let mut t = self.p - c;
                t %= self.p;
                v.axpy(t, row);
            }
        }
        v
    }

    /// Inserts a row; returns the new pivot column if it was independent.
    pub fn insert(&mut self, v: FpVec) -> Option<usize> {
        let mut v = self.reduce(v);
        let (col, val) = v.first_nonzero(0)?;
        if col >= self.pivot_limit {
            return None;
        }
        if val != 1 {
            v.scale(inv_mod(val, self.p));
        }
        // Back-substitute into existing pivot rows to keep RREF.
        for (_, row) in self.pivots.iter_mut() {
            let c = row.get(col);
            if c != 0 {
                row.axpy((self.p - c) % self.p, &v);
            }
        }
        let pos = self.pivots.partition_point(|(c, _)| *c < col);
        self.pivots.insert(pos, (col, v));
        Some(col)
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|(c, _)| *c).collect()
    }

    /// The stored RREF rows — a canonical basis of the row span.
    pub fn row_basis(&self) -> Vec<FpVec> {
        self.pivots.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Basis of the right nullspace of the row span (free-column basis).
    pub fn nullspace_basis(&self) -> Vec<FpVec> {
        let piv: std::collections::HashSet<usize> =
            self.pivots.iter().map(|(c, _)| *c).collect();
        let mut basis = Vec::new();
        for j in 0..self.ncols {
            if piv.contains(&j) {
                continue;
            }
            let mut v = FpVec::zero(self.p, self.ncols);
            v.set(j, 1);
            for (col, row) in &self.pivots {
                let c = row.get(j);
                if c != 0 {
                    v.set(*col, (self.p - c) % self.p);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// True iff `v` lies in the row span.
    pub fn contains(&self, v: &FpVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

/// Solves membership in the span of a fixed generating set, returning
/// the combination coefficients. Built once, queried many times.
pub struct ImageSolver {
    target_dim: usize,
    ngens: usize,
    elim: Eliminator,
}

impl ImageSolver {
    pub fn new(p: u32, target_dim: usize, gens: &[FpVec]) -> Self {
        let ngens = gens.len();
        let mut elim = Eliminator::with_pivot_limit(p, target_dim + ngens, target_dim);
        for (i, g) in gens.iter().enumerate() {
            let mut e = FpVec::zero(p, ngens);
            e.set(i, 1);
            elim.insert(g.concat(&e));
        }
        ImageSolver {
            target_dim,
            ngens,
            elim,
        }
    }

    pub fn rank(&self) -> usize {
        self.elim.rank()
    }

    /// If `t` is in the span, returns coefficients x with sum x_i g_i = t.
    pub fn express(&self, t: &FpVec) -> Option<FpVec> {
        let aug = t.concat(&FpVec::zero(t.p(), self.ngens));
        let red = self.elim.reduce(aug);
        let head = red.slice(0, self.target_dim);
        if head.is_zero() {
            let mut tail = red.slice(self.target_dim, self.ngens);
            tail.neg();
            Some(tail)
        } else {
            None
        }
    }

    /// Residual of `t` modulo the span (a canonical coset representative).
    pub fn residual(&self, t: &FpVec) -> FpVec {
        let aug = t.concat(&FpVec::zero(t.p(), self.ngens));
        self.elim.reduce(aug).slice(0, self.target_dim)
    }
}

/// Dense matrix with FpVec rows; used for module actions and the
/// tree-contracted cochain maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u32,
    pub ncols: usize,
    pub rows: Vec<FpVec>,
}

impl FpMat {
    pub fn zero(p: u32, nrows: usize, ncols: usize) -> Self {
        FpMat {
            p,
            ncols,
            rows: vec![FpVec::zero(p, ncols); nrows],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = FpMat::zero(p, n, n);
        for i in 0..n {
            m.rows[i].set(i, 1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.rows[i].set(j, v);
    }

    pub fn apply(&self, v: &FpVec) -> FpVec {
        let mut out = FpVec::zero(self.p, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        out
    }

    /// self * other.
    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.ncols, other.nrows());
        let mut out = FpMat::zero(self.p, self.nrows(), other.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..self.ncols {
                let c = row.get(j);
                if c != 0 {
                    out.rows[i].axpy(c, &other.rows[j]);
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &FpMat) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.add_assign(b);
        }
    }

    pub fn sub_assign(&mut self, other: &FpMat) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.sub_assign(b);
        }
    }

    pub fn is_invertible(&self) -> bool {
        if self.nrows() != self.ncols {
            return false;
        }
        let mut elim = Eliminator::new(self.p, self.ncols);
        for row in &self.rows {
            elim.insert(row.clone());
        }
        elim.rank() == self.ncols
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.p, self.ncols);
        for row in &self.rows {
            elim.insert(row.clone());
        }
        elim.rank()
    }
}
