//! The exterior algebra E on a dual basis e_0..e_n, graded free E-modules,
//! maps between them, and degreewise syzygy computation by plain linear
//! algebra on graded components.
//!
//! Index subsets of {0..n} are bitmasks; the canonical basis of the k-th
//! wedge power is the lexicographic order on sorted index tuples.

use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::matrix::{sparse_kernel_fp, Mat, SparseRow};
use std::collections::BTreeMap;

/// Sorted index subset of {0..n} as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct IndexSet(pub u16);

impl IndexSet {
    pub fn from_indices(ix: &[usize]) -> Self {
        let mut m = 0u16;
        for &i in ix {
            assert!(i < 16);
            assert!(m & (1 << i) == 0, "repeated index");
            m |= 1 << i;
        }
        IndexSet(m)
    }

    pub fn indices(self) -> Vec<usize> {
        (0..16).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// Bracket notation: [0369] etc., one digit per index (n <= 9 here).
    pub fn bracket(self) -> String {
        let digits: String = self.indices().iter().map(|i| i.to_string()).collect();
        format!("[{digits}]")
    }
}

/// Sign of sorting the concatenation of disjoint sorted tuples a, b.
#[inline]
pub fn wedge_sign(a: u16, b: u16) -> bool {
    // true = negative
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    inversions % 2 == 1
}

/// All k-subsets of {0..n-1} in lexicographic order on sorted tuples.
pub fn combinations_lex(n: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut tuple: Vec<usize> = (0..k).collect();
    loop {
        out.push(IndexSet::from_indices(&tuple));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if tuple[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        tuple[i] += 1;
        for j in i + 1..k {
            tuple[j] = tuple[j - 1] + 1;
        }
    }
}

/// Lookup from mask to position in `combinations_lex(n, k)`.
pub fn mask_to_index(n: usize, k: usize) -> Vec<u32> {
    let combos = combinations_lex(n, k);
    let mut table = vec![u32::MAX; 1 << n];
    for (i, c) in combos.iter().enumerate() {
        table[c.0 as usize] = i as u32;
    }
    table
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// An element of the exterior algebra on e_0..e_{dim-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtElem<K: Field> {
    pub dim: usize,
    pub terms: BTreeMap<IndexSet, K::Elem>,
}

impl<K: Field> ExtElem<K> {
    pub fn zero(dim: usize) -> Self {
        ExtElem {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(dim: usize, ix: IndexSet, coeff: K::Elem) -> Self {
        let mut e = Self::zero(dim);
        e.terms.insert(ix, coeff);
        e
    }

    pub fn gen(field: &K, dim: usize, i: usize) -> Self {
        Self::basis(dim, IndexSet(1 << i), field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, field: &K, ix: IndexSet, c: K::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(ix) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &K, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&ix, c) in &other.terms {
            out.add_term(field, ix, c.clone());
        }
        out
    }

    pub fn neg(&self, field: &K) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = field.neg(c);
        }
        out
    }

    pub fn scale(&self, field: &K, s: &K::Elem) -> Self {
        if field.is_zero(s) {
            return Self::zero(self.dim);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = field.mul(c, s);
        }
        out
    }

    /// Exterior product; tuples with repeats vanish, signs from sorting.
    pub fn wedge(&self, field: &K, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "wedge of dims {} and {}",
                self.dim, other.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a.0 & b.0 != 0 {
                    continue;
                }
                let c = field.mul(ca, cb);
                let c = if wedge_sign(a.0, b.0) { field.neg(&c) } else { c };
                out.add_term(field, IndexSet(a.0 | b.0), c);
            }
        }
        Ok(out)
    }

    /// Wedge degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.card();
        if it.all(|ix| ix.card() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn coeff(&self, ix: IndexSet) -> Option<&K::Elem> {
        self.terms.get(&ix)
    }
}

/// Matrix over E with twist bookkeeping: a map E(source_twist)^cols ->
/// E(target_twist)^rows. Every entry is homogeneous of wedge degree
/// source_twist - target_twist.
#[derive(Clone, Debug)]
pub struct ExtMatrix<K: Field> {
    pub field: K,
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub source_twist: i32,
    pub target_twist: i32,
    entries: Vec<ExtElem<K>>,
}

impl<K: Field> ExtMatrix<K> {
    pub fn zeros(
        field: K,
        dim: usize,
        rows: usize,
        cols: usize,
        source_twist: i32,
        target_twist: i32,
    ) -> Self {
        assert!(source_twist >= target_twist);
        ExtMatrix {
            field,
            dim,
            rows,
            cols,
            source_twist,
            target_twist,
            entries: vec![ExtElem::zero(dim); rows * cols],
        }
    }

    pub fn entry_degree(&self) -> u32 {
        (self.source_twist - self.target_twist) as u32
    }

    pub fn at(&self, r: usize, c: usize) -> &ExtElem<K> {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut ExtElem<K> {
        &mut self.entries[r * self.cols + c]
    }

    /// Check every entry is homogeneous of the degree forced by the twists.
    pub fn validate(&self) -> Result<()> {
        let k = self.entry_degree();
        for e in &self.entries {
            if !e.is_zero() && e.homogeneous_degree() != Some(k) {
                return Err(Error::Inhomogeneous);
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.source_twist != other.target_twist {
            return Err(Error::DimensionMismatch("ExtMatrix composition".into()));
        }
        let f = &self.field;
        let mut out = ExtMatrix::zeros(
            f.clone(),
            self.dim,
            self.rows,
            other.cols,
            other.source_twist,
            self.target_twist,
        );
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = ExtElem::zero(self.dim);
                for k in 0..self.cols {
                    let w = self.at(r, k).wedge(f, other.at(k, c))?;
                    acc = acc.add(f, &w);
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    /// Apply the matrix to a column vector of wedge elements.
    pub fn apply(&self, v: &[ExtElem<K>]) -> Result<Vec<ExtElem<K>>> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = ExtElem::zero(self.dim);
                for c in 0..self.cols {
                    acc = acc.add(f, &self.at(r, c).wedge(f, &v[c])?);
                }
                Ok(acc)
            })
            .collect()
    }

    /// Source wedge degree for internal degree t (see module docs):
    /// the degree-t component of E(a) is the wedge power of size -(t+a).
    pub fn source_wedge_degree(&self, t: i32) -> Option<usize> {
        let q = -(t + self.source_twist);
        if q < 0 || q as usize > self.dim {
            None
        } else {
            Some(q as usize)
        }
    }

    /// The induced scalar map between degree-t graded components.
    /// Source basis (c, T) at index c*C(dim,q) + lex(T); target likewise.
    pub fn component_matrix(&self, t: i32) -> Mat<K> {
        let q = self
            .source_wedge_degree(t)
            .expect("internal degree out of range");
        let k = self.entry_degree() as usize;
        let f = &self.field;
        let src = combinations_lex(self.dim, q);
        let tgt_count = binom(self.dim, q + k);
        let tgt_index = mask_to_index(self.dim, q + k);
        let mut out = Mat::zeros(f.clone(), self.rows * tgt_count, self.cols * src.len());
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                for (&ix, coeff) in &e.terms {
                    for (ti, &tmask) in src.iter().enumerate() {
                        if ix.0 & tmask.0 != 0 {
                            continue;
                        }
                        let dest = IndexSet(ix.0 | tmask.0);
                        let di = tgt_index[dest.0 as usize] as usize;
                        let val = if wedge_sign(ix.0, tmask.0) {
                            f.neg(coeff)
                        } else {
                            coeff.clone()
                        };
                        let row = r * tgt_count + di;
                        let col = c * src.len() + ti;
                        let cur = out.at(row, col).clone();
                        out.set(row, col, f.add(&cur, &val));
                    }
                }
            }
        }
        out
    }

    /// Columns spanning the kernel of this matrix in the internal degree
    /// where new entries live in the q-th wedge power; the returned matrix
    /// S satisfies self * S = 0 identically in E and has linearly
    /// independent columns, canonicalized by reduced row echelon form.
    pub fn degreewise_syzygies(&self, q: usize) -> Result<ExtMatrix<K>> {
        self.validate()?;
        let t = -(q as i32) - self.source_twist;
        let scalar = self.component_matrix(t);
        let kernel = scalar.kernel_basis();
        let canon = canonicalize_vectors(&self.field, kernel, scalar.cols);
        Ok(self.syzygy_matrix_from_vectors(q, &canon))
    }

    /// Reassemble kernel vectors (in the (c, T) coordinate layout of
    /// `component_matrix`) into a syzygy matrix with wedge-degree-q entries.
    fn syzygy_matrix_from_vectors(&self, q: usize, vectors: &[Vec<K::Elem>]) -> ExtMatrix<K> {
        let f = &self.field;
        let src = combinations_lex(self.dim, q);
        let mut out = ExtMatrix::zeros(
            f.clone(),
            self.dim,
            self.cols,
            vectors.len(),
            self.source_twist + q as i32,
            self.source_twist,
        );
        for (j, v) in vectors.iter().enumerate() {
            for c in 0..self.cols {
                for (ti, &tmask) in src.iter().enumerate() {
                    let coeff = &v[c * src.len() + ti];
                    if !f.is_zero(coeff) {
                        out.at_mut(c, j).add_term(f, tmask, coeff.clone());
                    }
                }
            }
        }
        out
    }

    /// Debug dump in the polynomial text format, variables e0..e_n.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        writeln!(
            s,
            "# ExtMatrix {}x{} over e0..e{} twists ({}, {})",
            self.rows,
            self.cols,
            self.dim - 1,
            self.source_twist,
            self.target_twist
        )
        .unwrap();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                if e.is_zero() {
                    continue;
                }
                let terms: Vec<String> = e
                    .terms
                    .iter()
                    .map(|(ix, co)| format!("{} e{:?}", self.field.fmt_elem(co), ix.indices()))
                    .collect();
                writeln!(s, "{r} {c} : {}", terms.join(" + ")).unwrap();
            }
        }
        s
    }
}

/// Reduced row echelon basis of the span of the given vectors: canonical
/// for the subspace, independent of the basis handed in.
pub fn canonicalize_vectors<K: Field>(
    field: &K,
    vectors: Vec<Vec<K::Elem>>,
    width: usize,
) -> Vec<Vec<K::Elem>> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = Mat::from_rows(field.clone(), vectors);
    let pivots = m.rref_in_place();
    (0..pivots.len()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>()
        .into_iter()
        .map(|mut v| {
            v.truncate(width);
            v
        })
        .collect()
}

/// Fast syzygy path for big instances over F_p: assemble the graded
/// component as sparse rows and use randomized compression. Produces the
/// same canonical output as `degreewise_syzygies`.
pub fn degreewise_syzygies_fp(
    m: &ExtMatrix<Fp>,
    q: usize,
    seed: u64,
) -> Result<ExtMatrix<Fp>> {
    m.validate()?;
    let fp = m.field;
    let k = m.entry_degree() as usize;
    let src = combinations_lex(m.dim, q);
    let tgt_count = binom(m.dim, q + k);
    let tgt_index = mask_to_index(m.dim, q + k);
    let ncols = m.cols * src.len();
    let nrows = m.rows * tgt_count;
    let mut rows: Vec<SparseRow> = vec![Vec::new(); nrows];
    for r in 0..m.rows {
        for c in 0..m.cols {
            let e = m.at(r, c);
            for (&ix, &coeff) in &e.terms {
                for (ti, &tmask) in src.iter().enumerate() {
                    if ix.0 & tmask.0 != 0 {
                        continue;
                    }
                    let di = tgt_index[(ix.0 | tmask.0) as usize] as usize;
                    let val = if wedge_sign(ix.0, tmask.0) {
                        fp.neg(&coeff)
                    } else {
                        coeff
                    };
                    rows[r * tgt_count + di].push(((c * src.len() + ti) as u32, val));
                }
            }
        }
    }
    // merge duplicate columns within each row
    for row in &mut rows {
        row.sort_by_key(|&(c, _)| c);
        let mut merged: SparseRow = Vec::with_capacity(row.len());
        for &(c, v) in row.iter() {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = fp.add_raw(*lv, v),
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        *row = merged;
    }
    let kernel = sparse_kernel_fp(&rows, ncols, fp, seed)?;
    let canon = canonicalize_vectors(&fp, kernel, ncols);
    Ok(m.syzygy_matrix_from_vectors(q, &canon))
}
