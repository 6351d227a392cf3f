//! Dense exact matrices over a `Field`: fraction-free determinants,
//! reduced row echelon form, right kernels, Pfaffians, and a randomized
//! compression path for kernels of large sparse systems.

use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<K: Field> {
    pub field: K,
    pub rows: usize,
    pub cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> Mat<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = m.field.one();
        }
        m
    }

    pub fn from_fn(field: K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Mat {
            field,
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &K::Elem {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut K::Elem {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[K::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.field.clone(), self.cols, self.rows, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let f = &self.field;
        Mat::from_fn(f.clone(), self.rows, other.cols, |r, c| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.at(r, k), other.at(k, c)));
            }
            acc
        })
    }

    pub fn matvec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(r, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    /// Exact determinant by Bareiss fraction-free elimination: every
    /// division is by the previous pivot and is exact over an integral
    /// domain, so integer matrices never leave the integers.
    pub fn det_fraction_free(&self) -> Result<K::Elem> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field.clone();
        if n == 0 {
            return Ok(f.one());
        }
        let mut m = self.clone();
        let mut sign_neg = false;
        let mut prev = f.one();
        for k in 0..n - 1 {
            // pivot: first row with nonzero entry in column k
            let Some(pr) = (k..n).find(|&r| !f.is_zero(m.at(r, k))) else {
                return Ok(f.zero());
            };
            if pr != k {
                m.swap_rows(pr, k);
                sign_neg = !sign_neg;
            }
            let pivot = m.at(k, k).clone();
            for i in k + 1..n {
                let head = m.at(i, k).clone();
                for j in k + 1..n {
                    let t = f.sub(
                        &f.mul(m.at(i, j), &pivot),
                        &f.mul(&head, m.at(k, j)),
                    );
                    let t = f.div(&t, &prev)?;
                    m.set(i, j, t);
                }
                m.set(i, k, f.zero());
            }
            prev = pivot;
        }
        let d = m.at(n - 1, n - 1).clone();
        Ok(if sign_neg { f.neg(&d) } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form with lex-first pivoting.
    /// Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !f.is_zero(self.at(i, c))) else {
                continue;
            };
            self.swap_rows(pr, r);
            let inv = f.inv(self.at(r, c)).expect("nonzero pivot");
            for j in c..cols {
                let t = f.mul(self.at(r, j), &inv);
                self.set(r, j, t);
            }
            // eliminate column c everywhere else
            let pivot_row: Vec<K::Elem> = self.row(r).to_vec();
            let stride = cols;
            let parallel = rows * cols > (1 << 20);
            let eliminate = |(i, chunk): (usize, &mut [K::Elem])| {
                if i == r {
                    return;
                }
                let head = chunk[c].clone();
                if f.is_zero(&head) {
                    return;
                }
                for j in c..cols {
                    chunk[j] = f.mul_sub(&chunk[j], &head, &pivot_row[j]);
                }
            };
            if parallel {
                self.data
                    .par_chunks_mut(stride)
                    .enumerate()
                    .for_each(eliminate);
            } else {
                self.data.chunks_mut(stride).enumerate().for_each(eliminate);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel, canonical for the RREF with lex-first
    /// pivots: one vector per free column, with a 1 in that coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<K::Elem>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: std::collections::BTreeMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (&pc, &pr) in &pivot_set {
                v[pc] = f.neg(m.at(pr, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of self * x = b, or None if inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let mut aug = Mat::from_fn(f.clone(), self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constant column
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_skew(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let f = &self.field;
        for i in 0..self.rows {
            if !f.is_zero(self.at(i, i)) {
                return false;
            }
            for j in i + 1..self.cols {
                if *self.at(i, j) != f.neg(self.at(j, i)) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact Pfaffian with Pf([[0,a],[-a,0]]) = a, by skew congruence
    /// elimination. Requires an exactly skew matrix of even dimension.
    pub fn pfaffian(&self) -> Result<K::Elem> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows % 2 != 0 {
            return Err(Error::OddDimension(self.rows));
        }
        if !self.is_skew() {
            return Err(Error::NotSkew);
        }
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return Ok(f.one());
        }
        let mut m = self.clone();
        let mut acc = f.one();
        let mut negate = false;
        for k in (0..n).step_by(2) {
            let Some(j) = (k + 1..n).find(|&j| !f.is_zero(m.at(k, j))) else {
                return Ok(f.zero()); // zero row in the skew block
            };
            if j != k + 1 {
                // congruence swap of index j with k+1 flips the sign
                m.swap_rows(j, k + 1);
                m.swap_cols(j, k + 1);
                negate = !negate;
            }
            let a = m.at(k, k + 1).clone();
            acc = f.mul(&acc, &a);
            for i in k + 2..n {
                // zero m[k][i] using index k+1, then m[k+1][i] using index k
                let lam = f.div(m.at(k, i), &a)?;
                if !f.is_zero(&lam) {
                    m.add_multiple_of_row(i, k + 1, &f.neg(&lam));
                    m.add_multiple_of_col(i, k + 1, &f.neg(&lam));
                }
                let mu = f.div(m.at(k + 1, i), &a)?;
                if !f.is_zero(&mu) {
                    m.add_multiple_of_row(i, k, &mu);
                    m.add_multiple_of_col(i, k, &mu);
                }
            }
        }
        Ok(if negate { f.neg(&acc) } else { acc })
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn add_multiple_of_row(&mut self, dst: usize, src: usize, lam: &K::Elem) {
        let f = self.field.clone();
        for c in 0..self.cols {
            let t = f.add(self.at(dst, c), &f.mul(lam, self.at(src, c)));
            self.set(dst, c, t);
        }
    }

    fn add_multiple_of_col(&mut self, dst: usize, src: usize, lam: &K::Elem) {
        let f = self.field.clone();
        for r in 0..self.rows {
            let t = f.add(self.at(r, dst), &f.mul(lam, self.at(r, src)));
            self.set(r, dst, t);
        }
    }
}

/// A sparse row: sorted (column, value) pairs.
pub type SparseRow = Vec<(u32, u64)>;

/// Right kernel of a large sparse matrix over F_p via randomized row
/// compression: eliminate R*M for a sparse random R with a few more rows
/// than columns, then certify every kernel vector against the full matrix.
/// ker(R*M) always contains ker(M); when every basis vector of ker(R*M)
/// is annihilated by M the two spaces coincide. Deterministic for a fixed
/// seed; retries with denser compression on certification failure.
pub fn sparse_kernel_fp(
    rows: &[SparseRow],
    ncols: usize,
    fp: Fp,
    seed: u64,
) -> Result<Vec<Vec<u64>>> {
    use rand::{Rng, SeedableRng};
    let nrows = rows.len();
    if nrows <= ncols + 64 {
        let mut dense = Mat::zeros(fp, nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                dense.set(r, c as usize, v);
            }
        }
        return Ok(dense.kernel_basis());
    }
    let ntarget = ncols + 64;
    for attempt in 0..4u64 {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed ^ (attempt << 32));
        let fanout = 2 << attempt;
        let mut compressed = Mat::zeros(fp, ntarget, ncols);
        for row in rows {
            for _ in 0..fanout {
                let t = rng.gen_range(0..ntarget);
                let scale = 1 + rng.gen_range(0..fp.p() - 1);
                let chunk =
                    &mut compressed.data[t * ncols..(t + 1) * ncols];
                for &(c, v) in row {
                    chunk[c as usize] = fp.add_raw(chunk[c as usize], fp.mul_raw(scale, v));
                }
            }
        }
        let basis = compressed.kernel_basis();
        let ok = basis.iter().all(|v| {
            rows.iter().all(|row| {
                let mut acc = 0u64;
                for &(c, val) in row {
                    acc = fp.add_raw(acc, fp.mul_raw(val, v[c as usize]));
                }
                acc == 0
            })
        });
        if ok {
            return Ok(basis);
        }
    }
    Err(Error::Degenerate(
        "sparse kernel compression failed to certify".into(),
    ))
}

/// Certified full-column-rank check for a sparse matrix over F_p:
/// rank(R*M) = ncols forces rank(M) = ncols. One-sided, so a `true`
/// answer is exact; `false` falls back to the caller.
pub fn sparse_full_rank_fp(rows: &[SparseRow], ncols: usize, fp: Fp, seed: u64) -> bool {
    match sparse_kernel_fp(rows, ncols, fp, seed) {
        Ok(basis) => basis.is_empty(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    /// Independent oracle: cofactor expansion along the first row.
    fn det_cofactor<K: Field>(m: &Mat<K>) -> K::Elem {
        let f = m.field.clone();
        let n = m.rows;
        if n == 0 {
            return f.one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = f.zero();
        for c in 0..n {
            if f.is_zero(m.at(0, c)) {
                continue;
            }
            let sub = Mat::from_fn(f.clone(), n - 1, n - 1, |i, j| {
                m.at(i + 1, if j < c { j } else { j + 1 }).clone()
            });
            let term = f.mul(m.at(0, c), &det_cofactor(&sub));
            acc = if c % 2 == 0 {
                f.add(&acc, &term)
            } else {
                f.sub(&acc, &term)
            };
        }
        acc
    }

    #[test]
    fn identity_20_det_is_one() {
        let m = Mat::identity(Rationals, 20);
        assert_eq!(m.det_fraction_free().unwrap(), Rationals.one());
    }

    #[test]
    fn repeated_row_det_is_zero() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mut m = Mat::from_fn(fp, 6, 6, |_, _| fp.rand_elem(&mut rng));
        for c in 0..6 {
            let v = m.at(2, c).clone();
            m.set(4, c, v);
        }
        assert_eq!(m.det_fraction_free().unwrap(), 0);
    }

    #[test]
    fn bareiss_matches_cofactor_up_to_6() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let m = Mat::from_fn(fp, n, n, |_, _| fp.rand_elem(&mut rng));
                assert_eq!(m.det_fraction_free().unwrap(), det_cofactor(&m));
            }
        }
        // and over Q with fractional entries
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for _ in 0..5 {
            let m = Mat::from_fn(q, 5, 5, |_, _| {
                let n = rng.gen_range(-9i64..=9);
                let d = rng.gen_range(1i64..=9);
                BigRational::new(n.into(), d.into())
            });
            assert_eq!(m.det_fraction_free().unwrap(), det_cofactor(&m));
        }
    }

    #[test]
    fn kernel_of_zero_and_invertible() {
        let fp = Fp::new(32003).unwrap();
        let z = Mat::zeros(fp, 3, 3);
        assert_eq!(z.kernel_basis().len(), 3);
        let id = Mat::identity(fp, 4);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_rank_two_product() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let a = Mat::from_fn(fp, 6, 2, |_, _| fp.rand_elem(&mut rng));
        let b = Mat::from_fn(fp, 2, 4, |_, _| fp.rand_elem(&mut rng));
        let m = a.matmul(&b);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.matvec(v).iter().all(|e| *e == 0));
        }
        assert_eq!(m.rank() + basis.len(), m.cols);
    }

    #[test]
    fn pfaffian_two_by_two() {
        let q = Rationals;
        let a = q.from_i64(17);
        let mut m = Mat::zeros(q, 2, 2);
        m.set(0, 1, a.clone());
        m.set(1, 0, q.neg(&a));
        assert_eq!(m.pfaffian().unwrap(), a);
    }

    #[test]
    fn pfaffian_four_by_four_closed_form() {
        // upper entries a..f row by row: Pf = af - be + cd
        let q = Rationals;
        let vals = [2i64, 3, 5, 7, 11, 13]; // a,b,c,d,e,f
        let mut m = Mat::zeros(q, 4, 4);
        let upper = [(0, 1, 0), (0, 2, 1), (0, 3, 2), (1, 2, 3), (1, 3, 4), (2, 3, 5)];
        for (i, j, k) in upper {
            m.set(i, j, q.from_i64(vals[k]));
            m.set(j, i, q.from_i64(-vals[k]));
        }
        let expect = q.from_i64(2 * 13 - 3 * 11 + 5 * 7);
        assert_eq!(m.pfaffian().unwrap(), expect);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..10 {
            let mut m = Mat::zeros(fp, 8, 8);
            for i in 0..8 {
                for j in i + 1..8 {
                    let v = fp.rand_elem(&mut rng);
                    m.set(i, j, v);
                    m.set(j, i, fp.neg(&v));
                }
            }
            let pf = m.pfaffian().unwrap();
            let det = m.det_fraction_free().unwrap();
            assert_eq!(fp.mul(&pf, &pf), det);
        }
    }

    #[test]
    fn pfaffian_rejects_bad_input() {
        let q = Rationals;
        let m = Mat::zeros(q, 3, 3);
        assert!(matches!(m.pfaffian(), Err(Error::OddDimension(3))));
        let mut m = Mat::zeros(q, 2, 2);
        m.set(0, 0, q.one());
        assert!(matches!(m.pfaffian(), Err(Error::NotSkew)));
    }

    #[test]
    fn rational_det_consistent_mod_three_primes() {
        // CRT consistency: det over Q reduces to det over F_p
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let m = Mat::from_fn(q, 6, 6, |_, _| {
            let n = rng.gen_range(-50i64..=50);
            let d = rng.gen_range(1i64..=20);
            BigRational::new(n.into(), d.into())
        });
        let dq = m.det_fraction_free().unwrap();
        for p in [32003u64, 32009, 32027] {
            let fp = Fp::new(p).unwrap();
            let mp = Mat::from_fn(fp, 6, 6, |r, c| fp.from_rat(m.at(r, c)).unwrap());
            assert_eq!(mp.det_fraction_free().unwrap(), fp.from_rat(&dq).unwrap());
        }
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        // 300x40 of rank 36: product of 300x36 and 36x40 sparse-ified
        let a = Mat::from_fn(fp, 300, 36, |_, _| fp.rand_elem(&mut rng));
        let b = Mat::from_fn(fp, 36, 40, |_, _| fp.rand_elem(&mut rng));
        let m = a.matmul(&b);
        let rows: Vec<SparseRow> = (0..m.rows)
            .map(|r| {
                (0..m.cols)
                    .filter(|&c| *m.at(r, c) != 0)
                    .map(|c| (c as u32, *m.at(r, c)))
                    .collect()
            })
            .collect();
        let kb = sparse_kernel_fp(&rows, 40, fp, 9).unwrap();
        assert_eq!(kb.len(), 4);
        for v in &kb {
            assert!(m.matvec(v).iter().all(|e| *e == 0));
        }
    }
}
