//! Construction of the 16x16 skew-symmetric Chow matrix of the 2-uple
//! embedding of P^3 from the null-correlation bundle.
//!
//! The pipeline: global sections of the twisted bundle are 4-tuples of
//! forms satisfying the Euler condition, modulo the image of the twisted
//! line bundle under the chosen nondegenerate skew form. The
//! multiplication map by the ten quadric monomials yields a 64x16 matrix
//! over the exterior algebra on e_0..e_9; its wedge-degree-4 syzygies,
//! skew-normalized by a scalar column change, give the matrix whose
//! Pfaffian is the resultant of four quaternary quadrics.
//!
//! The construction runs over several primes with rational reconstruction
//! and is then verified exactly over the rationals; the verified integer
//! matrix is committed as a golden artifact and simply loaded at runtime.

use crate::error::{Error, Result};
use crate::exterior::{
    combinations_lex, degreewise_syzygies_fp, ExtElem, ExtMatrix, IndexSet,
};
use crate::field::{crt_symmetric, rational_reconstruct, Field, Fp, Rationals};
use crate::chow::{ChowMatrix, QuadricSystem, u_functor, plucker_substitute};
use crate::matrix::Mat;
use crate::poly::{Monomial, MultiPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeMap;

/// Quaternary monomials of degree d, lexicographically descending on
/// exponent vectors (matches the fixed quadric and cubic orders).
pub fn monomials_deg(d: u32) -> Vec<[u16; 4]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a as u16, b as u16, c as u16, (d - a - b - c) as u16]);
            }
        }
    }
    out
}

fn monomial_index(table: &[[u16; 4]], m: &[u16; 4]) -> usize {
    table.iter().position(|t| t == m).expect("monomial in table")
}

/// The standard nondegenerate skew form e0^e1 + e2^e3 as a 4x4 matrix.
pub fn standard_null_form<K: Field>(field: &K) -> Mat<K> {
    let mut w = Mat::zeros(field.clone(), 4, 4);
    w.set(0, 1, field.one());
    w.set(1, 0, field.from_i64(-1));
    w.set(2, 3, field.one());
    w.set(3, 2, field.from_i64(-1));
    w
}

/// Basis data for H^0 of the twisted null-correlation bundle: 4-tuples of
/// degree-`twist` forms with sum x_i g_i = 0, taken modulo the image
/// subspace of the skew form, with canonical echelonized representatives.
pub struct SectionSpace<K: Field> {
    pub field: K,
    pub twist: u32,
    monoms: Vec<[u16; 4]>,
    /// RREF rows of the image subspace, and its pivot columns.
    u_rows: Vec<Vec<K::Elem>>,
    u_pivots: Vec<usize>,
    /// RREF rows of the quotient representatives, and their pivot columns.
    q_rows: Vec<Vec<K::Elem>>,
    q_pivots: Vec<usize>,
}

impl<K: Field> SectionSpace<K> {
    pub fn dim(&self) -> usize {
        self.q_rows.len()
    }

    /// The c-th basis section as a 4-tuple of polynomials.
    pub fn tuple(&self, c: usize) -> [MultiPoly<K>; 4] {
        let f = &self.field;
        let nm = self.monoms.len();
        let mut out = [
            MultiPoly::zero(f.clone(), 4),
            MultiPoly::zero(f.clone(), 4),
            MultiPoly::zero(f.clone(), 4),
            MultiPoly::zero(f.clone(), 4),
        ];
        for (col, v) in self.q_rows[c].iter().enumerate() {
            if f.is_zero(v) {
                continue;
            }
            let comp = col / nm;
            let mon = &self.monoms[col % nm];
            out[comp].add_term(Monomial::new(mon.to_vec()), v.clone());
        }
        out
    }

    /// Reduce an ambient tuple-vector modulo the image subspace.
    fn reduce_mod_u(&self, v: &mut [K::Elem]) {
        let f = self.field.clone();
        for (row, &pc) in self.u_rows.iter().zip(&self.u_pivots) {
            let head = v[pc].clone();
            if f.is_zero(&head) {
                continue;
            }
            for (j, rv) in row.iter().enumerate() {
                v[j] = f.mul_sub(&v[j], &head, rv);
            }
        }
    }

    /// Coordinates of a tuple-vector in the quotient basis; the vector
    /// must lie in the Euler subspace.
    pub fn coordinates(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>> {
        let f = self.field.clone();
        let mut w = v.to_vec();
        self.reduce_mod_u(&mut w);
        let coords: Vec<K::Elem> = self.q_pivots.iter().map(|&pc| w[pc].clone()).collect();
        // exactness: w must equal the combination of quotient rows
        for (row, co) in self.q_rows.iter().zip(&coords) {
            if f.is_zero(co) {
                continue;
            }
            for (j, rv) in row.iter().enumerate() {
                w[j] = f.mul_sub(&w[j], co, rv);
            }
        }
        if w.iter().any(|e| !f.is_zero(e)) {
            return Err(Error::Degenerate(
                "vector not in the section space".into(),
            ));
        }
        Ok(coords)
    }
}

fn rref_rows<K: Field>(field: &K, rows: Vec<Vec<K::Elem>>) -> (Vec<Vec<K::Elem>>, Vec<usize>) {
    if rows.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut m = Mat::from_rows(field.clone(), rows);
    let pivots = m.rref_in_place();
    let out = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
    (out, pivots)
}

/// Global sections of the twisted null-correlation bundle for a given
/// nondegenerate skew form w; dimensions 16 (twist 2) and 64 (twist 4).
pub fn null_correlation_sections<K: Field>(
    field: &K,
    twist: u32,
    w: &Mat<K>,
) -> Result<SectionSpace<K>> {
    assert!(twist >= 1);
    let f = field.clone();
    let monoms = monomials_deg(twist);
    let up = monomials_deg(twist + 1);
    let nm = monoms.len();
    let ambient = 4 * nm;

    // Euler condition: kernel of (g_0..g_3) -> sum x_i g_i
    let mut euler = Mat::zeros(f.clone(), up.len(), ambient);
    for comp in 0..4 {
        for (k, m) in monoms.iter().enumerate() {
            let mut t = *m;
            t[comp] += 1;
            let r = monomial_index(&up, &t);
            let cur = euler.at(r, comp * nm + k).clone();
            euler.set(r, comp * nm + k, f.add(&cur, &f.one()));
        }
    }
    let v_basis = euler.kernel_basis();

    // image subspace: ell * (w x)_i for ell of degree twist-1
    let low = monomials_deg(twist - 1);
    let mut u_vecs = Vec::with_capacity(low.len());
    for ell in &low {
        let mut v = vec![f.zero(); ambient];
        for comp in 0..4 {
            for j in 0..4 {
                let coeff = w.at(comp, j);
                if f.is_zero(coeff) {
                    continue;
                }
                let mut t = *ell;
                t[j] += 1;
                let k = monomial_index(&monoms, &t);
                let cur = v[comp * nm + k].clone();
                v[comp * nm + k] = f.add(&cur, coeff);
            }
        }
        u_vecs.push(v);
    }
    let (u_rows, u_pivots) = rref_rows(&f, u_vecs);

    // canonical quotient representatives: reduce the Euler basis mod U,
    // then echelonize
    let space = SectionSpace {
        field: f.clone(),
        twist,
        monoms: monoms.clone(),
        u_rows,
        u_pivots,
        q_rows: Vec::new(),
        q_pivots: Vec::new(),
    };
    let reduced: Vec<Vec<K::Elem>> = v_basis
        .into_iter()
        .map(|mut v| {
            space.reduce_mod_u(&mut v);
            v
        })
        .collect();
    let (q_rows, q_pivots) = rref_rows(&f, reduced);
    Ok(SectionSpace {
        q_rows,
        q_pivots,
        ..space
    })
}

/// The 64x16 multiplication-map matrix over the exterior algebra on
/// e_0..e_9 dual to the ten quadric monomials.
pub fn build_phi0_p3_with<K: Field>(field: &K, w: &Mat<K>) -> Result<ExtMatrix<K>> {
    let s2 = null_correlation_sections(field, 2, w)?;
    let s4 = null_correlation_sections(field, 4, w)?;
    if s2.dim() != 16 || s4.dim() != 64 {
        return Err(Error::Degenerate(format!(
            "section dimensions {}/{} instead of 16/64 (degenerate w?)",
            s2.dim(),
            s4.dim()
        )));
    }
    let quads = monomials_deg(2);
    let m4 = monomials_deg(4);
    let nm4 = m4.len();
    let mut phi0 = ExtMatrix::zeros(field.clone(), 10, 64, 16, 0, -1);
    for c in 0..16 {
        let tuple = s2.tuple(c);
        for (i, qm) in quads.iter().enumerate() {
            // multiply the section tuple by the i-th quadric monomial
            let mut prod = vec![field.zero(); 4 * nm4];
            for comp in 0..4 {
                for (mon, coeff) in &tuple[comp].terms {
                    let mut t = [0u16; 4];
                    for v in 0..4 {
                        t[v] = mon.exps()[v] + qm[v];
                    }
                    let k = monomial_index(&m4, &t);
                    let cur = prod[comp * nm4 + k].clone();
                    prod[comp * nm4 + k] = field.add(&cur, coeff);
                }
            }
            let coords = s4.coordinates(&prod)?;
            for (r, co) in coords.iter().enumerate() {
                if !field.is_zero(co) {
                    phi0.at_mut(r, c).add_term(field, IndexSet(1 << i), co.clone());
                }
            }
        }
    }
    Ok(phi0)
}

/// The multiplication map for the standard skew form, over the rationals,
/// built once and shared.
pub fn build_phi0_p3() -> Result<&'static ExtMatrix<Rationals>> {
    static PHI0: Lazy<Result<ExtMatrix<Rationals>>> = Lazy::new(|| {
        let q = Rationals;
        build_phi0_p3_with(&q, &standard_null_form(&q))
    });
    PHI0.as_ref().map_err(|e| Error::Degenerate(e.to_string()))
}

/// Find an invertible scalar column change C making raw * C exactly
/// skew-symmetric as a matrix of wedge-degree-4 elements.
pub fn skew_normalize<K: Field>(raw: &ExtMatrix<K>, seed: u64) -> Result<ExtMatrix<K>> {
    let f = raw.field.clone();
    let n = raw.cols;
    if raw.rows != n {
        return Err(Error::NonSquare {
            rows: raw.rows,
            cols: n,
        });
    }
    // coefficient tables: for each wedge basis element T present, the
    // n x n scalar matrix of coefficients
    let mut tables: BTreeMap<IndexSet, Mat<K>> = BTreeMap::new();
    for i in 0..n {
        for k in 0..n {
            for (&t, c) in &raw.at(i, k).terms {
                tables
                    .entry(t)
                    .or_insert_with(|| Mat::zeros(f.clone(), n, n))
                    .set(i, k, c.clone());
            }
        }
    }
    // linear system on C (n*n unknowns, index k*n + j):
    // for every T and i <= j: sum_k T[i][k] C[k][j] + T[j][k] C[k][i] = 0
    let mut eqs: Vec<Vec<(u32, K::Elem)>> = Vec::new();
    for tab in tables.values() {
        for i in 0..n {
            for j in i..n {
                let mut row: Vec<(u32, K::Elem)> = Vec::new();
                for k in 0..n {
                    let a = tab.at(i, k);
                    if !f.is_zero(a) {
                        row.push(((k * n + j) as u32, a.clone()));
                    }
                    if i != j {
                        let b = tab.at(j, k);
                        if !f.is_zero(b) {
                            row.push(((k * n + i) as u32, b.clone()));
                        }
                    } else {
                        // diagonal entries must vanish outright
                    }
                }
                if !row.is_empty() {
                    eqs.push(row);
                }
            }
        }
    }
    let unknowns = n * n;
    let solution_basis = solve_sparse_kernel(&f, &eqs, unknowns, seed)?;
    if solution_basis.is_empty() {
        return Err(Error::SkewNormalization(
            "no nonzero solution to the skew system".into(),
        ));
    }
    // find an invertible member of the solution space
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x736b6577);
    let mut candidates: Vec<Vec<K::Elem>> = solution_basis.clone();
    for _ in 0..32 {
        let combo: Vec<K::Elem> = {
            let mut acc = vec![f.zero(); unknowns];
            for b in &solution_basis {
                let lam = f.rand_elem(&mut rng);
                for (a, x) in acc.iter_mut().zip(b) {
                    *a = f.add(a, &f.mul(&lam, x));
                }
            }
            acc
        };
        candidates.push(combo);
    }
    for cand in candidates {
        let cmat = Mat::from_fn(f.clone(), n, n, |k, j| cand[k * n + j].clone());
        if f.is_zero(&cmat.det_fraction_free()?) {
            continue;
        }
        let result = apply_column_change(raw, &cmat);
        // canonical global scale: first nonzero coefficient becomes 1
        let scaled = canonical_scale(&result)?;
        return Ok(scaled);
    }
    Err(Error::SkewNormalization(
        "no invertible solution found in the skew solution space".into(),
    ))
}

/// raw * C for a scalar matrix C.
fn apply_column_change<K: Field>(raw: &ExtMatrix<K>, c: &Mat<K>) -> ExtMatrix<K> {
    let f = raw.field.clone();
    let mut out = ExtMatrix::zeros(
        f.clone(),
        raw.dim,
        raw.rows,
        c.cols,
        raw.source_twist,
        raw.target_twist,
    );
    for r in 0..raw.rows {
        for j in 0..c.cols {
            let mut acc = ExtElem::zero(raw.dim);
            for k in 0..raw.cols {
                let lam = c.at(k, j);
                if f.is_zero(lam) {
                    continue;
                }
                acc = acc.add(&f, &raw.at(r, k).scale(&f, lam));
            }
            *out.at_mut(r, j) = acc;
        }
    }
    out
}

/// Scale a matrix so its first nonzero coefficient (row-major, terms in
/// index order) is 1; gives a canonical representative across primes.
fn canonical_scale<K: Field>(m: &ExtMatrix<K>) -> Result<ExtMatrix<K>> {
    let f = m.field.clone();
    let mut first: Option<K::Elem> = None;
    'outer: for r in 0..m.rows {
        for c in 0..m.cols {
            if let Some((_, coeff)) = m.at(r, c).terms.iter().next() {
                first = Some(coeff.clone());
                break 'outer;
            }
        }
    }
    let Some(first) = first else {
        return Err(Error::SkewNormalization("zero matrix".into()));
    };
    let inv = f.inv(&first)?;
    let mut out = m.clone();
    for r in 0..m.rows {
        for c in 0..m.cols {
            *out.at_mut(r, c) = m.at(r, c).scale(&f, &inv);
        }
    }
    Ok(out)
}

/// Kernel of a sparse equation system by randomized compression plus
/// exact certification (generic-field version of `sparse_kernel_fp`).
fn solve_sparse_kernel<K: Field>(
    field: &K,
    eqs: &[Vec<(u32, K::Elem)>],
    unknowns: usize,
    seed: u64,
) -> Result<Vec<Vec<K::Elem>>> {
    let f = field.clone();
    if eqs.len() <= unknowns + 32 {
        let mut dense = Mat::zeros(f, eqs.len(), unknowns);
        for (r, row) in eqs.iter().enumerate() {
            for (c, v) in row {
                let cur = dense.at(r, *c as usize).clone();
                dense.set(r, *c as usize, dense.field.add(&cur, v));
            }
        }
        return Ok(dense.kernel_basis());
    }
    for attempt in 0..4u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ (attempt << 40));
        let ntarget = unknowns + 32;
        let fanout = 2usize << attempt;
        let mut dense = Mat::zeros(f.clone(), ntarget, unknowns);
        for row in eqs {
            for _ in 0..fanout {
                let t = rng.gen_range(0..ntarget);
                let lam = f.rand_nonzero(&mut rng);
                for (c, v) in row {
                    let cur = dense.at(t, *c as usize).clone();
                    dense.set(t, *c as usize, f.add(&cur, &f.mul(&lam, v)));
                }
            }
        }
        let basis = dense.kernel_basis();
        let ok = basis.iter().all(|v| {
            eqs.iter().all(|row| {
                let mut acc = f.zero();
                for (c, coeff) in row {
                    acc = f.add(&acc, &f.mul(coeff, &v[*c as usize]));
                }
                f.is_zero(&acc)
            })
        });
        if ok {
            return Ok(basis);
        }
    }
    Err(Error::SkewNormalization(
        "sparse solve failed to certify".into(),
    ))
}

/// Reduce a rational exterior matrix mod p.
pub fn ext_reduce_mod(m: &ExtMatrix<Rationals>, fp: Fp) -> Result<ExtMatrix<Fp>> {
    let mut out = ExtMatrix::zeros(
        fp,
        m.dim,
        m.rows,
        m.cols,
        m.source_twist,
        m.target_twist,
    );
    for r in 0..m.rows {
        for c in 0..m.cols {
            for (&ix, co) in &m.at(r, c).terms {
                out.at_mut(r, c).add_term(&fp, ix, fp.from_rat(co)?);
            }
        }
    }
    Ok(out)
}

/// One modular run: syzygies of the multiplication map in wedge degree 4,
/// skew-normalized and canonically scaled, as a Chow matrix mod p.
fn construct_psi_mod(phi0_q: &ExtMatrix<Rationals>, p: u64, seed: u64) -> Result<ChowMatrix<Fp>> {
    let fp = Fp::new(p)?;
    let phi0 = ext_reduce_mod(phi0_q, fp)?;
    let syz = degreewise_syzygies_fp(&phi0, 4, seed)?;
    if syz.cols != 16 {
        return Err(Error::Degenerate(format!(
            "syzygy dimension {} != 16 mod {p}",
            syz.cols
        )));
    }
    let skew = skew_normalize(&syz, seed)?;
    u_functor(&skew, 3)
}

/// Multi-prime construction with rational reconstruction and exact
/// verification over the rationals. Returns the primitive integer matrix.
pub fn construct_psi(primes: &[u64], seed: u64) -> Result<ChowMatrix<Rationals>> {
    let q = Rationals;
    let phi0_q = build_phi0_p3()?;
    let mut residues: Vec<(u64, ChowMatrix<Fp>)> = Vec::new();
    let mut extra = [32027u64, 32029, 32051, 32057, 32059, 32063].iter();
    let mut prime_queue: Vec<u64> = primes.to_vec();
    loop {
        for &p in &prime_queue {
            if residues.iter().any(|(q, _)| *q == p) {
                continue;
            }
            let cm = construct_psi_mod(phi0_q, p, seed)?;
            residues.push((p, cm));
        }
        prime_queue.clear();
        match reconstruct_and_verify(&q, phi0_q, &residues) {
            Ok(psi) => return Ok(psi),
            Err(_) if residues.len() < 6 => {
                let Some(&p) = extra.next() else {
                    return Err(Error::SkewNormalization(
                        "reconstruction failed with all retry primes".into(),
                    ));
                };
                prime_queue.push(p);
            }
            Err(e) => return Err(e),
        }
    }
}

fn reconstruct_and_verify(
    q: &Rationals,
    phi0_q: &ExtMatrix<Rationals>,
    residues: &[(u64, ChowMatrix<Fp>)],
) -> Result<ChowMatrix<Rationals>> {
    let modulus: BigInt = residues.iter().map(|(p, _)| BigInt::from(*p)).product();
    let template = &residues[0].1;
    let (rows, cols) = (template.rows, template.cols);
    // gather the union of term supports per entry, reconstruct each coeff
    let mut entries: Vec<Vec<(IndexSet, BigRational)>> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let mut support: std::collections::BTreeSet<IndexSet> = Default::default();
            for (_, cm) in residues {
                for &(ix, _) in cm.at(r, c) {
                    support.insert(ix);
                }
            }
            let mut entry = Vec::new();
            for ix in support {
                let pairs: Vec<(u64, u64)> = residues
                    .iter()
                    .map(|(p, cm)| {
                        let v = cm
                            .at(r, c)
                            .iter()
                            .find(|(jx, _)| *jx == ix)
                            .map(|(_, v)| *v)
                            .unwrap_or(0);
                        (v, *p)
                    })
                    .collect();
                let lifted = crt_symmetric(&pairs);
                let rec = rational_reconstruct(&lifted.mod_floor(&modulus), &modulus)
                    .ok_or_else(|| {
                        Error::Degenerate("rational reconstruction failed".into())
                    })?;
                if !rec.is_zero() {
                    entry.push((ix, rec));
                }
            }
            entries.push(entry);
        }
    }
    // clear denominators to a primitive integer matrix, first nonzero > 0
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for e in &entries {
        for (_, v) in e {
            denom_lcm = denom_lcm.lcm(v.denom());
            numer_gcd = numer_gcd.gcd(v.numer());
        }
    }
    if numer_gcd.is_zero() {
        return Err(Error::Degenerate("zero matrix reconstructed".into()));
    }
    let mut entries: Vec<Vec<(IndexSet, BigRational)>> = entries;
    for e in entries.iter_mut() {
        e.sort_by_key(|(ix, _)| ix.indices());
    }
    let mut scale = BigRational::new(denom_lcm, numer_gcd);
    if let Some((_, v)) = entries.iter().flat_map(|e| e.iter()).next() {
        if (v * &scale).is_negative() {
            scale = -scale;
        }
    }
    let entries: Vec<Vec<(IndexSet, BigRational)>> = entries
        .into_iter()
        .map(|e| e.into_iter().map(|(ix, v)| (ix, v * &scale)).collect())
        .collect();
    let psi = ChowMatrix {
        field: *q,
        q: 4,
        dim: 10,
        rows,
        cols,
        entries,
    };
    verify_psi_exact(phi0_q, &psi)?;
    Ok(psi)
}

/// Exact rational verification: skewness, syzygy property against the
/// exact multiplication map, full column rank, and integrality.
pub fn verify_psi_exact(
    phi0_q: &ExtMatrix<Rationals>,
    psi: &ChowMatrix<Rationals>,
) -> Result<()> {
    let q = Rationals;
    if psi.rows != 16 || psi.cols != 16 {
        return Err(Error::DimensionMismatch("psi must be 16x16".into()));
    }
    if !psi.is_skew() {
        return Err(Error::NotSkew);
    }
    for e in &psi.entries {
        for (_, v) in e {
            if !v.denom().is_one() {
                return Err(Error::Degenerate("non-integer coefficient".into()));
            }
        }
    }
    // columns as wedge-degree-4 vectors over the 16 source generators
    let mut cols: Vec<Vec<ExtElem<Rationals>>> = Vec::with_capacity(16);
    for j in 0..16 {
        let mut col = Vec::with_capacity(16);
        for i in 0..16 {
            let mut e = ExtElem::zero(10);
            for (ix, v) in psi.at(i, j) {
                e.add_term(&q, *ix, v.clone());
            }
            col.push(e);
        }
        cols.push(col);
    }
    for col in &cols {
        let image = phi0_q.apply(col)?;
        if image.iter().any(|e| !e.is_zero()) {
            return Err(Error::Degenerate(
                "column is not a syzygy of the multiplication map".into(),
            ));
        }
    }
    // linear independence of the 16 columns
    let basis = combinations_lex(10, 4);
    let pos: BTreeMap<IndexSet, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut coeff = Mat::zeros(q, 16 * basis.len(), 16);
    for (j, col) in cols.iter().enumerate() {
        for (i, e) in col.iter().enumerate() {
            for (ix, v) in &e.terms {
                coeff.set(i * basis.len() + pos[ix], j, v.clone());
            }
        }
    }
    if coeff.rank() != 16 {
        return Err(Error::Degenerate("psi columns are dependent".into()));
    }
    Ok(())
}

const PSI_GOLDEN: &str = include_str!("../golden/psi.txt");

/// The committed integer Chow matrix, parsed once and shared.
pub fn compute_psi() -> Result<&'static ChowMatrix<Rationals>> {
    static PSI: Lazy<Result<ChowMatrix<Rationals>>> = Lazy::new(|| {
        let psi = parse_psi(PSI_GOLDEN)?;
        if !psi.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(psi)
    });
    PSI.as_ref().map_err(|e| Error::Degenerate(e.to_string()))
}

/// The golden matrix reduced into an arbitrary field.
pub fn psi_matrix<K: Field>(field: &K) -> Result<ChowMatrix<K>> {
    let psi = compute_psi()?;
    psi.map_field(field, |v| Ok(field.from_bigint(v.numer())))
}

/// Pfaffian of the substituted matrix at the diagonal anchor system.
pub fn psi_anchor<K: Field>(field: &K) -> Result<K::Elem> {
    let cm = psi_matrix(field)?;
    let sys = QuadricSystem::diagonal(field.clone());
    let pf = plucker_substitute(&cm, &sys).pfaffian()?;
    if field.is_zero(&pf) {
        return Err(Error::Degenerate(
            "anchor Pfaffian vanishes in this characteristic".into(),
        ));
    }
    Ok(pf)
}

/// Serialize in the golden format: one line per upper-triangle entry,
/// `row col : coeff[ijkl] + coeff[ijkl] + ...`, 1-based indices,
/// integer coefficients, zero entries written as 0.
pub fn export_psi(psi: &ChowMatrix<Rationals>) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    writeln!(s, "# Chow matrix of the 2-uple embedding of P^3: 16x16 skew,").unwrap();
    writeln!(s, "# linear entries in the 210 Pluecker coordinates of Gr(4,10)").unwrap();
    for r in 0..psi.rows {
        for c in r + 1..psi.cols {
            let mut terms: Vec<(Vec<usize>, &BigRational)> = psi
                .at(r, c)
                .iter()
                .map(|(ix, v)| (ix.indices(), v))
                .collect();
            terms.sort();
            let body = if terms.is_empty() {
                "0".to_string()
            } else {
                terms
                    .iter()
                    .map(|(id, v)| {
                        let digits: String = id.iter().map(|i| i.to_string()).collect();
                        format!("{}[{}]", v.numer(), digits)
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            writeln!(s, "{} {} : {}", r + 1, c + 1, body).unwrap();
        }
    }
    s
}

/// Parse the golden format, filling the lower triangle by skewness.
pub fn parse_psi(s: &str) -> Result<ChowMatrix<Rationals>> {
    let q = Rationals;
    let mut entries: Vec<Vec<(IndexSet, BigRational)>> = vec![Vec::new(); 16 * 16];
    let mut seen_any = false;
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad psi line '{line}'")))?;
        let mut it = head.split_whitespace();
        let r: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad row index".into()))?;
        let c: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad col index".into()))?;
        if r < 1 || r > 16 || c < 1 || c > 16 || r >= c {
            return Err(Error::Parse(format!("bad upper-triangle position {r} {c}")));
        }
        let (r, c) = (r - 1, c - 1);
        let body = body.trim();
        seen_any = true;
        if body == "0" {
            continue;
        }
        for term in body.split('+') {
            let term = term.trim();
            let open = term
                .find('[')
                .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?;
            let coeff: BigInt = term[..open]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in '{term}'")))?;
            let close = term
                .find(']')
                .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?;
            let idx: Vec<usize> = term[open + 1..close]
                .chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad index in '{term}'")))
                })
                .collect::<Result<_>>()?;
            let ix = IndexSet::from_indices(&idx);
            let v = BigRational::from_integer(coeff);
            entries[r * 16 + c].push((ix, v.clone()));
            entries[c * 16 + r].push((ix, -v));
        }
    }
    if !seen_any {
        return Err(Error::Parse(
            "psi golden file is empty; run the construction to regenerate it".into(),
        ));
    }
    for e in entries.iter_mut() {
        e.sort_by_key(|(ix, _)| ix.indices());
    }
    Ok(ChowMatrix {
        field: q,
        q: 4,
        dim: 10,
        rows: 16,
        cols: 16,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_space_dimensions_and_euler_condition() {
        let q = Rationals;
        let w = standard_null_form(&q);
        let s2 = null_correlation_sections(&q, 2, &w).unwrap();
        let s4 = null_correlation_sections(&q, 4, &w).unwrap();
        assert_eq!(s2.dim(), 16);
        assert_eq!(s4.dim(), 64);
        // Euler condition holds for every representative
        let x: Vec<MultiPoly<Rationals>> =
            (0..4).map(|i| MultiPoly::var(q, 4, i)).collect();
        for c in 0..16 {
            let t = s2.tuple(c);
            let mut acc = MultiPoly::zero(q, 4);
            for i in 0..4 {
                acc = acc.add(&x[i].mul(&t[i]));
            }
            assert!(acc.is_zero(), "section {c} violates the Euler condition");
        }
    }

    #[test]
    fn phi0_p3_shape_and_degrees() {
        let phi0 = build_phi0_p3().unwrap();
        assert_eq!((phi0.rows, phi0.cols), (64, 16));
        assert_eq!(phi0.entry_degree(), 1);
        phi0.validate().unwrap();
        // no kernel in wedge degree 0: the scalar piece has full rank 16
        let fp = Fp::new(32003).unwrap();
        let m = ext_reduce_mod(phi0, fp).unwrap();
        let comp = m.component_matrix(0);
        assert_eq!((comp.rows, comp.cols), (640, 16));
        assert_eq!(comp.rank(), 16);
    }

    #[test]
    fn psi_export_parse_roundtrip() {
        // synthetic small-support matrix exercising the format
        let q = Rationals;
        let mut entries: Vec<Vec<(IndexSet, BigRational)>> = vec![Vec::new(); 256];
        let ix1 = IndexSet::from_indices(&[3, 6, 8, 9]);
        let ix2 = IndexSet::from_indices(&[0, 1, 2, 9]);
        let set = |entries: &mut Vec<Vec<(IndexSet, BigRational)>>,
                   r: usize,
                   c: usize,
                   terms: Vec<(IndexSet, i64)>| {
            entries[r * 16 + c] = terms
                .iter()
                .map(|&(ix, v)| (ix, BigRational::from_integer(v.into())))
                .collect();
            entries[c * 16 + r] = terms
                .iter()
                .map(|&(ix, v)| (ix, BigRational::from_integer((-v).into())))
                .collect();
        };
        set(&mut entries, 0, 1, vec![(ix1, 4)]);
        set(&mut entries, 0, 2, vec![(ix2, -2), (ix1, 7)]);
        let mut psi = ChowMatrix {
            field: q,
            q: 4,
            dim: 10,
            rows: 16,
            cols: 16,
            entries,
        };
        psi.normalize_term_order();
        let s = export_psi(&psi);
        let parsed = parse_psi(&s).unwrap();
        assert_eq!(parsed, psi);
        assert_eq!(export_psi(&parsed), s);
    }
}

#[cfg(test)]
mod slow_tests {
    use super::*;

    /// Regenerates the committed golden file. Run explicitly:
    /// `PSI_REGEN=1 cargo test -p cubicdisc --release psi_regen -- --ignored`
    #[test]
    #[ignore]
    fn psi_regen() {
        if std::env::var("PSI_REGEN").is_err() {
            eprintln!("set PSI_REGEN=1 to overwrite the golden file");
            return;
        }
        let t0 = std::time::Instant::now();
        let psi = construct_psi(&[32003, 32009], 0xC0FFEE).unwrap();
        eprintln!("construction took {:?}", t0.elapsed());
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/psi.txt");
        std::fs::write(path, export_psi(&psi)).unwrap();
        eprintln!("wrote {path}");
    }

    #[test]
    #[ignore]
    fn psi_single_prime_timing() {
        let phi0_q = build_phi0_p3().unwrap();
        let t0 = std::time::Instant::now();
        let cm = construct_psi_mod(phi0_q, 32003, 1).unwrap();
        eprintln!("single prime construction: {:?}", t0.elapsed());
        assert_eq!((cm.rows, cm.cols), (16, 16));
        assert!(cm.is_skew());
    }
}

#[cfg(test)]
mod skew_tests {
    use super::*;

    #[test]
    fn skew_normalize_fixes_skew_input_up_to_scalar() {
        // a skew input admits C = identity; the canonical output may only
        // differ by the global scale normalization
        let fp = Fp::new(32003).unwrap();
        let phi0 = ext_reduce_mod(build_phi0_p3().unwrap(), fp).unwrap();
        let syz = degreewise_syzygies_fp(&phi0, 4, 5).unwrap();
        let skew = skew_normalize(&syz, 5).unwrap();
        let again = skew_normalize(&skew, 6).unwrap();
        // find the scalar relating them, then compare entrywise
        let mut lam: Option<u64> = None;
        'find: for r in 0..16 {
            for c in 0..16 {
                if let (Some((ix, a)), Some(_)) = (
                    skew.at(r, c).terms.iter().next(),
                    again.at(r, c).terms.iter().next(),
                ) {
                    let b = again.at(r, c).terms[ix];
                    lam = Some(fp.div(&b, a).unwrap());
                    break 'find;
                }
            }
        }
        let lam = lam.expect("nonzero matrix");
        for r in 0..16 {
            for c in 0..16 {
                assert_eq!(skew.at(r, c).scale(&fp, &lam), *again.at(r, c));
            }
        }
        // and the result of the first normalization is exactly skew
        for r in 0..16 {
            for c in 0..16 {
                let ab = skew.at(r, c);
                let ba = skew.at(c, r);
                assert_eq!(ab.neg(&fp), *ba);
            }
        }
    }

    /// The Pfaffian route does not depend on the choice of nondegenerate
    /// null-correlation form: rebuild with a random skew w and compare on
    /// random systems up to one global constant. Extended-tier runtime.
    #[test]
    #[ignore = "rebuilds the 16x16 matrix from scratch (~30 s)"]
    fn psi_independent_of_null_form_choice() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(314159);
        // random nondegenerate skew 4x4 form
        let w = loop {
            let mut w = Mat::zeros(fp, 4, 4);
            for i in 0..4 {
                for j in i + 1..4 {
                    let v = fp.rand_elem(&mut rng);
                    w.set(i, j, v);
                    w.set(j, i, fp.neg(&v));
                }
            }
            if !fp.is_zero(&w.det_fraction_free().unwrap()) {
                break w;
            }
        };
        let phi0 = build_phi0_p3_with(&fp, &w).unwrap();
        let syz = degreewise_syzygies_fp(&phi0, 4, 7).unwrap();
        assert_eq!(syz.cols, 16);
        let skew = skew_normalize(&syz, 7).unwrap();
        let alt = u_functor(&skew, 3).unwrap();
        // compare Pf(alt(sys)) with Pf(golden(sys)) on random systems:
        // a single global ratio
        let golden = psi_matrix(&fp).unwrap();
        let mut ratio = None;
        for _ in 0..20 {
            let sys = QuadricSystem::rand(fp, &mut rng);
            let a = plucker_substitute(&alt, &sys).pfaffian().unwrap();
            let b = plucker_substitute(&golden, &sys).pfaffian().unwrap();
            assert_eq!(a == 0, b == 0);
            if b != 0 {
                let r = fp.div(&a, &b).unwrap();
                match ratio {
                    None => ratio = Some(r),
                    Some(prev) => assert_eq!(prev, r),
                }
            }
        }
        assert!(ratio.is_some());
    }
}
