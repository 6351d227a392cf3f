//! Nanson's 20x20 determinantal representation of the resultant of four
//! quaternary quadrics: sixteen rows from the products x_j * Q_i and four
//! rows from the partials of the Jacobian determinant, in the fixed cubic
//! monomial order. The determinant equals the resultant up to the
//! diagonal-anchor constant; rank drops cut out the strata V_k.

use crate::chow::{
    cubic_monomial_index, det_poly_matrix, CubicForm, QuadricSystem, CUBIC_MONOMIALS,
};
use crate::error::{Error, Result};
use crate::field::{Field, Fp, Rationals};
use crate::matrix::Mat;
use crate::poly::{Monomial, MultiPoly};
use once_cell::sync::Lazy;
use serde::Serialize;

/// Row labels: f_1..f_16 are x_j * Q_i ordered (Q1x0, Q1x1, ..., Q4x3);
/// f_17..f_20 are the partials of det(Jacobian).
pub fn row_label(r: usize) -> String {
    if r < 16 {
        format!("x{}*Q{}", r % 4, r / 4 + 1)
    } else {
        format!("d/dx{} detJac", r - 16)
    }
}

/// Coefficient vector of a cubic polynomial in the fixed monomial order.
fn cubic_row<K: Field>(field: &K, p: &MultiPoly<K>) -> Vec<K::Elem> {
    let mut row = vec![field.zero(); 20];
    for (m, c) in &p.terms {
        let idx = cubic_monomial_index(m.exps()).expect("cubic monomial");
        row[idx] = c.clone();
    }
    row
}

/// The evaluated Nanson matrix of a quadric system.
pub fn nanson_matrix<K: Field>(sys: &QuadricSystem<K>) -> Mat<K> {
    let f = &sys.field;
    let polys = sys.to_polys();
    let mut rows: Vec<Vec<K::Elem>> = Vec::with_capacity(20);
    for q in &polys {
        for j in 0..4 {
            let xq = q.mul(&MultiPoly::var(f.clone(), 4, j));
            rows.push(cubic_row(f, &xq));
        }
    }
    // Jacobian (dQ_i/dx_j), its determinant, then the four partials
    let jac: Vec<Vec<MultiPoly<K>>> = polys
        .iter()
        .map(|q| (0..4).map(|j| q.derivative(j)).collect())
        .collect();
    let detj = det_poly_matrix(&jac).expect("jacobian determinant");
    for j in 0..4 {
        rows.push(cubic_row(f, &detj.derivative(j)));
    }
    Mat::from_rows(f.clone(), rows)
}

/// Determinant of the Nanson matrix, normalized by the diagonal anchor
/// (the same normalization as the Pfaffian route).
pub fn nanson_det<K: Field>(field: &K, sys: &QuadricSystem<K>) -> Result<K::Elem> {
    let det = nanson_matrix(sys).det_fraction_free()?;
    let anchor = nanson_anchor(field)?;
    field.div(&det, &anchor)
}

/// det of the Nanson matrix at x0^2, x1^2, x2^2, x3^2; equals +-16^4.
pub fn nanson_anchor<K: Field>(field: &K) -> Result<K::Elem> {
    let sys = QuadricSystem::diagonal(field.clone());
    let a = nanson_matrix(&sys).det_fraction_free()?;
    if field.is_zero(&a) {
        return Err(Error::Degenerate(
            "Nanson anchor vanishes in this characteristic".into(),
        ));
    }
    Ok(a)
}

/// Rank of the evaluated Nanson matrix with the V_k stratum flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub rank: usize,
    /// flags[k-1] says rank <= 20 - k, for k = 1..4.
    pub flags: [bool; 4],
}

impl RankProfile {
    pub fn from_rank(rank: usize) -> Self {
        let flags = [rank <= 19, rank <= 18, rank <= 17, rank <= 16];
        RankProfile { rank, flags }
    }
}

/// Rank profile of the Nanson matrix at the partial-derivative system
/// of a cubic form.
pub fn rank_at<K: Field>(f: &CubicForm<K>) -> RankProfile {
    let m = nanson_matrix(&f.partials());
    RankProfile::from_rank(m.rank())
}

/// Exact minor of the evaluated Nanson matrix on given row/column sets.
pub fn minor_at<K: Field>(
    f: &CubicForm<K>,
    rows: &[usize],
    cols: &[usize],
) -> Result<K::Elem> {
    if rows.len() != cols.len() || rows.len() > 20 {
        return Err(Error::DimensionMismatch(
            "minor needs equally sized row/col sets of size <= 20".into(),
        ));
    }
    if rows.iter().chain(cols).any(|&i| i >= 20) {
        return Err(Error::DimensionMismatch("index out of range".into()));
    }
    let m = nanson_matrix(&f.partials());
    let sub = Mat::from_fn(f.field.clone(), rows.len(), cols.len(), |r, c| {
        m.at(rows[r], cols[c]).clone()
    });
    sub.det_fraction_free()
}

/// The symbolic Nanson matrix of the generic cubic: entries are
/// polynomials over Q in the 20 coefficients a0..a19. Rows 1..16 are
/// linear, rows 17..20 have total degree 4.
pub struct NansonSymbolic {
    /// 20x20 entries, row-major, polynomials in 20 variables.
    pub entries: Vec<MultiPoly<Rationals>>,
}

impl NansonSymbolic {
    pub fn at(&self, r: usize, c: usize) -> &MultiPoly<Rationals> {
        &self.entries[r * 20 + c]
    }

    /// Specialize the symbolic matrix at a cubic's coefficients.
    pub fn specialize<K: Field>(&self, field: &K, coeffs: &[K::Elem]) -> Mat<K> {
        assert_eq!(coeffs.len(), 20);
        Mat::from_fn(field.clone(), 20, 20, |r, c| {
            eval_rational_poly(field, self.at(r, c), coeffs)
        })
    }

    /// Entries reduced mod p, as polynomials over F_p.
    pub fn reduce_mod(&self, fp: Fp) -> Result<Vec<MultiPoly<Fp>>> {
        self.entries
            .iter()
            .map(|e| e.reduce_mod(fp))
            .collect()
    }
}

/// Evaluate a Q-coefficient polynomial at points of another field
/// (the coefficients are integers by construction).
fn eval_rational_poly<K: Field>(
    field: &K,
    p: &MultiPoly<Rationals>,
    point: &[K::Elem],
) -> K::Elem {
    let mut acc = field.zero();
    for (m, c) in &p.terms {
        debug_assert!(num_traits::One::is_one(c.denom()));
        let mut t = field.from_bigint(c.numer());
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                t = field.mul(&t, &point[i]);
            }
        }
        acc = field.add(&acc, &t);
    }
    acc
}

/// Build the symbolic matrix in Q[a0..a19][x0..x3] and split off the
/// x-coefficients. Cached after first construction.
pub fn nanson_symbolic() -> &'static NansonSymbolic {
    static SYM: Lazy<NansonSymbolic> = Lazy::new(build_symbolic);
    &SYM
}

fn build_symbolic() -> NansonSymbolic {
    let q = Rationals;
    let nv = 24; // a0..a19, then x0..x3
    let xvar = |j: usize| MultiPoly::<Rationals>::var(q, nv, 20 + j);
    // generic cubic F = sum a_m mon_m(x)
    let mut generic = MultiPoly::zero(q, nv);
    for (k, mon) in CUBIC_MONOMIALS.iter().enumerate() {
        let mut exps = vec![0u16; nv];
        exps[k] = 1;
        for v in 0..4 {
            exps[20 + v] = mon[v];
        }
        generic.add_term(Monomial::new(exps), q.one());
    }
    let partials: Vec<MultiPoly<Rationals>> =
        (0..4).map(|i| generic.derivative(20 + i)).collect();
    let mut entries: Vec<MultiPoly<Rationals>> = Vec::with_capacity(400);
    for qi in &partials {
        for j in 0..4 {
            let xq = qi.mul(&xvar(j));
            entries.extend(split_x_coefficients(&xq));
        }
    }
    let hessian: Vec<Vec<MultiPoly<Rationals>>> = partials
        .iter()
        .map(|p| (0..4).map(|j| p.derivative(20 + j)).collect())
        .collect();
    let detj = det_poly_matrix(&hessian).expect("generic jacobian determinant");
    for j in 0..4 {
        entries.extend(split_x_coefficients(&detj.derivative(20 + j)));
    }
    // reorder: split_x_coefficients produced one row per call in order
    NansonSymbolic { entries }
}

/// Coefficients of each of the 20 cubic x-monomials, as polynomials in
/// the 20 a-variables.
fn split_x_coefficients(p: &MultiPoly<Rationals>) -> Vec<MultiPoly<Rationals>> {
    let q = Rationals;
    let mut out = vec![MultiPoly::zero(q, 20); 20];
    for (m, c) in &p.terms {
        let exps = m.exps();
        let xpart: [u16; 4] = [exps[20], exps[21], exps[22], exps[23]];
        let idx = cubic_monomial_index(&xpart).expect("cubic x-part");
        out[idx].add_term(Monomial::new(exps[..20].to_vec()), c.clone());
    }
    out
}

/// Golden-file serialization: one line per entry,
/// `row col : coeff;e0 e1 .. e19 | coeff;exps | ...`, 1-based indices,
/// terms in descending graded-lex order, zero entries written as 0.
pub fn export_nanson_symbolic(sym: &NansonSymbolic) -> String {
    use std::fmt::Write;
    let q = Rationals;
    let mut s = String::new();
    writeln!(s, "# symbolic Nanson matrix of the generic quaternary cubic").unwrap();
    writeln!(s, "# entries are polynomials in the 20 coefficients a0..a19").unwrap();
    for r in 0..20 {
        for c in 0..20 {
            let p = sym.at(r, c);
            let body = if p.is_zero() {
                "0".to_string()
            } else {
                p.terms
                    .iter()
                    .rev()
                    .map(|(m, co)| {
                        let exps: Vec<String> =
                            m.exps().iter().map(|e| e.to_string()).collect();
                        format!("{};{}", q.fmt_elem(co), exps.join(" "))
                    })
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            writeln!(s, "{} {} : {}", r + 1, c + 1, body).unwrap();
        }
    }
    s
}

pub fn parse_nanson_symbolic(s: &str) -> Result<NansonSymbolic> {
    let q = Rationals;
    let mut entries = vec![MultiPoly::zero(q, 20); 400];
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad nanson line '{line}'")))?;
        let mut it = head.split_whitespace();
        let r: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad row".into()))?;
        let c: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad col".into()))?;
        if !(1..=20).contains(&r) || !(1..=20).contains(&c) {
            return Err(Error::Parse("index out of range".into()));
        }
        let body = body.trim();
        if body == "0" {
            continue;
        }
        let mut p = MultiPoly::zero(q, 20);
        for term in body.split('|') {
            let (coeff, exps) = term
                .trim()
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?;
            let co = q.parse_elem(coeff)?;
            let exps: Vec<u16> = exps
                .split_whitespace()
                .map(|t| {
                    t.parse::<u16>()
                        .map_err(|_| Error::Parse(format!("bad exponent '{t}'")))
                })
                .collect::<Result<_>>()?;
            if exps.len() != 20 {
                return Err(Error::Parse("term needs 20 exponents".into()));
            }
            p.add_term(Monomial::new(exps), co);
        }
        entries[(r - 1) * 20 + (c - 1)] = p;
    }
    Ok(NansonSymbolic { entries })
}


#[cfg(test)]
mod golden_tests {
    use super::*;

    const NANSON_GOLDEN: &str = include_str!("../golden/nanson_symbolic.txt");

    /// Regenerate with:
    /// `NANSON_REGEN=1 cargo test -p cubicdisc nanson_regen -- --ignored`
    #[test]
    #[ignore]
    fn nanson_regen() {
        if std::env::var("NANSON_REGEN").is_err() {
            eprintln!("set NANSON_REGEN=1 to overwrite the golden file");
            return;
        }
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/nanson_symbolic.txt");
        std::fs::write(path, export_nanson_symbolic(nanson_symbolic())).unwrap();
        eprintln!("wrote {path}");
    }

    #[test]
    fn committed_golden_matches_construction() {
        let sym = nanson_symbolic();
        assert_eq!(export_nanson_symbolic(sym), NANSON_GOLDEN);
    }
}

#[cfg(test)]
mod strata_minor_tests {
    use super::*;
    use crate::strata::rand_binodal;
    use rand::Rng;
    use rand_chacha::ChaCha20Rng;
    use rand::SeedableRng;

    #[test]
    fn binodal_19x19_minors_vanish() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(95);
        let f = rand_binodal(&fp, &mut rng);
        for _ in 0..10 {
            let drop_row = rng.gen_range(0..20);
            let drop_col = rng.gen_range(0..20);
            let rows: Vec<usize> = (0..20).filter(|&r| r != drop_row).collect();
            let cols: Vec<usize> = (0..20).filter(|&c| c != drop_col).collect();
            let m = minor_at(&f, &rows, &cols).unwrap();
            assert_eq!(m, 0);
        }
    }

    #[test]
    fn absolute_resultant_invariant_under_permutations() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(96);
        let sys = QuadricSystem::rand(fp, &mut rng);
        let base = nanson_det(&fp, &sys).unwrap();
        for (i, j) in [(0usize, 1usize), (1, 3), (2, 3)] {
            let swapped = nanson_det(&fp, &sys.swap_quadrics(i, j)).unwrap();
            assert!(swapped == base || swapped == fp.neg(&base));
        }
        // 3-cycle: even permutation, sign preserved
        let cycled = sys.swap_quadrics(0, 1).swap_quadrics(1, 2);
        assert_eq!(nanson_det(&fp, &cycled).unwrap(), base);
    }
}
