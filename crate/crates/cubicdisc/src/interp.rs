//! Exact recovery of a homogeneous polynomial from black-box evaluations.
//!
//! Nodes default to the principal lattice of the standard simplex in the
//! affine chart where the last coordinate is 1; that lattice is poised for
//! total-degree interpolation whenever the scalars 0..=d are distinct in
//! the field. The result is checked against the evaluator on held-out
//! random points and inconsistencies are reported, never smoothed over.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::poly::{Monomial, MultiPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// All monomials of total degree <= d in `nvars` variables, in a fixed
/// (graded-lex ascending) order.
fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u16; nvars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u16>, pos: usize, left: u32) {
        if pos == current.len() {
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in 0..=left {
            current[pos] = e as u16;
            rec(out, current, pos + 1, left - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, d);
    out.sort();
    out
}

/// Principal lattice nodes in projective coordinates (last coordinate 1).
fn lattice_nodes<K: Field>(field: &K, nvars: usize, d: u32) -> Vec<Vec<K::Elem>> {
    monomials_up_to(nvars - 1, d)
        .into_iter()
        .map(|m| {
            let mut pt: Vec<K::Elem> = m
                .exps()
                .iter()
                .map(|&e| field.from_i64(e as i64))
                .collect();
            pt.push(field.one());
            pt
        })
        .collect()
}

/// Recover the unique homogeneous polynomial of degree `d` in `nvars`
/// variables agreeing with `evaluator` everywhere, from lattice nodes.
pub fn interpolate_homogeneous<K: Field>(
    field: &K,
    evaluator: &mut dyn FnMut(&[K::Elem]) -> K::Elem,
    d: u32,
    nvars: usize,
    seed: u64,
) -> Result<MultiPoly<K>> {
    let ch = field.characteristic();
    if ch != 0 && ch <= d as u64 {
        return Err(Error::FieldTooSmall {
            needed: d as u64 + 1,
            have: ch,
        });
    }
    let nodes = lattice_nodes(field, nvars, d);
    interpolate_homogeneous_at(field, evaluator, d, nvars, &nodes, seed)
}

/// Same, from a caller-supplied node set (must be poised).
pub fn interpolate_homogeneous_at<K: Field>(
    field: &K,
    evaluator: &mut dyn FnMut(&[K::Elem]) -> K::Elem,
    d: u32,
    nvars: usize,
    nodes: &[Vec<K::Elem>],
    seed: u64,
) -> Result<MultiPoly<K>> {
    assert!(nvars >= 1);
    let basis = monomials_up_to(nvars - 1, d);
    let n = basis.len();
    if nodes.len() < n {
        return Err(Error::Degenerate(format!(
            "need {n} nodes for degree {d} in {nvars} variables, got {}",
            nodes.len()
        )));
    }
    // Vandermonde system on the dehomogenized basis
    let vmat = Mat::from_fn(field.clone(), n, n, |r, c| {
        let mut acc = field.one();
        for (i, &e) in basis[c].exps().iter().enumerate() {
            for _ in 0..e {
                acc = field.mul(&acc, &nodes[r][i]);
            }
        }
        // scale by (last coordinate)^(d - deg): supports general
        // projective nodes, trivial for affine chart nodes
        let last = &nodes[r][nvars - 1];
        for _ in 0..(d - basis[c].deg()) {
            acc = field.mul(&acc, last);
        }
        acc
    });
    let values: Vec<K::Elem> = (0..n).map(|r| evaluator(&nodes[r])).collect();
    let coeffs = vmat
        .solve(&values)
        .ok_or(Error::Degenerate("interpolation nodes not poised".into()))?;
    let mut dehom = MultiPoly::zero(field.clone(), nvars - 1);
    for (m, c) in basis.into_iter().zip(coeffs) {
        dehom.add_term(m, c);
    }
    let result = dehom.homogenize_last(d)?;

    // held-out verification on fresh random points
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x686f6c646f7574);
    for _ in 0..50 {
        let pt: Vec<K::Elem> = (0..nvars).map(|_| field.rand_elem(&mut rng)).collect();
        if result.eval(&pt) != evaluator(&pt) {
            return Err(Error::InconsistentEvaluations { degree: d as usize });
        }
    }
    Ok(result)
}
