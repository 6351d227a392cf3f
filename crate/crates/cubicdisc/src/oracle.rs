//! Independent ground truth: the Sylvester matrix for binary forms, the
//! classical Macaulay-matrix resultant for four quaternary quadrics, and
//! exhaustive projective point searches over small prime fields.

use crate::chow::{CubicForm, QuadricSystem};
use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::matrix::Mat;
use crate::poly::MultiPoly;
use crate::psi::monomials_deg;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// A point of P^(n-1)(F_p), normalized so the first nonzero coordinate
/// is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjPoint {
    pub coords: Vec<u64>,
}

impl ProjPoint {
    pub fn normalized(fp: Fp, coords: Vec<u64>) -> Result<Self> {
        let Some(lead) = coords.iter().position(|&c| c != 0) else {
            return Err(Error::Degenerate("zero vector is not projective".into()));
        };
        let inv = fp.inv(&coords[lead])?;
        Ok(ProjPoint {
            coords: coords.iter().map(|&c| fp.mul_raw(c, inv)).collect(),
        })
    }
}

/// All points of P^3(F_p): p^3 + p^2 + p + 1 of them.
pub fn proj3_points(fp: Fp) -> Vec<ProjPoint> {
    let p = fp.p();
    let mut out = Vec::new();
    for lead in 0..4usize {
        let mut tail = vec![0u64; 3 - lead];
        loop {
            let mut coords = vec![0u64; lead];
            coords.push(1);
            coords.extend(&tail);
            out.push(ProjPoint { coords });
            // increment tail
            let mut i = tail.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                if i == 0 {
                    break;
                }
            }
            if tail.iter().all(|&c| c == 0) {
                break;
            }
        }
        if lead == 3 {
            break;
        }
    }
    out
}

/// Determinant of the Sylvester matrix of two binary degree-d forms,
/// coefficient vectors (a_0..a_d) for a_0 x0^d + ... + a_d x1^d, laid out
/// as d shifted rows of f over d shifted rows of g.
pub fn sylvester_resultant<K: Field>(field: &K, f: &[K::Elem], g: &[K::Elem]) -> Result<K::Elem> {
    if f.len() != g.len() || f.len() < 2 {
        return Err(Error::DegreeMismatch(
            "binary forms must share a degree >= 1".into(),
        ));
    }
    let d = f.len() - 1;
    let size = 2 * d;
    let m = Mat::from_fn(field.clone(), size, size, |r, c| {
        let (coeffs, shift) = if r < d { (f, r) } else { (g, r - d) };
        if c >= shift && c - shift <= d {
            coeffs[c - shift].clone()
        } else {
            field.zero()
        }
    });
    m.det_fraction_free()
}

/// Degree-5 quaternary monomials and the Macaulay partition: each x^a is
/// assigned to the least i with x_i^2 | x^a.
fn macaulay_rows() -> (Vec<[u16; 4]>, Vec<usize>) {
    let monoms = monomials_deg(5);
    let owners = monoms
        .iter()
        .map(|m| (0..4).find(|&i| m[i] >= 2).expect("degree 5 in 4 variables"))
        .collect();
    (monoms, owners)
}

fn macaulay_matrix<K: Field>(field: &K, sys: &QuadricSystem<K>) -> Mat<K> {
    let (monoms, owners) = macaulay_rows();
    let n = monoms.len(); // 56
    let index = |m: &[u16; 4]| monoms.iter().position(|t| t == m).unwrap();
    let mut mat = Mat::zeros(field.clone(), n, n);
    let quad_monoms = monomials_deg(2);
    for (r, (mon, &owner)) in monoms.iter().zip(&owners).enumerate() {
        // row = (x^a / x_owner^2) * Q_owner
        let mut base = *mon;
        base[owner] -= 2;
        for (k, qm) in quad_monoms.iter().enumerate() {
            let coeff = &sys.rows[owner][k];
            if field.is_zero(coeff) {
                continue;
            }
            let mut t = base;
            for v in 0..4 {
                t[v] += qm[v];
            }
            let c = index(&t);
            let cur = mat.at(r, c).clone();
            mat.set(r, c, field.add(&cur, coeff));
        }
    }
    mat
}

/// Classical Macaulay resultant at critical degree 5: det of the 56x56
/// coefficient matrix divided by the det of its submatrix on non-reduced
/// monomials (those divisible by x_i^2 for at least two i), normalized at
/// the diagonal anchor. Retries with unimodular changes of variables when
/// the denominator minor vanishes.
pub fn macaulay_resultant_quadrics<K: Field>(
    field: &K,
    sys: &QuadricSystem<K>,
) -> Result<K::Elem> {
    let anchor_sys = QuadricSystem::diagonal(field.clone());
    let raw = macaulay_quotient(field, sys);
    let value = match raw {
        Some(v) => v,
        None => {
            // denominator minor vanished: random unimodular substitution
            let mut rng = ChaCha20Rng::seed_from_u64(0x6d616361756c6179);
            let mut found = None;
            for _ in 0..24 {
                let a = random_unimodular(field, &mut rng);
                if let Some(v) = macaulay_quotient(field, &sys.transform(&a)) {
                    found = Some(v);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::Degenerate("macaulay denominator vanished for all retries".into())
            })?
        }
    };
    let anchor = macaulay_quotient(field, &anchor_sys)
        .ok_or_else(|| Error::Degenerate("macaulay anchor degenerate".into()))?;
    field.div(&value, &anchor)
}

/// det/det' when the denominator minor is nonzero.
fn macaulay_quotient<K: Field>(field: &K, sys: &QuadricSystem<K>) -> Option<K::Elem> {
    let (monoms, _) = macaulay_rows();
    let mat = macaulay_matrix(field, sys);
    // non-reduced monomials: divisible by x_i^2 for >= 2 indices
    let non_reduced: Vec<usize> = monoms
        .iter()
        .enumerate()
        .filter(|(_, m)| (0..4).filter(|&i| m[i] >= 2).count() >= 2)
        .map(|(i, _)| i)
        .collect();
    let sub = Mat::from_fn(
        field.clone(),
        non_reduced.len(),
        non_reduced.len(),
        |r, c| mat.at(non_reduced[r], non_reduced[c]).clone(),
    );
    let den = sub.det_fraction_free().ok()?;
    if field.is_zero(&den) {
        return None;
    }
    let num = mat.det_fraction_free().ok()?;
    field.div(&num, &den).ok()
}

/// Random SL(4) matrix: randomize, then scale one row to force det 1.
pub fn random_unimodular<K: Field>(field: &K, rng: &mut dyn rand::RngCore) -> Mat<K> {
    loop {
        let m = Mat::from_fn(field.clone(), 4, 4, |_, _| {
            field.from_i64((rng.next_u64() % 19) as i64 - 9)
        });
        let d = m.det_fraction_free().unwrap();
        if field.is_zero(&d) {
            continue;
        }
        let dinv = field.inv(&d).unwrap();
        let mut out = m;
        for c in 0..4 {
            let v = field.mul(out.at(0, c), &dinv);
            out.set(0, c, v);
        }
        return out;
    }
}

/// All points of P^3(F_p) where the four partials of f vanish, each with
/// the rank of the 3x3 Hessian of the affine local equation there.
pub fn singular_points(f: &CubicForm<Fp>, fp: Fp) -> Result<Vec<(ProjPoint, usize)>> {
    if fp.p() > 13 {
        return Err(Error::Degenerate(
            "exhaustive enumeration capped at p = 13".into(),
        ));
    }
    let partials = f.partials();
    let grads: Vec<MultiPoly<Fp>> = partials.to_polys();
    let poly = f.to_poly();
    let mut out = Vec::new();
    for pt in proj3_points(fp) {
        if grads.iter().all(|g| g.eval(&pt.coords) == 0) {
            let rank = local_hessian_rank(fp, &poly, &pt);
            out.push((pt, rank));
        }
    }
    Ok(out)
}

/// Rank of the Hessian of the local (affine chart) equation at a singular
/// point: rank 3 is an ordinary node, lower is a cusp or worse.
fn local_hessian_rank(fp: Fp, poly: &MultiPoly<Fp>, pt: &ProjPoint) -> usize {
    let lead = pt.coords.iter().position(|&c| c == 1).unwrap();
    let others: Vec<usize> = (0..4).filter(|&v| v != lead).collect();
    // second partials of the chart equation = second partials of poly
    // w.r.t. the chart variables, evaluated at the point
    let h = Mat::from_fn(fp, 3, 3, |a, b| {
        poly.derivative(others[a])
            .derivative(others[b])
            .eval(&pt.coords)
    });
    h.rank()
}

/// All common projective zeros of the four quadrics over F_p.
pub fn common_zeros(sys: &QuadricSystem<Fp>, fp: Fp) -> Result<Vec<ProjPoint>> {
    if fp.p() > 13 {
        return Err(Error::Degenerate(
            "exhaustive enumeration capped at p = 13".into(),
        ));
    }
    let polys = sys.to_polys();
    Ok(proj3_points(fp)
        .into_iter()
        .filter(|pt| polys.iter().all(|q| q.eval(&pt.coords) == 0))
        .collect())
}

/// Build a random quadric system guaranteed to vanish at a given point.
pub fn system_through_point<K: Field>(
    field: &K,
    point: &[K::Elem; 4],
    rng: &mut dyn rand::RngCore,
) -> QuadricSystem<K> {
    // random quadrics minus their value scaled on a quadric nonzero at pt
    loop {
        let sys = QuadricSystem::rand(field.clone(), rng);
        let polys = sys.to_polys();
        // find a correction quadric nonvanishing at the point
        let probe = QuadricSystem::diagonal(field.clone()).to_polys();
        let Some(corr) = probe.iter().find(|q| !field.is_zero(&q.eval(point))) else {
            continue;
        };
        let cval = corr.eval(point);
        let fixed: Vec<MultiPoly<K>> = polys
            .iter()
            .map(|q| {
                let v = q.eval(point);
                let lam = field.div(&v, &cval).unwrap();
                q.sub(&corr.scale(&lam))
            })
            .collect();
        return QuadricSystem::from_polys(field.clone(), &fixed).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn proj3_point_count() {
        let fp = Fp::new(7).unwrap();
        assert_eq!(proj3_points(fp).len(), (343 + 49 + 7 + 1) as usize);
    }

    #[test]
    fn sylvester_anchor_is_unit() {
        // f = x0^3, g = x1^3: band matrix, determinant forced to +-1
        let q = Rationals;
        let f = [q.one(), q.zero(), q.zero(), q.zero()];
        let g = [q.zero(), q.zero(), q.zero(), q.one()];
        let d = sylvester_resultant(&q, &f, &g).unwrap();
        assert_eq!(d, q.one());
    }

    #[test]
    fn sylvester_common_factor_vanishes() {
        // both divisible by (x0 - x1): f = (x0-x1)(x0^2), g = (x0-x1)(x1^2)
        let q = Rationals;
        // f = x0^3 - x0^2 x1 -> (1, -1, 0, 0)
        let f = [q.one(), q.from_i64(-1), q.zero(), q.zero()];
        // g = x0 x1^2 - x1^3 -> (0, 0, 1, -1)
        let g = [q.zero(), q.zero(), q.one(), q.from_i64(-1)];
        assert!(q.is_zero(&sylvester_resultant(&q, &f, &g).unwrap()));
    }

    #[test]
    fn macaulay_diagonal_anchor() {
        let fp = Fp::new(32003).unwrap();
        let sys = QuadricSystem::diagonal(fp);
        let r = macaulay_resultant_quadrics(&fp, &sys).unwrap();
        assert_eq!(r, 1);
    }

    #[test]
    fn macaulay_detects_common_zero() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let point = [fp.from_i64(1), fp.from_i64(2), fp.from_i64(3), fp.from_i64(5)];
        let sys = system_through_point(&fp, &point, &mut rng);
        // sanity: all four vanish at the point
        for q in sys.to_polys() {
            assert_eq!(q.eval(&point), 0);
        }
        let r = macaulay_resultant_quadrics(&fp, &sys).unwrap();
        assert_eq!(r, 0);
    }

    #[test]
    fn macaulay_multiplicative_in_one_row() {
        let fp = Fp::new(32003).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let sys = QuadricSystem::rand(fp, &mut rng);
        let lam = 7u64;
        let scaled = sys.scale_quadric(0, &lam);
        let r1 = macaulay_resultant_quadrics(&fp, &sys).unwrap();
        let r2 = macaulay_resultant_quadrics(&fp, &scaled).unwrap();
        assert_eq!(r2, fp.mul(&fp.pow(lam, 8), &r1));
    }

    #[test]
    fn fermat_has_no_singular_points_over_f7() {
        let fp = Fp::new(7).unwrap();
        let f = CubicForm::fermat(fp);
        assert!(singular_points(&f, fp).unwrap().is_empty());
    }

    #[test]
    fn cayley_has_four_nodes_over_f11() {
        let fp = Fp::new(11).unwrap();
        let f = CubicForm::cayley(fp);
        let sings = singular_points(&f, fp).unwrap();
        assert_eq!(sings.len(), 4);
        for (pt, rank) in &sings {
            assert_eq!(*rank, 3, "vertex {:?} should be an ordinary node", pt);
            // the four coordinate points
            assert_eq!(pt.coords.iter().filter(|&&c| c != 0).count(), 1);
        }
    }

    #[test]
    fn common_zeros_of_diagonal_empty() {
        let fp = Fp::new(11).unwrap();
        let sys = QuadricSystem::diagonal(fp);
        assert!(common_zeros(&sys, fp).unwrap().is_empty());
    }

    #[test]
    fn common_zeros_match_singular_points() {
        let fp = Fp::new(11).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        // a 1-nodal style cubic: singular at (1:0:0:0)
        let mut coeffs = vec![0u64; 20];
        // monomials without x0^3, x0^2 x_j: indices 4.. are fine
        for idx in 4..20 {
            coeffs[idx] = fp.rand_elem(&mut rng);
        }
        // kill x0^2 terms too (indices 1..=3) and x0^3 (0): already zero
        let f = CubicForm::new(fp, coeffs).unwrap();
        let sp: Vec<ProjPoint> = singular_points(&f, fp)
            .unwrap()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let cz = common_zeros(&f.partials(), fp).unwrap();
        assert_eq!(sp, cz);
    }
}
