//! Normal forms for singular cubic surfaces, random sampling, linear
//! slices of the parameter space P^19 over finite fields, interpolation of
//! restricted determinants, and the plane-slice census of the rank-drop
//! locus V_2 against the singular points of the discriminant curve.

use crate::chow::{cubic_monomial_index, discriminant_cubic, CubicForm};
use crate::error::{Error, Result};
use crate::field::{Field, Fp, Rationals};
use crate::interp::interpolate_homogeneous;
use crate::matrix::Mat;
use crate::nanson::{nanson_symbolic, rank_at, RankProfile};
use crate::oracle::singular_points;
use crate::poly::{Monomial, MultiPoly};
use crate::unipoly::{self, eval_in_ext, FpExt, UniPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// F = F3(x1,x2,x3) + x0*F2(x1,x2,x3): singular at (1:0:0:0).
pub fn normal_form_1nodal<K: Field>(
    f3: &MultiPoly<K>,
    f2: &MultiPoly<K>,
) -> Result<CubicForm<K>> {
    let field = f3.field.clone();
    if f3.nvars != 3 || f2.nvars != 3 {
        return Err(Error::DimensionMismatch(
            "normal form inputs live in x1, x2, x3".into(),
        ));
    }
    if !f3.is_zero() && f3.homogeneous_degree() != Some(3) {
        return Err(Error::DegreeMismatch("F3 must be a cubic".into()));
    }
    if !f2.is_zero() && f2.homogeneous_degree() != Some(2) {
        return Err(Error::DegreeMismatch("F2 must be a conic".into()));
    }
    let mut coeffs = vec![field.zero(); 20];
    for (m, c) in &f3.terms {
        let exps = [0, m.exps()[0], m.exps()[1], m.exps()[2]];
        coeffs[cubic_monomial_index(&exps).unwrap()] = c.clone();
    }
    for (m, c) in &f2.terms {
        let exps = [1, m.exps()[0], m.exps()[1], m.exps()[2]];
        coeffs[cubic_monomial_index(&exps).unwrap()] = c.clone();
    }
    CubicForm::new(field, coeffs)
}

/// The 12 monomials of the binodal normal form, singular at (1:0:0:0)
/// and (0:0:0:1).
pub const BINODAL_MONOMIALS: [[u16; 4]; 12] = [
    [1, 2, 0, 0], // x0 x1^2
    [1, 1, 1, 0], // x0 x1 x2
    [1, 1, 0, 1], // x0 x1 x3
    [1, 0, 2, 0], // x0 x2^2
    [1, 0, 1, 1], // x0 x2 x3
    [0, 3, 0, 0], // x1^3
    [0, 2, 1, 0], // x1^2 x2
    [0, 1, 2, 0], // x1 x2^2
    [0, 1, 1, 1], // x1 x2 x3
    [0, 2, 0, 1], // x1^2 x3
    [0, 0, 3, 0], // x2^3
    [0, 0, 2, 1], // x2^2 x3
];

pub fn normal_form_binodal<K: Field>(field: &K, a: &[K::Elem]) -> Result<CubicForm<K>> {
    if a.len() != 12 {
        return Err(Error::DimensionMismatch(
            "binodal normal form takes 12 coefficients".into(),
        ));
    }
    let mut coeffs = vec![field.zero(); 20];
    for (k, v) in a.iter().enumerate() {
        coeffs[cubic_monomial_index(&BINODAL_MONOMIALS[k]).unwrap()] = v.clone();
    }
    CubicForm::new(field.clone(), coeffs)
}

/// A 1-nodal normal form whose conic part is a product of two linear
/// forms (rank 2), so the singularity at (1:0:0:0) degenerates beyond an
/// ordinary node.
pub fn normal_form_cuspidal<K: Field>(
    f3: &MultiPoly<K>,
    l1: &MultiPoly<K>,
    l2: &MultiPoly<K>,
) -> Result<CubicForm<K>> {
    if l1.nvars != 3 || l2.nvars != 3 {
        return Err(Error::DimensionMismatch("linear forms live in x1..x3".into()));
    }
    if (!l1.is_zero() && l1.homogeneous_degree() != Some(1))
        || (!l2.is_zero() && l2.homogeneous_degree() != Some(1))
    {
        return Err(Error::DegreeMismatch("l1, l2 must be linear".into()));
    }
    normal_form_1nodal(f3, &l1.mul(l2))
}

/// Random homogeneous form of the given degree in `nvars` variables.
pub fn rand_form<K: Field>(
    field: &K,
    nvars: usize,
    degree: u32,
    rng: &mut dyn rand::RngCore,
) -> MultiPoly<K> {
    fn monomials(nvars: usize, d: u32) -> Vec<Vec<u16>> {
        if nvars == 1 {
            return vec![vec![d as u16]];
        }
        let mut out = Vec::new();
        for e in (0..=d).rev() {
            for mut rest in monomials(nvars - 1, d - e) {
                let mut v = vec![e as u16];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }
    let mut p = MultiPoly::zero(field.clone(), nvars);
    for exps in monomials(nvars, degree) {
        p.add_term(Monomial::new(exps), field.rand_elem(rng));
    }
    p
}

pub fn rand_1nodal<K: Field>(field: &K, rng: &mut dyn rand::RngCore) -> CubicForm<K> {
    let f3 = rand_form(field, 3, 3, rng);
    let f2 = rand_form(field, 3, 2, rng);
    normal_form_1nodal(&f3, &f2).unwrap()
}

pub fn rand_binodal<K: Field>(field: &K, rng: &mut dyn rand::RngCore) -> CubicForm<K> {
    let a: Vec<K::Elem> = (0..12).map(|_| field.rand_elem(rng)).collect();
    normal_form_binodal(field, &a).unwrap()
}

pub fn rand_cuspidal<K: Field>(field: &K, rng: &mut dyn rand::RngCore) -> CubicForm<K> {
    let f3 = rand_form(field, 3, 3, rng);
    let l1 = rand_form(field, 3, 1, rng);
    let l2 = rand_form(field, 3, 1, rng);
    normal_form_cuspidal(&f3, &l1, &l2).unwrap()
}

/// A linear embedding P^m -> P^19 of the cubic parameter space, with the
/// seed that produced it.
#[derive(Clone, Debug)]
pub struct LinearSlice<K: Field> {
    pub field: K,
    pub dim: usize,
    /// (dim+1) x 20 embedding matrix, full rank.
    pub coeffs: Mat<K>,
    pub seed: u64,
}

impl<K: Field> LinearSlice<K> {
    pub fn random(field: K, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        loop {
            let coeffs = Mat::from_fn(field.clone(), dim + 1, 20, |_, _| {
                field.rand_elem(&mut rng)
            });
            if coeffs.rank() == dim + 1 {
                return LinearSlice {
                    field,
                    dim,
                    coeffs,
                    seed,
                };
            }
        }
    }

    /// The cubic at a parameter point of the slice.
    pub fn cubic_at(&self, point: &[K::Elem]) -> CubicForm<K> {
        assert_eq!(point.len(), self.dim + 1);
        let f = &self.field;
        let coeffs = (0..20)
            .map(|c| {
                let mut acc = f.zero();
                for (r, pv) in point.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(self.coeffs.at(r, c), pv));
                }
                acc
            })
            .collect();
        CubicForm::new(f.clone(), coeffs).unwrap()
    }
}

/// The 400 entries of the Nanson matrix composed with a slice: ternary
/// (for dim 2) polynomials over F_p, rows 1..16 linear, rows 17..20
/// quartic.
pub fn slice_entries(slice: &LinearSlice<Fp>) -> Result<Vec<MultiPoly<Fp>>> {
    let fp = slice.field;
    let nv = slice.dim + 1;
    let sym = nanson_symbolic();
    // images: a_c -> sum_r coeffs[r][c] s_r
    let images: Vec<MultiPoly<Fp>> = (0..20)
        .map(|c| {
            let mut p = MultiPoly::zero(fp, nv);
            for r in 0..nv {
                p.add_term(Monomial::var(nv, r), *slice.coeffs.at(r, c));
            }
            p
        })
        .collect();
    let mut out = Vec::with_capacity(400);
    for e in &sym.entries {
        let ep = e.reduce_mod(fp)?;
        out.push(ep.substitute_linear(&images));
    }
    Ok(out)
}

/// Evaluate the sliced Nanson matrix at a parameter point.
pub fn slice_matrix_at(entries: &[MultiPoly<Fp>], fp: Fp, point: &[u64]) -> Mat<Fp> {
    Mat::from_fn(fp, 20, 20, |r, c| entries[r * 20 + c].eval(point))
}

/// The restricted determinant of a dim-2 slice: the degree-32 ternary
/// discriminant curve, recovered by interpolation and verified on
/// held-out points.
pub fn restricted_determinant(slice: &LinearSlice<Fp>) -> Result<MultiPoly<Fp>> {
    let fp = slice.field;
    if fp.p() <= 64 {
        return Err(Error::FieldTooSmall {
            needed: 65,
            have: fp.p(),
        });
    }
    if slice.dim != 2 {
        return Err(Error::DimensionMismatch("slice must have dimension 2".into()));
    }
    let entries = slice_entries(slice)?;
    let mut ev = |pt: &[u64]| {
        slice_matrix_at(&entries, fp, pt)
            .det_fraction_free()
            .expect("20x20 determinant")
    };
    let gamma = interpolate_homogeneous(&fp, &mut ev, 32, 3, slice.seed)?;
    if gamma.homogeneous_degree() != Some(32) {
        return Err(Error::InconsistentEvaluations { degree: 32 });
    }
    Ok(gamma)
}

/// Stratum labels combining discriminant, rank and census evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumLabel {
    Smooth,
    OneNodal,
    BinodalLike,
    CuspidalLike,
    Deeper,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusPoint {
    pub point: Vec<u64>,
    pub hessian_rank: usize,
}

/// Classification record of a single cubic surface.
#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub input: Vec<String>,
    pub discriminant: String,
    pub discriminant_is_zero: bool,
    pub rank: RankProfile,
    pub census_prime: u64,
    pub census: Vec<CensusPoint>,
    pub label: StratumLabel,
    pub seed: u64,
}

/// Classify a rational cubic: exact discriminant and Nanson rank over Q,
/// singularity census over the small prime field.
pub fn classify(f: &CubicForm<Rationals>, p_small: u64, seed: u64) -> Result<StratumReport> {
    if p_small > 13 {
        return Err(Error::Degenerate("census prime capped at 13".into()));
    }
    let q = Rationals;
    let disc = discriminant_cubic(&q, f)?;
    let disc_zero = q.is_zero(&disc);
    let rank = rank_at(f);
    let fp = Fp::new(p_small)?;
    let reduced = CubicForm::new(
        fp,
        f.coeffs
            .iter()
            .map(|c| fp.from_rat(c))
            .collect::<Result<Vec<u64>>>()?,
    )?;
    let census: Vec<CensusPoint> = singular_points(&reduced, fp)?
        .into_iter()
        .map(|(p, h)| CensusPoint {
            point: p.coords,
            hessian_rank: h,
        })
        .collect();
    let label = if !disc_zero {
        StratumLabel::Smooth
    } else if rank.rank == 19
        && census.len() == 1
        && census[0].hessian_rank == 3
    {
        StratumLabel::OneNodal
    } else if rank.rank <= 18
        && census.len() == 2
        && census.iter().all(|c| c.hessian_rank == 3)
    {
        StratumLabel::BinodalLike
    } else if rank.rank <= 18 && census.iter().any(|c| c.hessian_rank < 3) {
        StratumLabel::CuspidalLike
    } else {
        StratumLabel::Deeper
    };
    Ok(StratumReport {
        input: f.coeffs.iter().map(|c| q.fmt_elem(c)).collect(),
        discriminant: q.fmt_elem(&disc),
        discriminant_is_zero: disc_zero,
        rank,
        census_prime: p_small,
        census,
        label,
        seed,
    })
}

/// Outcome of the extended plane-slice experiment.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneCensus {
    pub prime: u64,
    pub slice_seed: u64,
    /// distinct geometric points of V_2 on the plane
    pub v2_points: usize,
    /// all V_2 points satisfy Gamma = Gamma_s = Gamma_t = 0
    pub v2_inside_sing_gamma: bool,
    /// distinct singular points of the curve Gamma
    pub sing_points: usize,
    /// degree of the singular scheme (sum of local intersection numbers)
    pub sing_degree: usize,
    /// points with multiplicity 1 (nodes of Gamma)
    pub nodes: usize,
    /// points with multiplicity 2 (cusps of Gamma)
    pub cusps: usize,
}

/// One Galois orbit of candidate points on the slice.
struct Orbit {
    /// minimal polynomial of the s-coordinate (t = 1), or None for the
    /// point at infinity (s:t) = (1:0)
    minpoly: Option<UniPoly>,
    /// multiplicity of the orbit in the eliminant
    multiplicity: usize,
}

/// Roots of the eliminant Res_u(f, g) of two ternary forms, grouped into
/// Galois orbits with multiplicities. Degree bookkeeping: the eliminant
/// is a binary form of degree deg(f)*deg(g) in (s, t).
fn eliminant_orbits(
    fp: Fp,
    f: &MultiPoly<Fp>,
    g: &MultiPoly<Fp>,
    rng: &mut ChaCha20Rng,
) -> Result<Vec<Orbit>> {
    let df = f.homogeneous_degree().ok_or(Error::Inhomogeneous)? as usize;
    let dg = g.homogeneous_degree().ok_or(Error::Inhomogeneous)? as usize;
    // leading u-coefficients must be nonzero scalars
    let lead = |p: &MultiPoly<Fp>, d: usize| -> u64 {
        p.terms
            .iter()
            .find(|(m, _)| m.exps()[2] as usize == d)
            .map(|(_, &c)| c)
            .unwrap_or(0)
    };
    if lead(f, df) == 0 || lead(g, dg) == 0 {
        return Err(Error::Degenerate(
            "slice not in general position for elimination".into(),
        ));
    }
    let total = df * dg;
    if fp.p() <= total as u64 + 2 {
        return Err(Error::FieldTooSmall {
            needed: total as u64 + 2,
            have: fp.p(),
        });
    }
    // interpolate p(s) = Res_u(f(s,1,u), g(s,1,u)) of degree <= total
    let pts: Vec<(u64, u64)> = (0..=total as u64)
        .map(|s| {
            let fu = specialize_u(fp, f, s, 1);
            let gu = specialize_u(fp, g, s, 1);
            (s, unipoly::resultant(fp, &fu, &gu))
        })
        .collect();
    let dehom = unipoly::interpolate(fp, &pts)?;
    if dehom.is_empty() {
        return Err(Error::Degenerate("identically zero eliminant".into()));
    }
    let mut orbits = Vec::new();
    // root at infinity (s:t) = (1:0): multiplicity = degree drop
    let inf_mult = total - (dehom.len() - 1);
    if inf_mult > 0 {
        orbits.push(Orbit {
            minpoly: None,
            multiplicity: inf_mult,
        });
    }
    for (sq_factor, mult) in unipoly::squarefree_decomposition(fp, &dehom) {
        for (d, prod) in unipoly::distinct_degree(fp, &sq_factor) {
            for irr in unipoly::equal_degree(fp, &prod, d, rng) {
                orbits.push(Orbit {
                    minpoly: Some(irr),
                    multiplicity: mult,
                });
            }
        }
    }
    Ok(orbits)
}

/// Coefficients in u of a ternary form specialized at (s, t).
fn specialize_u(fp: Fp, p: &MultiPoly<Fp>, s: u64, t: u64) -> UniPoly {
    let d = p.homogeneous_degree().unwrap_or(0) as usize;
    let mut out = vec![0u64; d + 1];
    for (m, &c) in &p.terms {
        let e = m.exps();
        let v = fp.mul_raw(
            c,
            fp.mul_raw(fp.pow(s, e[0] as u64), fp.pow(t, e[1] as u64)),
        );
        out[e[2] as usize] = fp.add_raw(out[e[2] as usize], v);
    }
    unipoly::trim(&mut out);
    out
}

/// Coefficients in u over an extension field, at (s, t) in that field.
fn specialize_u_ext(
    ext: &FpExt,
    p: &MultiPoly<Fp>,
    s: &UniPoly,
    t: &UniPoly,
) -> Vec<UniPoly> {
    let d = p.homogeneous_degree().unwrap_or(0) as usize;
    let mut out = vec![ext.zero(); d + 1];
    // group terms by u-exponent, evaluate the (s,t) part
    for (m, &c) in &p.terms {
        let e = m.exps();
        let mut v = ext.embed(c);
        for _ in 0..e[0] {
            v = ext.mul(&v, s);
        }
        for _ in 0..e[1] {
            v = ext.mul(&v, t);
        }
        out[e[2] as usize] = ext.add(&out[e[2] as usize], &v);
    }
    while out.last().map_or(false, |c| ext.is_zero(c)) {
        out.pop();
    }
    out
}

/// A located point of the slice plane over an extension field.
struct SlicePoint {
    ext: FpExt,
    coords: [UniPoly; 3],
    orbit_size: usize,
    multiplicity: usize,
}

/// Locate the point of each orbit: solve for the u-coordinate via the gcd
/// of the two specialized forms over the orbit's residue field.
fn locate_orbit_point(
    fp: Fp,
    f: &MultiPoly<Fp>,
    g: &MultiPoly<Fp>,
    orbit: &Orbit,
) -> Result<SlicePoint> {
    let (ext, s, t) = match &orbit.minpoly {
        Some(mp) => {
            let ext = FpExt::new(fp, mp.clone());
            let s = ext.gen();
            (ext, s, vec![1u64])
        }
        None => {
            // point at infinity: (s:t) = (1:0)
            let ext = FpExt::new(fp, vec![0, 1]); // F_p as F_p[z]/(z)
            (ext, vec![1u64], Vec::new())
        }
    };
    let fu = specialize_u_ext(&ext, f, &s, &t);
    let gu = specialize_u_ext(&ext, g, &s, &t);
    let h = unipoly::gpoly_gcd(&ext, &fu, &gu);
    if h.len() != 2 {
        return Err(Error::Degenerate(format!(
            "fiber carries a u-locus of degree {}, slice not general",
            h.len().saturating_sub(1)
        )));
    }
    let u = ext.neg(&ext.div(&h[0], &h[1]).unwrap());
    Ok(SlicePoint {
        orbit_size: ext.degree().max(1),
        multiplicity: orbit.multiplicity,
        coords: [s, t, u],
        ext,
    })
}

/// The full extended-tier plane analysis: count V_2 points via two
/// structured 19x19 minors filtered by exact rank, and measure the
/// singular scheme of the discriminant curve via its polars.
pub fn plane_census(slice: &LinearSlice<Fp>) -> Result<PlaneCensus> {
    let fp = slice.field;
    let mut rng = ChaCha20Rng::seed_from_u64(slice.seed ^ 0x63656e737573);
    let entries = slice_entries(slice)?;
    let gamma = restricted_determinant(slice)?;
    let gamma_s = gamma.derivative(0);
    let gamma_t = gamma.derivative(1);

    // two structured 19x19 minors: drop (row 0, col 0) and (row 1, col 1)
    let minor_poly = |drop_row: usize, drop_col: usize| -> Result<MultiPoly<Fp>> {
        let rows: Vec<usize> = (0..20).filter(|&r| r != drop_row).collect();
        let cols: Vec<usize> = (0..20).filter(|&c| c != drop_col).collect();
        let mut ev = |pt: &[u64]| {
            Mat::from_fn(fp, 19, 19, |r, c| {
                entries[rows[r] * 20 + cols[c]].eval(pt)
            })
            .det_fraction_free()
            .expect("19x19 determinant")
        };
        interpolate_homogeneous(&fp, &mut ev, 31, 3, slice.seed ^ 0x6d696e6f72)
    };
    let m1 = minor_poly(0, 0)?;
    let m2 = minor_poly(1, 1)?;

    // V_2 candidates: common zeros of the two minors, filtered by rank
    let mut v2_points = 0usize;
    let mut v2_inside = true;
    for orbit in eliminant_orbits(fp, &m1, &m2, &mut rng)? {
        let pt = locate_orbit_point(fp, &m1, &m2, &orbit)?;
        let matrix = Mat::from_fn(pt.ext.clone(), 20, 20, |r, c| {
            eval_in_ext(&entries[r * 20 + c], &pt.ext, &pt.coords)
        });
        if matrix.rank() <= 18 {
            v2_points += pt.orbit_size;
            let gv = eval_in_ext(&gamma, &pt.ext, &pt.coords);
            let gs = eval_in_ext(&gamma_s, &pt.ext, &pt.coords);
            let gt = eval_in_ext(&gamma_t, &pt.ext, &pt.coords);
            if !(pt.ext.is_zero(&gv) && pt.ext.is_zero(&gs) && pt.ext.is_zero(&gt)) {
                v2_inside = false;
            }
        }
    }

    // singular scheme of Gamma via the polars Gamma_s, Gamma_t
    let mut sing_points = 0usize;
    let mut sing_degree = 0usize;
    let mut nodes = 0usize;
    let mut cusps = 0usize;
    for orbit in eliminant_orbits(fp, &gamma_s, &gamma_t, &mut rng)? {
        let pt = locate_orbit_point(fp, &gamma_s, &gamma_t, &orbit)?;
        let gv = eval_in_ext(&gamma, &pt.ext, &pt.coords);
        if pt.ext.is_zero(&gv) {
            sing_points += pt.orbit_size;
            sing_degree += pt.orbit_size * pt.multiplicity;
            match pt.multiplicity {
                1 => nodes += pt.orbit_size,
                2 => cusps += pt.orbit_size,
                _ => {}
            }
        }
    }

    Ok(PlaneCensus {
        prime: fp.p(),
        slice_seed: slice.seed,
        v2_points,
        v2_inside_sing_gamma: v2_inside,
        sing_points,
        sing_degree,
        nodes,
        cusps,
    })
}

/// Count the geometric points of V_2 on a general plane (extended tier).
pub fn count_v2_on_plane(slice: &LinearSlice<Fp>) -> Result<usize> {
    Ok(plane_census(slice)?.v2_points)
}

/// A sweep of classified random cubics with a CSV summary.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub kind: String,
    pub samples: usize,
    pub census_prime: u64,
    pub seed: u64,
    pub reports: Vec<StratumReport>,
    pub label_counts: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn csv_summary(&self) -> String {
        let mut s = String::from("kind,samples,census_prime,seed,label,count\n");
        for (label, count) in &self.label_counts {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.kind, self.samples, self.census_prime, self.seed, label, count
            ));
        }
        s
    }
}

/// Classify `n` random cubics of the given family over Q with small
/// integer coefficients.
pub fn sweep(kind: &str, n: usize, p_small: u64, seed: u64) -> Result<SweepReport> {
    let q = Rationals;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(n);
    let mut label_counts: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..n {
        let f = match kind {
            "smooth" => CubicForm::rand(q, &mut rng),
            "1-nodal" => rand_1nodal(&q, &mut rng),
            "binodal" => rand_binodal(&q, &mut rng),
            "cuspidal" => rand_cuspidal(&q, &mut rng),
            other => {
                return Err(Error::Parse(format!("unknown sweep kind '{other}'")));
            }
        };
        let report = classify(&f, p_small, seed)?;
        *label_counts
            .entry(format!("{:?}", report.label))
            .or_insert(0) += 1;
        reports.push(report);
    }
    Ok(SweepReport {
        kind: kind.into(),
        samples: n,
        census_prime: p_small,
        seed,
        reports,
        label_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::resultant_quadrics;

    fn fp() -> Fp {
        Fp::new(32003).unwrap()
    }

    #[test]
    fn one_nodal_partials_vanish_at_base_point() {
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(100);
        for _ in 0..10 {
            let f = rand_1nodal(&q, &mut rng);
            let parts = f.partials();
            let pt = [q.one(), q.zero(), q.zero(), q.zero()];
            for p in parts.to_polys() {
                assert!(q.is_zero(&p.eval(&pt)));
            }
        }
        // zero inputs give the zero form
        let z3 = MultiPoly::zero(q, 3);
        let f = normal_form_1nodal(&z3, &z3).unwrap();
        assert_eq!(f, CubicForm::zero(q));
    }

    #[test]
    fn binodal_partials_vanish_at_both_points() {
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(101);
        let f = rand_binodal(&q, &mut rng);
        let parts = f.partials();
        for pt in [
            [q.one(), q.zero(), q.zero(), q.zero()],
            [q.zero(), q.zero(), q.zero(), q.one()],
        ] {
            for p in parts.to_polys() {
                assert!(q.is_zero(&p.eval(&pt)));
            }
        }
    }

    #[test]
    fn one_nodal_discriminant_vanishes() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(102);
        for _ in 0..10 {
            let c = rand_1nodal(&f, &mut rng);
            let d = resultant_quadrics(&f, &c.partials()).unwrap();
            assert_eq!(d, 0);
        }
    }

    #[test]
    fn binodal_rank_drops_to_18() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(103);
        for _ in 0..10 {
            let c = rand_binodal(&f, &mut rng);
            let prof = rank_at(&c);
            assert!(prof.rank <= 18, "rank {}", prof.rank);
        }
    }

    #[test]
    fn one_nodal_rank_is_19() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(104);
        for _ in 0..10 {
            let c = rand_1nodal(&f, &mut rng);
            let prof = rank_at(&c);
            assert_eq!(prof.rank, 19);
        }
    }

    #[test]
    fn cuspidal_hessian_degenerates() {
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(105);
        let c = rand_cuspidal(&q, &mut rng);
        let disc = discriminant_cubic(&q, &c).unwrap();
        assert!(q.is_zero(&disc));
        let report = classify(&c, 11, 105).unwrap();
        // the singularity at (1:0:0:0) has Hessian rank <= 2
        let base = report
            .census
            .iter()
            .find(|cp| cp.point == vec![1, 0, 0, 0])
            .expect("constructed singular point in census");
        assert!(base.hessian_rank <= 2);
    }

    #[test]
    fn classify_fermat_and_cayley() {
        let q = Rationals;
        let fermat = CubicForm::fermat(q);
        let rep = classify(&fermat, 7, 1).unwrap();
        assert_eq!(rep.label, StratumLabel::Smooth);
        assert_eq!(rep.rank.rank, 20);
        let cayley = CubicForm::cayley(q);
        let rep = classify(&cayley, 11, 1).unwrap();
        assert!(rep.discriminant_is_zero);
        assert_eq!(rep.census.len(), 4);
        assert_eq!(rep.label, StratumLabel::Deeper);
    }

    #[test]
    fn classify_one_nodal_sample() {
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(106);
        // retry until the census over F_11 sees exactly the one rational node
        let mut found = false;
        for _ in 0..10 {
            let c = rand_1nodal(&q, &mut rng);
            let rep = classify(&c, 11, 106).unwrap();
            if rep.label == StratumLabel::OneNodal {
                found = true;
                break;
            }
        }
        assert!(found, "no 1-nodal sample classified as such");
    }

    #[test]
    fn restricted_determinant_degree_32_and_euler() {
        let f = fp();
        let slice = LinearSlice::random(f, 2, 2024);
        let gamma = restricted_determinant(&slice).unwrap();
        assert_eq!(gamma.homogeneous_degree(), Some(32));
        // Euler relation 32*Gamma = s G_s + t G_t + u G_u
        let s = MultiPoly::var(f, 3, 0);
        let t = MultiPoly::var(f, 3, 1);
        let u = MultiPoly::var(f, 3, 2);
        let lhs = gamma.scale(&f.from_i64(32));
        let rhs = s
            .mul(&gamma.derivative(0))
            .add(&t.mul(&gamma.derivative(1)))
            .add(&u.mul(&gamma.derivative(2)));
        assert_eq!(lhs, rhs);
        // direct evaluation agrees on random points
        let entries = slice_entries(&slice).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(107);
        for _ in 0..50 {
            let pt: Vec<u64> = (0..3).map(|_| f.rand_elem(&mut rng)).collect();
            let direct = slice_matrix_at(&entries, f, &pt)
                .det_fraction_free()
                .unwrap();
            assert_eq!(gamma.eval(&pt), direct);
        }
    }

    #[test]
    fn restricted_determinant_node_choice_independent() {
        let f = fp();
        let slice = LinearSlice::random(f, 2, 2025);
        let entries = slice_entries(&slice).unwrap();
        let g1 = restricted_determinant(&slice).unwrap();
        // a second, random node set
        let mut rng = ChaCha20Rng::seed_from_u64(108);
        let nodes: Vec<Vec<u64>> = (0..561)
            .map(|_| (0..3).map(|_| f.rand_elem(&mut rng)).collect())
            .collect();
        let mut ev = |pt: &[u64]| {
            slice_matrix_at(&entries, f, pt)
                .det_fraction_free()
                .unwrap()
        };
        let g2 = crate::interp::interpolate_homogeneous_at(&f, &mut ev, 32, 3, &nodes, 109)
            .unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn sweep_smoke() {
        let report = sweep("binodal", 3, 11, 42).unwrap();
        assert_eq!(report.reports.len(), 3);
        let csv = report.csv_summary();
        assert!(csv.contains("binodal"));
        for r in &report.reports {
            assert!(r.rank.rank <= 18);
        }
    }
}
