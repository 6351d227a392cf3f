//! The acceptance suites: every criterion is pinned here with its exact
//! tolerance (identity, unless stated otherwise) and can be run both from
//! `cargo test` and from the CLI `verify` subcommand.

use crate::chow::{
    chow_matrix_rnc, det_poly_matrix, discriminant_cubic, resultant_quadrics, CubicForm,
    QuadricSystem,
};
use crate::error::Result;
use crate::exterior::{combinations_lex, degreewise_syzygies_fp, IndexSet};
use crate::field::{Field, Fp, Rationals};
use crate::matrix::Mat;
use crate::nanson::{nanson_det, rank_at};
use crate::oracle::{
    common_zeros, macaulay_resultant_quadrics, random_unimodular, singular_points,
    sylvester_resultant,
};
use crate::poly::MultiPoly;
use crate::psi::{build_phi0_p3, compute_psi, construct_psi, ext_reduce_mod};
use crate::strata::{
    plane_census, rand_1nodal, rand_binodal, rand_cuspidal, restricted_determinant,
    LinearSlice,
};
use crate::unipoly;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// One pass/fail line per criterion.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            writeln!(
                s,
                "[{}] {}: {} ({})",
                self.suite,
                r.name,
                if r.passed { "PASS" } else { "FAIL" },
                r.detail
            )
            .unwrap();
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub prime: u64,
    pub second_prime: u64,
    pub seed: u64,
    /// extended tier: the multi-hour-budget reproductions (400/520/280/120)
    pub extended: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            prime: crate::DEFAULT_PRIME,
            second_prime: 32009,
            seed: 1,
            extended: false,
        }
    }
}

fn criterion(name: &str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult {
        name: name.into(),
        passed,
        detail,
    }
}

fn run(name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    match body() {
        Ok((passed, detail)) => criterion(name, passed, detail),
        Err(e) => criterion(name, false, format!("error: {e}")),
    }
}

/// Core-algebra spot checks: exactness of the elimination kernels and the
/// multi-prime consistency of rational determinants.
pub fn suite_core(cfg: &VerifyConfig) -> SuiteReport {
    let mut results = Vec::new();
    results.push(run("bareiss-identity-and-pfaffian", || {
        let q = Rationals;
        let id = Mat::identity(q, 20).det_fraction_free()?;
        let fp = Fp::new(cfg.prime)?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
        let mut ok = q.is_one(&id);
        for _ in 0..5 {
            let mut m = Mat::zeros(fp, 8, 8);
            for i in 0..8 {
                for j in i + 1..8 {
                    let v = fp.rand_elem(&mut rng);
                    m.set(i, j, v);
                    m.set(j, i, fp.neg(&v));
                }
            }
            let pf = m.pfaffian()?;
            ok &= fp.mul(&pf, &pf) == m.det_fraction_free()?;
        }
        Ok((ok, "identity det = 1, Pf^2 = det on random skew".into()))
    }));
    results.push(run("crt-consistency", || {
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 2);
        let m = Mat::from_fn(q, 6, 6, |_, _| q.rand_elem(&mut rng));
        let dq = m.det_fraction_free()?;
        let mut ok = true;
        for p in [cfg.prime, cfg.second_prime, 32027] {
            let fp = Fp::new(p)?;
            let mp = Mat::from_fn(fp, 6, 6, |r, c| fp.from_rat(m.at(r, c)).unwrap());
            ok &= mp.det_fraction_free()? == fp.from_rat(&dq)?;
        }
        Ok((ok, "rational det reduces correctly mod 3 primes".into()))
    }));
    SuiteReport {
        suite: "core".into(),
        results,
    }
}

/// Acceptance criterion 1: the twisted-cubic golden test.
pub fn criterion_twisted_cubic() -> CriterionResult {
    run("1-twisted-cubic-golden", || {
        let q = Rationals;
        let t0 = std::time::Instant::now();
        let cm = chow_matrix_rnc(q, 3)?;
        // published matrix appears with columns reversed (the recorded
        // lex-pivot normalization); checked entrywise
        let ix = |ids: &[usize]| IndexSet::from_indices(ids);
        let one = q.one();
        let expect: Vec<Vec<Vec<(IndexSet, num_rational::BigRational)>>> = vec![
            vec![
                vec![(ix(&[0, 3]), one.clone())],
                vec![(ix(&[0, 2]), one.clone())],
                vec![(ix(&[0, 1]), one.clone())],
            ],
            vec![
                vec![(ix(&[1, 3]), one.clone())],
                vec![(ix(&[0, 3]), one.clone()), (ix(&[1, 2]), one.clone())],
                vec![(ix(&[0, 2]), one.clone())],
            ],
            vec![
                vec![(ix(&[2, 3]), one.clone())],
                vec![(ix(&[1, 3]), one.clone())],
                vec![(ix(&[0, 3]), one.clone())],
            ],
        ];
        let mut ok = true;
        for r in 0..3 {
            for c in 0..3 {
                let ours: BTreeMap<_, _> = cm.at(r, c).iter().cloned().collect();
                let theirs: BTreeMap<_, _> = expect[r][2 - c].iter().cloned().collect();
                ok &= ours == theirs;
            }
        }
        // symbolic identity with the Sylvester determinant in 8 variables
        let nv = 8;
        let var = |i: usize| MultiPoly::<Rationals>::var(q, nv, i);
        let mut values = BTreeMap::new();
        for s in combinations_lex(4, 2) {
            let id = s.indices();
            let v = var(id[0]).mul(&var(4 + id[1])).sub(&var(id[1]).mul(&var(4 + id[0])));
            values.insert(s, v);
        }
        let det = det_poly_matrix(&cm.substitute_polys(&values, nv))?;
        let zero = MultiPoly::zero(q, nv);
        let mut syl = vec![vec![zero; 6]; 6];
        for r in 0..3 {
            for k in 0..4 {
                syl[r][r + k] = var(k);
                syl[r + 3][r + k] = var(4 + k);
            }
        }
        let syl_det = det_poly_matrix(&syl)?;
        // recorded normalization: odd column permutation flips the sign
        ok &= det.neg() == syl_det;
        let el = t0.elapsed();
        Ok((
            ok && el.as_secs() < 1,
            format!("matrix + symbolic Sylvester identity in {el:?}"),
        ))
    })
}

/// Acceptance criterion 2: the 16x16 construction, checked against the
/// committed artifact, with zero lower-degree syzygies.
pub fn criterion_psi_construction(cfg: &VerifyConfig) -> CriterionResult {
    run("2-psi-construction", || {
        let t0 = std::time::Instant::now();
        let constructed = construct_psi(&[cfg.prime, cfg.second_prime], cfg.seed)?;
        let committed = compute_psi()?;
        let mut ok = constructed == *committed;
        ok &= constructed.rows == 16 && constructed.cols == 16;
        ok &= constructed.is_skew();
        // entries are linear forms over the Gr(4,10) Plücker variables
        let all: std::collections::BTreeSet<IndexSet> =
            combinations_lex(10, 4).into_iter().collect();
        ok &= all.len() == 210;
        ok &= constructed.support().is_subset(&all);
        // syzygy dimensions: 16 in wedge degree 4, zero below
        let fp = Fp::new(cfg.prime)?;
        let phi0 = ext_reduce_mod(build_phi0_p3()?, fp)?;
        let mut dims = Vec::new();
        for q in 1..=4usize {
            let s = degreewise_syzygies_fp(&phi0, q, cfg.seed ^ q as u64)?;
            dims.push(s.cols);
        }
        ok &= dims == [0, 0, 0, 16];
        Ok((
            ok,
            format!(
                "reconstructed = committed, skew 16x16, syzygy dims {:?} in {:?}",
                dims,
                t0.elapsed()
            ),
        ))
    })
}

/// Acceptance criterion 3: cross-representation identity over two primes.
pub fn criterion_cross_representation(cfg: &VerifyConfig) -> CriterionResult {
    run("3-cross-representation", || {
        let mut ok = true;
        let mut checked = 0usize;
        for p in [cfg.prime, cfg.second_prime] {
            let fp = Fp::new(p)?;
            let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ p);
            for _ in 0..100 {
                let sys = QuadricSystem::rand(fp, &mut rng);
                let pf = resultant_quadrics(&fp, &sys)?;
                let nd = nanson_det(&fp, &sys)?;
                let mc = macaulay_resultant_quadrics(&fp, &sys)?;
                ok &= pf == nd && nd == mc;
                checked += 1;
            }
        }
        Ok((
            ok,
            format!("{checked} random systems, all three methods equal after anchoring"),
        ))
    })
}

/// Acceptance criterion 4: multidegree 8, SL(4) invariance, pencil
/// restriction of degree exactly 32.
pub fn criterion_degree_invariance(cfg: &VerifyConfig) -> CriterionResult {
    run("4-degree-and-invariance", || {
        let fp = Fp::new(cfg.prime)?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 4);
        let mut ok = true;
        // scaling one quadric scales all three routes by lambda^8
        let sys = QuadricSystem::rand(fp, &mut rng);
        let lam = fp.rand_nonzero(&mut rng);
        let l8 = fp.pow(lam, 8);
        let scaled = sys.scale_quadric(2, &lam);
        ok &= resultant_quadrics(&fp, &scaled)? == fp.mul(&l8, &resultant_quadrics(&fp, &sys)?);
        ok &= nanson_det(&fp, &scaled)? == fp.mul(&l8, &nanson_det(&fp, &sys)?);
        ok &= macaulay_resultant_quadrics(&fp, &scaled)?
            == fp.mul(&l8, &macaulay_resultant_quadrics(&fp, &sys)?);
        // SL(4) substitution invariance on 25 random pairs
        for _ in 0..25 {
            let sys = QuadricSystem::rand(fp, &mut rng);
            let a = random_unimodular(&fp, &mut rng);
            ok &= resultant_quadrics(&fp, &sys.transform(&a))?
                == resultant_quadrics(&fp, &sys)?;
        }
        // restriction of the discriminant to a random pencil has degree 32
        let f = CubicForm::rand(fp, &mut rng);
        let g = CubicForm::rand(fp, &mut rng);
        let pts: Vec<(u64, u64)> = (0..=33u64)
            .map(|t| {
                let ft = f.add(&g.scale(&t));
                Ok((t, discriminant_cubic(&fp, &ft)?))
            })
            .collect::<Result<_>>()?;
        let poly = unipoly::interpolate(fp, &pts)?;
        ok &= unipoly::deg(&poly) == Some(32);
        // spot-check two more pencil points
        for t in [40u64, 41] {
            let ft = f.add(&g.scale(&t));
            ok &= unipoly::eval(fp, &poly, t) == discriminant_cubic(&fp, &ft)?;
        }
        Ok((ok, "lambda^8 multidegree, SL(4) invariance, pencil degree 32".into()))
    })
}

/// Acceptance criterion 5: singularity behavior of the discriminant.
pub fn criterion_singularity(cfg: &VerifyConfig) -> CriterionResult {
    run("5-singularity-behavior", || {
        let q = Rationals;
        let mut ok = true;
        ok &= !q.is_zero(&discriminant_cubic(&q, &CubicForm::fermat(q))?);
        ok &= q.is_zero(&discriminant_cubic(&q, &CubicForm::cayley(q))?);
        let fp = Fp::new(cfg.prime)?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 5);
        for _ in 0..100 {
            let f = rand_1nodal(&fp, &mut rng);
            ok &= fp.is_zero(&discriminant_cubic(&fp, &f)?);
        }
        // oracle-found singular points force a vanishing discriminant
        let mut implications = 0usize;
        for p in [7u64, 11, 13] {
            let fps = Fp::new(p)?;
            let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ p.wrapping_mul(31));
            for _ in 0..60 {
                let f = CubicForm::rand(fps, &mut rng);
                if !singular_points(&f, fps)?.is_empty() {
                    ok &= fps.is_zero(&discriminant_cubic(&fps, &f)?);
                    implications += 1;
                }
                // soundness of the common-zero oracle on the same samples
                let cz = common_zeros(&f.partials(), fps)?;
                if !cz.is_empty() {
                    ok &= fps.is_zero(&resultant_quadrics(&fps, &f.partials())?);
                }
            }
        }
        Ok((
            ok,
            format!("Fermat != 0, Cayley = 0, 100 one-nodal zeros, {implications} oracle implications"),
        ))
    })
}

/// Acceptance criterion 6: rank strata of the Nanson matrix.
pub fn criterion_rank_strata(cfg: &VerifyConfig) -> CriterionResult {
    run("6-rank-strata", || {
        let mut ok = true;
        let mut cusp_drop = 0usize;
        for p in [cfg.prime, cfg.second_prime] {
            let fp = Fp::new(p)?;
            let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ p.wrapping_mul(77));
            for _ in 0..100 {
                let f = rand_binodal(&fp, &mut rng);
                ok &= rank_at(&f).rank <= 18;
            }
            for _ in 0..100 {
                let f = rand_1nodal(&fp, &mut rng);
                ok &= rank_at(&f).rank == 19;
            }
            for _ in 0..20 {
                let f = CubicForm::rand(fp, &mut rng);
                ok &= rank_at(&f).rank == 20;
            }
            // evidence, not an assertion: cuspidal samples also drop to 18
            for _ in 0..20 {
                let f = rand_cuspidal(&fp, &mut rng);
                if rank_at(&f).rank <= 18 {
                    cusp_drop += 1;
                }
            }
        }
        Ok((
            ok,
            format!(
                "binodal <= 18, one-nodal = 19, smooth = 20 over two primes; cuspidal rank <= 18 observed {cusp_drop}/40 (logged, not asserted)"
            ),
        ))
    })
}

/// Acceptance criterion 7: plane-slice interpolation of the restricted
/// determinant.
pub fn criterion_plane_slice(cfg: &VerifyConfig) -> CriterionResult {
    run("7-plane-slice-interpolation", || {
        let t0 = std::time::Instant::now();
        let fp = Fp::new(cfg.prime)?;
        let slice = LinearSlice::random(fp, 2, cfg.seed ^ 7);
        // the held-out comparison against direct evaluation is built into
        // restricted_determinant; a degree-32 result certifies it
        let gamma = restricted_determinant(&slice)?;
        let ok = gamma.homogeneous_degree() == Some(32);
        Ok((
            ok,
            format!(
                "degree-32 ternary form, {} terms, held-out verified, {:?}",
                gamma.terms.len(),
                t0.elapsed()
            ),
        ))
    })
}

/// Acceptance criterion 8 (extended tier): the 400-point V_2 census and
/// the 520 = 280 + 2*120 singular scheme of the discriminant curve.
pub fn criterion_extended_census(cfg: &VerifyConfig) -> CriterionResult {
    run("8-extended-plane-census", || {
        let fp = Fp::new(cfg.prime)?;
        let mut seed = cfg.seed ^ 8;
        let mut last_err = None;
        for _ in 0..4 {
            let slice = LinearSlice::random(fp, 2, seed);
            match plane_census(&slice) {
                Ok(c) => {
                    let ok = c.v2_points == 400
                        && c.v2_inside_sing_gamma
                        && c.sing_degree == 520
                        && c.nodes == 280
                        && c.cusps == 120;
                    return Ok((
                        ok,
                        format!(
                            "V2 points {}, inside Sing = {}, sing degree {} = {} nodes + 2*{} cusps (seed {seed})",
                            c.v2_points, c.v2_inside_sing_gamma, c.sing_degree, c.nodes, c.cusps
                        ),
                    ));
                }
                Err(e) => {
                    last_err = Some(e);
                    seed += 1;
                }
            }
        }
        Err(last_err.unwrap())
    })
}

/// Chow suite: criteria 1 and 2 plus binary-form oracle agreement.
pub fn suite_chow(cfg: &VerifyConfig) -> SuiteReport {
    let mut results = vec![criterion_twisted_cubic()];
    results.push(run("binary-resultants-vs-sylvester", || {
        let fp = Fp::new(cfg.prime)?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 11);
        let mut ok = true;
        for d in 2..=4usize {
            for _ in 0..20 {
                let f: Vec<u64> = (0..=d).map(|_| fp.rand_elem(&mut rng)).collect();
                let g: Vec<u64> = (0..=d).map(|_| fp.rand_elem(&mut rng)).collect();
                ok &= crate::chow::resultant_binary(&fp, &f, &g)?
                    == sylvester_resultant(&fp, &f, &g)?;
            }
        }
        Ok((ok, "degrees 2..4, 20 samples each, exact agreement".into()))
    }));
    results.push(criterion_psi_construction(cfg));
    SuiteReport {
        suite: "chow".into(),
        results,
    }
}

/// Nanson suite: criteria 3 and 4.
pub fn suite_nanson(cfg: &VerifyConfig) -> SuiteReport {
    SuiteReport {
        suite: "nanson".into(),
        results: vec![
            criterion_cross_representation(cfg),
            criterion_degree_invariance(cfg),
        ],
    }
}

/// Strata suite: criteria 5, 6, 7 and, on the extended tier, 8.
pub fn suite_strata(cfg: &VerifyConfig) -> SuiteReport {
    let mut results = vec![
        criterion_singularity(cfg),
        criterion_rank_strata(cfg),
        criterion_plane_slice(cfg),
    ];
    if cfg.extended {
        results.push(criterion_extended_census(cfg));
    }
    SuiteReport {
        suite: "strata".into(),
        results,
    }
}

/// Run the requested suites ("core", "chow", "nanson", "strata", "all").
pub fn run_suites(which: &str, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    let all = which == "all";
    if all || which == "core" {
        out.push(suite_core(cfg));
    }
    if all || which == "chow" {
        out.push(suite_chow(cfg));
    }
    if all || which == "nanson" {
        out.push(suite_nanson(cfg));
    }
    if all || which == "strata" {
        out.push(suite_strata(cfg));
    }
    if out.is_empty() {
        return Err(crate::error::Error::Parse(format!(
            "unknown suite '{which}' (expected core|chow|nanson|strata|all)"
        )));
    }
    Ok(out)
}
