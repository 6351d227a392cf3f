//! Browser bindings for the interactive demo page: classify a cubic
//! surface, cross-check the three resultant representations, and sweep the
//! discriminant along a pencil of surfaces. All arithmetic is exact; the
//! page only renders strings and sign patterns.

use cubicdisc::chow::{discriminant_cubic, resultant_quadrics, CubicForm, QuadricSystem};
use cubicdisc::field::{Field, Fp, Rationals};
use cubicdisc::nanson::nanson_det;
use cubicdisc::oracle::macaulay_resultant_quadrics;
use cubicdisc::strata::{classify, rand_1nodal, rand_binodal, rand_cuspidal};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn parse_rational_coeffs(coeffs_json: &str, expect: usize) -> Result<Vec<num_rational::BigRational>, String> {
    let q = Rationals;
    let raw: Vec<String> =
        serde_json::from_str(coeffs_json).map_err(|e| format!("bad coefficient list: {e}"))?;
    if raw.len() != expect {
        return Err(format!("need {expect} coefficients, got {}", raw.len()));
    }
    raw.iter()
        .map(|s| q.parse_elem(s).map_err(|e| e.to_string()))
        .collect()
}

/// Named example cubics for the page, as 20 coefficient strings in the
/// fixed monomial order.
#[wasm_bindgen]
pub fn preset_cubic(name: &str, seed: u64) -> String {
    let q = Rationals;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let f = match name {
        "fermat" => CubicForm::fermat(q),
        "cayley" => CubicForm::cayley(q),
        "one-nodal" => rand_1nodal(&q, &mut rng),
        "binodal" => rand_binodal(&q, &mut rng),
        "cuspidal" => rand_cuspidal(&q, &mut rng),
        "random" => CubicForm::rand(q, &mut rng),
        other => return err_json(format!("unknown preset '{other}'")),
    };
    let coeffs: Vec<String> = f.coeffs.iter().map(|c| q.fmt_elem(c)).collect();
    json!({ "coeffs": coeffs }).to_string()
}

/// Exact discriminant, Nanson rank profile, singular census over a small
/// prime, and the stratum label of a rational cubic.
#[wasm_bindgen]
pub fn classify_cubic(coeffs_json: &str, census_prime: u64, seed: u64) -> String {
    let q = Rationals;
    let coeffs = match parse_rational_coeffs(coeffs_json, 20) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let f = match CubicForm::new(q, coeffs) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    match classify(&f, census_prime, seed) {
        Ok(report) => serde_json::to_string(&report).unwrap_or_else(err_json),
        Err(e) => err_json(e),
    }
}

/// The three determinantal representations of the resultant of four
/// quadrics over F_p, with their pairwise agreement.
#[wasm_bindgen]
pub fn resultant_methods(rows_json: &str, prime: u64, seed: u64) -> String {
    let fp = match Fp::new(prime) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let sys = if rows_json == "random" {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        QuadricSystem::rand(fp, &mut rng)
    } else {
        let raw: Result<Vec<Vec<String>>, _> = serde_json::from_str(rows_json);
        let raw = match raw {
            Ok(r) => r,
            Err(e) => return err_json(format!("bad 4x10 coefficient array: {e}")),
        };
        if raw.len() != 4 || raw.iter().any(|r| r.len() != 10) {
            return err_json("need a 4x10 coefficient array");
        }
        let mut rows = Vec::new();
        for r in &raw {
            let mut row = Vec::new();
            for s in r {
                match fp.parse_elem(s) {
                    Ok(v) => row.push(v),
                    Err(e) => return err_json(e),
                }
            }
            rows.push(row);
        }
        match QuadricSystem::from_rows(fp, rows) {
            Ok(s) => s,
            Err(e) => return err_json(e),
        }
    };
    let pf = resultant_quadrics(&fp, &sys);
    let nd = nanson_det(&fp, &sys);
    let mc = macaulay_resultant_quadrics(&fp, &sys);
    match (pf, nd, mc) {
        (Ok(pf), Ok(nd), Ok(mc)) => json!({
            "prime": prime,
            "rows": sys.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "pfaffian": pf.to_string(),
            "nanson": nd.to_string(),
            "macaulay": mc.to_string(),
            "agree": pf == nd && nd == mc,
        })
        .to_string(),
        (a, b, c) => err_json(
            [a.err(), b.err(), c.err()]
                .iter()
                .flatten()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ),
    }
}

/// Sweep the pencil (1-t) F + t G at t = k/steps and report the exact
/// sign and magnitude (bit length) of the discriminant at each step:
/// the raw material for the profile plot.
#[wasm_bindgen]
pub fn discriminant_profile(f_json: &str, g_json: &str, steps: u32) -> String {
    let q = Rationals;
    if steps == 0 || steps > 400 {
        return err_json("steps must be between 1 and 400");
    }
    let f = match parse_rational_coeffs(f_json, 20).and_then(|c| CubicForm::new(q, c).map_err(|e| e.to_string())) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let g = match parse_rational_coeffs(g_json, 20).and_then(|c| CubicForm::new(q, c).map_err(|e| e.to_string())) {
        Ok(g) => g,
        Err(e) => return err_json(e),
    };
    let mut samples = Vec::with_capacity(steps as usize + 1);
    for k in 0..=steps {
        let t = num_rational::BigRational::new((k as i64).into(), (steps as i64).into());
        let one_minus_t = q.sub(&q.one(), &t);
        let ft = f.scale(&one_minus_t).add(&g.scale(&t));
        match discriminant_cubic(&q, &ft) {
            Ok(d) => {
                let sign = if q.is_zero(&d) {
                    0i8
                } else if d.is_negative() {
                    -1
                } else {
                    1
                };
                // magnitude proxy: bit length of the numerator over the
                // denominator
                let bits = d.numer().bits() as i64 - d.denom().bits() as i64;
                samples.push(json!({
                    "t": format!("{}/{}", k, steps),
                    "sign": sign,
                    "bits": bits,
                }));
            }
            Err(e) => return err_json(e),
        }
    }
    json!({ "steps": steps, "samples": samples }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_and_classification() {
        let p = preset_cubic("fermat", 0);
        let v: serde_json::Value = serde_json::from_str(&p).unwrap();
        let coeffs = serde_json::to_string(&v["coeffs"]).unwrap();
        let report = classify_cubic(&coeffs, 7, 0);
        let r: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(r["label"], "smooth");
        assert_eq!(r["rank"]["rank"], 20);
    }

    #[test]
    fn resultants_agree_on_random_system() {
        let out = resultant_methods("random", 32003, 17);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["agree"], true);
    }

    #[test]
    fn pencil_profile_runs() {
        let f = preset_cubic("fermat", 0);
        let g = preset_cubic("cayley", 0);
        let fv: serde_json::Value = serde_json::from_str(&f).unwrap();
        let gv: serde_json::Value = serde_json::from_str(&g).unwrap();
        let out = discriminant_profile(
            &serde_json::to_string(&fv["coeffs"]).unwrap(),
            &serde_json::to_string(&gv["coeffs"]).unwrap(),
            8,
        );
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), 9);
        // t = 1 is the Cayley cubic: discriminant zero
        assert_eq!(samples[8]["sign"], 0);
        // t = 0 is the Fermat cubic: nonzero
        assert_ne!(samples[0]["sign"], 0);
    }
}
