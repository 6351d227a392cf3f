//! Command-line surface: exact discriminants and resultants, plane-slice
//! experiments, and the acceptance suites, with reproducible seeded I/O.
//!
//! Exit codes: 0 ok, 1 mathematical failure, 2 input error.

use clap::{Parser, Subcommand};
use cubicdisc::chow::{
    discriminant_cubic, resultant_quadrics, CubicForm, QuadricSystem,
};
use cubicdisc::field::{Field, Fp, Rationals};
use cubicdisc::nanson::{nanson_det, rank_at, RankProfile};
use cubicdisc::oracle::macaulay_resultant_quadrics;
use cubicdisc::poly::{parse_header, parse_poly, write_poly, FieldSpec, MultiPoly};
use cubicdisc::strata::{plane_census, restricted_determinant, LinearSlice};
use cubicdisc::verify::{run_suites, VerifyConfig};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cubicdisc",
    about = "Exact resultants of quaternary quadrics and discriminants of cubic surfaces",
    version
)]
struct Cli {
    /// Prime for modular computations (odd, not dividing 32)
    #[arg(long, global = true, default_value_t = cubicdisc::DEFAULT_PRIME, env = "CUBICDISC_PRIME")]
    prime: u64,
    /// Seed recorded in all outputs
    #[arg(long, global = true, default_value_t = 0, env = "CUBICDISC_SEED")]
    seed: u64,
    /// "default" or "extended" (extended adds the long-running censuses)
    #[arg(long, global = true, default_value = "default", env = "CUBICDISC_TIER")]
    tier: String,
    /// Output format: json or text
    #[arg(long, global = true, default_value = "json", env = "CUBICDISC_FORMAT")]
    format: String,
    /// Write the primary output to a file instead of stdout
    #[arg(long, global = true, env = "CUBICDISC_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discriminant and Nanson rank profile of a cubic surface
    Disc {
        /// Cubic form in the polynomial text format (4 variables)
        file: PathBuf,
    },
    /// Resultant of four quaternary quadrics
    Res {
        /// Four quadrics in the polynomial text format, separated by "--"
        file: PathBuf,
        /// pfaffian | nanson | macaulay | all
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Restrict the discriminant to a random plane and interpolate it
    Slice {
        /// Slice dimension (the degree-32 curve needs dim 2)
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Run the acceptance suites
    Verify {
        /// core | chow | nanson | strata | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// 1 = math failure, 2 = input error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
    fn math(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Disc { file } => cmd_disc(cli, file),
        Cmd::Res { file, method } => cmd_res(cli, file, method),
        Cmd::Slice { dim } => cmd_slice(cli, *dim),
        Cmd::Verify { suite } => cmd_verify(cli, suite),
    }
}

#[derive(Serialize)]
struct ConfigEcho {
    prime: u64,
    seed: u64,
    tier: String,
}

fn config_echo(cli: &Cli) -> ConfigEcho {
    ConfigEcho {
        prime: cli.prime,
        seed: cli.seed,
        tier: cli.tier.clone(),
    }
}

fn emit(cli: &Cli, value: serde_json::Value, text: String) -> Result<(), Failure> {
    let body = if cli.format == "json" {
        serde_json::to_string_pretty(&value).map_err(Failure::math)?
    } else {
        text
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body + "\n").map_err(Failure::input)?,
        None => println!("{body}"),
    }
    Ok(())
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A polynomial file over whichever field its header names.
enum AnyPoly {
    Rat(MultiPoly<Rationals>),
    Mod(MultiPoly<Fp>, Fp),
}

fn parse_any_poly(s: &str) -> Result<AnyPoly, Failure> {
    let (_, spec) = parse_header(s).map_err(Failure::input)?;
    match spec {
        FieldSpec::Rational => {
            let (p, _) = parse_poly(s, Rationals).map_err(Failure::input)?;
            Ok(AnyPoly::Rat(p))
        }
        FieldSpec::Prime(p) => {
            let fp = Fp::new(p).map_err(Failure::input)?;
            let (poly, _) = parse_poly(s, fp).map_err(Failure::input)?;
            Ok(AnyPoly::Mod(poly, fp))
        }
    }
}

fn cmd_disc(cli: &Cli, file: &PathBuf) -> Result<(), Failure> {
    let content = read_file(file)?;
    let (disc_str, disc_zero, rank): (String, bool, RankProfile) = match parse_any_poly(&content)?
    {
        AnyPoly::Rat(p) => {
            let q = Rationals;
            let f = CubicForm::from_poly(q, &p).map_err(Failure::input)?;
            let d = discriminant_cubic(&q, &f).map_err(Failure::math)?;
            (q.fmt_elem(&d), q.is_zero(&d), rank_at(&f))
        }
        AnyPoly::Mod(p, fp) => {
            let f = CubicForm::from_poly(fp, &p).map_err(Failure::input)?;
            let d = discriminant_cubic(&fp, &f).map_err(Failure::math)?;
            (fp.fmt_elem(&d), fp.is_zero(&d), rank_at(&f))
        }
    };
    let text = format!(
        "discriminant = {disc_str}\nrank = {}\nflags(rank<=19,18,17,16) = {:?}",
        rank.rank, rank.flags
    );
    emit(
        cli,
        json!({
            "discriminant": disc_str,
            "discriminant_is_zero": disc_zero,
            "rank": rank.rank,
            "flags": rank.flags,
            "config": config_echo(cli),
        }),
        text,
    )
}

/// Split a four-quadric file on lines equal to "--"; the header of the
/// first block applies to all four.
fn parse_quadric_blocks(s: &str) -> Result<(FieldSpec, Vec<String>), Failure> {
    let (_, spec) = parse_header(s).map_err(Failure::input)?;
    let header: String = s
        .lines()
        .filter(|l| l.trim_start().starts_with("vars ") || l.trim_start().starts_with("field "))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut blocks = Vec::new();
    let mut current = header.clone();
    for line in s.lines() {
        let t = line.trim();
        if t == "--" {
            blocks.push(current.clone());
            current = header.clone();
        } else if !(t.starts_with("vars ") || t.starts_with("field ")) {
            current.push_str(line);
            current.push('\n');
        }
    }
    blocks.push(current);
    if blocks.len() != 4 {
        return Err(Failure::input(format!(
            "expected 4 quadric blocks separated by '--', found {}",
            blocks.len()
        )));
    }
    Ok((spec, blocks))
}

fn res_values<K: Field>(
    field: &K,
    sys: &QuadricSystem<K>,
    method: &str,
) -> Result<Vec<(String, K::Elem)>, Failure> {
    let mut out = Vec::new();
    if method == "pfaffian" || method == "all" {
        out.push((
            "pfaffian".to_string(),
            resultant_quadrics(field, sys).map_err(Failure::math)?,
        ));
    }
    if method == "nanson" || method == "all" {
        out.push((
            "nanson".to_string(),
            nanson_det(field, sys).map_err(Failure::math)?,
        ));
    }
    if method == "macaulay" || method == "all" {
        out.push((
            "macaulay".to_string(),
            macaulay_resultant_quadrics(field, sys).map_err(Failure::math)?,
        ));
    }
    if out.is_empty() {
        return Err(Failure::input(format!(
            "unknown method '{method}' (expected pfaffian|nanson|macaulay|all)"
        )));
    }
    Ok(out)
}

fn render_res<K: Field>(
    cli: &Cli,
    field: &K,
    values: Vec<(String, K::Elem)>,
) -> Result<(), Failure> {
    let mut map = serde_json::Map::new();
    let mut text = String::new();
    for (name, v) in &values {
        map.insert(name.clone(), json!(field.fmt_elem(v)));
        text.push_str(&format!("{name} = {}\n", field.fmt_elem(v)));
    }
    if values.len() > 1 {
        let mut ratios = serde_json::Map::new();
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let (na, va) = &values[i];
                let (nb, vb) = &values[j];
                let ratio = if field.is_zero(vb) {
                    if field.is_zero(va) {
                        "0/0".to_string()
                    } else {
                        "infinite".to_string()
                    }
                } else {
                    field.fmt_elem(&field.div(va, vb).map_err(Failure::math)?)
                };
                ratios.insert(format!("{na}/{nb}"), json!(ratio));
                text.push_str(&format!("{na}/{nb} = {ratio}\n"));
            }
        }
        map.insert("ratios".into(), serde_json::Value::Object(ratios));
    }
    map.insert(
        "config".into(),
        serde_json::to_value(config_echo(cli)).map_err(Failure::math)?,
    );
    emit(cli, serde_json::Value::Object(map), text)
}

fn cmd_res(cli: &Cli, file: &PathBuf, method: &str) -> Result<(), Failure> {
    let content = read_file(file)?;
    let (spec, blocks) = parse_quadric_blocks(&content)?;
    match spec {
        FieldSpec::Rational => {
            let q = Rationals;
            let polys: Vec<MultiPoly<Rationals>> = blocks
                .iter()
                .map(|b| parse_poly(b, q).map(|(p, _)| p))
                .collect::<cubicdisc::error::Result<_>>()
                .map_err(Failure::input)?;
            let sys = QuadricSystem::from_polys(q, &polys).map_err(Failure::input)?;
            let values = res_values(&q, &sys, method)?;
            render_res(cli, &q, values)
        }
        FieldSpec::Prime(p) => {
            let fp = Fp::new(p).map_err(Failure::input)?;
            let polys: Vec<MultiPoly<Fp>> = blocks
                .iter()
                .map(|b| parse_poly(b, fp).map(|(p, _)| p))
                .collect::<cubicdisc::error::Result<_>>()
                .map_err(Failure::input)?;
            let sys = QuadricSystem::from_polys(fp, &polys).map_err(Failure::input)?;
            let values = res_values(&fp, &sys, method)?;
            render_res(cli, &fp, values)
        }
    }
}

fn cmd_slice(cli: &Cli, dim: usize) -> Result<(), Failure> {
    if dim != 2 {
        return Err(Failure::input("only --dim 2 is supported".to_string()));
    }
    let fp = Fp::new(cli.prime).map_err(Failure::input)?;
    if fp.p() <= 64 {
        return Err(Failure::input(
            "slice interpolation needs a prime > 64".to_string(),
        ));
    }
    let mut seed = cli.seed;
    let (slice, gamma) = loop {
        let slice = LinearSlice::random(fp, dim, seed);
        match restricted_determinant(&slice) {
            Ok(g) => break (slice, g),
            Err(e) => {
                eprintln!("slice seed {seed} degenerate ({e}); resampling");
                seed += 1;
            }
        }
    };
    let names: Vec<String> = ["s", "t", "u"].iter().map(|s| s.to_string()).collect();
    let form_text = write_poly(&gamma, &names);
    let mut meta = json!({
        "degree": gamma.homogeneous_degree(),
        "terms": gamma.terms.len(),
        "held_out_verified": true,
        "slice_seed_used": seed,
        "config": config_echo(cli),
    });
    let mut text = format!(
        "degree = 32\nterms = {}\nslice seed used = {seed}\n",
        gamma.terms.len()
    );
    if cli.tier == "extended" {
        let census = plane_census(&slice).map_err(Failure::math)?;
        meta["census"] = serde_json::to_value(&census).map_err(Failure::math)?;
        text.push_str(&format!(
            "V2 points = {}\nsingular degree = {} ({} nodes, {} cusps)\n",
            census.v2_points, census.sing_degree, census.nodes, census.cusps
        ));
    }
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &form_text).map_err(Failure::input)?;
            let body = if cli.format == "json" {
                serde_json::to_string_pretty(&meta).map_err(Failure::math)?
            } else {
                text
            };
            println!("{body}");
            Ok(())
        }
        None => {
            meta["curve"] = json!(form_text);
            let full_text = format!("{text}\n{form_text}");
            emit(cli, meta, full_text)
        }
    }
}

fn cmd_verify(cli: &Cli, suite: &str) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        prime: cli.prime,
        second_prime: if cli.prime == 32009 { 32027 } else { 32009 },
        seed: cli.seed,
        extended: cli.tier == "extended",
    };
    let reports = run_suites(suite, &cfg).map_err(Failure::input)?;
    let all_passed = reports.iter().all(|r| r.all_passed());
    if cli.format == "json" {
        let body = serde_json::to_string_pretty(&json!({
            "suites": reports,
            "all_passed": all_passed,
            "config": config_echo(cli),
        }))
        .map_err(Failure::math)?;
        match &cli.out {
            Some(path) => std::fs::write(path, body + "\n").map_err(Failure::input)?,
            None => println!("{body}"),
        }
    } else {
        let mut text = String::new();
        for r in &reports {
            text.push_str(&r.render());
        }
        match &cli.out {
            Some(path) => std::fs::write(path, &text).map_err(Failure::input)?,
            None => print!("{text}"),
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::math("one or more criteria failed".to_string()))
    }
}
