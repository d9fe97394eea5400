//! Command-line front end. [`run`] parses arguments, calls the library and
//! renders either text or the library's JSON schemas.
//!
//! Exit status: 0 on success, 1 when the library rejects the input, 2 on
//! usage errors.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde::Serialize;

use crate::baselocus::base_locus;
use crate::cone::{self, IntVec};
use crate::divisor::{anticanonical_splittings, weak_fano_report, DivisorClass};
use crate::effective::{
    self, cone_from_rays, decompose_by_cases, incidence_report, inequality_list, is_effective,
    ray_list, sign_reduced, verify_duality,
};
use crate::error::{Error, Result};
use crate::kernel::{parse_rational, DEFAULT_PRIME};
use crate::oracle::{containment_trials, estimate_h0};

/// Environment variable holding the first default oracle seed.
pub const SEED_ENV: &str = "EFFCONE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "effcone",
    version,
    about = "Effective cones of P^3 blown up along general lines"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Number of lines.
    #[arg(long)]
    s: usize,
    /// Degree, a rational such as 3 or 5/2.
    #[arg(long, allow_hyphen_values = true)]
    d: String,
    /// Comma-separated rational multiplicities, one per line.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    mults: String,
}

#[derive(Debug, Args)]
struct LinesArg {
    #[arg(long)]
    s: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide effectivity with a certificate.
    Membership(ClassArgs),
    /// Decompose an effective class by the case-analysis recipe (s <= 4).
    Decompose(ClassArgs),
    /// Facets of the effective cone, computed from its rays.
    Facets(LinesArg),
    /// Extremal rays of the effective cone.
    Rays(LinesArg),
    /// Compare the inequality and ray descriptions.
    VerifyDuality {
        /// A single line count; all of 0..=5 when omitted.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Which listed inequalities are tight at each ray.
    Incidence(LinesArg),
    /// Quadrics and transversal pairs forced into the base locus.
    Baselocus(ClassArgs),
    /// Anticanonical degree and weak-Fano status.
    Weakfano(LinesArg),
    /// Anticanonical divisors split into quadrics and planes (s = 5, 6).
    Splittings(LinesArg),
    /// Finite-field interpolation oracle for h0 of L_d(m).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Optional consistency check against the number of multiplicities.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    d: u32,
    /// Comma-separated nonnegative integers.
    #[arg(long, default_value = "")]
    mults: String,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Comma-separated seeds; overrides --trials.
    #[arg(long, conflicts_with = "trials")]
    seeds: Option<String>,
    /// Number of consecutive seeds starting at $EFFCONE_SEED (default 1).
    #[arg(long, default_value_t = 3)]
    trials: u64,
    /// Check base-locus containment of every forced quadric at this many
    /// points instead of reporting h0.
    #[arg(long)]
    samples: Option<usize>,
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let seed_env = std::env::var(SEED_ENV).ok();
    match dispatch(&cli, seed_env.as_deref()) {
        Ok(report) => {
            if out.write_all(report.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            1
        }
    }
}

fn parse_class(args: &ClassArgs) -> Result<DivisorClass> {
    let d = parse_rational(&args.d)?;
    let mults = split_list(&args.mults)
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if mults.len() != args.s {
        return Err(Error::InvalidInput(format!(
            "--s {} but {} multiplicities given",
            args.s,
            mults.len()
        )));
    }
    Ok(DivisorClass::new(d, mults))
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').filter(|_| !text.is_empty())
}

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>> {
    split_list(text)
        .map(|x| {
            x.parse()
                .map_err(|_| Error::InvalidInput(format!("{what}: {x:?} is not a nonnegative integer")))
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vec_text(v: &IntVec) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn dispatch(cli: &Cli, seed_env: Option<&str>) -> Result<String> {
    let json = cli.json;
    let mut text = String::new();
    match &cli.command {
        Command::Membership(args) => {
            let class = parse_class(args)?;
            let m = is_effective(&class)?;
            if json {
                return to_json(&m.certificate);
            }
            match &m.violation {
                None => writeln!(text, "EFFECTIVE: {} = {}", class, m.certificate),
                Some(v) => {
                    let reduced = sign_reduced(&class);
                    let (lhs, rhs) = v.sides(&reduced);
                    write!(text, "NOT EFFECTIVE: violates {} ({lhs} > {rhs})", v.label())
                        .expect("string write");
                    if class.mults().iter().any(Signed::is_negative) {
                        write!(text, " at {reduced}").expect("string write");
                    }
                    writeln!(text)
                }
            }
            .expect("string write");
        }
        Command::Decompose(args) => {
            let class = parse_class(args)?;
            let cert = decompose_by_cases(&class)?;
            if json {
                return to_json(&cert);
            }
            writeln!(text, "{class} = {cert}").expect("string write");
        }
        Command::Facets(LinesArg { s }) => {
            let computed = cone::dd_convert(&cone_from_rays(*s)?)?;
            if json {
                return to_json(&computed);
            }
            let listed = inequality_list(*s)?;
            for f in computed.inequalities().unwrap_or_default() {
                let label = listed
                    .iter()
                    .find(|q| cone::canonicalize(&[q.normal()])[0] == *f)
                    .map_or("(not among the listed inequalities)".to_string(), |q| {
                        q.label().to_string()
                    });
                writeln!(text, "{}  {label}", vec_text(f)).expect("string write");
            }
            let redundant: Vec<String> = effective::facet_status(*s)?
                .into_iter()
                .filter(|(_, facet)| !facet)
                .map(|(q, _)| q.label().to_string())
                .collect();
            writeln!(
                text,
                "{} facets; redundant listed inequalities: {}",
                computed.inequalities().map_or(0, <[IntVec]>::len),
                if redundant.is_empty() { "none".to_string() } else { redundant.join(", ") }
            )
            .expect("string write");
        }
        Command::Rays(LinesArg { s }) => {
            if json {
                return to_json(&cone_from_rays(*s)?);
            }
            for (g, class) in ray_list(*s)? {
                writeln!(text, "{g}  {class}").expect("string write");
            }
        }
        Command::VerifyDuality { s } => {
            let range: Vec<usize> = match s {
                Some(s) => vec![*s],
                None => (0..=effective::MAX_LINES).collect(),
            };
            let reports = range
                .into_iter()
                .map(verify_duality)
                .collect::<Result<Vec<_>>>()?;
            if json {
                return to_json(&reports);
            }
            for r in &reports {
                writeln!(
                    text,
                    "s = {}: {} inequalities, {} rays; literal list {}; sign-reduced list {}",
                    r.s,
                    r.inequality_count,
                    r.ray_count,
                    if r.holds() { "matches" } else { "DIFFERS" },
                    if r.sign_closed_rays_match { "matches" } else { "DIFFERS" },
                )
                .expect("string write");
                for v in &r.extra_rays {
                    writeln!(text, "  extra ray of the literal list: {}", vec_text(v))
                        .expect("string write");
                }
                for v in &r.missing_facets {
                    writeln!(text, "  facet missing from the list: {}", vec_text(v))
                        .expect("string write");
                }
            }
        }
        Command::Incidence(LinesArg { s }) => {
            let r = incidence_report(*s)?;
            if json {
                return to_json(&r);
            }
            for ray in &r.rays {
                writeln!(
                    text,
                    "{} {}: extremal {}; tight: {}",
                    ray.generator,
                    ray.class,
                    yes_no(ray.extremal),
                    ray.tight.join(", ")
                )
                .expect("string write");
            }
            writeln!(
                text,
                "facets: {}; redundant: {}",
                r.facets.len(),
                if r.redundant.is_empty() { "none".to_string() } else { r.redundant.join(", ") }
            )
            .expect("string write");
        }
        Command::Baselocus(args) => {
            let class = parse_class(args)?;
            let r = base_locus(&class)?;
            if json {
                return to_json(&r);
            }
            for q in &r.quadrics {
                let [i, j, k] = q.triple;
                writeln!(text, "quadric Q_{i}{j}{k} with multiplicity {}", q.multiplicity)
                    .expect("string write");
            }
            for t in &r.transversal_pairs {
                writeln!(
                    text,
                    "{} transversals of lines {:?} with multiplicity {}",
                    t.count, t.quadruple, t.multiplicity
                )
                .expect("string write");
            }
            if r.is_empty() {
                writeln!(text, "no forced components").expect("string write");
            }
            writeln!(text, "residual {}", r.residual).expect("string write");
        }
        Command::Weakfano(LinesArg { s }) => {
            let r = weak_fano_report(*s);
            if json {
                return to_json(&r);
            }
            writeln!(
                text,
                "(-K)^3 = {}; nef: {}; big: {}; weak Fano: {}",
                r.anticanonical_cube,
                yes_no(r.is_nef),
                yes_no(r.is_big),
                yes_no(r.is_weak_fano)
            )
            .expect("string write");
        }
        Command::Splittings(LinesArg { s }) => {
            let splits = anticanonical_splittings(*s)?;
            if json {
                return to_json(&splits);
            }
            for parts in &splits {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                writeln!(text, "{}", parts.join(" + ")).expect("string write");
            }
        }
        Command::Oracle(args) => return oracle(args, json, seed_env),
    }
    Ok(text)
}

fn oracle(args: &OracleArgs, json: bool, seed_env: Option<&str>) -> Result<String> {
    let mults: Vec<u32> = parse_u64_list(&args.mults, "--mults")?
        .into_iter()
        .map(|m| u32::try_from(m).map_err(|_| Error::InvalidInput(format!("multiplicity {m} too large"))))
        .collect::<Result<_>>()?;
    if let Some(s) = args.s {
        if s != mults.len() {
            return Err(Error::InvalidInput(format!(
                "--s {s} but {} multiplicities given",
                mults.len()
            )));
        }
    }
    let seeds = match &args.seeds {
        Some(list) => parse_u64_list(list, "--seeds")?,
        None => {
            let base = match seed_env {
                Some(v) => v.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidInput(format!("{SEED_ENV}={v:?} is not a nonnegative integer"))
                })?,
                None => 1,
            };
            (0..args.trials).map(|i| base.wrapping_add(i)).collect()
        }
    };

    let mut text = String::new();
    if let Some(samples) = args.samples {
        let d = i64::from(args.d);
        let forced: Vec<[usize; 3]> = crate::divisor::triples(mults.len())
            .filter(|t| t.iter().map(|&i| i64::from(mults[i - 1])).sum::<i64>() > d)
            .collect();
        if forced.is_empty() {
            return Err(Error::Precondition("no triple of lines has positive excess".into()));
        }
        let reports = forced
            .into_iter()
            .map(|t| containment_trials(args.d, &mults, t, args.prime, &seeds, samples))
            .collect::<Result<Vec<_>>>()?;
        if json {
            return to_json(&reports);
        }
        for r in &reports {
            let [i, j, k] = r.triple;
            writeln!(
                text,
                "Q_{i}{j}{k} in base locus at {} points over {} seeds: {}",
                r.samples,
                r.seeds.len(),
                yes_no(r.contained)
            )
            .expect("string write");
        }
        return Ok(text);
    }

    let r = estimate_h0(args.d, &mults, args.prime, &seeds)?;
    if json {
        return to_json(&r);
    }
    let per: Vec<String> = r.h0_per_trial.iter().map(ToString::to_string).collect();
    writeln!(
        text,
        "h0 = {} (per seed: {}; p = {})",
        r.h0_generic_estimate,
        per.join(", "),
        r.prime
    )
    .expect("string write");
    Ok(text)
}
