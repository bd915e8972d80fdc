//! `alexkit` — exact Alexiewicz-norm calculator on finitely-presented
//! compact subsets of the line.
//!
//! Every number on the wire is a rational string `"p/q"`; `--float` adds
//! presentation-only float fields next to them. Exit codes: 0 success,
//! 1 domain failure (with a report), 2 usage error or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use alexkit_core::alexiewicz::unembed;
use alexkit_core::compatibility::{check_gap_compatibility, compatibility_growth_curve};
use alexkit_core::isometry::{canonical_isometry, recover_descriptor};
use alexkit_core::lifting::{lift, verify_conjugacy};
use alexkit_core::projection::ProjectionTable;
use alexkit_core::rational::{format as fmt_rat, parse as parse_rat, to_f64, Rational};
use alexkit_core::schema::{
    CompactSetDto, IncompatibilityDto, IsometryDescriptorDto, LiftedMapDto, PiecewiseLinearDto,
    StepFunctionDto,
};
use alexkit_core::verification::run_all;
use alexkit_core::{CompactSet, IsometryDescriptor, PiecewiseLinear, StepFunction};

#[derive(Parser)]
#[command(name = "alexkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a compact set: measure, gaps, projections, selectors, fibers.
    Set {
        #[command(subcommand)]
        action: SetAction,
    },
    /// Exact Alexiewicz norm of a step function.
    Norm(NormArgs),
    /// Embed a step function as its Lipschitz profile, or invert with
    /// `--K`/`--profile`.
    Embed(EmbedArgs),
    /// Apply, verify, recover, invert, or build isometry descriptors.
    Isometry {
        #[command(subcommand)]
        action: IsometryAction,
    },
    /// Fiber/gap compatibility of a pair of sets along psi.
    Compat {
        #[command(subcommand)]
        action: CompatAction,
    },
    /// Lift psi to an increasing bijection between the sets.
    Lift(LiftArgs),
    /// Gap-constant growth curve across the truncated reciprocal family.
    Curve(CurveArgs),
    /// Run the built-in verification suite (worked examples + seeded laws).
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Emit a JSON document instead of plain text.
    #[arg(long)]
    json: bool,
    /// Add presentation-only float fields next to every rational.
    #[arg(long)]
    float: bool,
}

#[derive(Subcommand)]
enum SetAction {
    /// Measure, extremes, components, exceptional levels, and their fibers.
    Info {
        #[arg(long = "K")]
        k: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The bounded complementary gaps, in order.
    Gaps {
        #[arg(long = "K")]
        k: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The measure projection at a point of the set.
    Project {
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The left-endpoint selector at a level in [0, |K|].
    Selector {
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long)]
        t: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The full fiber above a level in [0, |K|].
    Fibers {
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long)]
        t: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct NormArgs {
    /// Step function JSON (carries its own domain).
    #[arg(long = "fn")]
    f: PathBuf,
    /// Optional domain cross-check.
    #[arg(long = "K")]
    k: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EmbedArgs {
    /// Step function to embed.
    #[arg(long = "fn", conflicts_with_all = ["k", "profile"])]
    f: Option<PathBuf>,
    /// Domain for the inverse direction.
    #[arg(long = "K", requires = "profile")]
    k: Option<PathBuf>,
    /// Lipschitz profile to invert back to a step function.
    #[arg(long, requires = "k")]
    profile: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Subcommand)]
enum IsometryAction {
    /// Apply the descriptor's isometry to a step function.
    Apply {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long = "fn")]
        f: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check norm preservation and the profile identity on a function.
    Verify {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long = "fn")]
        f: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rebuild the descriptor from its induced transformer alone.
    Recover {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The measure-ratio isometry between two sets.
    Canonical {
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long = "M")]
        m: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The inverse descriptor.
    Invert {
        #[arg(long)]
        descriptor: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum CompatAction {
    /// Decide fiber/gap compatibility; exit 1 with the reason when it fails.
    Check {
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long = "M")]
        m: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Same as the top-level `curve` command.
    Curve(CurveArgs),
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long = "K")]
    k: PathBuf,
    #[arg(long = "M")]
    m: PathBuf,
    #[arg(long)]
    psi: PathBuf,
    /// Write the lift JSON here instead of stdout.
    #[arg(long)]
    out_file: Option<PathBuf>,
    /// Emit roughly this many (y, phi(y)) float samples as CSV instead.
    #[arg(long)]
    sample: Option<usize>,
    /// CSV destination for `--sample` (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    /// Only `reciprocal` is defined.
    #[arg(long, default_value = "reciprocal")]
    family: String,
    #[arg(long = "n-max", default_value_t = 50)]
    n_max: u32,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the checks whose name contains this substring.
    #[arg(long)]
    only: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truncation depth of the growth-curve check.
    #[arg(long = "n-max", alias = "n", default_value_t = 50)]
    n_max: u32,
}

enum CliError {
    /// Exit 2: bad flags, unreadable files, malformed JSON.
    Usage(String),
    /// Exit 1: a domain-level failure, report already formatted.
    Domain(String),
}

impl From<alexkit_core::Error> for CliError {
    fn from(e: alexkit_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_dto<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn load_set(path: &Path) -> CliResult<CompactSet> {
    Ok(CompactSet::try_from(&read_dto::<CompactSetDto>(path)?)?)
}

fn load_fn(path: &Path) -> CliResult<StepFunction> {
    Ok(StepFunction::try_from(&read_dto::<StepFunctionDto>(path)?)?)
}

fn load_pl(path: &Path) -> CliResult<PiecewiseLinear> {
    Ok(PiecewiseLinear::try_from(&read_dto::<PiecewiseLinearDto>(
        path,
    )?)?)
}

fn load_descriptor(path: &Path) -> CliResult<IsometryDescriptor> {
    Ok(IsometryDescriptor::try_from(
        &read_dto::<IsometryDescriptorDto>(path)?,
    )?)
}

fn parse_level(s: &str) -> CliResult<Rational> {
    parse_rat(s).map_err(|e| CliError::Usage(e.to_string()))
}

/// 17 significant digits, enough to round-trip any f64.
fn float17(r: &Rational) -> String {
    format!("{:.16e}", to_f64(r))
}

fn rational_json(r: &Rational, float: bool) -> serde_json::Value {
    if float {
        json!({ "rational": fmt_rat(r), "float": to_f64(r) })
    } else {
        json!(fmt_rat(r))
    }
}

fn print_scalar(label: &str, r: &Rational, out: &OutputArgs) {
    if out.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ label: rational_json(r, out.float) })).unwrap()
        );
    } else if out.float {
        println!("{} ({})", fmt_rat(r), to_f64(r));
    } else {
        println!("{}", fmt_rat(r));
    }
}

fn print_doc(doc: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(doc).unwrap());
}

fn write_or_print(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Set { action } => cmd_set(action),
        Command::Norm(args) => cmd_norm(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Isometry { action } => cmd_isometry(action),
        Command::Compat { action } => match action {
            CompatAction::Check { k, m, psi, out } => cmd_compat_check(&k, &m, &psi, &out),
            CompatAction::Curve(args) => cmd_curve(args),
        },
        Command::Lift(args) => cmd_lift(args),
        Command::Curve(args) => cmd_curve(args),
        Command::VerifyPaper(args) => cmd_verify(args),
    }
}

fn cmd_set(action: SetAction) -> CliResult<()> {
    match action {
        SetAction::Info { k, out } => {
            let set = load_set(&k)?;
            let table = ProjectionTable::new(&set);
            let levels = table.exceptional_set();
            let mut fibers = Vec::new();
            for s in &levels {
                let points: Vec<_> = table
                    .fiber(s)
                    .map_err(CliError::from)?
                    .points
                    .iter()
                    .map(|p| rational_json(p, out.float))
                    .collect();
                fibers.push(json!({ "level": rational_json(s, out.float), "points": points }));
            }
            let doc = json!({
                "measure": rational_json(&set.measure(), out.float),
                "min": rational_json(set.min(), out.float),
                "max": rational_json(set.max(), out.float),
                "component_count": set.components().len(),
                "components": CompactSetDto::from(&set).components,
                "exceptional_levels": levels.iter().map(|s| rational_json(s, out.float)).collect::<Vec<_>>(),
                "fibers": fibers,
            });
            if out.json {
                print_doc(&doc);
            } else {
                println!("measure = {}", fmt_rat(&set.measure()));
                println!("min = {}", fmt_rat(set.min()));
                println!("max = {}", fmt_rat(set.max()));
                println!("components = {}", set.components().len());
                let e: Vec<String> = levels.iter().map(fmt_rat).collect();
                println!("exceptional levels = [{}]", e.join(", "));
                for s in &levels {
                    let pts: Vec<String> =
                        table.fiber(s).map_err(CliError::from)?.points.iter().map(fmt_rat).collect();
                    println!("fiber at {} = [{}]", fmt_rat(s), pts.join(", "));
                }
            }
            Ok(())
        }
        SetAction::Gaps { k, out } => {
            let set = load_set(&k)?;
            let gaps: Vec<_> = set
                .gaps()
                .iter()
                .map(|g| {
                    json!({
                        "left": rational_json(&g.left, out.float),
                        "right": rational_json(&g.right, out.float),
                        "length": rational_json(&g.length(), out.float),
                    })
                })
                .collect();
            if out.json {
                print_doc(&json!({ "gaps": gaps }));
            } else if gaps.is_empty() {
                println!("[]");
            } else {
                for g in set.gaps() {
                    println!("({}, {})", fmt_rat(&g.left), fmt_rat(&g.right));
                }
            }
            Ok(())
        }
        SetAction::Project { k, x, out } => {
            let set = load_set(&k)?;
            let x = parse_level(&x)?;
            let t = ProjectionTable::new(&set).project(&x).map_err(CliError::from)?;
            print_scalar("projection", &t, &out);
            Ok(())
        }
        SetAction::Selector { k, t, out } => {
            let set = load_set(&k)?;
            let t = parse_level(&t)?;
            let x = ProjectionTable::new(&set).selector(&t).map_err(CliError::from)?;
            print_scalar("selector", &x, &out);
            Ok(())
        }
        SetAction::Fibers { k, t, out } => {
            let set = load_set(&k)?;
            let t = parse_level(&t)?;
            let fiber = ProjectionTable::new(&set).fiber(&t).map_err(CliError::from)?;
            if out.json {
                print_doc(&json!({
                    "level": rational_json(&fiber.level, out.float),
                    "points": fiber.points.iter().map(|p| rational_json(p, out.float)).collect::<Vec<_>>(),
                }));
            } else {
                let pts: Vec<String> = fiber.points.iter().map(fmt_rat).collect();
                println!("[{}]", pts.join(", "));
            }
            Ok(())
        }
    }
}

fn cmd_norm(args: NormArgs) -> CliResult<()> {
    let f = load_fn(&args.f)?;
    if let Some(kp) = &args.k {
        let k = load_set(kp)?;
        if &k != f.domain() {
            return Err(CliError::Domain(
                "function domain does not match the given set".into(),
            ));
        }
    }
    print_scalar("norm", &f.alexiewicz_norm(), &args.out);
    Ok(())
}

fn cmd_embed(args: EmbedArgs) -> CliResult<()> {
    match (&args.f, &args.k, &args.profile) {
        (Some(fp), None, None) => {
            let f = load_fn(fp)?;
            print_doc(&serde_json::to_value(PiecewiseLinearDto::from(&f.embed())).unwrap());
            Ok(())
        }
        (None, Some(kp), Some(gp)) => {
            let k = load_set(kp)?;
            let profile = load_pl(gp)?;
            let f = unembed(&k, &profile).map_err(CliError::from)?;
            print_doc(&serde_json::to_value(StepFunctionDto::from(&f)).unwrap());
            Ok(())
        }
        _ => Err(CliError::Usage(
            "pass --fn to embed, or --K with --profile to invert".into(),
        )),
    }
}

fn cmd_isometry(action: IsometryAction) -> CliResult<()> {
    match action {
        IsometryAction::Apply { descriptor, f, out } => {
            let d = load_descriptor(&descriptor)?;
            let f = load_fn(&f)?;
            let tf = d.apply(&f).map_err(CliError::from)?;
            let mut doc = serde_json::to_value(StepFunctionDto::from(&tf)).unwrap();
            if out.float {
                doc["values_float"] = json!(tf.values().iter().map(to_f64).collect::<Vec<_>>());
            }
            print_doc(&doc);
            Ok(())
        }
        IsometryAction::Verify { descriptor, f, out } => {
            let d = load_descriptor(&descriptor)?;
            let f = load_fn(&f)?;
            let tf = d.apply(&f).map_err(CliError::from)?;
            let norms_match = tf.alexiewicz_norm() == f.alexiewicz_norm();
            let profile = d.verify_profile_identity(&f).map_err(CliError::from)?;
            match (&profile, norms_match) {
                (Ok(()), true) => {
                    if out.json {
                        print_doc(&json!({
                            "verified": true,
                            "norm": rational_json(&f.alexiewicz_norm(), out.float),
                        }));
                    } else {
                        println!("verified: norm {}", fmt_rat(&f.alexiewicz_norm()));
                    }
                    Ok(())
                }
                (Err(witness), _) => Err(CliError::Domain(format!(
                    "profile identity fails at level {}",
                    fmt_rat(witness)
                ))),
                (_, false) => Err(CliError::Domain(format!(
                    "norm not preserved: {} became {}",
                    fmt_rat(&f.alexiewicz_norm()),
                    fmt_rat(&tf.alexiewicz_norm())
                ))),
            }
        }
        IsometryAction::Recover {
            descriptor,
            seed,
            out: _,
        } => {
            let d = load_descriptor(&descriptor)?;
            let opaque = |f: &StepFunction| d.apply(f).expect("source domains match");
            let recovered = recover_descriptor(d.source(), d.target(), opaque, 3, seed)
                .map_err(CliError::from)?;
            print_doc(&serde_json::to_value(IsometryDescriptorDto::from(&recovered)).unwrap());
            Ok(())
        }
        IsometryAction::Canonical { k, m, out: _ } => {
            let k = load_set(&k)?;
            let m = load_set(&m)?;
            let d = canonical_isometry(&k, &m);
            print_doc(&serde_json::to_value(IsometryDescriptorDto::from(&d)).unwrap());
            Ok(())
        }
        IsometryAction::Invert {
            descriptor,
            out: _,
        } => {
            let d = load_descriptor(&descriptor)?;
            print_doc(&serde_json::to_value(IsometryDescriptorDto::from(&d.invert())).unwrap());
            Ok(())
        }
    }
}

fn cmd_compat_check(k: &Path, m: &Path, psi: &Path, out: &OutputArgs) -> CliResult<()> {
    let k = load_set(k)?;
    let m = load_set(m)?;
    let psi = load_pl(psi)?;
    match check_gap_compatibility(&k, &m, &psi).map_err(CliError::from)? {
        Ok(corr) => {
            if out.json {
                let pairs: Vec<_> = corr
                    .pairs
                    .iter()
                    .map(|(u, v, r)| {
                        json!({
                            "gap_m": [fmt_rat(&u.left), fmt_rat(&u.right)],
                            "gap_k": [fmt_rat(&v.left), fmt_rat(&v.right)],
                            "ratio": rational_json(r, out.float),
                        })
                    })
                    .collect();
                print_doc(&json!({
                    "compatible": true,
                    "constant": rational_json(&corr.constant, out.float),
                    "gap_pairs": pairs,
                }));
            } else {
                println!("compatible, C = {}", fmt_rat(&corr.constant));
            }
            Ok(())
        }
        Err(report) => {
            if out.json {
                print_doc(&serde_json::to_value(IncompatibilityDto::from(&report)).unwrap());
            }
            Err(CliError::Domain(format!(
                "{} ({})",
                report,
                report.reason.code()
            )))
        }
    }
}

fn cmd_lift(args: LiftArgs) -> CliResult<()> {
    let k = load_set(&args.k)?;
    let m = load_set(&args.m)?;
    let psi = load_pl(&args.psi)?;
    let phi = match lift(&k, &m, &psi) {
        Ok(phi) => phi,
        Err(alexkit_core::Error::FiberIncompatible(report)) => {
            // the selector map still exists; report where it jumps
            let levels: Vec<String> = ProjectionTable::new(&m)
                .exceptional_set()
                .iter()
                .map(fmt_rat)
                .collect();
            return Err(CliError::Domain(format!(
                "{} ({}); only the selector map exists, discontinuous at levels [{}]",
                report,
                report.reason.code(),
                levels.join(", ")
            )));
        }
        Err(e) => return Err(e.into()),
    };
    debug_assert!(verify_conjugacy(&phi, &psi).map_err(CliError::from)?.is_ok());
    if let Some(n) = args.sample {
        let mut csv = String::from("y,phi_y\n");
        for (y, x) in sample_lift(&phi, n).map_err(CliError::from)? {
            csv.push_str(&format!("{},{}\n", float17(&y), float17(&x)));
        }
        return write_or_print(args.csv.as_deref(), &csv);
    }
    let mut doc = serde_json::to_value(LiftedMapDto::from(&phi)).unwrap();
    if args.out.float {
        doc["lip_forward_float"] = json!(to_f64(phi.lip_forward()));
        doc["lip_inverse_float"] = json!(to_f64(phi.lip_inverse()));
    }
    let pretty = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    write_or_print(args.out_file.as_deref(), &pretty)
}

fn sample_lift(
    phi: &alexkit_core::LiftedMap,
    n: usize,
) -> alexkit_core::Result<Vec<(Rational, Rational)>> {
    let m = phi.source();
    let measure = m.measure();
    let mut samples = Vec::new();
    for (a, b) in m.components() {
        if a == b {
            samples.push((a.clone(), phi.eval(a)?));
            continue;
        }
        let len = b - a;
        let weight = to_f64(&(&len / &measure));
        let count = ((n as f64 * weight).ceil() as usize).max(1);
        for i in 0..=count {
            let y = a + &len * Rational::new((i as i64).into(), (count as i64).into());
            let x = phi.eval(&y)?;
            samples.push((y, x));
        }
    }
    Ok(samples)
}

fn cmd_curve(args: CurveArgs) -> CliResult<()> {
    if args.family != "reciprocal" {
        return Err(CliError::Usage(format!(
            "unknown family {:?}; only \"reciprocal\" is defined",
            args.family
        )));
    }
    let curve = compatibility_growth_curve(1..=args.n_max).map_err(CliError::from)?;
    let mut csv = String::from("N,C_numerator,C_denominator,C_float\n");
    for (n, c) in &curve {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            n,
            c.numer(),
            c.denom(),
            float17(c)
        ));
    }
    write_or_print(args.csv.as_deref(), &csv)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<()> {
    let results = run_all(args.seed, args.n_max);
    let mut failures = 0usize;
    let mut ran = 0usize;
    for r in &results {
        if let Some(filter) = &args.only {
            if !r.name.contains(filter.as_str()) {
                continue;
            }
        }
        ran += 1;
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:<26} {}", r.name, r.detail);
        if !r.passed {
            failures += 1;
        }
    }
    if ran == 0 {
        return Err(CliError::Usage(format!(
            "--only {:?} matches no check",
            args.only.unwrap_or_default()
        )));
    }
    if failures > 0 {
        return Err(CliError::Domain(format!("{failures} check(s) failed")));
    }
    Ok(())
}
