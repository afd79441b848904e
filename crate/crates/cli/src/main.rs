use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use nextremal::families::{FamilyHandle, Solution};
use nextremal::harness::{verify, VerifyParams};
use nextremal::measures::{apply_density, classify_measure, DensitySpec, DiscreteMeasure};
use nextremal::nevanlinna::{friedrichs_parameter, nevanlinna_eval, Determinacy, Parameter};
use nextremal::numerics::{to_decimal_digits, Complex};
use nextremal::{Error, PrecisionContext};

const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "nextremal", version, about = "N-extremal solutions of indeterminate moment problems")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Working precision in bits [default: 256].
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Cap on series terms [default: 4096].
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Relative truncation tolerance [default: 1e-30].
    #[arg(long, global = true)]
    tail_tol: Option<f64>,
    /// JSON file with any of bits, max_terms, tail_tol; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format for reports and measure listings.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time in verification reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct FamilyOpts {
    /// quartic, al-salam-carlitz (asc) or stieltjes-wigert (sw).
    #[arg(long)]
    family: String,
    #[arg(long)]
    q: Option<f64>,
    /// Al-Salam–Carlitz parameter a, 1 < a < 1/q.
    #[arg(long)]
    a: Option<f64>,
}

impl FamilyOpts {
    fn handle(&self) -> nextremal::Result<FamilyHandle> {
        FamilyHandle::parse(&self.family, self.q, self.a)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Family parameters and constants.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Build measures.
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Determinacy verdict for (1+x²)^-α dμ of a stored measure.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
    },
    /// Nevanlinna matrix entries.
    Nevanlinna {
        #[command(subcommand)]
        cmd: NevanlinnaCmd,
    },
    /// Run a theorem check on a family.
    Verify {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        family: FamilyOpts,
        /// Parameter t; a number or F [default: 1 for stieltjes-wigert, 2F otherwise].
        #[arg(long)]
        t: Option<String>,
        /// Second parameter of T3.4, F <= t' <= t; a number or F [default: F].
        #[arg(long = "t-prime")]
        t_prime: Option<String>,
        /// Atoms per constructed measure.
        #[arg(long)]
        count: Option<usize>,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    Info {
        #[command(flatten)]
        family: FamilyOpts,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    Build {
        #[command(flatten)]
        family: FamilyOpts,
        /// friedrichs, krein, t=<v> or c=<v>.
        #[arg(long)]
        solution: String,
        #[arg(long, default_value_t = 40)]
        count: usize,
        /// Output file; .csv writes atom,mass rows, anything else JSON.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum NevanlinnaCmd {
    Eval {
        #[command(flatten)]
        family: FamilyOpts,
        /// re,im
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Parameter t (number or inf).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    bits: Option<u32>,
    max_terms: Option<usize>,
    tail_tol: Option<f64>,
}

fn context(g: &GlobalOpts) -> anyhow::Result<PrecisionContext> {
    let file = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| Error::Usage(format!("config {}: {e}", p.display())))?
        }
        None => ConfigFile::default(),
    };
    let d = PrecisionContext::default();
    let ctx = PrecisionContext::new(
        g.bits.or(file.bits).unwrap_or(d.bits),
        g.max_terms.or(file.max_terms).unwrap_or(d.max_terms),
        g.tail_tol.or(file.tail_tol).unwrap_or(d.tail_tol),
    )
    .map_err(|e| Error::Usage(e.to_string()))?;
    Ok(ctx)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Inconclusive(_)) => EXIT_INCONCLUSIVE,
        Some(Error::Usage(_) | Error::Parse(_) | Error::Domain(_) | Error::Io(_) | Error::Json(_)) => EXIT_USAGE,
        Some(_) => EXIT_FAIL,
        None => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let ctx = context(&cli.global)?;
    match cli.command {
        Command::Family { cmd: FamilyCmd::Info { family } } => family_info(&family.handle()?, &ctx),
        Command::Measure {
            cmd: MeasureCmd::Build { family, solution, count, out },
        } => measure_build(&family.handle()?, &solution, count, &out, &ctx),
        Command::Classify { input, alpha } => classify_file(&input, alpha, &ctx),
        Command::Nevanlinna {
            cmd: NevanlinnaCmd::Eval { family, z, t },
        } => nevanlinna(&family.handle()?, &z, t.as_deref(), &ctx),
        Command::Verify {
            theorem,
            family,
            t,
            t_prime,
            count,
            report,
        } => {
            let params = VerifyParams { t, t_prime, count };
            run_verify(&theorem, &family.handle()?, &params, report.as_deref(), &cli.global, &ctx)
        }
    }
}

fn digits(x: &rug::Float) -> String {
    to_decimal_digits(x, 25)
}

fn family_info(h: &FamilyHandle, ctx: &PrecisionContext) -> anyhow::Result<u8> {
    println!("family: {}", h.name());
    match *h {
        FamilyHandle::Quartic => {}
        FamilyHandle::AlSalamCarlitz { a, q } => println!("a: {a}\nq: {q}"),
        FamilyHandle::StieltjesWigert { q } => println!("q: {q}"),
    }
    let f = h.friedrichs_value(ctx)?;
    println!("F: {}", digits(&f));
    println!("alpha: {}", digits(&(-rug::Float::with_val(ctx.bits, f.recip_ref()))));
    // Independent route: α = lim p_n(0)/q_n(0) from the recurrence.
    let work = h.working_context(ctx);
    let rc = h.recurrence(h.default_recurrence_len(&work), &work)?;
    let fp = friedrichs_parameter(&rc, &work)?;
    println!("F (recurrence): {}", fp.friedrichs);
    println!("alpha (recurrence): {}", digits(&fp.alpha));
    println!(
        "recurrence: {} coefficients, spread {}, converged {}{}",
        rc.len(),
        to_decimal_digits(&fp.spread, 3),
        fp.converged,
        if fp.extrapolated { ", extrapolated" } else { "" }
    );
    Ok(0)
}

fn measure_build(h: &FamilyHandle, solution: &str, count: usize, out: &Path, ctx: &PrecisionContext) -> anyhow::Result<u8> {
    let which = Solution::parse(solution, ctx.bits)?;
    let m = h.solution(&which, count, ctx)?;
    m.write_file(out)?;
    println!(
        "{}: {} atoms, total mass {}, tail mass bound {} -> {}",
        m.label,
        m.len(),
        digits(&m.total_mass()),
        to_decimal_digits(&m.tail_mass_bound, 3),
        out.display()
    );
    Ok(0)
}

fn classify_file(input: &Path, alpha: f64, ctx: &PrecisionContext) -> anyhow::Result<u8> {
    let m = DiscreteMeasure::read_json_file(input)?;
    let m = if alpha == 0.0 {
        m
    } else {
        apply_density(&m, &DensitySpec::InvOnePlusX2Pow { alpha })?
    };
    let v = classify_measure(&m, ctx)?;
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(if v.verdict == Determinacy::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

fn parse_z(s: &str, prec: u32) -> nextremal::Result<Complex> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Error::Usage(format!("--z expects re,im, got {s:?}")))?;
    let p = |v: &str| nextremal::numerics::parse_float(v.trim(), prec);
    Ok(Complex::new(p(re)?, p(im)?))
}

fn nevanlinna(h: &FamilyHandle, z: &str, t: Option<&str>, ctx: &PrecisionContext) -> anyhow::Result<u8> {
    let z = parse_z(z, ctx.bits)?;
    let work = h.working_context(ctx);
    let rc = h.recurrence(h.default_recurrence_len(&work), &work)?;
    let q = nevanlinna_eval(&rc, &z, &work)?;
    println!("z: {z}");
    println!("A: {}\nB: {}\nC: {}\nD: {}", q.a, q.b, q.c, q.d);
    println!("AD - BC - 1: {}", to_decimal_digits(&q.identity_residual, 3));
    println!("terms: {}, tail bound {}, method {:?}", q.terms_used, to_decimal_digits(&q.tail_bound, 3), q.method);
    if let Some(t) = t {
        let t = Parameter::parse(t, work.bits)?;
        if z.im.is_zero() {
            let d = q.denominator(&t);
            println!("B + tD: {d}");
        } else {
            // ∫ dμ_t(x)/(x - z) = -(A + tC)/(B + tD)
            let f = q.numerator(&t).div(&q.denominator(&t));
            let neg = Complex::new(-f.re, -f.im);
            println!("stieltjes transform of mu_t (t = {t}): {neg}");
        }
    }
    Ok(0)
}

fn run_verify(
    theorem: &str,
    h: &FamilyHandle,
    params: &VerifyParams,
    report_path: Option<&Path>,
    g: &GlobalOpts,
    ctx: &PrecisionContext,
) -> anyhow::Result<u8> {
    let start = Instant::now();
    let mut report = verify(theorem, h, params, ctx)?;
    if g.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = match g.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    if let Some(p) = report_path {
        let body = if p.extension().is_some_and(|e| e == "csv") { report.to_csv()? } else { report.to_json() };
        std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report.exit_code() as u8)
}
