use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use ulab::arith::{read_sieve, write_sieve, PrimeTable, WeightSpec};
use ulab::averages::{multiple_average, AverageMode, AverageSpec, AverageValue, IndexFamily};
use ulab::error::{Error, Result};
use ulab::gowers::{embed_truncated, u_norm, SequenceWindow};
use ulab::polyseq::{integer_iterate, IterateMode, RealPolynomial, Rounding};
use ulab::recipe::{recipe_names, run_recipe};
use ulab::systems::{make_product_cyclic_system, MeasurableSet};
use ulab::uniformsets::{build_uniform_set, uniformity_profile, OmegaVariant, SetKind};
use ulab::vdc::{van_der_corput_check, VectorFamily};

#[derive(Parser)]
#[command(name = "ulab", about = "numerical laboratory for uniformity norms and recurrence averages", version)]
struct Cli {
    /// Master seed; randomized batteries derive labeled streams from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker thread count (default: available cores). Results are
    /// identical regardless.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a prime sieve and persist it as a bitset file.
    Sieve(SieveArgs),
    /// Gowers uniformity norm of a complex sequence read from CSV.
    Gowers(GowersArgs),
    /// Closest-integer / floor iterates of a real polynomial.
    Polyseq(PolyseqArgs),
    /// Multiple ergodic average on a finite commuting system.
    Average(AverageArgs),
    /// van der Corput inequality check on a vector family.
    Vdc(VdcArgs),
    /// Gowers-uniform set construction and uniformity profile.
    Uniformset(UniformsetArgs),
    /// Run a named experiment recipe and emit a JSON report.
    Recipe(RecipeArgs),
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long)]
    limit: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GowersArgs {
    /// CSV with one "re,im" pair per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    d: usize,
    /// "dN": truncation embedding into Z_{dN}; "direct": norm over Z_N as read.
    #[arg(long, default_value = "direct")]
    embed: String,
}

#[derive(Args)]
struct PolyseqArgs {
    /// Coefficients ascending, comma-separated.
    #[arg(long)]
    poly: String,
    /// "closest" or "floor".
    #[arg(long, default_value = "closest")]
    mode: String,
    /// Inclusive range "lo:hi".
    #[arg(long)]
    range: String,
    /// Output CSV path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct AverageArgs {
    /// System description JSON: { "moduli", "generators", "set" }.
    #[arg(long)]
    system: PathBuf,
    /// Polynomial matrix JSON: rows of coefficient lists (ascending).
    #[arg(long)]
    polys: PathBuf,
    /// "closest" or "floor".
    #[arg(long, default_value = "closest")]
    mode: String,
    /// "all", "primes", or "progression:STEP,OFFSET".
    #[arg(long, default_value = "all")]
    family: String,
    #[arg(long = "N")]
    n: u64,
    /// Optional extra schedule points, comma-separated; N is always last.
    #[arg(long)]
    schedule: Option<String>,
    /// "unit", "mangoldt", "restricted", or "modified:w=W,r=R".
    #[arg(long, default_value = "unit")]
    weight: String,
    /// Report JSON path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct VdcArgs {
    /// CSV: one vector per line as re,im,re,im,...
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "C", default_value_t = ulab::vdc::DEFAULT_C)]
    c: f64,
}

#[derive(Args)]
struct UniformsetArgs {
    /// omega_mod, Omega_mod, omega_alpha_dist, Omega_alpha_dist,
    /// omega_alpha_frac, Omega_alpha_frac.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    b: Option<u64>,
    /// Residues (mod kinds), comma-separated.
    #[arg(long = "A")]
    a: Option<String>,
    /// Registry constant name for alpha kinds (e.g. sqrt2).
    #[arg(long)]
    alpha: Option<String>,
    /// Intervals for alpha kinds: "lo:hi" pairs, comma-separated.
    #[arg(long)]
    intervals: Option<String>,
    #[arg(long, default_value_t = 0)]
    shift: u64,
    #[arg(long = "N")]
    n: u64,
    /// "r=R" to emit a uniformity profile at U_r.
    #[arg(long)]
    profile: Option<String>,
    /// Schedule for the profile, comma-separated.
    #[arg(long)]
    schedule: Option<String>,
    /// Output CSV path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct RecipeArgs {
    #[arg(long)]
    name: Option<String>,
    /// List available recipes.
    #[arg(long)]
    list: bool,
    /// Report JSON path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
        })
        .collect()
}

fn parse_iterate_mode(s: &str) -> Result<IterateMode> {
    match s {
        "closest" => Ok(IterateMode::Closest),
        "floor" => Ok(IterateMode::Floor),
        other => Err(Error::InvalidArgument(format!(
            "mode must be closest or floor, got {other:?}"
        ))),
    }
}

fn parse_weight(s: &str) -> Result<WeightSpec> {
    match s {
        "unit" => Ok(WeightSpec::Unit),
        "mangoldt" => Ok(WeightSpec::VonMangoldt),
        "restricted" => Ok(WeightSpec::VonMangoldtRestricted),
        other => {
            let Some(body) = other.strip_prefix("modified:") else {
                return Err(Error::InvalidArgument(format!("unknown weight {other:?}")));
            };
            let mut w = None;
            let mut r = None;
            for part in body.split(',') {
                if let Some(v) = part.strip_prefix("w=") {
                    w = Some(v.parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?);
                } else if let Some(v) = part.strip_prefix("r=") {
                    r = Some(v.parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?);
                } else {
                    return Err(Error::Parse(format!("bad weight component {part:?}")));
                }
            }
            match (w, r) {
                (Some(w), Some(r)) => Ok(WeightSpec::Modified { w, r }),
                _ => Err(Error::Parse("modified weight needs w= and r=".into())),
            }
        }
    }
}

fn parse_family(s: &str) -> Result<IndexFamily> {
    match s {
        "all" => Ok(IndexFamily::All),
        "primes" => Ok(IndexFamily::Primes),
        other => {
            let Some(body) = other.strip_prefix("progression:") else {
                return Err(Error::InvalidArgument(format!("unknown family {other:?}")));
            };
            let parts = parse_u64_list(body)?;
            if parts.len() != 2 {
                return Err(Error::Parse("progression needs STEP,OFFSET".into()));
            }
            Ok(IndexFamily::Progression {
                step: parts[0],
                offset: parts[1],
            })
        }
    }
}

/// Loads the sieve from ULAB_SIEVE_PATH if it is set and large enough;
/// otherwise sieves from scratch.
fn load_or_sieve(limit: u64) -> Result<PrimeTable> {
    if let Ok(path) = std::env::var("ULAB_SIEVE_PATH") {
        if Path::new(&path).exists() {
            let table = read_sieve(Path::new(&path))?;
            if table.limit() >= limit {
                return Ok(table);
            }
            eprintln!(
                "ULAB_SIEVE_PATH table (limit {}) too small for {limit}; sieving",
                table.limit()
            );
        }
    }
    PrimeTable::sieve(limit)
}

fn write_output(path: &str, contents: &str) -> Result<()> {
    if path == "-" {
        print!("{contents}");
        std::io::stdout().flush()?;
    } else {
        std::fs::write(path, contents)?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct SystemFile {
    moduli: Vec<u64>,
    generators: Vec<Vec<i64>>,
    set: Vec<usize>,
}

fn read_seq_csv(path: &Path) -> Result<SequenceWindow> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected \"re,im\", got {line:?}",
                i + 1
            )));
        }
        let re: f64 = parts[0].trim().parse().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        let im: f64 = parts[1].trim().parse().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        values.push(Complex64::new(re, im));
    }
    SequenceWindow::new(values)
}

fn cmd_sieve(args: &SieveArgs) -> Result<()> {
    let table = PrimeTable::sieve(args.limit)?;
    write_sieve(&table, &args.out)?;
    println!("wrote sieve to limit {} ({} primes)", args.limit, table.primes().len());
    Ok(())
}

fn cmd_gowers(args: &GowersArgs) -> Result<()> {
    let seq = read_seq_csv(&args.input)?;
    let norm = match args.embed.as_str() {
        "direct" => u_norm(&seq, args.d)?,
        "dN" => {
            let raw = seq.values().to_vec();
            let embedded = embed_truncated(&raw, args.d)?;
            u_norm(&embedded, args.d)?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "embed must be dN or direct, got {other:?}"
            )))
        }
    };
    println!("{norm:.11e}");
    Ok(())
}

fn cmd_polyseq(args: &PolyseqArgs) -> Result<()> {
    let coeffs = parse_f64_list(&args.poly)?;
    let poly = RealPolynomial::new(coeffs)?;
    let mode = parse_iterate_mode(&args.mode)?;
    let parts: Vec<&str> = args.range.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Parse("range must be lo:hi".into()));
    }
    let lo: u64 = parts[0].parse().map_err(|e| Error::Parse(format!("{e}")))?;
    let hi: u64 = parts[1].parse().map_err(|e| Error::Parse(format!("{e}")))?;
    if lo > hi {
        return Err(Error::InvalidArgument("range lo exceeds hi".into()));
    }
    let rounding = Rounding::default();
    let mut out = String::from("n,value\n");
    for n in lo..=hi {
        let v = integer_iterate(&poly, n as i64, mode, rounding)?;
        out.push_str(&format!("{n},{v}\n"));
    }
    write_output(&args.out, &out)
}

fn cmd_average(args: &AverageArgs, _seed: u64) -> Result<()> {
    let sys_file: SystemFile =
        serde_json::from_str(&std::fs::read_to_string(&args.system)?)?;
    let system = make_product_cyclic_system(&sys_file.moduli, &sys_file.generators)?;
    let set = MeasurableSet::from_indices(&system, &sys_file.set)?;
    let poly_rows: Vec<Vec<Vec<f64>>> =
        serde_json::from_str(&std::fs::read_to_string(&args.polys)?)?;
    let polys: Vec<Vec<RealPolynomial>> = poly_rows
        .into_iter()
        .map(|row| row.into_iter().map(RealPolynomial::new).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let weight = parse_weight(&args.weight)?;
    let mut schedule = match &args.schedule {
        Some(s) => parse_u64_list(s)?,
        None => Vec::new(),
    };
    schedule.retain(|&x| x < args.n);
    schedule.sort_unstable();
    schedule.push(args.n);

    let bootstrap = PrimeTable::sieve(1000)?;
    let limit = weight.required_limit(&bootstrap, args.n)?.max(args.n).max(2);
    let table = load_or_sieve(limit)?;
    let spec = AverageSpec {
        system: &system,
        polys,
        iterate_mode: parse_iterate_mode(&args.mode)?,
        weight,
        family: parse_family(&args.family)?,
        mode: AverageMode::Recurrence { set },
        rounding: Rounding::default(),
    };
    let mut values = Vec::new();
    for &n in &schedule {
        match multiple_average(&spec, n, &table)? {
            AverageValue::Scalar(v) => values.push(v),
            AverageValue::Function { l2_norm, .. } => values.push(l2_norm),
        }
    }
    let report = serde_json::json!({
        "spec": {
            "system": { "moduli": sys_file.moduli, "generators": sys_file.generators, "set": sys_file.set },
            "mode": args.mode,
            "family": args.family,
            "weight": args.weight,
        },
        "schedule": schedule,
        "values": values,
        "baseline_ref": serde_json::Value::Null,
    });
    write_output(&args.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))
}

fn read_vectors_csv(path: &Path) -> Result<VectorFamily> {
    let text = std::fs::read_to_string(path)?;
    let mut vectors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let nums = parse_f64_list(line)?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse(format!(
                "line {}: need an even count of re,im components",
                i + 1
            )));
        }
        let v: Vec<Complex64> = nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        vectors.push(v);
    }
    VectorFamily::new(vectors)
}

fn cmd_vdc(args: &VdcArgs) -> Result<()> {
    let family = read_vectors_csv(&args.input)?;
    let res = van_der_corput_check(&family, args.c)?;
    println!(
        "lhs={:.11e} rhs={:.11e} ratio={:.11e} holds={}",
        res.lhs, res.rhs, res.ratio, res.holds
    );
    if !res.holds {
        return Err(Error::Precondition("inequality violated at given C".into()));
    }
    Ok(())
}

fn parse_set_kind(args: &UniformsetArgs) -> Result<SetKind> {
    let (variant, tail) = if let Some(t) = args.kind.strip_prefix("omega_") {
        (OmegaVariant::Distinct, t)
    } else if let Some(t) = args.kind.strip_prefix("Omega_") {
        (OmegaVariant::WithMultiplicity, t)
    } else {
        return Err(Error::InvalidArgument(format!("unknown kind {:?}", args.kind)));
    };
    let parse_intervals = |s: &Option<String>| -> Result<Vec<(f64, f64)>> {
        let Some(s) = s else {
            return Err(Error::InvalidArgument("alpha kinds need --intervals".into()));
        };
        s.split(',')
            .map(|pair| {
                let parts: Vec<&str> = pair.split(':').collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("bad interval {pair:?}")));
                }
                let lo: f64 = parts[0].parse().map_err(|e| Error::Parse(format!("{e}")))?;
                let hi: f64 = parts[1].parse().map_err(|e| Error::Parse(format!("{e}")))?;
                Ok((lo, hi))
            })
            .collect()
    };
    let parse_alpha = |s: &Option<String>| -> Result<ulab::constants::Irrational> {
        let Some(s) = s else {
            return Err(Error::InvalidArgument("alpha kinds need --alpha".into()));
        };
        ulab::constants::Irrational::parse(s)
    };
    match tail {
        "mod" => {
            let b = args
                .b
                .ok_or_else(|| Error::InvalidArgument("mod kinds need --b".into()))?;
            let residues = match &args.a {
                Some(s) => parse_u64_list(s)?,
                None => return Err(Error::InvalidArgument("mod kinds need --A".into())),
            };
            Ok(SetKind::Mod { variant, b, residues })
        }
        "alpha_dist" => Ok(SetKind::AlphaDist {
            variant,
            alpha: parse_alpha(&args.alpha)?,
            intervals: parse_intervals(&args.intervals)?,
        }),
        "alpha_frac" => Ok(SetKind::AlphaFrac {
            variant,
            alpha: parse_alpha(&args.alpha)?,
            intervals: parse_intervals(&args.intervals)?,
        }),
        other => Err(Error::InvalidArgument(format!("unknown kind tail {other:?}"))),
    }
}

fn cmd_uniformset(args: &UniformsetArgs) -> Result<()> {
    let kind = parse_set_kind(args)?;
    let table = load_or_sieve(args.n + args.shift + 1)?;
    let mut out = String::new();
    if let Some(profile) = &args.profile {
        let r: usize = profile
            .strip_prefix("r=")
            .ok_or_else(|| Error::Parse("profile must be r=R".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("{e}")))?;
        let schedule = match &args.schedule {
            Some(s) => parse_u64_list(s)?,
            None => vec![args.n],
        };
        let values = uniformity_profile(&kind, args.shift, r, &schedule, None, &table)?;
        out.push_str("N,u_norm\n");
        for (n, v) in schedule.iter().zip(values.iter()) {
            out.push_str(&format!("{n},{v:.11e}\n"));
        }
    } else {
        let sample = build_uniform_set(&kind, args.shift, args.n, &table)?;
        out.push_str(&format!("# density_estimate,{:.11e}\n", sample.density_estimate));
        out.push_str("n,member\n");
        for (i, m) in sample.membership.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, u8::from(*m)));
        }
    }
    write_output(&args.out, &out)
}

fn cmd_recipe(args: &RecipeArgs, seed: u64) -> Result<bool> {
    if args.list {
        for name in recipe_names() {
            println!("{name}");
        }
        return Ok(true);
    }
    let Some(name) = &args.name else {
        return Err(Error::InvalidArgument("recipe needs --name or --list".into()));
    };
    if name == "all" {
        let mut all_pass = true;
        let mut body = String::from("[");
        for (i, name) in recipe_names().iter().enumerate() {
            let start = std::time::Instant::now();
            let report = run_recipe(name, seed)?;
            eprintln!(
                "{name}: {} ({:.2}s)",
                if report.passed { "pass" } else { "FAIL" },
                start.elapsed().as_secs_f64()
            );
            all_pass &= report.passed;
            if i > 0 {
                body.push(',');
            }
            body.push_str(&report.to_json()?);
        }
        body.push_str("]\n");
        write_output(&args.out, &body)?;
        return Ok(all_pass);
    }
    let start = std::time::Instant::now();
    let report = run_recipe(name, seed)?;
    eprintln!("wall-clock: {:.2}s", start.elapsed().as_secs_f64());
    write_output(&args.out, &format!("{}\n", report.to_json()?))?;
    Ok(report.passed)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Sieve(a) => cmd_sieve(a).map(|()| true),
        Command::Gowers(a) => cmd_gowers(a).map(|()| true),
        Command::Polyseq(a) => cmd_polyseq(a).map(|()| true),
        Command::Average(a) => cmd_average(a, cli.seed).map(|()| true),
        Command::Vdc(a) => cmd_vdc(a).map(|()| true),
        Command::Uniformset(a) => cmd_uniformset(a).map(|()| true),
        Command::Recipe(a) => cmd_recipe(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not configure thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
