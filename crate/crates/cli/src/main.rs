use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lutrace::bloch::{
    extract_rep, partial_trace, random_density, random_lu_pair_with_rank, Diagnostics, DensityMatrix, HypermatrixRep,
};
use lutrace::equivalence::{check_rep, CheckOptions, CheckReport, Choice, ChoiceSet, Mode, Overall};
use lutrace::io;
use lutrace::specht::{necklace_count, word_bound_bipartite, word_bound_lemma1};
use lutrace::Error;

const EXIT_NOT_EQUIVALENT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_DIMS: u8 = 4;
const EXIT_INVALID: u8 = 5;

/// Decide quasi-LU equivalence of bipartite and tripartite density matrices.
#[derive(Parser)]
#[command(name = "lutrace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a state file and report every validation violation.
    Validate { path: PathBuf },
    /// Print the hypermatrix representation of a state.
    Extract {
        path: PathBuf,
        /// Emit the JSON representation file instead of a summary.
        #[arg(long)]
        json: bool,
        /// Write the JSON representation to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two states (or two representation files with --rep).
    Check(CheckArgs),
    /// Write deterministic example inputs.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Fallback,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long = "a")]
    a: PathBuf,
    #[arg(long = "b")]
    b: PathBuf,
    /// Inputs are representation files written by `extract --json`.
    #[arg(long)]
    rep: bool,
    #[arg(long, default_value_t = 4)]
    max_word_len: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// 1223, 2113, 3312 or all.
    #[arg(long, default_value = "all")]
    choice: String,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "on")]
    qubit_det: Switch,
    /// Random words sampled beyond the exhaustive depth.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 12)]
    sample_max_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Also print the sufficient word-length bounds (they are not run).
    #[arg(long)]
    paper_bound: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    LuPair,
    Product,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Comma-separated subsystem dimensions, e.g. 2,2,3.
    #[arg(long)]
    dims: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = std::env::var("LUTRACE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Extract { path, json, out } => extract(&path, json, out.as_deref()),
        Command::Check(args) => check(&args),
        Command::Gen(args) => gen(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::StateMismatch(_) => EXIT_DIMS,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn validate(path: &Path) -> Result<u8, Error> {
    let (dims, m) = io::parse_state_raw(&read_text(path)?)?;
    if let Err(e) = DensityMatrix::new(dims.clone(), m.clone()) {
        // structural problems (shape, dims) come back directly
        if !matches!(e, Error::NotHermitian(_) | Error::Trace { .. } | Error::NotPsd(_)) {
            return Err(e);
        }
    }
    let d = Diagnostics::measure(&m);
    let violations = d.violations();
    println!("dims {dims:?}, size {}", m.nrows());
    println!("hermitian deviation {:.3e}", d.hermitian_deviation);
    println!("trace {:.15} {:+.3e}i", d.trace.re, d.trace.im);
    println!("smallest eigenvalue {:.6e}", d.min_eigenvalue);
    if violations.is_empty() {
        println!("valid");
        Ok(0)
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Ok(EXIT_INVALID)
    }
}

fn extract(path: &Path, json: bool, out: Option<&Path>) -> Result<u8, Error> {
    let rep = extract_rep(&io::read_state(path)?)?;
    if let Some(out) = out {
        io::write_rep(out, &rep)?;
    }
    if json {
        print!("{}", io::rep_to_json(&rep));
    } else if out.is_none() {
        for (s, t) in rep.iter() {
            println!("T_{s} shape {:?} norm {:.12e}", t.shape(), t.norm());
            let entries: Vec<String> = t.data().iter().map(|x| format!("{x:.6}")).collect();
            println!("  {}", entries.join(" "));
        }
    }
    Ok(0)
}

fn options(args: &CheckArgs) -> Result<CheckOptions, Error> {
    let choice = if args.choice.eq_ignore_ascii_case("all") {
        ChoiceSet::All
    } else {
        ChoiceSet::One(Choice::parse(&args.choice)?)
    };
    Ok(CheckOptions {
        max_word_len: args.max_word_len,
        tol: args.tol,
        choice,
        mode: match args.mode {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Fallback => Mode::Fallback,
        },
        qubit_det_check: matches!(args.qubit_det, Switch::On),
        samples: args.samples,
        sample_max_len: args.sample_max_len,
        seed: args.seed,
        ..CheckOptions::default()
    })
}

fn load(path: &Path, rep: bool) -> Result<HypermatrixRep, Error> {
    if rep {
        io::read_rep(path)
    } else {
        extract_rep(&io::read_state(path)?)
    }
}

/// log10 of the number of words that the sufficient bound would require.
fn log10_words(letters: u64, len: u64) -> f64 {
    if len <= 12 {
        (necklace_count(letters, len as u32) as f64).log10()
    } else {
        len as f64 * (letters as f64).log10() - (len as f64).log10()
    }
}

fn bounds(dims: &[usize]) -> Vec<(String, u64, u64)> {
    let deltas: Vec<usize> = dims.iter().map(|d| d * d - 1).collect();
    match *deltas.as_slice() {
        [d1, d2] => vec![("bipartite trace identities".into(), word_bound_bipartite(d1, d2), 4)],
        [_, _, _] => Choice::ALL
            .iter()
            .map(|c| {
                let (i, _, j2, k) = c.indices();
                let b = word_bound_lemma1(deltas[j2] * deltas[k], 1, deltas[i], 4, 5);
                (format!("tripartite trace identities {c}"), b, 17)
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn exit_code(report: &CheckReport) -> u8 {
    match report.overall {
        Overall::NotEquivalent => EXIT_NOT_EQUIVALENT,
        Overall::Inconclusive => EXIT_INCONCLUSIVE,
        _ => 0,
    }
}

fn check(args: &CheckArgs) -> Result<u8, Error> {
    let opts = options(args)?;
    let a = load(&args.a, args.rep)?;
    let b = load(&args.b, args.rep)?;
    let report = check_rep(&a, &b, &opts)?;
    let bounds = if args.paper_bound { bounds(a.dims()) } else { Vec::new() };
    if args.json {
        let mut value = serde_json::to_value(&report).expect("report serializes");
        if args.paper_bound {
            value["bounds"] = bounds
                .iter()
                .map(|(name, len, letters)| {
                    serde_json::json!({
                        "name": name,
                        "max_word_len": len,
                        "letters": letters,
                        "log10_words": log10_words(*letters, *len),
                    })
                })
                .collect();
        }
        println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    } else {
        for (name, len, letters) in &bounds {
            println!(
                "bound: {name}: words up to length {len} over {letters} letters (about 10^{:.0} words); not run",
                log10_words(*letters, *len)
            );
        }
        print!("{}", report.render_text());
    }
    Ok(exit_code(&report))
}

fn parse_dims(s: &str) -> Result<Vec<usize>, Error> {
    let dims: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension {p:?}"))))
        .collect::<Result<_, _>>()?;
    if !(2..=3).contains(&dims.len()) {
        return Err(Error::Parse(format!("need 2 or 3 dimensions, got {}", dims.len())));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(dims)
}

fn create_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn gen(args: &GenArgs) -> Result<u8, Error> {
    let dims = parse_dims(&args.dims)?;
    create_dir(&args.out)?;
    let mut written = Vec::new();
    match args.kind {
        Kind::Random => {
            let rho = random_density(&dims, args.seed, args.rank)?;
            written.push(args.out.join("state.json"));
            io::write_state(&written[0], &rho)?;
        }
        Kind::LuPair => {
            let pair = random_lu_pair_with_rank(&dims, args.seed, args.rank)?;
            for (name, rho) in [("a.json", &pair.rho), ("b.json", &pair.rho_hat)] {
                let p = args.out.join(name);
                io::write_state(&p, rho)?;
                written.push(p);
            }
            let p = args.out.join("unitaries.json");
            io::write_unitaries(&p, &pair.unitaries)?;
            written.push(p);
        }
        Kind::Product => {
            let f1 = random_density(&dims[..1], args.seed, None)?;
            let f2 = random_density(&dims[1..], args.seed.wrapping_add(1), args.rank)?;
            let rho = f1.tensor(&f2);
            debug_assert!(partial_trace(&rho, 0)?.max_abs_diff(&f2) < 1e-12);
            for (name, s) in [("state.json", &rho), ("factor1.json", &f1), ("factor2.json", &f2)] {
                let p = args.out.join(name);
                io::write_state(&p, s)?;
                written.push(p);
            }
        }
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(0)
}
