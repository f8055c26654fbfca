//! `entangle-ring`: command-line front end for the two-qubit invariant
//! library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 malformed input.

mod output;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entangle_ring::invariants::casimirs_from_fano;
use entangle_ring::positivity::{casimirs_of_state, write_region_csv, CharPolyCoeffs};
use entangle_ring::states::{FanoJson, StateJson};
use entangle_ring::verify::{self, VerifyPlan};
use entangle_ring::{
    basis_values, char_poly_coeffs, evaluate_all, fano_compose, fano_decompose, molien_expand,
    normalized_bounds, positivity_check, random_state, region_check, region_sample, BasisValues,
    CasimirTriple, DensityMatrix, FanoForm, LocalInvariants, StateKind,
};
use serde::Serialize;

const THREADS_ENV: &str = "ENTANGLE_RING_THREADS";
/// `|Tr ρ² − 1|` below this counts as pure.
const PURITY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "entangle-ring",
    version,
    about = "Local-unitary invariants of two-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fano form (a, b, C) of a 4x4 state.
    Decompose(InputArgs),
    /// 4x4 matrix from a Fano form.
    Compose(InputArgs),
    /// The twenty local invariants, the K/J basis and the Casimirs.
    Invariants(InputArgs),
    /// Characteristic-polynomial coefficients, bounds and region margins.
    Positivity(InputArgs),
    /// Purity, positivity and region class on one line.
    Classify(InputArgs),
    /// Casimirs and S_k of seeded random states.
    RegionSample(RegionSampleArgs),
    /// Expansion of the Molien series.
    Molien(MolienArgs),
    /// Numerical verification suite; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Seeded random state as JSON.
    RandomState(RandomStateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct InputArgs {
    /// State or Fano JSON file; `-` reads stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct RegionSampleArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value = "hilbert-schmidt", value_parser = parse_kind)]
    kind: StateKind,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct MolienArgs {
    #[arg(long, default_value_t = 16)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: u64,
    /// Run every check (the default when no check is selected).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    positivity: bool,
    #[arg(long)]
    invariance: bool,
    #[arg(long)]
    casimir: bool,
    #[arg(long)]
    hilbert: bool,
    /// Local unitary trials per state.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Highest degree compared against the rank oracle.
    #[arg(long, default_value_t = 6)]
    kmax: usize,
}

#[derive(Args)]
struct RandomStateArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value = "hilbert-schmidt", value_parser = parse_kind)]
    kind: StateKind,
}

fn parse_kind(s: &str) -> Result<StateKind, String> {
    s.parse().map_err(|e: entangle_ring::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Input(String),
    Verification(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) => 2,
            Self::Input(_) | Self::Io(_) => 3,
        }
    }
}

impl From<entangle_ring::Error> for Failure {
    fn from(e: entangle_ring::Error) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

type CliResult<T> = Result<T, Failure>;

enum Parsed {
    State(DensityMatrix),
    Fano(FanoForm),
}

fn read_input(path: &PathBuf) -> CliResult<Parsed> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| Failure::Input("expected a JSON object".into()))?;
    if object.contains_key("dim") {
        let j: StateJson =
            serde_json::from_value(value).map_err(|e| Failure::Input(e.to_string()))?;
        Ok(Parsed::State(DensityMatrix::try_from(j)?))
    } else if object.contains_key("a") {
        let j: FanoJson =
            serde_json::from_value(value).map_err(|e| Failure::Input(e.to_string()))?;
        Ok(Parsed::Fano(j.into()))
    } else {
        Err(Failure::Input(
            "expected a state ('dim') or Fano ('a', 'b', 'C') object".into(),
        ))
    }
}

fn read_state(path: &PathBuf) -> CliResult<DensityMatrix> {
    match read_input(path)? {
        Parsed::State(rho) => Ok(rho),
        Parsed::Fano(f) => Ok(fano_compose(&f)),
    }
}

fn read_fano(path: &PathBuf) -> CliResult<FanoForm> {
    match read_input(path)? {
        Parsed::State(rho) => Ok(fano_decompose(&rho)?),
        Parsed::Fano(f) => Ok(f),
    }
}

fn reject_csv(format: Format, command: &str) -> CliResult<()> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("{command} has no csv output")));
    }
    Ok(())
}

fn decompose(args: &InputArgs) -> CliResult<String> {
    let format = args.format.unwrap_or(Format::Json);
    reject_csv(format, "decompose")?;
    let rho = match read_input(&args.input)? {
        Parsed::State(rho) => rho,
        Parsed::Fano(_) => return Err(Failure::Input("decompose expects a state".into())),
    };
    let f = fano_decompose(&rho)?;
    Ok(match format {
        Format::Table => output::table_pairs(&fano_rows(&f)),
        _ => output::json(&FanoJson::from(&f)),
    })
}

fn fano_rows(f: &FanoForm) -> Vec<(String, f64)> {
    let mut rows = Vec::with_capacity(15);
    for i in 0..3 {
        rows.push((format!("a{}", i + 1), f.a[i]));
    }
    for i in 0..3 {
        rows.push((format!("b{}", i + 1), f.b[i]));
    }
    for i in 0..3 {
        for j in 0..3 {
            rows.push((format!("C{}{}", i + 1, j + 1), f.c[(i, j)]));
        }
    }
    rows
}

fn compose(args: &InputArgs) -> CliResult<String> {
    let format = args.format.unwrap_or(Format::Json);
    reject_csv(format, "compose")?;
    let f = match read_input(&args.input)? {
        Parsed::Fano(f) => f,
        Parsed::State(_) => return Err(Failure::Input("compose expects a Fano form".into())),
    };
    let rho = fano_compose(&f);
    Ok(match format {
        Format::Table => {
            let m = rho.entries();
            let mut s = String::new();
            for i in 0..4 {
                let cells: Vec<String> = (0..4)
                    .map(|j| {
                        format!(
                            "{}{:+}i",
                            entangle_ring::format_float(m[(i, j)].re),
                            FloatSigned(m[(i, j)].im)
                        )
                    })
                    .collect();
                s.push_str(&cells.join("  "));
                s.push('\n');
            }
            s
        }
        _ => output::json(&StateJson::from(&rho)),
    })
}

/// Signed scientific rendering for the imaginary part of a table cell.
struct FloatSigned(f64);

impl std::fmt::Display for FloatSigned {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if f.sign_plus() && self.0.is_sign_positive() {
            f.write_str("+")?;
        }
        f.write_str(&entangle_ring::format_float(self.0))
    }
}

#[derive(Serialize)]
struct InvariantsOut {
    invariants: LocalInvariants,
    basis: BasisValues,
    casimirs: CasimirTriple,
}

fn invariants(args: &InputArgs) -> CliResult<String> {
    let f = read_fano(&args.input)?;
    let inv = evaluate_all(&f);
    let cas = casimirs_from_fano(&f);
    let basis = basis_values(&inv, &cas);
    let rows = || {
        let mut rows: Vec<(String, f64)> = LocalInvariants::NAMES
            .iter()
            .zip(inv.to_array())
            .map(|(n, v)| (n.to_string(), v))
            .collect();
        rows.extend(
            BasisValues::K_NAMES
                .iter()
                .zip(basis.k)
                .map(|(n, v)| (n.to_string(), v)),
        );
        rows.extend(
            BasisValues::J_NAMES
                .iter()
                .zip(basis.j)
                .map(|(n, v)| (n.to_string(), v)),
        );
        rows.extend([
            ("C2".to_string(), cas.c2),
            ("C3".to_string(), cas.c3),
            ("C4".to_string(), cas.c4),
        ]);
        rows
    };
    Ok(match args.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&InvariantsOut {
            invariants: inv,
            basis,
            casimirs: cas,
        }),
        Format::Csv => output::csv_pairs(&rows()),
        Format::Table => output::table_pairs(&rows()),
    })
}

#[derive(Serialize)]
struct RegionOut {
    class: String,
    margins: [f64; 6],
}

#[derive(Serialize)]
struct PositivityOut {
    #[serde(rename = "S")]
    s: Vec<f64>,
    normalized_bounds: Vec<f64>,
    class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    casimirs: Option<CasimirTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    region: Option<RegionOut>,
}

fn unit_state(path: &PathBuf) -> CliResult<DensityMatrix> {
    let rho = read_state(path)?;
    if !rho.is_unit_trace() {
        return Err(Failure::Input("a unit-trace state is required".into()));
    }
    Ok(rho)
}

fn positivity_summary(rho: &DensityMatrix) -> CliResult<PositivityOut> {
    let coeffs: CharPolyCoeffs = char_poly_coeffs(rho);
    let report = positivity_check(rho);
    let (casimirs, region) = if rho.dim() == 4 {
        let cas = casimirs_of_state(rho)?;
        let r = region_check(&cas);
        (
            Some(cas),
            Some(RegionOut {
                class: r.class.to_string(),
                margins: r.margins,
            }),
        )
    } else {
        (None, None)
    };
    Ok(PositivityOut {
        normalized_bounds: normalized_bounds(&coeffs),
        s: coeffs.s,
        class: report.class.to_string(),
        casimirs,
        region,
    })
}

fn positivity(args: &InputArgs) -> CliResult<String> {
    let rho = unit_state(&args.input)?;
    let out = positivity_summary(&rho)?;
    let rows = || {
        let mut rows: Vec<(String, f64)> = out
            .s
            .iter()
            .enumerate()
            .map(|(k, v)| (format!("S{}", k + 1), *v))
            .collect();
        rows.extend(
            out.normalized_bounds
                .iter()
                .enumerate()
                .map(|(k, v)| (format!("bound{}", k + 2), *v)),
        );
        if let Some(r) = &out.region {
            const NAMES: [&str; 6] = ["C2", "1-C2", "P", "1-P", "Q", "1-Q"];
            rows.extend(
                NAMES
                    .iter()
                    .zip(r.margins)
                    .map(|(n, v)| (format!("margin:{n}"), v)),
            );
        }
        rows
    };
    let classes = || {
        let mut s = format!("class  {}\n", out.class);
        if let Some(r) = &out.region {
            s.push_str(&format!("region  {}\n", r.class));
        }
        s
    };
    Ok(match args.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&out),
        Format::Csv => output::csv_pairs(&rows()),
        Format::Table => output::table_pairs(&rows()) + &classes(),
    })
}

#[derive(Serialize)]
struct ClassifyOut {
    purity: &'static str,
    positivity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    region: Option<String>,
}

fn classify(args: &InputArgs) -> CliResult<String> {
    let format = args.format.unwrap_or(Format::Table);
    reject_csv(format, "classify")?;
    let rho = unit_state(&args.input)?;
    let out = ClassifyOut {
        purity: if rho.is_pure(PURITY_TOL) {
            "pure"
        } else {
            "mixed"
        },
        positivity: positivity_check(&rho).class.to_string(),
        region: if rho.dim() == 4 {
            Some(region_check(&casimirs_of_state(&rho)?).class.to_string())
        } else {
            None
        },
    };
    Ok(match format {
        Format::Json => output::json(&out),
        _ => match &out.region {
            Some(r) => format!("{}, {}, region:{}\n", out.purity, out.positivity, r),
            None => format!("{}, {}\n", out.purity, out.positivity),
        },
    })
}

fn region_sample_cmd(args: &RegionSampleArgs) -> CliResult<String> {
    let rows = region_sample(args.n, args.seed, args.kind);
    Ok(match args.format {
        Format::Json => output::json(&rows),
        _ => {
            let mut buf = Vec::new();
            write_region_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("ascii csv")
        }
    })
}

fn molien(args: &MolienArgs) -> CliResult<String> {
    let series = molien_expand(args.kmax).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(match args.format {
        Format::Json => output::json(&series),
        Format::Csv => {
            let mut s = String::from("k,d_k\n");
            for (k, d) in series.coeffs.iter().enumerate() {
                s.push_str(&format!("{k},{d}\n"));
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for (k, d) in series.coeffs.iter().enumerate() {
                s.push_str(&format!("{k:>3}  {d}\n"));
            }
            s
        }
    })
}

fn verify_cmd(args: &VerifyArgs) -> CliResult<String> {
    let any = args.positivity || args.invariance || args.casimir || args.hilbert;
    let all = args.all || !any;
    let plan = VerifyPlan {
        positivity: all || args.positivity,
        invariance: all || args.invariance,
        casimir: all || args.casimir,
        hilbert: all || args.hilbert,
        seed: args.seed,
        trials: args.trials,
        kmax: args.kmax,
    };
    let report = verify::run(&plan).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = output::json(&report);
    if report.passed {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn random_state_cmd(args: &RandomStateArgs) -> CliResult<String> {
    let rho =
        random_state(args.dim, args.seed, args.kind).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(output::json(&StateJson::from(&rho)))
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    configure_threads()?;
    match &cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Compose(a) => compose(a),
        Command::Invariants(a) => invariants(a),
        Command::Positivity(a) => positivity(a),
        Command::Classify(a) => classify(a),
        Command::RegionSample(a) => region_sample_cmd(a),
        Command::Molien(a) => molien(a),
        Command::Verify(a) => verify_cmd(a),
        Command::RandomState(a) => random_state_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli);
    let mut stdout = io::stdout().lock();
    match result {
        Ok(text) => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.code();
            match failure {
                Failure::Verification(report) => {
                    let _ = stdout.write_all(report.as_bytes());
                    eprintln!("error: verification failed");
                }
                Failure::Usage(msg) | Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
