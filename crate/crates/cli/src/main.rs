use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voa_char::characters::{builtin_character, chi_prime, graded_dimension, Builtin, CharacterError, ChargeConfig};
use voa_char::lattice::{GramLattice, LatticeError, RationalVector};
use voa_char::modular::{deligne_dim, deligne_dim2, mu_to_c, two_character_table, ModularError};
use voa_char::oracle::{enumerate_charge_monomials, OracleError, DEFAULT_BUDGET};
use voa_char::qseries::TruncatedQSeries;
use voa_char::rational::{format_rational, parse_rational, Rational};
use voa_char::verify::{run_suite, CharacterCache, Suite, VerifyError, VerifyOptions};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "voa-char", version, about = "Exact characters of principal-subspace type lattice VOAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a named character.
    Character {
        name: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Graded dimension of W(R, S; lambda) for a lattice and charge split.
    GradedDim {
        #[command(flatten)]
        config: ConfigArgs,
        /// Divide out the leading q^{qform(lambda)/2}.
        #[arg(long)]
        chi_prime: bool,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite: identities, mde, kz, modular, oracle or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Dump the basis monomials of one charge as JSON lines.
    EnumerateBasis {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated integer charge in basis coordinates.
        #[arg(long, allow_hyphen_values = true)]
        charge: String,
        /// Weight window above the charge's ground weight.
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Exceptional-series dimension formulas; prints the two-character table without arguments.
    Deligne {
        /// Dual Coxeter number.
        #[arg(long, allow_hyphen_values = true)]
        hv: Option<String>,
        /// Accessory parameter of the second-order equation.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Built-in lattice (A1, A2, E7, E8) or path to a JSON Gram matrix.
    #[arg(long)]
    lattice: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Comma-separated rational coordinates of lambda; zero when omitted.
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn resource(message: impl Into<String>) -> Self {
        Self { code: EXIT_RESOURCE, message: message.into() }
    }
}

fn lattice_failure(e: LatticeError) -> Failure {
    match e {
        LatticeError::NotPositiveDefinite(_) | LatticeError::Overflow => Failure::resource(e.to_string()),
        _ => Failure::usage(e.to_string()),
    }
}

fn character_failure(e: CharacterError) -> Failure {
    match e {
        CharacterError::Lattice(l) => lattice_failure(l),
        CharacterError::UnknownTag(..) | CharacterError::InvalidConfig(_) | CharacterError::DomainViolation { .. } => {
            Failure::usage(e.to_string())
        }
        _ => Failure::resource(e.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::Character(c) => character_failure(c),
        OracleError::NonIntegralPairing { .. } => Failure::usage(e.to_string()),
        OracleError::ScaleExceeded(_) => Failure::resource(e.to_string()),
    }
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::Oracle(o) => oracle_failure(o),
        other => Failure::resource(other.to_string()),
    }
}

fn modular_failure(e: ModularError) -> Failure {
    Failure::usage(e.to_string())
}

fn parse_rational_arg(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::usage(format!("--{flag}: {s:?} is not a rational p/q")))
}

fn load_lattice(spec: &str) -> Result<GramLattice, Failure> {
    match GramLattice::builtin(spec) {
        Ok(l) => Ok(l),
        Err(LatticeError::UnknownLattice(_)) => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(Failure::usage(format!(
                    "--lattice: {spec:?} is neither a built-in lattice (A1, A2, E7, E8) nor a file"
                )));
            }
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{spec}: {e}")))?;
            GramLattice::from_json(&text).map_err(lattice_failure)
        }
        Err(e) => Err(lattice_failure(e)),
    }
}

fn build_config(args: &ConfigArgs) -> Result<ChargeConfig, Failure> {
    let lattice = load_lattice(&args.lattice)?;
    let shift = match &args.shift {
        None => RationalVector::zero(lattice.rank()),
        Some(s) => RationalVector(
            s.split(',')
                .map(|x| parse_rational_arg("shift", x))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    ChargeConfig::new(lattice, args.r, args.s, shift).map_err(character_failure)
}

fn render(series: &TruncatedQSeries, format: Format) -> String {
    match format {
        Format::Text => series.render_text(),
        Format::Json => serde_json::to_string(series).expect("serializable series"),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Character { name, order, format } => {
            let b = Builtin::from_name(&name).map_err(character_failure)?;
            let series = builtin_character(b, order).map_err(character_failure)?;
            println!("{}", render(&series, format));
            Ok(0)
        }
        Command::GradedDim { config, chi_prime: normalize, order, format } => {
            let cfg = build_config(&config)?;
            let series = if normalize { chi_prime(&cfg, order) } else { graded_dimension(&cfg, order) }
                .map_err(character_failure)?;
            println!("{}", render(&series, format));
            Ok(0)
        }
        Command::Verify { suite, order, format, budget, tol } => {
            let suite: Suite = suite.parse().map_err(Failure::usage)?;
            if tol.is_nan() || tol <= 0.0 {
                return Err(Failure::usage("--tol must be positive"));
            }
            let mut cache = CharacterCache::new();
            let reports =
                run_suite(suite, order, VerifyOptions { budget, tol }, &mut cache).map_err(verify_failure)?;
            for r in &reports {
                match format {
                    Format::Text => println!("{r}"),
                    Format::Json => println!("{}", r.to_json()),
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) { 0 } else { EXIT_FAIL })
        }
        Command::EnumerateBasis { config, charge, order, budget } => {
            let cfg = build_config(&config)?;
            let k = charge
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::usage(format!("--charge: {charge:?} is not a list of integers")))?;
            let monomials = enumerate_charge_monomials(&cfg, &k, order, budget).map_err(oracle_failure)?;
            for m in &monomials {
                println!("{}", m.to_json_line());
            }
            Ok(0)
        }
        Command::Deligne { hv, mu, format } => deligne(hv, mu, format),
    }
}

fn deligne(hv: Option<String>, mu: Option<String>, format: Format) -> Result<u8, Failure> {
    let mut fields: Vec<(&str, String)> = Vec::new();
    if let Some(h) = &hv {
        let h = parse_rational_arg("hv", h)?;
        fields.push(("hv", format_rational(&h)));
        fields.push(("dim", format_rational(&deligne_dim(&h).map_err(modular_failure)?)));
        fields.push(("dim2", format_rational(&deligne_dim2(&h).map_err(modular_failure)?)));
    }
    if let Some(m) = &mu {
        let m = parse_rational_arg("mu", m)?;
        fields.push(("mu", format_rational(&m)));
        fields.push(("c", format_rational(&mu_to_c(&m).map_err(modular_failure)?)));
    }
    if !fields.is_empty() {
        match format {
            Format::Text => {
                for (k, v) in &fields {
                    println!("{k} = {v}");
                }
            }
            Format::Json => {
                let obj: serde_json::Map<String, serde_json::Value> =
                    fields.into_iter().map(|(k, v)| (k.to_string(), v.into())).collect();
                println!("{}", serde_json::Value::Object(obj));
            }
        }
        return Ok(0);
    }
    for row in two_character_table() {
        let c = mu_to_c(&row.mu).map_err(modular_failure)?;
        match format {
            Format::Text => println!(
                "mu = {:<8} dim V1 = {:<4} c = {:<5} h = {:<4} {}",
                format_rational(&row.mu),
                row.dim_v1,
                format_rational(&c),
                format_rational(&row.h),
                row.identification
            ),
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "mu": format_rational(&row.mu),
                    "dim_v1": row.dim_v1,
                    "c": format_rational(&c),
                    "h": format_rational(&row.h),
                    "identification": row.identification,
                })
            ),
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
