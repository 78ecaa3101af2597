//! `biquad`: JSON-in, JSON-out front end for `biquad-core`.
//!
//! Every command prints one report object on stdout. Diagnostics go to
//! stderr. Exit codes: 0 success, 1 bad input, 2 numerical failure,
//! 3 property violation found by `verify`.

mod report;
mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biquad_core::algebra::{self, VerifyConfig};
use biquad_core::decomp::{self, bq_rank_one_decompose, hosvd, independent_core, tucker_ranks};
use biquad_core::gen::{self, InvertibleFamily};
use biquad_core::io as bqio;
use biquad_core::meigen::{largest_m_eigenvalue, psd_classify, smallest_m_eigenvalue};
use biquad_core::norms::{self, BoundSource};
use biquad_core::{BiquadraticTensor, Matrix, SolverConfig, Tensor4};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::{CliError, Exit, RunReport, Timings, TOOL_VERSION};

#[derive(Parser, Debug)]
#[command(name = "biquad", version, about = "Numerics for biquadratic fourth-order tensors")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// RNG seed for solvers and generators
    #[arg(long, global = true, env = "BIQUAD_SEED", default_value_t = 0)]
    seed: u64,

    /// Symmetry tolerance for input validation, relative to the largest entry
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Random starts for the M-eigenpair search
    #[arg(long, global = true, default_value_t = 32)]
    starts: usize,

    /// Also write the report to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check biquadratic symmetry
    Validate { input: Option<PathBuf> },
    /// Project onto the biquadratic subspace
    Symmetrize { input: Option<PathBuf> },
    /// Evaluate the quartic form at (x, y)
    Quartic {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
    },
    /// Largest or smallest M-eigenpair
    Meig {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "smallest")]
        largest: bool,
        #[arg(long)]
        smallest: bool,
    },
    /// Spectral-norm interval
    Snorm { input: Option<PathBuf> },
    /// Nuclear-norm interval
    Nucnorm { input: Option<PathBuf> },
    /// Biquadratic rank-one decomposition
    Decomp {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = decomp::DEFAULT_DROP_TOL)]
        drop_tol: f64,
    },
    /// Biquadratic Tucker decomposition
    Tucker {
        input: Option<PathBuf>,
        /// Orthonormal form with core dimensions D1 D2
        #[arg(long, num_args = 2, value_names = ["D1", "D2"], conflicts_with = "independent")]
        hosvd: Option<Vec<usize>>,
        /// Core for the given full-column-rank factor matrices
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        independent: Option<Vec<PathBuf>>,
    },
    /// Tensor product AB
    Product { a: PathBuf, b: PathBuf },
    /// Inverse within the biquadratic tensors
    Invert { input: Option<PathBuf> },
    /// Positive semi-definiteness classification
    Psd { input: Option<PathBuf> },
    /// Gram contraction of a third-order tensor
    Contract { input: Option<PathBuf> },
    /// Property battery over a given pair or random instances
    Verify {
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "random")]
        pair: Option<Vec<PathBuf>>,
        /// Number of random instance pairs
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Generate a tensor
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// First dimension of the third-order tensor for `gram` and `third`
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Row-major m x n diagonal values for `diagonal`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Option<Vec<f64>>,
        /// Coefficient for `rank1`
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        coef: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    Identity,
    Diagonal,
    Rank1,
    Random,
    /// Gram contraction of a random third-order tensor
    Gram,
    /// Random third-order tensor
    Third,
    /// Random instance whose inverse is biquadratic
    Invertible,
}

fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn input_name(path: Option<&Path>) -> String {
    path.map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

struct Ctx {
    global: Global,
    inputs: Vec<String>,
    timings: Timings,
}

impl Ctx {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            starts: self.global.starts,
            ..SolverConfig::with_seed(self.global.seed)
        }
    }

    fn read_tensor(&mut self, path: Option<&Path>) -> Result<Tensor4, CliError> {
        self.inputs.push(input_name(path));
        let text = read_text(path)?;
        Ok(self.timings.time("parse", || bqio::parse_tensor(&text))?)
    }

    fn read_bq(&mut self, path: Option<&Path>) -> Result<BiquadraticTensor, CliError> {
        let t = self.read_tensor(path)?;
        Ok(t.validate_relative(self.global.tol)?)
    }

    fn read_matrix(&mut self, path: &Path) -> Result<Matrix, CliError> {
        self.inputs.push(input_name(Some(path)));
        let text = read_text(Some(path))?;
        Ok(bqio::parse_matrix(&text)?)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs are serialisable")
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::input(format!("missing --{what}")))
}

fn run(cmd: Command, ctx: &mut Ctx) -> Result<(Value, Exit), CliError> {
    let ok = |v: Value| Ok((v, Exit::Ok));
    match cmd {
        Command::Validate { input } => {
            let t = ctx.read_tensor(input.as_deref())?;
            let dev = t.max_symmetry_deviation();
            let a = t.validate_relative(ctx.global.tol)?;
            ok(json!({
                "valid": true,
                "m": a.m(),
                "n": a.n(),
                "max_symmetry_deviation": dev,
            }))
        }
        Command::Symmetrize { input } => {
            let t = ctx.read_tensor(input.as_deref())?;
            let a = ctx.timings.time("compute", || t.symmetrize());
            ok(json!({
                "tensor": bqio::tensor_to_value(&a),
                "max_deviation_before": t.max_symmetry_deviation(),
            }))
        }
        Command::Quartic { input, x, y } => {
            let a = ctx.read_bq(input.as_deref())?;
            let v = a.quartic_form(&x, &y)?;
            ok(json!({ "value": v }))
        }
        Command::Meig {
            input,
            largest: _,
            smallest,
        } => {
            let a = ctx.read_bq(input.as_deref())?;
            let cfg = ctx.solver();
            let pair = ctx.timings.time("compute", || {
                if smallest {
                    smallest_m_eigenvalue(&a, &cfg)
                } else {
                    largest_m_eigenvalue(&a, &cfg)
                }
            })?;
            let mut v = to_value(&pair);
            v["which"] = json!(if smallest { "smallest" } else { "largest" });
            v["source"] = to_value(&BoundSource::MEigenSearch);
            ok(v)
        }
        Command::Snorm { input } => {
            let a = ctx.read_bq(input.as_deref())?;
            let cfg = ctx.solver();
            let iv = ctx
                .timings
                .time("compute", || norms::spectral_norm_interval(&a, &cfg))?;
            ok(to_value(&iv))
        }
        Command::Nucnorm { input } => {
            let a = ctx.read_bq(input.as_deref())?;
            let iv = ctx.timings.time("compute", || norms::nuclear_norm_interval(&a))?;
            ok(to_value(&iv))
        }
        Command::Decomp { input, drop_tol } => {
            let a = ctx.read_bq(input.as_deref())?;
            let d = ctx
                .timings
                .time("compute", || bq_rank_one_decompose(&a, drop_tol))?;
            let mut v = to_value(&d);
            v["term_bound"] = json!(decomp::term_bound(a.m(), a.n()));
            v["coefficient_sum"] = json!(d.coefficient_sum());
            ok(v)
        }
        Command::Tucker {
            input,
            hosvd: dims,
            independent,
        } => {
            let a = ctx.read_bq(input.as_deref())?;
            let form = match (dims, independent) {
                (Some(d), None) => ctx.timings.time("compute", || hosvd(&a, d[0], d[1]))?,
                (None, Some(f)) => {
                    let p = ctx.read_matrix(&f[0])?;
                    let q = ctx.read_matrix(&f[1])?;
                    ctx.timings.time("compute", || independent_core(&a, &p, &q))?
                }
                _ => return Err(CliError::input("tucker needs --hosvd D1 D2 or --independent P Q")),
            };
            let mut v = bqio::tucker_to_value(&form);
            v["tucker_ranks"] = to_value(&tucker_ranks(&a, decomp::DEFAULT_RANK_TOL)?);
            ok(v)
        }
        Command::Product { a, b } => {
            let ta = ctx.read_bq(Some(&a))?;
            let tb = ctx.read_bq(Some(&b))?;
            let c = ctx.timings.time("compute", || algebra::product(&ta, &tb))?;
            let dev = c.max_symmetry_deviation();
            ok(json!({
                "tensor": bqio::tensor_to_value(&c),
                "max_symmetry_deviation": dev,
                "biquadratic": dev <= ctx.global.tol * c.max_abs(),
            }))
        }
        Command::Invert { input } => {
            let a = ctx.read_bq(input.as_deref())?;
            let inv = ctx
                .timings
                .time("compute", || algebra::inverse(&a, algebra::DEFAULT_INVERSE_TOL))?;
            ok(json!({ "tensor": bqio::tensor_to_value(&inv) }))
        }
        Command::Psd { input } => {
            let a = ctx.read_bq(input.as_deref())?;
            let cfg = ctx.solver();
            let v = ctx.timings.time("compute", || psd_classify(&a, &cfg))?;
            ok(to_value(&v))
        }
        Command::Contract { input } => {
            ctx.inputs.push(input_name(input.as_deref()));
            let text = read_text(input.as_deref())?;
            let t = bqio::parse_third_order(&text)?;
            let a = t.contract();
            ok(json!({ "tensor": bqio::tensor_to_value(&a) }))
        }
        Command::Verify { pair, random, m, n } => run_verify(ctx, pair, random, m, n),
        Command::Gen {
            kind,
            m,
            n,
            p,
            values,
            x,
            y,
            coef,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.global.seed);
            let t: Value = match kind {
                GenKind::Identity => bqio::tensor_to_value(BiquadraticTensor::identity(m, n)?.as_tensor()),
                GenKind::Diagonal => {
                    let d = match values {
                        Some(v) => Matrix::from_row_major(m, n, v)?,
                        None => gen::random_matrix(&mut rng, m, n),
                    };
                    bqio::tensor_to_value(BiquadraticTensor::diagonal(&d)?.as_tensor())
                }
                GenKind::Rank1 => {
                    let x = need(x, "x")?;
                    let y = need(y, "y")?;
                    bqio::tensor_to_value(&BiquadraticTensor::rank_one(&x, &y)?.scale(coef))
                }
                GenKind::Random => bqio::tensor_to_value(gen::random_bq(&mut rng, m, n)?.as_tensor()),
                GenKind::Gram => {
                    bqio::tensor_to_value(&gen::random_third_order(&mut rng, p, m, n)?.contract())
                }
                GenKind::Third => bqio::third_order_to_value(&gen::random_third_order(&mut rng, p, m, n)?),
                GenKind::Invertible => {
                    let family = InvertibleFamily::ALL[(ctx.global.seed % 3) as usize];
                    bqio::tensor_to_value(gen::invertible_bq(&mut rng, family, m, n)?.as_tensor())
                }
            };
            ok(t)
        }
    }
}

fn run_verify(
    ctx: &mut Ctx,
    pair: Option<Vec<PathBuf>>,
    random: Option<usize>,
    m: usize,
    n: usize,
) -> Result<(Value, Exit), CliError> {
    let base = VerifyConfig {
        solver: ctx.solver(),
        ..VerifyConfig::default()
    };
    let mut results = Vec::new();
    match (pair, random) {
        (Some(files), None) => {
            let a = ctx.read_bq(Some(&files[0]))?;
            let b = ctx.read_bq(Some(&files[1]))?;
            let r = ctx
                .timings
                .time("compute", || verify::check_instance(0, &a, &b, &base))?;
            results.push(r);
        }
        (None, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.global.seed);
            for i in 0..count {
                let a = gen::random_bq(&mut rng, m, n)?;
                let b = gen::random_bq(&mut rng, m, n)?;
                let cfg = VerifyConfig {
                    solver: SolverConfig {
                        seed: ctx.global.seed.wrapping_add(i as u64),
                        ..base.solver
                    },
                    ..base
                };
                let r = ctx
                    .timings
                    .time("compute", || verify::check_instance(i, &a, &b, &cfg))?;
                results.push(r);
            }
        }
        _ => return Err(CliError::input("verify needs --pair A B or --random N")),
    }
    let battery = verify::summarize(results);
    for v in &battery.violations {
        eprintln!("violation: {v}");
    }
    let exit = if battery.all_sound { Exit::Ok } else { Exit::Violation };
    Ok((to_value(&battery), exit))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Symmetrize { .. } => "symmetrize",
        Command::Quartic { .. } => "quartic",
        Command::Meig { .. } => "meig",
        Command::Snorm { .. } => "snorm",
        Command::Nucnorm { .. } => "nucnorm",
        Command::Decomp { .. } => "decomp",
        Command::Tucker { .. } => "tucker",
        Command::Product { .. } => "product",
        Command::Invert { .. } => "invert",
        Command::Psd { .. } => "psd",
        Command::Contract { .. } => "contract",
        Command::Verify { .. } => "verify",
        Command::Gen { .. } => "gen",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::BadInput } else { Exit::Ok };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let name = command_name(&cli.command);
    let mut ctx = Ctx {
        global: cli.global,
        inputs: Vec::new(),
        timings: Timings::default(),
    };
    if !(ctx.global.tol >= 0.0) {
        eprintln!("error: --tol must be nonnegative");
        return ExitCode::from(Exit::BadInput as u8);
    }
    match run(cli.command, &mut ctx) {
        Ok((outputs, exit)) => {
            let report = RunReport {
                command: name.to_string(),
                inputs: ctx.inputs,
                seed: ctx.global.seed,
                outputs,
                timings: ctx.timings.into_map(),
                tool_version: TOOL_VERSION.to_string(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report is serialisable");
            if let Some(path) = &ctx.global.out {
                if let Err(e) = fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(Exit::BadInput as u8);
                }
            }
            let mut out = io::stdout().lock();
            let _ = writeln!(out, "{text}");
            ExitCode::from(exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
