use anyhow::{bail, Context, Result};
use charzero::contour::Rect;
use charzero::dirichlet::{enumerate_characters, partial_sum, twisted_partial_sum, Character};
use charzero::harness::{
    corollary_zero_budget_audit, main_theorem_experiment, nonresidue_census, power_large_sum_search,
    product_large_sum_search, to_csv, to_json, BudgetFormula, ScenarioConfig,
};
use charzero::lfunction::LEvaluator;
use charzero::multfn::{distance_sq, find_phi_and_m, halasz_from_data, mean_value, CompletelyMultiplicativeFunction};
use charzero::plancherel::{plancherel_check, PlancherelCase};
use charzero::sieve::PrimeTable;
use charzero::spectral::{delta_constants, find_h_zeros, spectrum_bounds, BoundMode};
use charzero::zeros::ZeroFinder;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "charzero", version, about = "Character sums, mean values and zeros of Dirichlet L-functions")]
struct Cli {
    /// TOML-style key = value scenario file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output format (each command has its own default)
    #[arg(long, global = true)]
    out: Option<Format>,
    /// seed for `randpm` functions given without one
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Prop71,
    Cor18,
}

#[derive(Subcommand)]
enum Command {
    /// List the characters mod q
    Chars {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        primitive: bool,
    },
    /// Partial sum S(x, χ), optionally twisted by n^{-iφ}
    Sum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        conrey: u64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Prime-sum distance 𝔻(f, g; x)²
    Distance {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: f64,
    },
    /// φ, M and the mean-value bound for f at x
    Halasz {
        #[arg(long)]
        f: String,
        #[arg(long)]
        x: f64,
    },
    /// L(s, χ) and ξ(s, χ)
    Lvalue {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        conrey: u64,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true)]
        im: f64,
    },
    /// Zeros with 0 < β < 1 and |γ| <= height
    Zeros {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        conrey: u64,
        #[arg(long, default_value_t = 20.0)]
        height: f64,
    },
    /// Disk zero counts over a comma-separated grid of L
    AuditDisk {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        conrey: u64,
        #[arg(long)]
        x: f64,
        #[arg(long = "L", value_delimiter = ',')]
        l: Vec<f64>,
    },
    /// Both sides of the Gaussian Plancherel identity
    Plancherel {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        conrey: u64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Zeros of H(z) in the upper half plane
    Hzeros {
        #[arg(long, default_value_t = 20)]
        count: u32,
    },
    /// δ₀ and δ₁
    Constants,
    /// Lower-bound functions built from δ₀, δ₁
    Bound {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
    },
    /// Quadratic non-residues up to q^{u/4}
    Census {
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        u: f64,
    },
    /// Large means of f₁f₂ (or of f₁^k with --k)
    ProductSearch {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: Option<String>,
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        x2: Option<f64>,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Zero-budget audit over the configured modulus range
    AuditCorollary {
        #[arg(long)]
        q_min: Option<u64>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long = "T")]
        t: Option<f64>,
        /// cor4 (quadratic, /1600) or cor3 (general, /1440)
        #[arg(long)]
        budget: Option<String>,
    },
}

#[derive(Serialize)]
struct LValueRow {
    q: u64,
    conrey: u64,
    s: Complex64,
    value: Complex64,
    error_bound: f64,
    xi: Complex64,
}

#[derive(Serialize)]
struct DistanceRow {
    f: String,
    g: String,
    x: f64,
    distance_sq: f64,
}

#[derive(Serialize)]
struct HalaszRow {
    f: String,
    x: f64,
    phi: f64,
    #[serde(rename = "M")]
    m: f64,
    log_abs_f: f64,
    refined: bool,
    observed: f64,
    bound: f64,
    ratio: f64,
    main_term_ratio: f64,
}

#[derive(Serialize)]
struct PlancherelRow {
    lhs: Complex64,
    rhs: Complex64,
    residual: f64,
    n_max: u64,
    xi_max: f64,
}

#[derive(Serialize)]
struct HZeroRow {
    k: u32,
    re: f64,
    im: f64,
    residual: f64,
    gap: f64,
}

#[derive(Serialize)]
struct BoundRow {
    mode: &'static str,
    argument: f64,
    value: f64,
}

fn character(q: u64, conrey: u64) -> Result<Character> {
    Character::from_label(q, conrey).with_context(|| format!("character {q}.{conrey}"))
}

fn function(spec: &str, table: &Arc<PrimeTable>, seed: u64) -> Result<CompletelyMultiplicativeFunction> {
    let spec = if spec.trim() == "randpm" {
        format!("randpm:{seed}")
    } else {
        spec.to_string()
    };
    Ok(CompletelyMultiplicativeFunction::parse(&spec, table.clone())?)
}

fn table_for(x: f64) -> Result<Arc<PrimeTable>> {
    if !(x >= 1.0) {
        bail!("x = {x} must be at least 1");
    }
    Ok(Arc::new(PrimeTable::new((x.ceil() as u64).max(2))?))
}

fn emit<T: Serialize>(rows: &[T], single: bool, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => to_csv(rows)?,
        Format::Json if single => to_json(&rows[0])?,
        Format::Json => to_json(rows)?,
    })
}

fn run(cli: Cli) -> Result<String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let constants = config.constants;
    let fmt = |default: Format| cli.out.unwrap_or(default);
    let seed = cli.seed;

    match cli.command {
        Command::Chars { q, primitive } => {
            let rows: Vec<_> = enumerate_characters(q)?
                .iter()
                .filter(|c| !primitive || c.is_primitive())
                .map(|c| c.summary())
                .collect();
            emit(&rows, false, fmt(Format::Csv))
        }
        Command::Sum { q, conrey, x, phi } => {
            let chi = character(q, conrey)?;
            let s = if phi == 0.0 { partial_sum(&chi, x) } else { twisted_partial_sum(&chi, phi, x) };
            emit(&[s], true, fmt(Format::Json))
        }
        Command::Distance { f, g, x } => {
            let table = table_for(x)?;
            let (a, b) = (function(&f, &table, seed)?, function(&g, &table, seed)?);
            let row = DistanceRow {
                f,
                g,
                x,
                distance_sq: distance_sq(&a, &b, x)?,
            };
            emit(&[row], true, fmt(Format::Json))
        }
        Command::Halasz { f, x } => {
            let table = table_for(x)?;
            let func = function(&f, &table, seed)?;
            let data = find_phi_and_m(&func, x)?;
            let b = halasz_from_data(&data, mean_value(&func, x)?.norm());
            let row = HalaszRow {
                f,
                x,
                phi: data.phi,
                m: data.m,
                log_abs_f: data.log_abs_f,
                refined: data.refined,
                observed: b.observed,
                bound: b.bound,
                ratio: b.ratio,
                main_term_ratio: b.main_term_ratio,
            };
            emit(&[row], true, fmt(Format::Json))
        }
        Command::Lvalue { q, conrey, re, im } => {
            let chi = character(q, conrey)?;
            let ev = LEvaluator::new(chi);
            let s = Complex64::new(re, im);
            let l = ev.l_value(s)?;
            let row = LValueRow {
                q,
                conrey,
                s,
                value: l.value,
                error_bound: l.error_bound,
                xi: ev.xi_value(s)?,
            };
            emit(&[row], true, fmt(Format::Json))
        }
        Command::Zeros { q, conrey, height } => {
            let finder = ZeroFinder::new(character(q, conrey)?)?;
            let zeros = finder.locate(&Rect::new(0.0, 1.0, -height, height)?)?;
            emit(&zeros, false, fmt(Format::Csv))
        }
        Command::AuditDisk { q, conrey, x, l } => {
            if l.is_empty() {
                bail!("--L needs at least one value");
            }
            let report = main_theorem_experiment(&character(q, conrey)?, x, &l, &constants)?;
            emit(&[report], true, fmt(Format::Json))
        }
        Command::Plancherel { q, conrey, phi, lambda, t } => {
            let case = PlancherelCase::new(character(q, conrey)?, phi, lambda, t)?;
            let r = plancherel_check(&case)?;
            let row = PlancherelRow {
                lhs: r.lhs,
                rhs: r.rhs,
                residual: r.residual,
                n_max: r.n_max,
                xi_max: r.xi_max,
            };
            emit(&[row], true, fmt(Format::Json))
        }
        Command::Hzeros { count } => {
            let rows: Vec<_> = find_h_zeros(count)?
                .iter()
                .map(|z| HZeroRow {
                    k: z.k,
                    re: z.z.re,
                    im: z.z.im,
                    residual: z.residual,
                    gap: z.asymptotic_gap,
                })
                .collect();
            emit(&rows, false, fmt(Format::Csv))
        }
        Command::Constants => emit(&[delta_constants()], true, fmt(Format::Json)),
        Command::Bound { mode, alpha, u } => {
            let (name, arg, value) = match mode {
                Mode::Prop71 => {
                    let a = alpha.context("--alpha is required with --mode prop71")?;
                    ("prop71", a, spectrum_bounds(BoundMode::Prop71 { alpha: a })?)
                }
                Mode::Cor18 => {
                    let v = u.context("--u is required with --mode cor18")?;
                    ("cor18", v, spectrum_bounds(BoundMode::Cor18 { u: v })?)
                }
            };
            emit(
                &[BoundRow {
                    mode: name,
                    argument: arg,
                    value,
                }],
                true,
                fmt(Format::Json),
            )
        }
        Command::Census { q, u } => {
            if q.is_empty() {
                bail!("--q needs at least one prime");
            }
            let rows = q.iter().map(|&p| nonresidue_census(p, u)).collect::<charzero::Result<Vec<_>>>()?;
            emit(&rows, rows.len() == 1, fmt(Format::Json))
        }
        Command::ProductSearch { f1, f2, x1, x2, eta, k } => {
            if let Some(k) = k {
                let table = table_for(x1)?;
                let f = function(&f1, &table, seed)?;
                let r = power_large_sum_search(&f, x1, eta, k, &constants)?;
                return emit(&[r], true, fmt(Format::Json));
            }
            let f2 = f2.context("--f2 is required unless --k is given")?;
            let x2 = x2.context("--x2 is required unless --k is given")?;
            let table = table_for(x1.max(x2))?;
            let (a, b) = (function(&f1, &table, seed)?, function(&f2, &table, seed)?);
            let r = product_large_sum_search(&a, &b, x1, x2, eta, &constants)?;
            emit(&[r], true, fmt(Format::Json))
        }
        Command::AuditCorollary {
            q_min,
            q_max,
            epsilon,
            t,
            budget,
        } => {
            if let Some(v) = q_min {
                config.q_min = v;
            }
            if let Some(v) = q_max {
                config.q_max = v;
            }
            if let Some(v) = epsilon {
                config.epsilon = v;
            }
            if let Some(v) = t {
                config.t = v;
            }
            if let Some(b) = budget {
                config.budget = match b.as_str() {
                    "cor4" | "quadratic" => BudgetFormula::Quadratic,
                    "cor3" | "general" => BudgetFormula::General,
                    other => bail!("unknown budget formula {other:?}"),
                };
            }
            let report = corollary_zero_budget_audit(&config)?;
            match fmt(Format::Json) {
                Format::Json => Ok(to_json(&report)?),
                Format::Csv => Ok(to_csv(&report.rows)?),
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

