//! `singmod`: representation numbers, Gross lattices and reductions of
//! singular moduli from the command line.
//!
//! Exit status: 0 on success, 1 when a computation fails, 2 on a usage
//! error and 3 when `verify` finds a failing criterion.

mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use singmod::acceptance::{self, AcceptanceConfig, CRITERIA};
use singmod::arith::{discriminants_in, moebius, sigma0, sigma0_tilde, Discriminant};
use singmod::binary_forms::{class_number, count_representations_binary, dirichlet_bound_holds, reduced_forms};
use singmod::cm_reduction::cache::CACHE_DIR_ENV;
use singmod::cm_reduction::class_poly::DEFAULT_DISCRIMINANT_BOUND;
use singmod::cm_reduction::{
    genus_identity_check, multiplicity_report, phenomenon_check, reduce_and_count, sweep, ClassPolynomialStore,
    SweepFilter, SWEEP_TSV_HEADER,
};
use singmod::corpus::DEFAULT_SEED;
use singmod::quad_poly::{count_representations_poly, qp_bound_holds};
use singmod::quaternion::gross_lattice_for_prime;
use singmod::qseries::theta_series;
use singmod::ternary_forms::{
    automorph_group_order, count_primitive, hermite_dirichlet_bound, minimal_binary_sublattice, slices_count,
    PrimitiveMethod,
};
use singmod::{BinaryQF, Error, IntegerValuedQP, TernaryQF};

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "singmod", version, about = "Quadratic forms, Gross lattices and singular moduli mod p")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; `sweep` defaults to tsv, the `bound` checks to text,
    /// everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Class-polynomial cache directory.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,

    /// Do not read or write the class-polynomial cache.
    #[arg(long, global = true, conflicts_with = "cache_dir")]
    no_cache: bool,

    /// Starting precision in bits for class polynomials (default: from the height bound).
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Largest |D| for which class polynomials are computed.
    #[arg(long, global = true, default_value_t = DEFAULT_DISCRIMINANT_BOUND)]
    disc_bound: u64,

    /// Seed of the random corpora used by `verify`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisor count, its running maximum and the Möbius function of n.
    Sigma {
        #[arg(long)]
        n: u64,
    },
    /// Binary quadratic forms.
    #[command(subcommand)]
    Bqf(BqfCommand),
    /// Integer-valued quadratic polynomials, given as "2a,b,2c,2d,2e,f".
    #[command(subcommand)]
    Qpoly(QpolyCommand),
    /// Ternary forms, given by Hessian entries "a11,a22,a33,a12,a13,a23".
    #[command(subcommand)]
    Tqf(TqfCommand),
    /// The Gross lattice of the maximal order ramified at p.
    Gross {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = GrossEmit::Invariants)]
        emit: GrossEmit,
        /// Last theta coefficient for `--emit theta`.
        #[arg(long, default_value_t = 20)]
        terms: u64,
    },
    /// Theta series of a ternary form, optionally followed by U_n.
    Theta {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 20)]
        terms: u64,
        #[arg(long)]
        u: Option<usize>,
    },
    /// Hilbert class polynomial H_D.
    Hcp {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
    },
    /// H_D modulo p: distinct roots, classification, multiplicities.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ReduceReport::Basic)]
        report: ReduceReport,
    },
    /// Reduction statistics over a range of discriminants and primes.
    Sweep {
        /// Smallest |D|.
        #[arg(long, default_value_t = 3)]
        min_abs_delta: u64,
        /// Largest |D|.
        #[arg(long)]
        max_abs_delta: u64,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        fundamental_only: bool,
        #[arg(long)]
        supersingular_only: bool,
        #[arg(long)]
        p_fundamental_only: bool,
    },
    /// Primitive representation count of |D| by the Gross lattice against
    /// eps * 12/(p-1) * h(D)/u(D), for p in {2, 3, 5, 7, 13}.
    GenusCheck {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Criteria to run (default: all).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum BqfCommand {
    /// Reduced representative of a positive definite form.
    Reduce {
        #[arg(long, value_parser = parse_tuple::<3>, allow_hyphen_values = true)]
        form: [i64; 3],
    },
    /// Reduced primitive forms of discriminant D.
    Classes {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
    },
    /// r(R, n).
    Count {
        #[arg(long, value_parser = parse_tuple::<3>, allow_hyphen_values = true)]
        form: [i64; 3],
        #[arg(long)]
        n: u64,
    },
    /// r(R, n) <= u * sigma0(n).
    Bound {
        #[arg(long, value_parser = parse_tuple::<3>, allow_hyphen_values = true)]
        form: [i64; 3],
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum QpolyCommand {
    /// Validates the polynomial and reports where its minimum lies.
    Check {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        coeffs: [i64; 6],
    },
    /// r(P, n).
    Count {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        coeffs: [i64; 6],
        #[arg(long)]
        n: i64,
    },
    /// r(P, n) <= u(disc) * sigma0_tilde(disc^2 n).
    Bound {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        coeffs: [i64; 6],
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TqfCommand {
    /// Hessian determinant, level and automorph count.
    Invariants {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
    },
    /// r(Q, n) by exact enumeration.
    Count {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
        #[arg(long)]
        n: u64,
    },
    /// r'(Q, n), primitive representations.
    Primitive {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Moebius)]
        method: MethodArg,
    },
    /// Minimal-covolume rank-2 sublattice.
    Sublattice {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
    },
    /// r(Q, n) by the slices method, with the per-slice breakdown.
    Slices {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
        #[arg(long)]
        n: u64,
    },
    /// The Hermite-Dirichlet bound on r(Q, n).
    Bound {
        #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
        hessian: [i64; 6],
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LatticeArg {
    #[arg(long, value_parser = parse_tuple::<6>, allow_hyphen_values = true)]
    hessian: Option<[i64; 6]>,
    /// Use the Gross lattice of this prime.
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GrossEmit {
    Hessian,
    Invariants,
    Theta,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReduceReport {
    Basic,
    Phenomenon,
    Multiplicity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Moebius,
    Gcd,
}

fn parse_tuple<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated integers, got {}", parts.len()));
    }
    let mut out = [0i64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("'{p}' is not an integer"))?;
    }
    Ok(out)
}

/// Failure of a subcommand: a library error, or a failed acceptance run.
enum Failure {
    Compute(Error),
    Acceptance(usize),
    Output(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
        // A closed pipe (`singmod ... | head`) is not an error.
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("error[E_IO]: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Acceptance(n)) => {
            eprintln!("error[E_ACCEPTANCE]: {n} criteria failed");
            ExitCode::from(3)
        }
    }
}

fn store(cli: &Cli) -> ClassPolynomialStore {
    let base = if cli.no_cache {
        ClassPolynomialStore::in_memory()
    } else if let Some(dir) = &cli.cache_dir {
        ClassPolynomialStore::new(Some(dir.clone()))
    } else {
        ClassPolynomialStore::from_env()
    };
    base.with_bound(cli.disc_bound).with_precision(cli.precision)
}

fn ternary(entries: [i64; 6]) -> Result<TernaryQF, Error> {
    TernaryQF::from_entries(entries)
}

fn polynomial([a, b, c, d, e, f]: [i64; 6]) -> Result<IntegerValuedQP, Error> {
    IntegerValuedQP::new(a, b, c, d, e, f)
}

fn binary([a, b, c]: [i64; 3]) -> Result<BinaryQF, Error> {
    BinaryQF::new(a, b, c)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut default_format = Format::Json;
    let report = match &cli.command {
        Command::Sigma { n } => Report::object(json!({
            "n": n,
            "sigma0": sigma0(*n)?,
            "sigma0_tilde": sigma0_tilde(*n)?,
            "moebius": moebius(*n)?,
        })),
        Command::Bqf(cmd) => bqf(cmd, &mut default_format)?,
        Command::Qpoly(cmd) => qpoly(cmd, &mut default_format)?,
        Command::Tqf(cmd) => tqf(cmd, &mut default_format)?,
        Command::Gross { prime, emit, terms } => {
            let g = gross_lattice_for_prime(*prime)?;
            let q = &g.hessian;
            match emit {
                GrossEmit::Hessian => Report::object(json!({ "prime": prime, "hessian": q.hessian() })),
                GrossEmit::Invariants => Report::object(json!({
                    "prime": prime,
                    "hessian": q.hessian(),
                    "entries": q.to_string(),
                    "det": q.hessian_det(),
                    "level": q.level(),
                    "det_expected": 32 * prime * prime,
                    "level_expected": 4 * prime,
                })),
                GrossEmit::Theta => theta_report(q, *terms, None, Some(*prime)),
            }
        }
        Command::Theta { lattice, terms, u } => {
            let q = match (lattice.hessian, lattice.prime) {
                (Some(h), _) => ternary(h)?,
                (None, Some(p)) => gross_lattice_for_prime(p)?.hessian,
                (None, None) => unreachable!("clap requires one of --hessian, --prime"),
            };
            theta_report(&q, *terms, *u, lattice.prime)
        }
        Command::Hcp { delta } => {
            let disc = Discriminant::new(*delta)?;
            let poly = store(cli).get(&disc)?;
            let rows = poly.coefficients.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            Report::object(&poly).with_table(&["power", "coefficient"], rows)
        }
        Command::Reduce { delta, p, report } => {
            let disc = Discriminant::new(*delta)?;
            let store = store(cli);
            match report {
                ReduceReport::Basic => Report::object(reduce_and_count(&store, &disc, *p)?),
                ReduceReport::Phenomenon => Report::object(phenomenon_check(&store, &disc, *p)?),
                ReduceReport::Multiplicity => {
                    let r = multiplicity_report(&store, &disc, *p)?;
                    let mut flat = serde_json::to_value(&r).expect("reports serialize");
                    let factors: Vec<String> = r.factors.iter().map(|(d, m)| format!("{d}^{m}")).collect();
                    flat["factors"] = json!(factors.join(" "));
                    Report::object(&r).with_flat_table(&flat)
                }
            }
        }
        Command::Sweep {
            min_abs_delta,
            max_abs_delta,
            primes,
            fundamental_only,
            supersingular_only,
            p_fundamental_only,
        } => {
            default_format = Format::Tsv;
            let deltas: Vec<i64> = discriminants_in((*min_abs_delta).max(3), *max_abs_delta).collect();
            let filter = SweepFilter {
                fundamental_only: *fundamental_only,
                supersingular_only: *supersingular_only,
                p_fundamental_only: *p_fundamental_only,
            };
            let rows = sweep(&store(cli), &deltas, primes, filter)?;
            let header: Vec<&str> = SWEEP_TSV_HEADER.split('\t').collect();
            Report::rows(&header, &rows, |r| r.to_tsv().split('\t').map(str::to_owned).collect())
        }
        Command::GenusCheck { p, delta } => {
            Report::object(genus_identity_check(*p, &Discriminant::new(*delta)?)?)
        }
        Command::Verify { criterion } => return verify(cli, criterion),
    };
    let mut out = io::stdout().lock();
    report.write(cli.format.unwrap_or(default_format), &mut out)?;
    out.flush()?;
    Ok(())
}

fn bqf(cmd: &BqfCommand, default_format: &mut Format) -> Result<Report, Failure> {
    Ok(match cmd {
        BqfCommand::Reduce { form } => {
            let f = binary(*form)?;
            Report::object(json!({ "form": f, "discriminant": f.discriminant(), "reduced": f.reduced() }))
        }
        BqfCommand::Classes { delta } => {
            let disc = Discriminant::new(*delta)?;
            let forms = reduced_forms(&disc);
            let rows = forms.iter().map(|f| vec![f.a.to_string(), f.b.to_string(), f.c.to_string()]).collect();
            Report::object(json!({
                "delta": disc.value(),
                "fundamental": disc.fundamental(),
                "conductor": disc.conductor(),
                "class_number": class_number(&disc),
                "automorphs": disc.automorph_count(),
                "forms": forms,
            }))
            .with_table(&["a", "b", "c"], rows)
        }
        BqfCommand::Count { form, n } => {
            let f = binary(*form)?;
            let r = count_representations_binary(&f, *n as i64)?;
            Report::object(json!({ "form": f, "n": n, "representations": r }))
        }
        BqfCommand::Bound { form, n } => {
            *default_format = Format::Text;
            let rep = dirichlet_bound_holds(&binary(*form)?, *n)?;
            let text = format!("r={} bound={} holds={}", rep.representations, rep.bound, rep.holds);
            Report::object(rep).with_text(text)
        }
    })
}

fn qpoly(cmd: &QpolyCommand, default_format: &mut Format) -> Result<Report, Failure> {
    Ok(match cmd {
        QpolyCommand::Check { coeffs } => {
            let p = polynomial(*coeffs)?;
            let m = p.minimum_point();
            Report::object(json!({
                "polynomial": p,
                "discriminant": p.discriminant(),
                "lambda": m.lambda.to_string(),
                "mu": m.mu.to_string(),
                "minimum": m.m.to_string(),
                "minimum_at_origin": m.is_origin(),
            }))
        }
        QpolyCommand::Count { coeffs, n } => {
            let p = polynomial(*coeffs)?;
            Report::object(json!({ "polynomial": p, "n": n, "representations": count_representations_poly(&p, *n) }))
        }
        QpolyCommand::Bound { coeffs, n } => {
            *default_format = Format::Text;
            let rep = qp_bound_holds(&polynomial(*coeffs)?, *n)?;
            let text = format!("r={} bound={} holds={}", rep.representations, rep.bound, rep.holds);
            Report::object(rep).with_text(text)
        }
    })
}

fn tqf(cmd: &TqfCommand, default_format: &mut Format) -> Result<Report, Failure> {
    Ok(match cmd {
        TqfCommand::Invariants { hessian } => {
            let q = ternary(*hessian)?;
            Report::object(json!({
                "form": q.to_string(),
                "hessian": q.hessian(),
                "det": q.hessian_det(),
                "level": q.level(),
                "automorphs": automorph_group_order(&q),
            }))
        }
        TqfCommand::Count { hessian, n } => {
            let q = ternary(*hessian)?;
            Report::object(json!({ "form": q.to_string(), "n": n, "representations": q.count_representations(*n) }))
        }
        TqfCommand::Primitive { hessian, n, method } => {
            let q = ternary(*hessian)?;
            let m = match method {
                MethodArg::Moebius => PrimitiveMethod::Moebius,
                MethodArg::Gcd => PrimitiveMethod::GcdFilter,
            };
            Report::object(json!({ "form": q.to_string(), "n": n, "primitive": count_primitive(&q, *n, m)? }))
        }
        TqfCommand::Sublattice { hessian } => {
            let q = ternary(*hessian)?;
            let dec = minimal_binary_sublattice(&q);
            let (num, den) = dec.quotient_covol_squared();
            let mut v = serde_json::to_value(&dec).expect("reports serialize");
            v["quotient_covol_squared"] = json!(format!("{num}/{den}"));
            v["hermite_rankin"] = json!(dec.satisfies_hermite_rankin());
            Report::object(v)
        }
        TqfCommand::Slices { hessian, n } => {
            let q = ternary(*hessian)?;
            let rep = slices_count(&q, *n);
            let rows = rep.slices.iter().map(|(t, r)| vec![t.to_string(), r.to_string()]).collect();
            Report::object(&rep).with_table(&["t", "representations"], rows)
        }
        TqfCommand::Bound { hessian, n } => {
            *default_format = Format::Text;
            let rep = hermite_dirichlet_bound(&ternary(*hessian)?, *n)?;
            let text = format!("r={} bound={} holds={}", rep.representations, rep.bound, rep.holds);
            Report::object(rep).with_text(text)
        }
    })
}

fn theta_report(q: &TernaryQF, terms: u64, u: Option<usize>, prime: Option<u64>) -> Report {
    let mut series = theta_series(q, terms);
    if let Some(n) = u {
        series = series.u_operator(n);
    }
    let coeffs = series.coefficients();
    let rows = coeffs.iter().enumerate().map(|(m, c)| vec![m.to_string(), c.to_string()]).collect();
    Report::object(json!({
        "form": q.to_string(),
        "prime": prime,
        "terms": terms,
        "u": u,
        "coefficients": coeffs,
    }))
    .with_table(&["m", "coefficient"], rows)
}

fn verify(cli: &Cli, selected: &[u8]) -> Result<(), Failure> {
    let config = AcceptanceConfig { seed: cli.seed, store: store(cli) };
    let ids: Vec<u8> = if selected.is_empty() { CRITERIA.iter().map(|c| c.id).collect() } else { selected.to_vec() };
    let format = cli.format.unwrap_or(Format::Text);
    let mut results = Vec::new();
    for id in ids {
        let r = acceptance::run_criterion(id, &config);
        if format == Format::Text {
            println!("{r}");
        }
        results.push(r);
    }
    match format {
        Format::Text => {}
        Format::Json => println!("{}", serde_json::to_string_pretty(&results).expect("results serialize")),
        Format::Tsv => {
            println!("id\tname\tpassed\tchecked\tfailures\telapsed_secs\tbudget_secs");
            for r in &results {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{:.3}\t{}",
                    r.id,
                    r.name,
                    r.passed,
                    r.checked,
                    r.failures.len(),
                    r.elapsed_secs,
                    r.budget_secs
                );
            }
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        Err(Failure::Acceptance(failed))
    } else {
        Ok(())
    }
}
