use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use theta_orbifold::cohom::{epsilon, h2_compute, weil_pairing, Cocycle2, RootChoice};
use theta_orbifold::datafile::{parse_datafile, DataFile};
use theta_orbifold::genus::{
    analytic_compare_all, lift_independence_sweep_by, orbifold_genus, twisted_genus, witten_genus, GenusValue,
    Normalization, OrbifoldData,
};
use theta_orbifold::groups::FiniteGroup;
use theta_orbifold::jacobi::{
    check_quasi_periodicity, f_fraction_check, f_fraction_composition_check, numeric_theta_eval,
    theta_ell_shift_check, theta_reduced, theta_shift_check, CheckOutcome, ThetaSeries,
};
use theta_orbifold::exactnum::YRational;
use theta_orbifold::series::PuiseuxSeries;
use theta_orbifold::Error;

/// Exact orbifold elliptic genera, discrete torsion and group cohomology.
#[derive(Parser, Debug)]
#[command(name = "theta-orbifold", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SeriesOpts {
    /// Truncation order in units of q^(1/n), n the group exponent.
    #[arg(long, default_value_t = 8)]
    order: i64,
    /// Jet order; must be at least the largest component dimension.
    #[arg(long)]
    jet_order: Option<u32>,
    /// Emit the line-oriented canonical rendering.
    #[arg(long)]
    canonical: bool,
    /// Divide the sector sum by |G|.
    #[arg(long)]
    normalize: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbifold genus of a fixed-point data file.
    Orbifold {
        file: PathBuf,
        #[command(flatten)]
        opts: SeriesOpts,
    },
    /// Genus twisted by the discrete torsion of a cocycle file.
    Twisted {
        file: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        /// Unit c choosing the primitive root ζ^c.
        #[arg(long, default_value_t = 1)]
        root: i64,
        #[command(flatten)]
        opts: SeriesOpts,
    },
    /// Exact quasi-periodicity checks of θ̃ and f.
    VerifyTheta {
        /// Integer q-order of the checks.
        #[arg(long, default_value_t = 12)]
        order: i64,
        /// Seed for the numeric cross-check sample points.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Perturb θ̃ at q⁰ before the quasi-periodicity check.
        #[arg(long)]
        inject_corruption: bool,
    },
    /// Sector values are unchanged under every ±n lift shift.
    VerifyLifts {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        order: i64,
        /// Perturb every shifted-lift value before comparing.
        #[arg(long)]
        inject_corruption: bool,
    },
    /// Analytic stalk integrand against the sector integrand at (g, −h), all pairs.
    CompareAnalytic {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        order: i64,
    },
    /// Invariant factors of H²(G; ℤ/n).
    H2 {
        group: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Weil pairing ζ_n^{ℓ₁k₂ − ℓ₂k₁}.
    Weil {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        a: (i64, i64),
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        b: (i64, i64),
        #[arg(long, default_value_t = 1)]
        root: i64,
    },
    /// Witten genus of the ambient components of a non-equivariant data file.
    Witten {
        file: PathBuf,
        /// Integer q-order.
        #[arg(long, default_value_t = 4)]
        order: i64,
        #[arg(long)]
        canonical: bool,
    },
    /// List commuting pairs, optionally only those of p-power order.
    Pairs {
        group: PathBuf,
        #[arg(long)]
        p: Option<u32>,
    },
}

fn parse_vector(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated integers")?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

enum Failure {
    Verification,
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &PathBuf) -> Result<DataFile, Error> {
    parse_datafile(path)
}

fn load_orbifold(path: &PathBuf) -> Result<OrbifoldData, Error> {
    match load(path)? {
        DataFile::Orbifold(d) => Ok(d),
        other => Err(Error::input(
            path.display().to_string(),
            format!("expected an orbifold file, found a {} file", other.kind()),
        )),
    }
}

fn load_group(path: &PathBuf) -> Result<FiniteGroup, Error> {
    match load(path)? {
        DataFile::Group(g) => Ok(g),
        DataFile::Orbifold(d) => Ok(d.group().clone()),
        DataFile::Cocycle(c) => Ok(c.group().clone()),
    }
}

fn load_cocycle(path: &PathBuf) -> Result<Cocycle2, Error> {
    match load(path)? {
        DataFile::Cocycle(c) => Ok(c),
        other => Err(Error::input(
            path.display().to_string(),
            format!("expected a cocycle file, found a {} file", other.kind()),
        )),
    }
}

/// Integer q-order covering `units` steps of q^{1/n}.
fn q_order(units: i64, n: u32) -> Result<i64, Error> {
    if units < 1 {
        return Err(Error::input("--order", "must be at least 1"));
    }
    Ok((units + n as i64 - 1) / n as i64)
}

fn check_jet_order(opts: &SeriesOpts, data: &OrbifoldData) -> Result<(), Error> {
    if let Some(j) = opts.jet_order {
        if j < data.max_dim() {
            return Err(Error::input(
                "--jet-order",
                format!("{j} is below the largest component dimension {}", data.max_dim()),
            ));
        }
    }
    Ok(())
}

/// Truncates a value computed at integer q-order to q^{units/n}.
fn finish(value: GenusValue, n: u32, units: i64) -> GenusValue {
    if value.is_exact() {
        return value;
    }
    let ram = value.ramification();
    let target = ram * n / gcd(ram, n);
    value.lift(target).truncate(units * (target / n) as i64)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn print_value(value: &GenusValue, canonical: bool) {
    if canonical {
        println!("{}", value.render_canonical());
    } else {
        println!("{}", value.render_inline());
    }
}

fn normalization(opts: &SeriesOpts) -> Normalization {
    if opts.normalize {
        Normalization::DivideByOrder
    } else {
        Normalization::Raw
    }
}

fn report(outcomes: &[CheckOutcome]) -> Outcome {
    for o in outcomes {
        println!("{o}");
    }
    if outcomes.iter().all(CheckOutcome::passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn corrupted(theta: &ThetaSeries) -> ThetaSeries {
    theta.add(&ThetaSeries::from_terms(theta.precision(), [(0, 1, YRational::one())]))
}

/// Symbolic θ̃ against the floating-point product at seeded random points.
fn numeric_cross_check(seed: u64, order: i64) -> Result<bool, Error> {
    let theta = theta_reduced(order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for _ in 0..5 {
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.5));
        let x = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let sym = theta.eval(tau, x, z);
        let num = numeric_theta_eval(tau, x, order);
        let err = (sym - num).norm();
        println!("numeric theta at tau={tau:.4} x={x:.4}: |difference| = {err:.3e}");
        ok &= err < 1e-8;
    }
    Ok(ok)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Orbifold { file, opts } => {
            let data = load_orbifold(&file)?;
            check_jet_order(&opts, &data)?;
            let v = orbifold_genus(&data, q_order(opts.order, data.n())?, normalization(&opts))?;
            print_value(&finish(v, data.n(), opts.order), opts.canonical);
            Ok(())
        }
        Command::Twisted {
            file,
            cocycle,
            root,
            opts,
        } => {
            let data = load_orbifold(&file)?;
            check_jet_order(&opts, &data)?;
            let u = load_cocycle(&cocycle)?;
            if u.group().order() != data.group().order() || u.group().cyclic_orders() != data.group().cyclic_orders() {
                return Err(Error::input(
                    cocycle.display().to_string(),
                    "cocycle group differs from the orbifold group",
                )
                .into());
            }
            let e = epsilon(&u)?;
            let v = twisted_genus(
                &data,
                &e,
                RootChoice(root),
                q_order(opts.order, data.n())?,
                normalization(&opts),
            )?;
            print_value(&finish(v, data.n(), opts.order), opts.canonical);
            Ok(())
        }
        Command::VerifyTheta {
            order,
            seed,
            inject_corruption,
        } => {
            let mut outcomes = Vec::new();
            if inject_corruption {
                let theta = theta_reduced(2 * order)?;
                outcomes.push(check_quasi_periodicity(&corrupted(&theta), order)?);
            } else {
                outcomes.push(theta_shift_check(order)?);
            }
            outcomes.push(theta_ell_shift_check(order)?);
            for k in 0..=2 {
                outcomes.push(f_fraction_check(order, k)?);
            }
            outcomes.push(f_fraction_composition_check(order)?);
            let numeric_ok = numeric_cross_check(seed, order)?;
            let verdict = report(&outcomes);
            if !numeric_ok {
                return Err(Failure::Verification);
            }
            verdict
        }
        Command::VerifyLifts {
            file,
            order,
            inject_corruption,
        } => {
            let data = load_orbifold(&file)?;
            let one = PuiseuxSeries::exact_constant(YRational::one());
            let failures = lift_independence_sweep_by(&data, q_order(order, data.n())?, |v| {
                if inject_corruption {
                    v + &one
                } else {
                    v.clone()
                }
            })?;
            for f in &failures {
                println!(
                    "lift change altered sector ({}, {}) component {}: lifts {:?}",
                    data.group().label(f.pair.g),
                    data.group().label(f.pair.h),
                    f.component,
                    f.lifts
                );
            }
            if failures.is_empty() {
                println!("lift independence: ok on {} sectors", data.sector_count());
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::CompareAnalytic { file, order } => {
            let data = load_orbifold(&file)?;
            let outcomes = analytic_compare_all(&data, q_order(order, data.n())?)?;
            for o in &outcomes {
                println!(
                    "({}, {}): integrand {}, m-lift {}, a-lift {}",
                    data.group().label(o.pair.g),
                    data.group().label(o.pair.h),
                    verdict(o.matches),
                    verdict(o.m_lift_invariant),
                    verdict(o.a_lift_invariant)
                );
            }
            if outcomes.iter().all(|o| o.passed()) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::H2 { group, n } => {
            let g = load_group(&group)?;
            if n == 0 {
                return Err(Error::input("--n", "must be positive").into());
            }
            let h = h2_compute(&g, n)?;
            println!("{h} (order {})", h.order());
            Ok(())
        }
        Command::Weil { n, a, b, root } => {
            println!("{}", weil_pairing(n, a, b, RootChoice(root))?);
            Ok(())
        }
        Command::Witten {
            file,
            order,
            canonical,
        } => {
            let data = load_orbifold(&file)?;
            if data.group().order() != 1 {
                return Err(Error::input(
                    file.display().to_string(),
                    "the Witten genus is computed for data with the trivial group",
                )
                .into());
            }
            let mut total = PuiseuxSeries::exact_zero();
            for comp in data.ambient() {
                let v = witten_genus(&comp.tangent_roots, &comp.integral, &comp.shape(), order)?;
                total = &total + &v;
            }
            print_value(&total, canonical);
            Ok(())
        }
        Command::Pairs { group, p } => {
            let g = load_group(&group)?;
            let pairs = match p {
                Some(p) => g.p_power_pairs(p)?,
                None => g.commuting_pairs(),
            };
            for pair in &pairs {
                println!("({}, {})", g.label(pair.g), g.label(pair.h));
            }
            println!("{} pairs", pairs.len());
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("THETA_ORBIFOLD_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|t| *t > 0)
    {
        // the global pool can only be built once; a failure leaves the default
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
