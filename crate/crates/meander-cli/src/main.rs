//! Command-line front end for the meander kernel library.
//!
//! Subcommands: `validate`, `kernel`, `correlate`, `simulate`, `converge`,
//! `dump-basis`. Exit codes: 0 pass, 1 validation failure, 2 usage or
//! configuration error, 3 numerical-convergence failure.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::{parse_f64_list, parse_usize_list, Config};
use meander_core::kernels::{
    homogeneous_kernel, kernel_convergence, validate_mode, ConvergenceMode, ConvergenceReport,
    FiniteKernel, InfiniteKernel,
};
use meander_core::meander::{ModelParams, TimeGrid};
use meander_core::pfaffian::{correlation, CorrelationMode, CorrelationRequest};
use meander_core::simulate::{simulate_path_range, SamplePath, Scheme};
use meander_core::skeworth::SkewBasis;
use meander_core::validate::{monte_carlo_check, run_suite, Check, Suite};
use output::{fmt_f64, CsvWriter, Json};

#[derive(Parser)]
#[command(
    name = "meander",
    version,
    about = "Non-colliding meander systems: kernels, correlations, simulation"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: MEANDER_THREADS, then hardware).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run validation suites and emit a JSON report.
    Validate {
        /// Comma-separated suite names or `all`.
        #[arg(long, default_value = "all")]
        suites: String,
        /// Include the Monte Carlo sampler cross-check.
        #[arg(long)]
        mc: bool,
        /// Report path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate kernel blocks on a grid and write CSV.
    Kernel {
        #[arg(long, value_parser = ["finite", "infinite", "homogeneous"])]
        mode: String,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long = "N")]
        n_particles: Option<usize>,
        /// Observation times: `t_1,..,T` (finite) or shifted times `s_m <= 0`.
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
        #[arg(long)]
        grid_x: Option<String>,
        #[arg(long)]
        grid_y: Option<String>,
        #[arg(long)]
        degree_cap: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a multitime correlation from a request file; write JSON.
    Correlate {
        #[arg(long)]
        request: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate non-colliding paths and write CSV.
    Simulate {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long = "N")]
        n_particles: Option<usize>,
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long)]
        paths: Option<u64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = ["sde", "exact"])]
        scheme: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence reports of finite-N quantities onto their limits.
    Converge {
        /// R_even | R_odd | Phi_even | Phi_odd | ptilde | I2lc | kernels | homogeneous
        #[arg(long)]
        mode: String,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        /// Particle counts, e.g. `50,100,200`.
        #[arg(long = "N")]
        n_list: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s2: Option<f64>,
        /// Differintegration order for the partial-sum mode.
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i32>,
        /// Shifts for the homogeneous mode, e.g. `-5,-10,-20`.
        #[arg(long, allow_hyphen_values = true)]
        shifts: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the coefficient tables of the skew basis as CSV.
    DumpBasis {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        degree_cap: Option<usize>,
        /// Output prefix: writes `<prefix>_alpha.csv`, `_beta.csv`, `_rstar.csv`.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<meander_core::Error> for CliError {
    fn from(e: meander_core::Error) -> CliError {
        match e {
            meander_core::Error::Domain(_) | meander_core::Error::Unsupported(_) => {
                CliError::Usage(format!("{e}"))
            }
            other => CliError::Numeric(format!("{other}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(format!("io: {e}"))
    }
}

impl From<String> for CliError {
    fn from(e: String) -> CliError {
        CliError::Usage(e)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let threads = cli
        .threads
        .or(cfg.usize("threads")?)
        .or_else(|| {
            std::env::var("MEANDER_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .ok();
    match cli.cmd {
        Cmd::Validate { suites, mc, out } => cmd_validate(&suites, mc, out.as_deref()),
        Cmd::Kernel {
            mode,
            nu,
            kappa,
            n_particles,
            times,
            grid_x,
            grid_y,
            degree_cap,
            out,
        } => cmd_kernel(
            &cfg, &mode, nu, kappa, n_particles, times, grid_x, grid_y, degree_cap, &out,
        ),
        Cmd::Correlate { request, out } => cmd_correlate(&request, out.as_deref()),
        Cmd::Simulate {
            nu,
            kappa,
            n_particles,
            horizon,
            paths,
            steps,
            seed,
            scheme,
            out,
        } => cmd_simulate(
            &cfg, nu, kappa, n_particles, horizon, paths, steps, seed, scheme, &out,
        ),
        Cmd::Converge {
            mode,
            nu,
            kappa,
            n_list,
            theta,
            x,
            y,
            s1,
            s2,
            order,
            shifts,
            out,
        } => cmd_converge(
            &cfg,
            &mode,
            nu,
            kappa,
            n_list,
            theta,
            x,
            y,
            s1,
            s2,
            order,
            shifts,
            out.as_deref(),
        ),
        Cmd::DumpBasis {
            nu,
            kappa,
            degree_cap,
            out,
        } => cmd_dump_basis(&cfg, nu, kappa, degree_cap, &out),
    }
}

fn write_out(path: Option<&std::path::Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn checks_to_json(j: &mut Json, checks: &[Check]) {
    j.push_raw("[");
    for (i, c) in checks.iter().enumerate() {
        if i > 0 {
            j.push_raw(",");
        }
        j.push_raw("{\"name\":");
        j.string(&c.name);
        j.push_raw(",\"detail\":");
        j.string(&c.detail);
        j.push_raw(",\"measured\":");
        j.number(c.measured);
        j.push_raw(",\"expected\":");
        j.number(c.expected);
        j.push_raw(",\"tolerance\":");
        j.number(c.tolerance);
        j.push_raw(",\"pass\":");
        j.bool(c.pass);
        j.push_raw("}");
    }
    j.push_raw("]");
}

fn cmd_validate(suites: &str, mc: bool, out: Option<&std::path::Path>) -> Result<ExitCode, CliError> {
    let selected: Vec<Suite> = if suites == "all" {
        Suite::ALL.to_vec()
    } else {
        suites
            .split(',')
            .map(|s| {
                Suite::parse(s.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown suite `{s}`")))
            })
            .collect::<Result<_, _>>()?
    };
    // suites run in parallel; reports print in the requested order
    let reports: Vec<_> = selected
        .par_iter()
        .map(|&s| run_suite(s))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let mut all_pass = true;
    let mut j = Json::new();
    j.push_raw("[");
    for (i, rep) in reports.iter().enumerate() {
        if i > 0 {
            j.push_raw(",");
        }
        all_pass &= rep.pass();
        j.push_raw("{\"suite\":");
        j.string(&rep.suite);
        j.push_raw(",\"pass\":");
        j.bool(rep.pass());
        j.push_raw(",\"checks\":");
        checks_to_json(&mut j, &rep.checks);
        j.push_raw("}");
    }
    if mc {
        for &(nu, kappa) in &[(0.5, 0.0), (0.5, 1.0)] {
            let check = monte_carlo_check(nu, kappa, 100_000, 20260808)?;
            all_pass &= check.pass;
            j.push_raw(",{\"suite\":\"monte-carlo\",\"pass\":");
            j.bool(check.pass);
            j.push_raw(",\"checks\":");
            checks_to_json(&mut j, core::slice::from_ref(&check));
            j.push_raw("}");
        }
    }
    j.push_raw("]\n");
    write_out(out, &j.finish())?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_kernel(
    cfg: &Config,
    mode: &str,
    nu: Option<f64>,
    kappa: Option<f64>,
    n_particles: Option<usize>,
    times: Option<String>,
    grid_x: Option<String>,
    grid_y: Option<String>,
    degree_cap: Option<usize>,
    out: &std::path::Path,
) -> Result<ExitCode, CliError> {
    let nu = nu.or(cfg.f64("nu")?).unwrap_or(0.5);
    let kappa = kappa.or(cfg.f64("kappa")?).unwrap_or(1.0);
    let times = match times {
        Some(s) => parse_f64_list(&s)?,
        None => cfg
            .f64_list("times")?
            .ok_or_else(|| CliError::Usage("missing --times".into()))?,
    };
    let grid_x = match grid_x {
        Some(s) => parse_f64_list(&s)?,
        None => cfg
            .f64_list("grid_x")?
            .unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
    };
    let grid_y = match grid_y {
        Some(s) => parse_f64_list(&s)?,
        None => cfg.f64_list("grid_y")?.unwrap_or_else(|| grid_x.clone()),
    };
    let file = std::fs::File::create(out)?;
    let mut csv = CsvWriter::new(
        std::io::BufWriter::new(file),
        &["m", "x", "n", "y", "D", "S_fwd", "S_bwd", "I"],
    )?;
    let mut jobs = Vec::new();
    for m in 0..times.len() {
        for n in 0..times.len() {
            for &x in &grid_x {
                for &y in &grid_y {
                    jobs.push((m, n, x, y));
                }
            }
        }
    }
    let rows: Vec<[f64; 4]> = match mode {
        "finite" => {
            let n_part = n_particles.or(cfg.usize("N")?).unwrap_or(2);
            let horizon = *times.last().expect("nonempty times");
            let params = ModelParams::new(nu, kappa, n_part, horizon)?;
            let grid = TimeGrid::new(&times, horizon)?;
            let kernel = FiniteKernel::new(params, grid, degree_cap)?;
            jobs.par_iter()
                .map(|&(m, n, x, y)| {
                    let b = kernel.block(m, x, n, y)?;
                    Ok([b.d, b.s_fwd, b.s_bwd, b.i])
                })
                .collect::<Result<_, meander_core::Error>>()?
        }
        "infinite" => {
            let kernel = InfiniteKernel::new(nu, kappa)?;
            jobs.par_iter()
                .map(|&(m, n, x, y)| {
                    let b = kernel.block(times[m], x, times[n], y)?;
                    Ok([b.d, b.s_fwd, b.s_bwd, b.i])
                })
                .collect::<Result<_, meander_core::Error>>()?
        }
        "homogeneous" => jobs
            .par_iter()
            .map(|&(m, n, x, y)| {
                let fwd = homogeneous_kernel(nu, times[m], x, times[n], y)?;
                let bwd = homogeneous_kernel(nu, times[n], y, times[m], x)?;
                Ok([0.0, fwd, bwd, 0.0])
            })
            .collect::<Result<_, meander_core::Error>>()?,
        other => return Err(CliError::Usage(format!("unknown kernel mode `{other}`"))),
    };
    for ((m, n, x, y), vals) in jobs.iter().zip(&rows) {
        csv.row(&[
            m.to_string(),
            fmt_f64(*x),
            n.to_string(),
            fmt_f64(*y),
            fmt_f64(vals[0]),
            fmt_f64(vals[1]),
            fmt_f64(vals[2]),
            fmt_f64(vals[3]),
        ])?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_correlate(
    request: &std::path::Path,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    let req_cfg = Config::load(request)?;
    let mode = req_cfg
        .raw("mode")
        .ok_or_else(|| CliError::Usage("request needs `mode = finite|infinite`".into()))?;
    let nu = req_cfg
        .f64("nu")?
        .ok_or_else(|| CliError::Usage("request needs `nu`".into()))?;
    let kappa = req_cfg
        .f64("kappa")?
        .ok_or_else(|| CliError::Usage("request needs `kappa`".into()))?;
    let times = req_cfg
        .f64_list("times")?
        .ok_or_else(|| CliError::Usage("request needs `times`".into()))?;
    let mut points = Vec::new();
    for i in 1..=times.len() {
        let key = format!("points_{i}");
        points.push(req_cfg.f64_list(&key)?.unwrap_or_default());
    }
    let mode = match mode {
        "finite" => {
            let n = req_cfg
                .usize("N")?
                .ok_or_else(|| CliError::Usage("finite request needs `N`".into()))?;
            let horizon = req_cfg
                .f64("horizon")?
                .unwrap_or_else(|| *times.last().expect("nonempty times"));
            CorrelationMode::Finite {
                params: ModelParams::new(nu, kappa, n, horizon)?,
                grid: TimeGrid::new(&times, horizon)?,
                degree_cap: req_cfg.usize("degree_cap")?,
            }
        }
        "infinite" => CorrelationMode::Infinite { nu, kappa, times },
        other => return Err(CliError::Usage(format!("unknown mode `{other}`"))),
    };
    let result = correlation(&CorrelationRequest { mode, points })?;
    let mut j = Json::new();
    j.push_raw("{\"value\":");
    j.number(result.value);
    j.push_raw(",\"blocks\":");
    j.push_raw(&result.blocks.to_string());
    j.push_raw(",\"condition_estimate\":");
    j.number(result.condition_estimate);
    j.push_raw("}\n");
    write_out(out, &j.finish())?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cfg: &Config,
    nu: Option<f64>,
    kappa: Option<f64>,
    n_particles: Option<usize>,
    horizon: Option<f64>,
    paths: Option<u64>,
    steps: Option<usize>,
    seed: Option<u64>,
    scheme: Option<String>,
    out: &std::path::Path,
) -> Result<ExitCode, CliError> {
    let nu = nu.or(cfg.f64("nu")?).unwrap_or(0.5);
    let kappa = kappa.or(cfg.f64("kappa")?).unwrap_or(0.0);
    let n = n_particles.or(cfg.usize("N")?).unwrap_or(1);
    let horizon = horizon.or(cfg.f64("T")?).unwrap_or(1.0);
    let paths = paths.or(cfg.u64("paths")?).unwrap_or(1000);
    let steps = steps.or(cfg.usize("steps")?).unwrap_or(16);
    let seed = seed.or(cfg.u64("seed")?).unwrap_or(0);
    let scheme = match scheme
        .or_else(|| cfg.raw("scheme").map(|s| s.to_string()))
        .unwrap_or_else(|| "sde".to_string())
        .as_str()
    {
        "sde" => Scheme::SdeEuler,
        "exact" => Scheme::Exact1Particle,
        other => return Err(CliError::Usage(format!("unknown scheme `{other}`"))),
    };
    let params = ModelParams::with_any_n(nu, kappa, n, horizon)?;
    // deterministic parallelism: fixed chunks of path ids, ordered output
    let chunk = 256_u64;
    let starts: Vec<u64> = (0..paths).step_by(chunk as usize).collect();
    let chunks: Vec<Vec<SamplePath>> = starts
        .par_iter()
        .map(|&s| simulate_path_range(&params, scheme, s, chunk.min(paths - s), steps, seed))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let file = std::fs::File::create(out)?;
    let mut header: Vec<String> = vec!["path_id".into(), "step".into(), "t".into()];
    for i in 1..=n {
        header.push(format!("x_{i}"));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut csv = CsvWriter::new(std::io::BufWriter::new(file), &header_refs)?;
    for chunk in &chunks {
        for path in chunk {
            for (k, state) in path.states.iter().enumerate() {
                let mut cells = vec![
                    path.path_id.to_string(),
                    k.to_string(),
                    fmt_f64(path.times[k]),
                ];
                cells.extend(state.iter().map(|&v| fmt_f64(v)));
                csv.row(&cells)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_rows(rep: &ConvergenceReport) -> Vec<Vec<String>> {
    rep.rows
        .iter()
        .map(|r| {
            vec![
                rep.name.clone(),
                r.n.to_string(),
                fmt_f64(r.finite),
                fmt_f64(r.limit),
                fmt_f64(r.rel_err),
            ]
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    cfg: &Config,
    mode: &str,
    nu: Option<f64>,
    kappa: Option<f64>,
    n_list: Option<String>,
    theta: Option<f64>,
    x: Option<f64>,
    y: Option<f64>,
    s1: Option<f64>,
    s2: Option<f64>,
    order: Option<i32>,
    shifts: Option<String>,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    let nu = nu.or(cfg.f64("nu")?).unwrap_or(0.5);
    let kappa = kappa.or(cfg.f64("kappa")?).unwrap_or(1.0);
    let theta = theta.or(cfg.f64("theta")?).unwrap_or(0.5);
    let x = x.or(cfg.f64("x")?).unwrap_or(1.0);
    let y = y.or(cfg.f64("y")?).unwrap_or(2.0);
    let s1 = s1.or(cfg.f64("s1")?).unwrap_or(-2.0);
    let s2 = s2.or(cfg.f64("s2")?).unwrap_or(-1.0);
    let ns = match n_list {
        Some(s) => parse_usize_list(&s)?,
        None => vec![50, 100, 200],
    };
    let mut body = String::from("mode,n,finite,limit,rel_err\n");
    let pass;
    match mode {
        "kernels" => {
            let reps = kernel_convergence(nu, kappa, s1, s2, x, y, &ns)?;
            pass = reps.iter().all(|r| r.pass);
            for rep in &reps {
                for row in report_rows(rep) {
                    body.push_str(&row.join(","));
                    body.push('\n');
                }
            }
        }
        "homogeneous" => {
            let shift_list = match shifts {
                Some(s) => parse_f64_list(&s)?,
                None => vec![-5.0, -10.0, -20.0],
            };
            let rep = meander_core::kernels::homogeneous_limit_check(
                nu,
                kappa,
                (s2 - s1).abs().max(0.1),
                x,
                y,
                &shift_list,
            )?;
            body = String::from("shift,abs_d_times_i,s_tilde_err\n");
            for i in 0..rep.shifts.len() {
                body.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(rep.shifts[i]),
                    fmt_f64(rep.d_times_i[i]),
                    fmt_f64(rep.s_tilde_err[i])
                ));
            }
            pass = rep.product_decreasing && rep.final_s_err < 1e-4;
        }
        name => {
            let m = match name {
                "R_even" => ConvergenceMode::REven,
                "R_odd" => ConvergenceMode::ROdd,
                "Phi_even" => ConvergenceMode::PhiEven,
                "Phi_odd" => ConvergenceMode::PhiOdd,
                "ptilde" => ConvergenceMode::Ptilde,
                "I2lc" => ConvergenceMode::I2lc(order.unwrap_or(-1)),
                other => return Err(CliError::Usage(format!("unknown converge mode `{other}`"))),
            };
            let rep = validate_mode(nu, kappa, m, theta, x, s1, s2, &ns)?;
            pass = rep.pass;
            for row in report_rows(&rep) {
                body.push_str(&row.join(","));
                body.push('\n');
            }
        }
    }
    write_out(out, &body)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_dump_basis(
    cfg: &Config,
    nu: Option<f64>,
    kappa: Option<f64>,
    degree_cap: Option<usize>,
    out: &std::path::Path,
) -> Result<ExitCode, CliError> {
    let nu = nu.or(cfg.f64("nu")?).unwrap_or(0.5);
    let kappa = kappa.or(cfg.f64("kappa")?).unwrap_or(1.0);
    let cap = degree_cap.or(cfg.usize("degree_cap")?).unwrap_or(40);
    let params = ModelParams::with_any_n(nu, kappa, 2, 1.0)?;
    let basis = SkewBasis::new(&params, cap);
    let prefix = out.to_string_lossy();
    let mut alpha = CsvWriter::new(
        std::io::BufWriter::new(std::fs::File::create(format!("{prefix}_alpha.csv"))?),
        &["k", "j", "alpha"],
    )?;
    for k in 0..=cap {
        for j in 0..=k {
            alpha.row(&[k.to_string(), j.to_string(), fmt_f64(basis.alpha(k, j))])?;
        }
    }
    let mut beta = CsvWriter::new(
        std::io::BufWriter::new(std::fs::File::create(format!("{prefix}_beta.csv"))?),
        &["j", "k", "beta"],
    )?;
    for j in 0..=cap {
        for k in 0..=j {
            beta.row(&[j.to_string(), k.to_string(), fmt_f64(basis.beta(j, k))])?;
        }
    }
    let mut rstar = CsvWriter::new(
        std::io::BufWriter::new(std::fs::File::create(format!("{prefix}_rstar.csv"))?),
        &["q", "rstar"],
    )?;
    for q in 0..=cap / 2 {
        rstar.row(&[q.to_string(), fmt_f64(basis.rstar(q))])?;
    }
    Ok(ExitCode::SUCCESS)
}
