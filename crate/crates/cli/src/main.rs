use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use opa_core::detrep::{expand, DetRep, MatrixJson};
use opa_core::gaussian::{format_rational, parse_rational};
use opa_core::innerness::{is_inner, plateau_check, univariate_from_bipoly, weak_inner_failure};
use opa_core::opa::{det_criterion, orthogonality_residual, solve_opa};
use opa_core::scan::{self, Family, ScanSpec};
use opa_core::zeros::{classify_bidisk, ClassifyConfig};
use opa_core::{BiPoly, GaussianRational, OpaError};

/// Optimal polynomial approximants on the bidisk.
#[derive(Parser, Debug)]
#[command(name = "opa-lab", version)]
struct Cli {
    /// Classifier tolerance on root moduli.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tolerance: f64,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress all logging on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal approximant of a given degree, optionally with the determinant criterion at a point.
    Opa {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Point (z, w) as `re1,im1,re2,im2` rationals, e.g. `1/2,0,0,-1/3`.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Zero location relative to the open and closed bidisk.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        probes: ProbeArgs,
    },
    /// Coefficient reversal with conjugation over the bidegree.
    Reflect {
        #[arg(long)]
        input: PathBuf,
    },
    /// Weak innerness with the first failing shift.
    Inner {
        #[arg(long)]
        input: PathBuf,
    },
    /// Plateaus of the approximants of h(χ_k).
    Plateau {
        /// Univariate h, stored as a polynomial in z only.
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        chi: u64,
        #[arg(long, default_value_t = 2)]
        jmax: u32,
    },
    /// Expansion of alpha · det(I − C D).
    Detrep {
        /// Row-major complex matrix `[[[re, im], ...], ...]`.
        #[arg(long)]
        matrix: PathBuf,
        /// Block sizes `nz,nw`.
        #[arg(long)]
        split: String,
        /// `re` or `re,im`.
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// Seeded family search, one JSON record per line.
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = scan::DEFAULT_N_MAX)]
        nmax: usize,
        /// Bound on numerators and denominators of drawn coefficients.
        #[arg(long, default_value_t = scan::DEFAULT_HEIGHT)]
        height: i64,
        /// Continue an existing output file after its last complete record.
        #[arg(long)]
        resume: bool,
        #[command(flatten)]
        probes: ProbeArgs,
    },
    /// Summary of scan records.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write per-polynomial margins as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the plain text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ProbeArgs {
    #[arg(long, default_value_t = 2048)]
    torus_samples: usize,
    #[arg(long, default_value_t = 128)]
    disk_grid: usize,
    #[arg(long, default_value_t = 40)]
    refine_iters: usize,
}

impl ProbeArgs {
    fn config(self, tolerance: f64) -> ClassifyConfig {
        ClassifyConfig {
            torus_samples: self.torus_samples,
            disk_grid: self.disk_grid,
            tolerance,
            refine_iters: self.refine_iters,
        }
    }
}

/// Exit 2 for usage and input problems, 1 for domain errors.
enum Failure {
    Usage(String),
    Domain(OpaError),
}

impl From<OpaError> for Failure {
    fn from(e: OpaError) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_poly(path: &Path) -> CliResult<BiPoly> {
    BiPoly::from_json(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_alpha_point(s: &str) -> CliResult<(GaussianRational, GaussianRational)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(usage("--alpha expects re1,im1,re2,im2"));
    }
    let r: Vec<_> = parts
        .iter()
        .map(|p| parse_rational(p).map_err(|e| usage(format!("--alpha: {e}"))))
        .collect::<CliResult<_>>()?;
    Ok((
        GaussianRational::new(r[0].clone(), r[1].clone()),
        GaussianRational::new(r[2].clone(), r[3].clone()),
    ))
}

fn parse_floats(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| usage(format!("{what}: {e}"))))
        .collect()
}

#[derive(Serialize)]
struct OpaOutput {
    poly: BiPoly,
    degree: usize,
    error_sq: String,
    /// `max_j |⟨1 − p·f, χ_j f⟩|²`; zero for an exact solve.
    residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    det_criterion: Option<DetOutput>,
}

#[derive(Serialize)]
struct DetOutput {
    alpha: [[String; 2]; 2],
    det_g: String,
    det_g0: [String; 2],
    opa_vanishes: bool,
    identity_holds: bool,
}

fn pair(c: &GaussianRational) -> [String; 2] {
    [format_rational(&c.re), format_rational(&c.im)]
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    let text = serde_json::to_string(value).map_err(OpaError::from)? + "\n";
    write_output(out, text.as_bytes())
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(bytes).map_err(|e| Failure::Domain(e.into())),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let out = &cli.out;
    match cli.command {
        Command::Opa { input, degree, alpha } => {
            let f = read_poly(&input)?;
            let alpha = alpha.as_deref().map(parse_alpha_point).transpose()?;
            let r = solve_opa(&f, degree)?;
            let residual = orthogonality_residual(&f, &r)?;
            let det_criterion = match &alpha {
                Some((a, b)) => {
                    let d = det_criterion(&f, degree, (a, b))?;
                    Some(DetOutput {
                        alpha: [pair(a), pair(b)],
                        det_g: format_rational(&d.det_g),
                        det_g0: pair(&d.det_g0),
                        opa_vanishes: r.poly.evaluate(a, b) == GaussianRational::default(),
                        identity_holds: d.identity_holds(&f, &r.poly, (a, b)),
                    })
                }
                None => None,
            };
            emit(
                out,
                &OpaOutput {
                    error_sq: format_rational(&r.error_sq),
                    residual: format_rational(&residual),
                    poly: r.poly,
                    degree,
                    det_criterion,
                },
            )
        }
        Command::Classify { input, probes } => {
            let p = read_poly(&input)?;
            emit(out, &classify_bidisk(&p, &probes.config(cli.tolerance))?)
        }
        Command::Reflect { input } => emit(out, &read_poly(&input)?.reflect()?),
        Command::Inner { input } => {
            let f = read_poly(&input)?;
            let failing = weak_inner_failure(&f)?;
            #[derive(Serialize)]
            struct InnerOutput {
                weakly_inner: bool,
                failing_shift: Option<[u32; 2]>,
                inner: bool,
            }
            emit(
                out,
                &InnerOutput {
                    weakly_inner: failing.is_none(),
                    failing_shift: failing.map(|e| [e.a, e.b]),
                    inner: is_inner(&f),
                },
            )
        }
        Command::Plateau { h, chi, jmax } => {
            let h = univariate_from_bipoly(&read_poly(&h)?)?;
            emit(out, &plateau_check(&h, chi, jmax)?)
        }
        Command::Detrep { matrix, split, alpha } => {
            let m: MatrixJson = serde_json::from_str(&read_text(&matrix)?)
                .map_err(|e| usage(format!("{}: {e}", matrix.display())))?;
            let c = m.to_matrix().map_err(|e| usage(e.to_string()))?;
            let s: Vec<usize> = split
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|e| usage(format!("--split: {e}"))))
                .collect::<CliResult<_>>()?;
            if s.len() != 2 {
                return Err(usage("--split expects nz,nw"));
            }
            let a = parse_floats(&alpha, "--alpha")?;
            let alpha = match a.as_slice() {
                [re] => Complex64::new(*re, 0.0),
                [re, im] => Complex64::new(*re, *im),
                _ => return Err(usage("--alpha expects re or re,im")),
            };
            let rep = DetRep::new(alpha, c, (s[0], s[1]))?;
            emit(out, &expand(&rep)?)
        }
        Command::Scan { family, count, nmax, height, resume, probes } => {
            let family: Family = family.parse().map_err(|e: OpaError| usage(e.to_string()))?;
            let spec = ScanSpec { family, seed: cli.seed, n_max: nmax, height, config: probes.config(cli.tolerance) };
            run_scan_command(&spec, count, out, resume)
        }
        Command::Report { input, csv, table } => {
            let records = scan::parse_records(&read_text(&input)?).map_err(|e| usage(e.to_string()))?;
            let rep = scan::report(&records);
            if let Some(path) = csv {
                fs::write(&path, scan::margins_csv(&records))
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            for (fam, index) in &rep.surviving_weak_candidates {
                log::warn!("weak violation candidate survived recheck: {fam} #{index}");
            }
            if table {
                write_output(out, rep.to_table().as_bytes())
            } else {
                emit(out, &rep)
            }
        }
    }
}

fn run_scan_command(spec: &ScanSpec, count: u64, out: &Option<PathBuf>, resume: bool) -> CliResult<()> {
    let mut start = 0;
    let mut sink: Box<dyn Write> = match out {
        Some(path) => {
            let mut keep = 0;
            if resume && path.exists() {
                let existing = read_text(path)?;
                let (next, valid) = scan::resume_point(&existing, spec)?;
                log::info!("resuming at index {next}");
                start = next;
                keep = valid;
            }
            let file = fs::OpenOptions::new()
                .create(true)
                .write(true)
                .truncate(false)
                .open(path)
                .map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
            file.set_len(keep as u64).map_err(|e| Failure::Domain(e.into()))?;
            let mut w = io::BufWriter::new(file);
            io::Seek::seek(&mut w, io::SeekFrom::End(0)).map_err(|e| Failure::Domain(e.into()))?;
            Box::new(w)
        }
        None => Box::new(io::BufWriter::new(io::stdout())),
    };
    let remaining = count.saturating_sub(start);
    scan::run_scan(spec, start, remaining, |r| {
        let line = scan::record_line(r)?;
        writeln!(sink, "{line}")?;
        Ok(())
    })?;
    sink.flush().map_err(|e| Failure::Domain(e.into()))
}

fn init_threads() {
    if let Some(n) = std::env::var("OPA_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = if cli.quiet { log::LevelFilter::Off } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    if cli.quiet {
        log::set_max_level(log::LevelFilter::Off);
    }
    init_threads();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            if !quiet {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            if !quiet {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}
