//! Command implementations for the `sperner` binary.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical property
//! fails (a finding), 2 for usage, format, I/O or guard errors.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sperner_core::asymmetry::MAX_CONSTRUCT;
use sperner_core::family::{parse_fragment_text, render_fragment_text, render_stream};
use sperner_core::sampling::{SpernerSampler, DEFAULT_SEED};
use sperner_core::{
    asymmetry_report, binomial, check_r_bound, classify_type, complete_fragment, compute_params,
    enumerate_fragments, enumerate_msf, is_maximal, is_maximal_naive, is_sperner, verify_theorem1,
    verify_theorem2, DecipherFragment, EnumTask, Family, Fragment, Limits, TypedFamily,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "sperner",
    version,
    about = "Maximal Sperner families of type (k,k+1)"
)]
pub struct Cli {
    /// Worker threads for the parallel passes.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report Sperner, type and maximality of a family file.
    Check {
        file: PathBuf,
        /// Use the 2^n definition-level scan instead of the layered test.
        #[arg(long)]
        naive: bool,
        /// Type parameter to use instead of the inferred one.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print p_i, q_i, r_i and r_max of a family file.
    Params {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Complete a fragment file to a maximal Sperner family.
    Complete {
        file: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate maximal families or fragments.
    Enumerate {
        #[command(flatten)]
        task: TaskArgs,
        /// Enumerate fragments at this pivot (1-based) instead of families.
        #[arg(long)]
        pivot: Option<usize>,
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Check the size bounds, r-bound and maximality tests on every maximal family.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        #[command(flatten)]
        task: OptTaskArgs,
        /// Run every n in 3..=5 with all k, plus (6,1) and (6,2).
        #[arg(long, conflicts_with_all = ["n", "k"])]
        sweep: bool,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Complete every fragment at (n, k, pivot) and audit the results.
    #[command(name = "verify-theorem2")]
    VerifyTheorem2 {
        #[command(flatten)]
        task: OptTaskArgs,
        /// 1-based pivot.
        #[arg(long)]
        pivot: Option<usize>,
        /// Run every (n, k, pivot) with n <= 5, plus (6,2,1).
        #[arg(long, conflicts_with_all = ["n", "k", "pivot"])]
        sweep: bool,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Tabulate prefix-family size against the decipher lower bound.
    Asymmetry {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Build completions for n up to this value (at most 25).
        #[arg(long, default_value_t = 0)]
        construct_up_to: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = FragmentChoice::Singleton)]
        fragment: FragmentChoice,
    },
    /// Compare layered and naive maximality on seeded random families.
    CrossCheck {
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct TaskArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct OptTaskArgs {
    #[arg(long, required_unless_present = "sweep")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "sweep")]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GuardArgs {
    /// Lift the search-space guards; runtime may be very long.
    #[arg(long)]
    pub allow_large: bool,
}

impl GuardArgs {
    fn limits(&self) -> Limits {
        if self.allow_large {
            Limits::unbounded()
        } else {
            Limits::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FragmentChoice {
    /// The one-set fragment {A}.
    Singleton,
    /// The whole prefix family.
    Prefix,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Finding,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Finding => 1,
        }
    }

    fn from_clean(clean: bool) -> Self {
        if clean {
            Status::Pass
        } else {
            Status::Finding
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: sperner_core::Error,
    },
    #[error(transparent)]
    Core(#[from] sperner_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Output(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub const CODE: u8 = 2;
}

/// Runs a parsed command line, honoring `--jobs`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    // Commands write to a buffer so the worker pool never holds stdout.
    let mut buffer = Vec::new();
    let status = pool.install(|| execute(cli, &mut buffer));
    out.write_all(&buffer)?;
    status
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    match &cli.command {
        Command::Check { file, naive, k } => run_check(file, *naive, *k, out),
        Command::Params { file, k } => run_params(file, *k, out),
        Command::Complete { file, out: dest } => run_complete(file, dest.as_deref(), out),
        Command::Enumerate {
            task,
            pivot,
            count_only,
            guard,
        } => run_enumerate(task, *pivot, *count_only, &guard.limits(), out),
        Command::VerifyTheorem1 { task, sweep, guard } => {
            let tasks = if *sweep {
                theorem1_sweep()
            } else {
                vec![(task.n.unwrap_or_default(), task.k.unwrap_or_default())]
            };
            run_verify_theorem1(&tasks, &guard.limits(), out)
        }
        Command::VerifyTheorem2 {
            task,
            pivot,
            sweep,
            guard,
        } => {
            let tasks = if *sweep {
                theorem2_sweep()
            } else {
                let pivot = pivot.ok_or_else(|| CliError::Usage("--pivot is required".into()))?;
                vec![(
                    task.n.unwrap_or_default(),
                    task.k.unwrap_or_default(),
                    pivot,
                )]
            };
            run_verify_theorem2(&tasks, &guard.limits(), out)
        }
        Command::Asymmetry {
            l,
            n_min,
            n_max,
            construct_up_to,
            format,
            fragment,
        } => run_asymmetry(
            *l,
            *n_min,
            *n_max,
            *construct_up_to,
            *format,
            *fragment,
            out,
        ),
        Command::CrossCheck {
            n_min,
            n_max,
            samples,
        } => run_cross_check(*n_min, *n_max, *samples, cli.seed, out),
    }
}

/// `(n, k)` pairs swept by `verify-theorem1 --sweep`.
pub fn theorem1_sweep() -> Vec<(usize, usize)> {
    let mut tasks: Vec<(usize, usize)> = (3..=5)
        .flat_map(|n| (1..=n / 2).map(move |k| (n, k)))
        .collect();
    tasks.extend([(6, 1), (6, 2)]);
    tasks
}

/// `(n, k, pivot)` triples swept by `verify-theorem2 --sweep`; pivots are 1-based.
pub fn theorem2_sweep() -> Vec<(usize, usize, usize)> {
    let mut tasks: Vec<(usize, usize, usize)> = (3..=5)
        .flat_map(|n| (1..=n / 2).flat_map(move |k| (1..=n).map(move |p| (n, k, p))))
        .collect();
    tasks.push((6, 2, 1));
    tasks
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_family(path: &Path) -> Result<Family, CliError> {
    let text = read_input(path)?;
    Family::parse(&text).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

fn typed_with(family: Family, k: Option<usize>) -> Result<Option<TypedFamily>, CliError> {
    match k {
        Some(k) => Ok(Some(TypedFamily::new(family, k)?)),
        None => Ok(classify_type(&family)?),
    }
}

pub fn run_check(
    path: &Path,
    naive: bool,
    k: Option<usize>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let family = read_family(path)?;
    if !is_sperner(&family) {
        writeln!(out, "sperner=false")?;
        return Ok(Status::Finding);
    }
    let Some(typed) = typed_with(family, k)? else {
        writeln!(out, "sperner=true type=none")?;
        return Ok(Status::Finding);
    };
    let maximal = if naive {
        is_maximal_naive(&typed)?
    } else {
        is_maximal(&typed)
    };
    writeln!(
        out,
        "sperner=true type=({},{}) maximal={maximal}",
        typed.k(),
        typed.k() + 1
    )?;
    Ok(Status::from_clean(maximal))
}

pub fn run_params(path: &Path, k: Option<usize>, out: &mut dyn Write) -> Result<Status, CliError> {
    let family = read_family(path)?;
    let typed = typed_with(family, k)?
        .ok_or_else(|| CliError::Usage("family has no type (k,k+1); pass --k".into()))?;
    let report = compute_params(&typed);
    let join = |v: &[sperner_core::ExactCount]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let bound = binomial(typed.n() as u64 - 1, typed.k() as i64);
    let holds = check_r_bound(&typed)?;
    writeln!(out, "k={}", typed.k())?;
    writeln!(out, "p={}", join(&report.p))?;
    writeln!(out, "q={}", join(&report.q))?;
    writeln!(out, "r={}", join(&report.r))?;
    writeln!(out, "r_max={}", report.r_max)?;
    writeln!(out, "r_bound={bound} holds={holds}")?;
    Ok(Status::from_clean(holds))
}

pub fn run_complete(
    path: &Path,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let text = read_input(path)?;
    let input_error = |source| CliError::Input {
        path: path.to_owned(),
        source,
    };
    let (family, pivot) = parse_fragment_text(&text).map_err(input_error)?;
    let frag = Fragment::new(family, pivot).map_err(input_error)?;
    let result = complete_fragment(&frag);
    let r_max = compute_params(&result.union).r_max;
    let verdict = if result.is_clean() { "PASS" } else { "FINDING" };
    let mut summary = format!("size={} r_max={r_max} {verdict}\n", result.union.len());
    let _ = writeln!(
        summary,
        "parts fragment={} f1={} g={} gprime={}",
        result.fragment_part.len(),
        result.f1_part.len(),
        result.g_part.len(),
        result.gprime_part.len()
    );
    for f in &result.findings {
        let _ = writeln!(summary, "{f}");
    }
    let rendered = result.union.family().render();
    match dest {
        Some(dest) => {
            std::fs::write(dest, rendered).map_err(|source| CliError::Io {
                path: dest.to_owned(),
                source,
            })?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(rendered.as_bytes())?;
            for line in summary.lines() {
                writeln!(out, "# {line}")?;
            }
        }
    }
    Ok(Status::from_clean(result.is_clean()))
}

pub fn run_enumerate(
    task: &TaskArgs,
    pivot: Option<usize>,
    count_only: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let count = match pivot {
        None => {
            let task = EnumTask::families(task.n, task.k)?;
            let mut families = Vec::new();
            let count = enumerate_msf(&task, limits, |f| {
                if !count_only {
                    families.push(f.family().clone());
                }
            })?;
            out.write_all(render_stream(&families).as_bytes())?;
            count
        }
        Some(p) => {
            let zero_based = one_based_pivot(p)?;
            let task = EnumTask::fragments(task.n, task.k, zero_based)?;
            let mut first = true;
            let mut failed: io::Result<()> = Ok(());
            let count = enumerate_fragments(&task, limits, |f| {
                if count_only || failed.is_err() {
                    return;
                }
                let sep = if first { "" } else { "\n" };
                first = false;
                failed = write!(out, "{sep}{}", render_fragment_text(f.family(), f.pivot()));
            })?;
            failed?;
            count
        }
    };
    if count_only {
        writeln!(out, "count={count}")?;
    }
    Ok(Status::Pass)
}

fn one_based_pivot(p: usize) -> Result<usize, CliError> {
    p.checked_sub(1)
        .ok_or_else(|| CliError::Usage("pivot is 1-based; 0 is not an element".into()))
}

pub fn run_verify_theorem1(
    tasks: &[(usize, usize)],
    limits: &Limits,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    // Validate every task before doing any work.
    let tasks = tasks
        .iter()
        .map(|&(n, k)| EnumTask::families(n, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut clean = true;
    for task in &tasks {
        let report = verify_theorem1(task, limits)?;
        clean &= report.is_clean();
        out.write_all(report.render().as_bytes())?;
    }
    Ok(Status::from_clean(clean))
}

pub fn run_verify_theorem2(
    tasks: &[(usize, usize, usize)],
    limits: &Limits,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let tasks = tasks
        .iter()
        .map(|&(n, k, p)| EnumTask::fragments(n, k, one_based_pivot(p)?).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let mut clean = true;
    for task in &tasks {
        let audit = verify_theorem2(task, limits)?;
        clean &= audit.is_clean();
        if tasks.len() > 1 {
            let sperner_core::EnumMode::Fragments { pivot } = task.mode() else {
                unreachable!()
            };
            write!(out, "n={} k={} pivot={} ", task.n(), task.k(), pivot + 1)?;
        }
        out.write_all(audit.render().as_bytes())?;
    }
    Ok(Status::from_clean(clean))
}

pub fn run_asymmetry(
    l: usize,
    n_min: usize,
    n_max: usize,
    construct_up_to: usize,
    format: Format,
    fragment: FragmentChoice,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    if construct_up_to > MAX_CONSTRUCT {
        return Err(CliError::Usage(format!(
            "--construct-up-to must be at most {MAX_CONSTRUCT}"
        )));
    }
    let choice = match fragment {
        FragmentChoice::Singleton => DecipherFragment::Singleton,
        FragmentChoice::Prefix => DecipherFragment::PrefixFamily,
    };
    let report = asymmetry_report(l, n_min, n_max, construct_up_to, choice)?;
    for n in &report.skipped_even {
        eprintln!("notice: skipping even n={n}");
    }
    let body = match format {
        Format::Text => report.render_text(),
        Format::Csv => report.render_csv(),
    };
    out.write_all(body.as_bytes())?;
    Ok(Status::from_clean(report.is_clean()))
}

pub fn run_cross_check(
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    use rayon::prelude::*;

    if n_min < 3 || n_min > n_max || n_max > sperner_core::analysis::NAIVE_MAX_GROUND {
        return Err(CliError::Usage(format!(
            "need 3 <= n-min <= n-max <= {}",
            sperner_core::analysis::NAIVE_MAX_GROUND
        )));
    }
    let mut sampler = SpernerSampler::new(seed);
    let families = (0..samples)
        .map(|_| sampler.sample_in(n_min..=n_max))
        .collect::<Result<Vec<_>, _>>()?;
    let verdicts = families
        .par_iter()
        .map(|t| Ok((is_maximal(t), is_maximal_naive(t)?)))
        .collect::<Result<Vec<_>, sperner_core::Error>>()?;
    let maximal = verdicts.iter().filter(|v| v.1).count();
    let disagreements: Vec<usize> = (0..verdicts.len())
        .filter(|&i| verdicts[i].0 != verdicts[i].1)
        .collect();
    writeln!(
        out,
        "samples={samples} seed={seed} maximal={maximal} non_maximal={} disagreements={}",
        samples - maximal,
        disagreements.len()
    )?;
    for &i in &disagreements {
        let finding = sperner_core::Finding::new(
            sperner_core::FindingKind::CriterionDisagreement {
                layered: verdicts[i].0,
                naive: verdicts[i].1,
            },
            families[i].family().clone(),
        );
        writeln!(out, "{finding}")?;
    }
    Ok(Status::from_clean(disagreements.is_empty()))
}
