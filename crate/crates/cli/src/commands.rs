//! Argument parsing and command dispatch.
//!
//! Commands render into an [`Output`] instead of printing, so the binary
//! and the tests share one code path.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latin_parity_core::cycles::{self, RowCycle};
use latin_parity_core::enumerate::{self, Class, Identity};
use latin_parity_core::partitions::{self, LogBase, Partition};
use latin_parity_core::{sampler, LatinSquare};

use crate::format::{self, config_header};
use crate::{parallel, uniformity};

#[derive(Debug, Parser)]
#[command(
    name = "latin-parity",
    version,
    about = "Parity censuses, row-cycle switching and sampling of Latin squares"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parity tally of a class of squares.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "reduced")]
        class: Class,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        workers: Workers,
    },
    /// Check the identity table for one order.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        workers: Workers,
        /// Corrupt the reduced tally before checking (exercises the failure path).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Check the relations between the all, reduced and unipotent classes.
    Relations {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        workers: Workers,
    },
    /// Even minus odd squares of a class.
    AlonTarsi {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "reduced")]
        class: Class,
        #[command(flatten)]
        workers: Workers,
    },
    /// Event frequencies in the last two rows of sampled squares.
    Stats {
        #[command(flatten)]
        run: SampleRun,
        #[arg(long, default_value = "e")]
        log_base: LogBase,
        #[command(flatten)]
        workers: Workers,
    },
    /// Chi-square test of the sampler against enumeration (orders 4 and 5).
    Uniformity {
        #[command(flatten)]
        run: SampleRun,
        #[command(flatten)]
        workers: Workers,
    },
    /// Switchability of the last two row pairs and its correlation (reported only).
    Correlation {
        #[command(flatten)]
        run: SampleRun,
        #[command(flatten)]
        workers: Workers,
    },
    /// Draw one square.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        steps: Option<u64>,
    },
    /// Parity triple and class membership of a square file.
    Classify { file: PathBuf },
    /// Row cycles of two rows of a square file.
    Cycles {
        file: PathBuf,
        /// Two 1-based rows, `x,y`.
        #[arg(long, value_parser = parse_rows)]
        rows: (usize, usize),
    },
    /// Switch a row cycle; the square goes to stdout, the report to stderr.
    Switch {
        file: PathBuf,
        #[command(flatten)]
        mode: SwitchMode,
    },
    /// Connected components of the switching graph on reduced squares.
    Graph {
        #[arg(long)]
        n: usize,
    },
    /// Exact counting formulas.
    #[command(subcommand)]
    Formulas(Formula),
}

#[derive(Debug, Args)]
pub struct Workers {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SampleRun {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    /// Chain moves per sample; defaults to ceil(n^3 ln n).
    #[arg(long)]
    pub steps: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SwitchMode {
    /// Two 1-based rows, `x,y`; needs `--column`.
    #[arg(
        long,
        value_parser = parse_rows,
        requires = "column",
        required_unless_present_any = ["involution", "extended"]
    )]
    pub rows: Option<(usize, usize)>,
    /// A 1-based column of the cycle to switch.
    #[arg(long, requires = "rows")]
    pub column: Option<usize>,
    /// Switch the first switchable cycle of the last two rows.
    #[arg(long, conflicts_with_all = ["rows", "extended"])]
    pub involution: bool,
    /// Like `--involution`, falling back to earlier disjoint row pairs.
    #[arg(long, conflicts_with = "rows")]
    pub extended: bool,
}

#[derive(Debug, Subcommand)]
pub enum Formula {
    /// Derangements of a given cycle type.
    Gamma {
        #[arg(long)]
        lambda: Partition,
    },
    /// Probability that a uniform permutation has a cycle of length at least n - log n.
    LongCycleProb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "e")]
        log_base: LogBase,
        /// Also compute the value by brute force (n <= 10).
        #[arg(long)]
        brute: bool,
    },
    /// Probability that a uniform permutation has only even cycles.
    Wilf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        brute: bool,
    },
    /// Odd splits of one part of an all-even cycle type.
    SplitSet {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        include_equal: bool,
    },
    /// The split sum against its logarithmic lower bound.
    SplitBound {
        #[arg(long)]
        z: usize,
    },
    /// Histogram of odd-cycle counts over S_m.
    OddCycles {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        derangements: bool,
    },
    /// Derangement counts by cycle type, formula against brute force.
    Census {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn parse_rows(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected two rows as x,y")?;
    let p = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(format!("bad row {t:?} (rows are 1-based)")),
        }
    };
    Ok((p(a)?, p(b)?))
}

/// What a command wrote and how it ended.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn with_header(header: String) -> Self {
        Self {
            stdout: header + "\n",
            ..Self::default()
        }
    }
}

/// Rejected input; the binary exits with code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InvalidInput(pub String);

impl From<latin_parity_core::Error> for InvalidInput {
    fn from(e: latin_parity_core::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<format::FormatError> for InvalidInput {
    fn from(e: format::FormatError) -> Self {
        Self(e.to_string())
    }
}

type Res = Result<Output, InvalidInput>;

pub fn run(cli: Cli) -> Res {
    match cli.command {
        Command::Enumerate {
            n,
            class,
            format,
            workers,
        } => enumerate_cmd(n, class, format, workers.workers),
        Command::Verify {
            n,
            workers,
            inject_fault,
        } => verify_cmd(n, workers.workers, inject_fault),
        Command::Relations { n, workers } => relations_cmd(n, workers.workers),
        Command::AlonTarsi { n, class, workers } => {
            let t = parallel::with_workers(workers.workers, || parallel::tally(n, class))?;
            let mut out = Output::with_header(config_header(
                "alon-tarsi",
                None,
                &[("n", n.to_string()), ("class", class.to_string())],
            ));
            writeln!(out.stdout, "{}", t.alon_tarsi()).unwrap();
            Ok(out)
        }
        Command::Stats {
            run,
            log_base,
            workers,
        } => stats_cmd(&run, log_base, workers.workers),
        Command::Uniformity { run, workers } => uniformity_cmd(&run, workers.workers),
        Command::Correlation { run, workers } => {
            let steps = run.steps.unwrap_or_else(|| sampler::default_steps(run.n));
            let p = parallel::with_workers(workers.workers, || {
                parallel::pair_switchability(run.n, run.samples, run.seed, Some(steps))
            })?;
            let mut out = Output::with_header(config_header(
                "correlation",
                Some(run.seed),
                &[
                    ("n", run.n.to_string()),
                    ("samples", run.samples.to_string()),
                    ("steps", steps.to_string()),
                ],
            ));
            let s = &mut out.stdout;
            writeln!(s, "samples,last_pair,previous_pair,both,correlation").unwrap();
            let corr = p
                .correlation()
                .map_or_else(|| "nan".into(), |c| format!("{c:.6}"));
            writeln!(
                s,
                "{},{},{},{},{corr}",
                p.samples, p.last, p.previous, p.both
            )
            .unwrap();
            Ok(out)
        }
        Command::Sample {
            n,
            seed,
            index,
            steps,
        } => {
            let steps = steps.unwrap_or_else(|| sampler::default_steps(n));
            let l = sampler::sample(n, seed, index, Some(steps))?;
            let mut out = Output::with_header(config_header(
                "sample",
                Some(seed),
                &[
                    ("n", n.to_string()),
                    ("index", index.to_string()),
                    ("steps", steps.to_string()),
                ],
            ));
            out.stdout += &format::write_square(&l);
            Ok(out)
        }
        Command::Classify { file } => {
            let l = read_square(&file)?;
            let mut out = Output::with_header(config_header(
                "classify",
                None,
                &[("file", file.display().to_string())],
            ));
            writeln!(out.stdout, "parity {}", l.parity_triple()).unwrap();
            let names: Vec<&str> = l.classify().iter_names().map(|(name, _)| name).collect();
            writeln!(out.stdout, "properties {}", names.join(" ")).unwrap();
            Ok(out)
        }
        Command::Cycles { file, rows } => {
            let l = read_square(&file)?;
            let cs = cycles::row_cycles(&l, rows.0, rows.1)?;
            let mut out = Output::with_header(config_header(
                "cycles",
                None,
                &[
                    ("file", file.display().to_string()),
                    ("rows", format!("{},{}", rows.0 + 1, rows.1 + 1)),
                ],
            ));
            for c in cs {
                writeln!(
                    out.stdout,
                    "{c} len={}{}",
                    c.len(),
                    if c.is_switchable() { " switchable" } else { "" }
                )
                .unwrap();
            }
            Ok(out)
        }
        Command::Switch { file, mode } => switch_cmd(&file, &mode),
        Command::Graph { n } => {
            let g = cycles::switching_graph(n)?;
            let mut out =
                Output::with_header(config_header("graph", None, &[("n", n.to_string())]));
            writeln!(out.stdout, "{}", format::graph_json(&g)).unwrap();
            Ok(out)
        }
        Command::Formulas(f) => formulas_cmd(f),
    }
}

fn read_square(path: &std::path::Path) -> Result<LatinSquare, InvalidInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InvalidInput(format!("{}: {e}", path.display())))?;
    format::parse_square(&text).map_err(|e| InvalidInput(format!("{}: {e}", path.display())))
}

fn enumerate_cmd(n: usize, class: Class, fmt: Format, workers: usize) -> Res {
    let t = parallel::with_workers(workers, || parallel::tally(n, class))?;
    let mut out = Output::with_header(config_header(
        "enumerate",
        None,
        &[
            ("n", n.to_string()),
            ("class", class.to_string()),
            ("format", format!("{fmt:?}").to_lowercase()),
        ],
    ));
    match fmt {
        Format::Json => writeln!(out.stdout, "{}", format::tally_json(&t)).unwrap(),
        Format::Csv => out.stdout += &format::tally_csv(&t),
        Format::Text => out.stdout += &format::tally_text(&t),
    }
    Ok(out)
}

fn report_identities(out: &mut Output, label: &str, ids: &[Identity]) {
    for id in ids {
        writeln!(out.stdout, "{id}").unwrap();
    }
    let passed = ids.iter().filter(|i| i.passes()).count();
    let verdict = if passed == ids.len() { "PASS" } else { "FAIL" };
    writeln!(
        out.stdout,
        "# {label}: {passed}/{} passed {verdict}",
        ids.len()
    )
    .unwrap();
    out.code = u8::from(passed != ids.len());
}

fn verify_cmd(n: usize, workers: usize, inject_fault: bool) -> Res {
    if n > enumerate::VERIFY_MAX_ORDER {
        return Err(latin_parity_core::Error::SizeGuard {
            n,
            limit: enumerate::VERIFY_MAX_ORDER,
            what: "identity verification",
        }
        .into());
    }
    let (mut r, u) = parallel::with_workers(workers, || {
        Ok::<_, latin_parity_core::Error>((
            parallel::tally(n, Class::Reduced)?,
            parallel::tally(n, Class::NormalisedUnipotent)?,
        ))
    })?;
    if inject_fault {
        r.counts[0] += 1;
    }
    let mut flags = vec![("n", n.to_string())];
    if inject_fault {
        flags.push(("inject_fault", "true".into()));
    }
    let mut out = Output::with_header(config_header("verify", None, &flags));
    let ids = enumerate::identities_from_tallies(n, &r, &u);
    if n % 2 == 1 {
        writeln!(out.stdout, "# even-order identities skipped for odd n").unwrap();
    }
    report_identities(&mut out, &format!("verify n={n}"), &ids);
    Ok(out)
}

fn relations_cmd(n: usize, workers: usize) -> Res {
    let ids = parallel::with_workers(workers, || -> latin_parity_core::Result<_> {
        let all = if n <= Class::All.max_order() {
            Some(parallel::tally(n, Class::All)?)
        } else {
            None
        };
        let r = parallel::tally(n, Class::Reduced)?;
        let u = parallel::tally(n, Class::NormalisedUnipotent)?;
        enumerate::relations_from_tallies(n, all.as_ref(), &r, &u)
    })?;
    let mut out = Output::with_header(config_header("relations", None, &[("n", n.to_string())]));
    report_identities(&mut out, &format!("relations n={n}"), &ids);
    Ok(out)
}

fn stats_cmd(run: &SampleRun, base: LogBase, workers: usize) -> Res {
    let steps = run.steps.unwrap_or_else(|| sampler::default_steps(run.n));
    if run.n < 3 {
        return Err(InvalidInput(format!("stats needs n >= 3, got {}", run.n)));
    }
    let stats = parallel::with_workers(workers, || {
        parallel::last_two_rows_stats(run.n, run.samples, run.seed, Some(steps), base)
    })?;
    let mut out = Output::with_header(config_header(
        "stats",
        Some(run.seed),
        &[
            ("n", run.n.to_string()),
            ("samples", run.samples.to_string()),
            ("steps", steps.to_string()),
            ("log_base", base.name().to_string()),
        ],
    ));
    out.stdout += &format::stats_csv(&stats);
    if matches!(run.n, 4 | 5) {
        let r = parallel::with_workers(workers, || {
            uniformity::uniformity_test(run.n, run.samples, run.seed, Some(steps))
        })?;
        write_uniformity(&mut out.stdout, &r);
    }
    Ok(out)
}

fn write_uniformity(s: &mut String, r: &uniformity::ChiSquareReport) {
    writeln!(
        s,
        "# uniformity categories={} statistic={:.4} df={} p_value={:.6} min_observed={}",
        r.categories, r.statistic, r.df, r.p_value, r.min_observed
    )
    .unwrap();
}

fn uniformity_cmd(run: &SampleRun, workers: usize) -> Res {
    let r = parallel::with_workers(workers, || {
        uniformity::uniformity_test(run.n, run.samples, run.seed, run.steps)
    })?;
    let mut out = Output::with_header(config_header(
        "uniformity",
        Some(run.seed),
        &[
            ("n", run.n.to_string()),
            ("samples", run.samples.to_string()),
            ("steps", r.steps.to_string()),
        ],
    ));
    write_uniformity(&mut out.stdout, &r);
    Ok(out)
}

fn switch_cmd(file: &std::path::Path, mode: &SwitchMode) -> Res {
    let l = read_square(file)?;
    let (label, cycle): (String, Option<RowCycle>) = if mode.involution {
        let n = l.order();
        cycles::involution(&l)?;
        (
            "involution".into(),
            cycles::find_switchable_odd(&l, n - 2, n - 1)?,
        )
    } else if mode.extended {
        ("extended".into(), cycles::extended_involution_cycle(&l)?)
    } else {
        let ((x, y), c) = (
            mode.rows.expect("clap group"),
            mode.column.expect("clap group"),
        );
        if x >= y {
            return Err(InvalidInput(format!(
                "rows must satisfy x < y, got {},{}",
                x + 1,
                y + 1
            )));
        }
        if c == 0 || c > l.order() {
            return Err(InvalidInput(format!(
                "column {c} out of range 1..={}",
                l.order()
            )));
        }
        let found = cycles::row_cycles(&l, x, y)?
            .into_iter()
            .find(|cy| cy.contains_column(c - 1));
        (format!("rows={},{} column={c}", x + 1, y + 1), found)
    };
    let Some(cycle) = cycle else {
        return Err(InvalidInput(format!(
            "{label}: square is outside the domain (no switchable odd cycle)"
        )));
    };
    let switched = cycles::switch(&l, &cycle)?;
    let (before, after) = (l.parity_triple(), switched.parity_triple());
    let mut err = config_header(
        "switch",
        None,
        &[("file", file.display().to_string()), ("mode", label)],
    );
    writeln!(err).unwrap();
    writeln!(err, "# switched {cycle} len={}", cycle.len()).unwrap();
    writeln!(
        err,
        "# parity {before} -> {after} flipped row={} col={} sym={}",
        u8::from(before.row != after.row),
        u8::from(before.col != after.col),
        u8::from(before.sym != after.sym)
    )
    .unwrap();
    Ok(Output {
        stdout: format::write_square(&switched),
        stderr: err,
        code: 0,
    })
}

fn formulas_cmd(f: Formula) -> Res {
    let (name, flags): (&str, Vec<(&str, String)>) = match &f {
        Formula::Gamma { lambda } => ("formulas gamma", vec![("lambda", format!("\"{lambda}\""))]),
        Formula::LongCycleProb { n, log_base, brute } => (
            "formulas long-cycle-prob",
            vec![
                ("n", n.to_string()),
                ("log_base", log_base.name().into()),
                ("brute", brute.to_string()),
            ],
        ),
        Formula::Wilf { n, brute } => (
            "formulas wilf",
            vec![("n", n.to_string()), ("brute", brute.to_string())],
        ),
        Formula::SplitSet {
            lambda,
            z,
            include_equal,
        } => (
            "formulas split-set",
            vec![
                ("lambda", format!("\"{lambda}\"")),
                ("z", z.to_string()),
                ("include_equal", include_equal.to_string()),
            ],
        ),
        Formula::SplitBound { z } => ("formulas split-bound", vec![("z", z.to_string())]),
        Formula::OddCycles { m, derangements } => (
            "formulas odd-cycles",
            vec![
                ("m", m.to_string()),
                ("derangements", derangements.to_string()),
            ],
        ),
        Formula::Census { m } => ("formulas census", vec![("m", m.to_string())]),
    };
    let mut out = Output::with_header(config_header(name, None, &flags));
    let s = &mut out.stdout;
    match f {
        Formula::Gamma { lambda } => writeln!(s, "{}", partitions::gamma(&lambda)?).unwrap(),
        Formula::LongCycleProb { n, log_base, brute } => {
            let v = partitions::long_cycle_prob_with_base(n, log_base)?;
            writeln!(s, "{v}").unwrap();
            if brute {
                let b = partitions::long_cycle_prob_brute(n, log_base)?;
                writeln!(s, "# brute {b} {}", pass(b == v)).unwrap();
                out.code = u8::from(b != v);
            }
        }
        Formula::Wilf { n, brute } => {
            let v = partitions::wilf_no_odd(n);
            writeln!(s, "{v}").unwrap();
            if let Some(note) = partitions::wilf_note(n) {
                writeln!(s, "# {note}").unwrap();
            }
            if brute {
                let b = partitions::wilf_no_odd_brute(n)?;
                writeln!(s, "# brute {b} {}", pass(b == v)).unwrap();
                out.code = u8::from(b != v);
            }
        }
        Formula::SplitSet {
            lambda,
            z,
            include_equal,
        } => {
            let set = partitions::split_set(&lambda, z, include_equal)?;
            for sp in &set.splits {
                writeln!(s, "{} {} {}", sp.a, sp.b, sp.mu).unwrap();
            }
            if set.excluded_part_one {
                writeln!(s, "# excluded 1+{}: part of size 1", z - 1).unwrap();
            }
            if set.excluded_equal {
                writeln!(s, "# excluded {0}+{0}: equal split", z / 2).unwrap();
            }
        }
        Formula::SplitBound { z } => {
            let b = partitions::split_bound(z)?;
            writeln!(
                s,
                "z={} w={} sum={:.15} bound={:.15} margin={:.3e} {}",
                b.z,
                b.w,
                b.sum,
                b.bound,
                b.margin,
                pass(b.holds)
            )
            .unwrap();
            out.code = u8::from(!b.holds);
        }
        Formula::OddCycles { m, derangements } => {
            let c = partitions::odd_cycle_census(m, derangements)?;
            for (k, v) in &c.histogram {
                writeln!(s, "{k} {v}").unwrap();
            }
            writeln!(s, "total {}", c.total).unwrap();
            writeln!(
                s,
                "at_most_one {} shape {:.6}",
                c.at_most_one(),
                c.bound_shape()
            )
            .unwrap();
        }
        Formula::Census { m } => {
            let census = partitions::derangement_census(m)?;
            let mut ok = true;
            for lambda in partitions::partitions_p(m) {
                let g = partitions::gamma(&lambda)?;
                let b = census.get(&lambda).copied().unwrap_or(0);
                let same = g == b.into();
                ok &= same;
                writeln!(s, "{lambda} {g} {b} {}", pass(same)).unwrap();
            }
            writeln!(s, "D_{m} {}", partitions::derangements(m)).unwrap();
            out.code = u8::from(!ok);
        }
    }
    Ok(out)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
