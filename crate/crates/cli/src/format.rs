//! Text and machine-readable encodings.

use std::fmt::Write as _;

use latin_parity_core::cycles::SwitchingGraph;
use latin_parity_core::enumerate::ParityTally;
use latin_parity_core::sampler::{Event, SampleStats};
use latin_parity_core::{LatinSquare, ParityTriple};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Latin(#[from] latin_parity_core::Error),
}

/// Parses the square text format: the order `n` on the first line, then `n`
/// lines of `n` space-separated symbols in `1..=n`. Lines starting with `#`
/// are comments.
pub fn parse_square(text: &str) -> Result<LatinSquare, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'));
    let (_, first) = lines.next().ok_or(FormatError::Syntax {
        line: 1,
        msg: "empty input".into(),
    })?;
    let n: usize = first.trim().parse().map_err(|_| FormatError::Syntax {
        line: 1,
        msg: format!("expected the order, found {first:?}"),
    })?;
    let mut grid = Vec::with_capacity(n);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| FormatError::Syntax {
                    line: i + 1,
                    msg: format!("bad symbol {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        grid.push(row);
    }
    if grid.len() != n {
        return Err(FormatError::Syntax {
            line: grid.len() + 2,
            msg: format!("expected {n} rows, found {}", grid.len()),
        });
    }
    Ok(LatinSquare::validate(&grid)?)
}

pub fn write_square(l: &LatinSquare) -> String {
    let mut out = String::new();
    writeln!(out, "{}", l.order()).unwrap();
    for row in l.rows() {
        let line: Vec<String> = row.iter().map(|&s| (s as usize + 1).to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// First line of every command's output: everything needed to rerun it.
pub fn config_header(command: &str, seed: Option<u64>, flags: &[(&str, String)]) -> String {
    let mut out = format!(
        "# latin-parity {command} version={} seed={}",
        env!("CARGO_PKG_VERSION"),
        seed.map_or_else(|| "none".to_string(), |s| s.to_string())
    );
    for (k, v) in flags {
        write!(out, " {k}={v}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct TallyJson<'a> {
    n: usize,
    class: &'a str,
    counts: serde_json::Map<String, serde_json::Value>,
    total: u64,
}

/// `{"n":5,"class":"reduced","counts":{"000":…,…},"total":56}`
pub fn tally_json(t: &ParityTally) -> String {
    let counts = ParityTriple::all()
        .map(|tr| (tr.to_string(), t.get(tr).into()))
        .collect();
    serde_json::to_string(&TallyJson {
        n: t.n,
        class: t.class.name(),
        counts,
        total: t.total(),
    })
    .expect("tally serializes")
}

pub fn tally_csv(t: &ParityTally) -> String {
    let mut out = String::from("n,class,triple,count\n");
    for tr in ParityTriple::all() {
        writeln!(out, "{},{},{},{}", t.n, t.class, tr, t.get(tr)).unwrap();
    }
    out
}

pub fn tally_text(t: &ParityTally) -> String {
    let mut out = String::new();
    for tr in ParityTriple::all() {
        writeln!(out, "{tr} {}", t.get(tr)).unwrap();
    }
    writeln!(out, "total {}", t.total()).unwrap();
    out
}

#[derive(Serialize)]
struct GraphJson {
    n: usize,
    vertices: usize,
    edges: usize,
    components: Vec<ComponentJson>,
}

#[derive(Serialize)]
struct ComponentJson {
    size: usize,
    row_parity: Option<u8>,
}

pub fn graph_json(g: &SwitchingGraph) -> String {
    serde_json::to_string(&GraphJson {
        n: g.n,
        vertices: g.vertices,
        edges: g.edges,
        components: g
            .components
            .iter()
            .map(|c| ComponentJson {
                size: c.size,
                row_parity: c.row_parity,
            })
            .collect(),
    })
    .expect("graph serializes")
}

pub const STATS_CSV_HEADER: &str = "n,samples,seed,event,occurrences,estimate,stderr";

/// One CSV row per event.
pub fn stats_csv(s: &SampleStats) -> String {
    let mut out = String::new();
    writeln!(out, "{STATS_CSV_HEADER}").unwrap();
    for e in Event::ALL {
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6}",
            s.n,
            s.samples,
            s.seed,
            e.name(),
            s.occurrences[e.index()],
            s.estimate(e),
            s.stderr(e)
        )
        .unwrap();
    }
    out
}
