//! Input parsing, output formatting and the run driver behind the `conehilb`
//! binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use conehilb::{compute, ComputationResult, ComputeOptions, ConeInput, IntMat, IntVec, SubdivisionConfig};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(#[from] conehilb::Error),
}

impl CliError {
    /// 2 for violated mathematical preconditions, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

/// Parses the text input format into a cone description.
///
/// ```text
/// amb_space 2
/// cone 2        # generators, one per row
/// 1 0
/// 3 5
/// grading
/// 1 0
/// ```
pub fn parse_input(text: &str) -> Result<ConeInput, ParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut it = lines.into_iter();

    let Some((first, head)) = it.next() else {
        return Err(err(1, "missing amb_space"));
    };
    if head[0] != "amb_space" {
        return Err(err(first, "missing amb_space before the first block"));
    }
    if head.len() != 2 {
        return Err(err(first, "amb_space takes one argument"));
    }
    let d: usize = head[1]
        .parse()
        .map_err(|_| err(first, format!("invalid dimension '{}'", head[1])))?;

    let mut input = ConeInput {
        ambient_dim: d,
        ..Default::default()
    };
    while let Some((ln, toks)) = it.next() {
        let keyword = toks[0];
        let (count, slot) = match keyword {
            "cone" | "inequalities" | "equations" => {
                if toks.len() != 2 {
                    return Err(err(ln, format!("{keyword} takes one argument")));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| err(ln, format!("invalid row count '{}'", toks[1])))?;
                let slot = match keyword {
                    "cone" => &mut input.generators,
                    "inequalities" => &mut input.inequalities,
                    _ => &mut input.equations,
                };
                (n, Some(slot))
            }
            "grading" => {
                if toks.len() != 1 {
                    return Err(err(ln, "grading takes no argument; the row follows on the next line"));
                }
                (1, None)
            }
            "amb_space" => return Err(err(ln, "amb_space given twice")),
            "congruences" => return Err(err(ln, "congruences are unsupported")),
            other => return Err(err(ln, format!("unknown keyword '{other}'"))),
        };

        let mut rows = Vec::with_capacity(count);
        for k in 0..count {
            let Some((rl, row)) = it.next() else {
                return Err(err(ln, format!("{keyword} expects {count} rows, found {k}")));
            };
            if row.len() != d {
                return Err(err(rl, format!("expected {d} entries, found {}", row.len())));
            }
            let v = row
                .iter()
                .map(|t| t.parse::<BigInt>().map_err(|_| err(rl, format!("invalid integer '{t}'"))))
                .collect::<Result<IntVec, _>>()?;
            rows.push(v);
        }

        match slot {
            Some(slot) => {
                if slot.is_some() {
                    return Err(err(ln, format!("{keyword} block given twice")));
                }
                *slot = Some(IntMat::new(rows, d).expect("row lengths checked"));
            }
            None => {
                if input.grading.is_some() {
                    return Err(err(ln, "grading given twice"));
                }
                input.grading = rows.pop();
            }
        }
    }
    if input.generators.is_none() && input.inequalities.is_none() {
        return Err(err(first, "no cone or inequalities block"));
    }
    Ok(input)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Goals {
    pub hilbert_basis: bool,
    pub hilbert_series: bool,
    pub support_hyperplanes: bool,
}

impl Goals {
    pub fn all() -> Self {
        Goals {
            hilbert_basis: true,
            hilbert_series: true,
            support_hyperplanes: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub input_path: PathBuf,
    pub goals: Goals,
    pub subdivision: SubdivisionConfig,
    pub threads: usize,
    pub stats_csv_path: Option<PathBuf>,
}

pub struct RunReport {
    pub result: ComputationResult,
    pub output_path: PathBuf,
    pub text: String,
}

/// `foo.in` becomes `foo.out`; any other name gets `.out` appended.
pub fn output_path(input: &Path) -> PathBuf {
    let name = input.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".in").unwrap_or(&name);
    input.with_file_name(format!("{stem}.out"))
}

pub const STATS_KEYS: [&str; 5] = [
    "simplex_volume",
    "volume_used",
    "improvement_factor",
    "ips_solved",
    "approx_levels_used",
];

fn stats_values(r: &ComputationResult) -> [String; 5] {
    let s = &r.stats;
    [
        s.simplex_volume.to_string(),
        s.volume_used.to_string(),
        s.improvement_factor().to_string(),
        s.ips_solved.to_string(),
        s.approx_levels_used.to_string(),
    ]
}

fn write_rows(out: &mut String, rows: &[IntVec]) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

/// The `.out` text. Sections appear in a fixed order, separated by blank lines.
pub fn render(r: &ComputationResult, goals: Goals) -> String {
    let mut out = String::new();
    if goals.hilbert_basis {
        let _ = writeln!(out, "{} Hilbert basis elements:", r.hilbert_basis.len());
        write_rows(&mut out, &r.hilbert_basis);
        out.push('\n');
    }
    if goals.support_hyperplanes {
        let mut forms = r.support_forms.clone();
        forms.sort();
        let _ = writeln!(out, "{} support hyperplanes:", forms.len());
        write_rows(&mut out, &forms);
        out.push('\n');
    }
    if goals.hilbert_series {
        if let Some(h) = &r.series {
            out.push_str("Hilbert series:\n");
            let coeffs: Vec<String> = if h.numerator().is_empty() {
                vec!["0".into()]
            } else {
                h.numerator().iter().map(ToString::to_string).collect()
            };
            let _ = writeln!(out, "{}", coeffs.join(" "));
            let _ = writeln!(out, "denominator: (1-t^{})^{}", h.period(), h.rank());
            out.push('\n');
        }
    }
    out.push_str("stats:\n");
    for (k, v) in STATS_KEYS.iter().zip(stats_values(r)) {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}

pub fn render_csv(r: &ComputationResult) -> String {
    format!("{}\n{}\n", STATS_KEYS.join(","), stats_values(r).join(","))
}

/// Parses the input file, computes, and writes the `.out` file (and the CSV
/// file if requested).
pub fn run(opts: &RunOptions) -> Result<RunReport, CliError> {
    let g = opts.goals;
    if !(g.hilbert_basis || g.hilbert_series || g.support_hyperplanes) {
        return Err(CliError::Usage("no goal selected".into()));
    }
    let text = fs::read_to_string(&opts.input_path).map_err(|source| CliError::Io {
        path: opts.input_path.clone(),
        source,
    })?;
    let input = parse_input(&text)?;
    let compute_opts = ComputeOptions {
        subdivision: opts.subdivision.clone(),
        hilbert_basis: g.hilbert_basis,
        series: g.hilbert_series,
        threads: opts.threads,
        ..Default::default()
    };
    let result = compute(&input, &compute_opts)?;
    let out = render(&result, g);
    let output_path = output_path(&opts.input_path);
    fs::write(&output_path, &out).map_err(|source| CliError::Io {
        path: output_path.clone(),
        source,
    })?;
    if let Some(csv) = &opts.stats_csv_path {
        fs::write(csv, render_csv(&result)).map_err(|source| CliError::Io {
            path: csv.clone(),
            source,
        })?;
    }
    Ok(RunReport {
        result,
        output_path,
        text: out,
    })
}

/// Parses `a/b`, an integer or a decimal into a nonnegative number.
pub fn parse_scale(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("invalid numerator in '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("invalid denominator in '{s}'"))?;
            if b == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("invalid number '{s}'"))?,
    };
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("time limit scale must be a nonnegative number, got '{s}'"))
    }
}
