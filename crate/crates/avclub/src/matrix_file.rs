//! Plain-text payoff matrix files.
//!
//! ```text
//! # comment lines start with '#'
//! n_players: 15
//! av_ids: 0 1 3 4 6 7 9 10 12 13
//! quantum_seconds: 1
//! supply_mode: adaptive
//! scenario_hash: 9c1d0e5b2a7f4c11
//! partial: false
//! ---
//! 0000000000 -25 -27 ... -53
//! ```
//!
//! Each row is a joint action (player 0 first) followed by one payoff per
//! vehicle column. Payoffs are written with as many decimals as the quantum
//! has. Partial files may leave cells unknown (`?`), may omit rows, and may
//! end a row with `mean=<value>`, the reported mean payoff of the autonomous
//! players at that action.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use avclub_core::{JointAction, PayoffMatrix, SupplyMode};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixHeader {
    pub quantum_seconds: f64,
    pub supply_mode: SupplyMode,
    pub scenario_hash: String,
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub header: MatrixHeader,
    pub matrix: PayoffMatrix,
    pub reported_means: BTreeMap<JointAction, f64>,
}

impl MatrixFile {
    pub fn complete(matrix: PayoffMatrix, quantum_seconds: f64, supply_mode: SupplyMode, scenario_hash: String) -> Self {
        MatrixFile {
            header: MatrixHeader { quantum_seconds, supply_mode, scenario_hash, partial: false },
            matrix,
            reported_means: BTreeMap::new(),
        }
    }

    /// Mean payoff of the autonomous players at `x`, computed when every cell
    /// is known and taken from the file's reported mean otherwise.
    pub fn mean_av_payoff(&self, x: JointAction) -> Option<f64> {
        self.matrix.mean_av_payoff(x).ok().or_else(|| self.reported_means.get(&x).copied())
    }
}

/// Decimals needed to print multiples of `quantum` exactly.
pub fn quantum_decimals(quantum: f64) -> usize {
    let mut scale = 1.0;
    for d in 0..10 {
        let scaled = quantum * scale;
        if (scaled - scaled.round()).abs() < 1e-9 * scale {
            return d;
        }
        scale *= 10.0;
    }
    10
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut saw_separator = false;
    for (no, line) in lines.by_ref() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "---" {
            saw_separator = true;
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, format!("expected `key: value`, got {line:?}")))?;
        if fields.insert(key.trim(), (no, value.trim())).is_some() {
            return Err(parse_err(no, format!("duplicate header field {:?}", key.trim())));
        }
    }
    if !saw_separator {
        return Err(parse_err(text.lines().count(), "missing `---` after the header"));
    }

    let field = |name: &str| fields.get(name).copied().ok_or_else(|| parse_err(0, format!("missing header field {name:?}")));
    let (no, v) = field("n_players")?;
    let n_players: usize = v.parse().map_err(|_| parse_err(no, format!("invalid n_players {v:?}")))?;
    let (no, v) = field("av_ids")?;
    let av_ids = v
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| parse_err(no, format!("invalid vehicle id {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let (no, v) = field("quantum_seconds")?;
    let quantum_seconds: f64 = v
        .parse()
        .ok()
        .filter(|q: &f64| q.is_finite() && *q > 0.0)
        .ok_or_else(|| parse_err(no, format!("invalid quantum {v:?}")))?;
    let (no, v) = field("supply_mode")?;
    let supply_mode: SupplyMode = v.parse().map_err(|e| parse_err(no, format!("{e}")))?;
    let scenario_hash = field("scenario_hash")?.1.to_string();
    let (no, v) = field("partial")?;
    let partial = match v {
        "true" => true,
        "false" => false,
        _ => return Err(parse_err(no, format!("partial must be true or false, got {v:?}"))),
    };
    if let Some((key, (no, _))) = fields.iter().find(|(k, _)| {
        !["n_players", "av_ids", "quantum_seconds", "supply_mode", "scenario_hash", "partial"].contains(k)
    }) {
        return Err(parse_err(*no, format!("unknown header field {key:?}")));
    }

    let mut matrix = PayoffMatrix::new(n_players, av_ids).map_err(|e| parse_err(0, e.to_string()))?;
    let mut reported_means = BTreeMap::new();

    for (no, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let action_text = parts.next().expect("line is non-empty");
        let action: JointAction = action_text.parse().map_err(|e| parse_err(no, format!("{e}")))?;
        if action.len() != matrix.n_av() {
            return Err(parse_err(
                no,
                format!("joint action {action_text:?} has {} players, expected {}", action.len(), matrix.n_av()),
            ));
        }
        let mut cells = Vec::with_capacity(n_players);
        for token in parts {
            if let Some(mean) = token.strip_prefix("mean=") {
                if !partial {
                    return Err(parse_err(no, "reported means are only allowed in partial files"));
                }
                let mean: f64 = mean.parse().map_err(|_| parse_err(no, format!("invalid mean {mean:?}")))?;
                reported_means.insert(action, mean);
            } else if token == "?" {
                if !partial {
                    return Err(parse_err(no, "unknown cell in a file not marked partial"));
                }
                cells.push(None);
            } else {
                let v: f64 = token.parse().map_err(|_| parse_err(no, format!("invalid payoff {token:?}")))?;
                cells.push(Some(v));
            }
        }
        if cells.len() != n_players {
            return Err(parse_err(no, format!("row has {} payoffs, expected {n_players}", cells.len())));
        }
        matrix.insert_partial(action, cells).map_err(|e| match e {
            avclub_core::Error::DuplicateAction { action } => Error::Format(format!("line {no}: duplicate joint action {action}")),
            other => parse_err(no, other.to_string()),
        })?;
    }

    if !partial && !matrix.is_complete() {
        let gap = matrix.first_gap().map(|x| x.to_string()).unwrap_or_default();
        return Err(Error::Format(format!("matrix not marked partial but joint action {gap} is missing")));
    }

    Ok(MatrixFile {
        header: MatrixHeader { quantum_seconds, supply_mode, scenario_hash, partial },
        matrix,
        reported_means,
    })
}

pub fn render_matrix(file: &MatrixFile) -> String {
    let h = &file.header;
    let g = &file.matrix;
    let decimals = quantum_decimals(h.quantum_seconds);
    let mut out = String::new();
    let ids: Vec<String> = g.av_ids().iter().map(ToString::to_string).collect();
    writeln!(out, "n_players: {}", g.n_players()).unwrap();
    writeln!(out, "av_ids: {}", ids.join(" ")).unwrap();
    writeln!(out, "quantum_seconds: {}", h.quantum_seconds).unwrap();
    writeln!(out, "supply_mode: {}", h.supply_mode.as_str()).unwrap();
    writeln!(out, "scenario_hash: {}", h.scenario_hash).unwrap();
    writeln!(out, "partial: {}", h.partial).unwrap();
    out.push_str("---\n");
    for (x, row) in g.rows() {
        write!(out, "{x}").unwrap();
        for cell in row {
            match cell {
                Some(v) => write!(out, " {v:.decimals$}").unwrap(),
                None => out.push_str(" ?"),
            }
        }
        if let Some(mean) = file.reported_means.get(&x) {
            write!(out, " mean={mean}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<MatrixFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text)
}

pub fn save_matrix(file: &MatrixFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_matrix(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "n_players: 3\nav_ids: 0 2\nquantum_seconds: 0.5\nsupply_mode: static\n\
                         scenario_hash: abc\npartial: false\n---\n\
                         00 -1.5 -2 -3\n10 -1 -2 -3\n01 -1 -2 -3\n11 -1 -2 -3.5\n";

    #[test]
    fn parses_and_renders_at_quantum_precision() {
        let f = parse_matrix(SMALL).unwrap();
        assert_eq!(f.matrix.len(), 4);
        assert_eq!(f.matrix.payoff("00".parse().unwrap(), 1).unwrap(), -3.0);
        let text = render_matrix(&f);
        assert!(text.contains("\n00 -1.5 -2.0 -3.0\n"), "{text}");
        assert_eq!(parse_matrix(&text).unwrap(), f);
    }

    #[test]
    fn arity_errors_carry_line_numbers() {
        let bad = SMALL.replace("10 -1 -2 -3\n", "10 -1 -2\n");
        match parse_matrix(&bad) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 9);
                assert!(msg.contains("expected 3"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_format_errors() {
        let bad = SMALL.replace("01 -1", "10 -1");
        assert!(matches!(parse_matrix(&bad), Err(Error::Format(_))));
    }

    #[test]
    fn complete_files_must_be_complete() {
        let bad = SMALL.replace("11 -1 -2 -3.5\n", "");
        assert!(matches!(parse_matrix(&bad), Err(Error::Format(_))));
        let bad = SMALL.replace("11 -1 -2 -3.5", "11 -1 ? -3.5");
        assert!(matches!(parse_matrix(&bad), Err(Error::Parse { line: 11, .. })));
    }

    #[test]
    fn header_problems() {
        assert!(matches!(parse_matrix("n_players: 1\n"), Err(Error::Parse { .. })));
        let bad = SMALL.replace("supply_mode: static", "supply_mode: sometimes");
        assert!(matches!(parse_matrix(&bad), Err(Error::Parse { line: 4, .. })));
        let bad = SMALL.replace("partial: false", "partial: false\ncolour: blue");
        assert!(matches!(parse_matrix(&bad), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn decimals_follow_the_quantum() {
        assert_eq!(quantum_decimals(1.0), 0);
        assert_eq!(quantum_decimals(0.5), 1);
        assert_eq!(quantum_decimals(0.25), 2);
        assert_eq!(quantum_decimals(0.1), 1);
    }
}
