//! Per-action CSV export: route loads, normalized route travel times,
//! equilibrium class and group means.
//!
//! Travel times are the negated payoffs. Every time column is divided by
//! the matching mean at the all-Route-0 action, so that action reads 1.0
//! in `t0` and in each group column. `t1` is empty when nobody uses Route 1;
//! `mean_human` is empty when the scenario has no human drivers.

use std::io::Write;
use std::path::Path;

use avclub_core::{Classification, JointAction, PayoffMatrix};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub action: String,
    pub q0: usize,
    pub q1: usize,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub class: &'static str,
    pub club_found: bool,
    pub mean_all: f64,
    pub mean_av: f64,
    pub mean_human: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

struct Summary {
    q: [usize; 2],
    route: [Option<f64>; 2],
    all: f64,
    av: f64,
    human: Option<f64>,
}

fn summarize(g: &PayoffMatrix, x: JointAction) -> Result<Summary> {
    let row = g.row(x)?;
    let mut times = Vec::with_capacity(row.len());
    for cell in row {
        let v = cell.ok_or_else(|| Error::Format(format!("joint action {x} has unknown payoffs")))?;
        times.push(-v);
    }
    let mut route_of = vec![0u8; g.n_players()];
    for (k, &col) in g.av_ids().iter().enumerate() {
        route_of[col] = x.route(k);
    }
    let on = |r: u8| times.iter().zip(&route_of).filter(move |(_, rr)| **rr == r).map(|(t, _)| *t);
    Ok(Summary {
        q: [on(0).count(), on(1).count()],
        route: [mean(on(0)), mean(on(1))],
        all: mean(times.iter().copied()).unwrap_or(0.0),
        av: mean(g.av_ids().iter().map(|&c| times[c])).unwrap_or(0.0),
        human: mean((0..g.n_players()).filter(|c| !g.is_autonomous(*c)).map(|c| times[c])),
    })
}

/// One row per classified action, in the order given.
pub fn scatter_rows(g: &PayoffMatrix, classes: &[Classification]) -> Result<Vec<ScatterRow>> {
    let base = summarize(g, g.x0())?;
    classes
        .iter()
        .map(|c| {
            let s = summarize(g, c.action)?;
            Ok(ScatterRow {
                action: c.action.to_string(),
                q0: s.q[0],
                q1: s.q[1],
                t0: s.route[0].map(|t| t / base.all),
                t1: s.route[1].map(|t| t / base.all),
                class: c.class.tag.as_str(),
                club_found: c.club_found,
                mean_all: s.all / base.all,
                mean_av: s.av / base.av,
                mean_human: s.human.zip(base.human).map(|(h, b)| h / b),
            })
        })
        .collect()
}

pub fn write_scatter<W: Write>(rows: &[ScatterRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn export_scatter(rows: &[ScatterRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_scatter(rows, file)
}
