//! Bundled data: a partial payoff table with reported means, a completion of it,
//! and the canonical generated scenario.

use avclub_core::{JointAction, PayoffMatrix, ScenarioConfig};

use crate::config::parse_scenario;
use crate::matrix_file::{parse_matrix, MatrixFile};

pub const PARTIAL_TABLE: &str = include_str!("../fixtures/partial_table.matrix");
pub const CANONICAL_SCENARIO: &str = include_str!("../scenarios/canonical.toml");

/// Payoff given to every vehicle at joint actions the table does not list.
pub const COMPLETION_PENALTY: f64 = -90.0;

/// Unknown cells of the listed rows, chosen so each completed row averages
/// to the reported mean. Columns 2, 3, 4, 8, 9.
const FILLED_CELLS: [(&str, [f64; 5]); 5] = [
    ("0000000000", [-46.0, -46.0, -46.0, -46.0, -45.0]),
    ("0100011000", [-54.0, -54.0, -54.0, -54.0, -53.0]),
    ("0100011100", [-54.0, -53.0, -53.0, -53.0, -54.0]),
    ("1100011100", [-53.0, -53.0, -53.0, -53.0, -52.0]),
    ("1100011000", [-54.0, -54.0, -54.0, -53.0, -53.0]),
];
const FILLED_COLUMNS: [usize; 5] = [2, 3, 4, 8, 9];

pub fn partial_table() -> MatrixFile {
    parse_matrix(PARTIAL_TABLE).expect("bundled table parses")
}

/// Complete matrix that agrees with the table on every listed cell.
///
/// Listed rows get [`FILLED_CELLS`]; every other joint action pays
/// [`COMPLETION_PENALTY`] to everybody, below every listed payoff. So no
/// move that leaves the listed actions helps anyone. Within the listed
/// actions the listed numbers alone decide every comparison.
pub fn completed_table() -> PayoffMatrix {
    let table = partial_table();
    let n = table.matrix.n_players();
    let mut g = PayoffMatrix::new(n, table.matrix.av_ids().to_vec()).expect("table ids are valid");
    for x in JointAction::all(table.matrix.n_av()) {
        let row = match table.matrix.row(x) {
            Ok(known) => {
                let fill = FILLED_CELLS
                    .iter()
                    .find(|(a, _)| a.parse::<JointAction>().expect("valid action") == x)
                    .expect("every listed row has fill values")
                    .1;
                let mut row: Vec<f64> = known.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
                for (col, v) in FILLED_COLUMNS.iter().zip(fill) {
                    assert!(row[*col].is_nan(), "fill values only cover unknown cells");
                    row[*col] = v;
                }
                row
            }
            Err(_) => vec![COMPLETION_PENALTY; n],
        };
        g.insert(x, row).expect("completion rows are valid");
    }
    g
}

pub fn canonical_scenario() -> ScenarioConfig {
    parse_scenario(CANONICAL_SCENARIO).expect("bundled scenario parses")
}
