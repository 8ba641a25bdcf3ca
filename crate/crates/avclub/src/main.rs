use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avclub::config::{load_scenario, render_scenario, scenario_hash};
use avclub::dot::render_dot;
use avclub::error::{Error, Result};
use avclub::fixtures::canonical_scenario;
use avclub::formation_log::write_formation_log;
use avclub::matrix_file::{load_matrix, render_matrix, MatrixFile};
use avclub::scatter::{scatter_rows, write_scatter};
use avclub_core::calibration::{search, CalibrationGrid};
use avclub_core::equilibrium::{is_nash_known, DEFAULT_ENUMERATION_CAP};
use avclub_core::formation::run_formation;
use avclub_core::stability::{build_club_graph, se_candidates};
use avclub_core::traffic::generate_payoff_matrix_with_cap;
use avclub_core::{Coalition, CompleteGame, EquilibriumTag, FormationPolicy, ScenarioConfig, SupplyMode, TargetSelection};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "avclub", version, about = "Route-choice games between autonomous vehicles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Static,
    Adaptive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    First,
    Stable,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every joint action of a scenario and write the payoff matrix.
    Generate {
        /// Scenario TOML; the bundled canonical scenario when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Classify the actions of a matrix and list the clubs at the all-Route-0 action.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Write the club graph of a root club in Graphviz format.
    Graph {
        #[arg(long)]
        matrix: PathBuf,
        /// Root club such as `{1,5,6}`; the first club at the all-Route-0 action by default.
        #[arg(long)]
        root: Option<Coalition>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Replay club formation day by day and write a JSON Lines log.
    Form {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Matrix generated from the same scenario; regenerated when omitted.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        leader: usize,
        #[arg(long, value_enum, default_value = "first")]
        policy: Policy,
        #[arg(long)]
        max_days: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Per-action CSV of route loads, normalized travel times and classes.
    Scatter {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Search signal offsets, headways and Route-1 lengths around a scenario.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Departure headways to try; 1 to 4 s by default.
        #[arg(long, value_delimiter = ',')]
        headways: Vec<f64>,
        /// Route-1 free-flow times to try; 25 to 40 s by default.
        #[arg(long, value_delimiter = ',')]
        route1_times: Vec<f64>,
        /// Signal offsets to try; 0 to 49 s by default.
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<f64>,
        /// Where to write the chosen scenario.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn scenario(path: Option<&Path>, mode: Option<Mode>) -> Result<ScenarioConfig> {
    let cfg = match path {
        Some(p) => load_scenario(p)?,
        None => canonical_scenario(),
    };
    Ok(match mode {
        Some(Mode::Static) => cfg.with_mode(SupplyMode::Static),
        Some(Mode::Adaptive) => cfg.with_mode(SupplyMode::Adaptive),
        None => cfg,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

fn complete(file: &MatrixFile) -> Result<()> {
    if file.header.partial {
        return Err(Error::Game(avclub_core::Error::IncompleteMatrix {
            action: file.matrix.first_gap().unwrap_or_else(|| file.matrix.x0()),
        }));
    }
    Ok(())
}

fn analyze_partial(file: &MatrixFile) -> String {
    let mut s = String::from("partial matrix: verdicts use known cells only\n");
    for (x, _) in file.matrix.rows() {
        let v = is_nash_known(&file.matrix, x);
        let mean = file.mean_av_payoff(x).map_or("?".to_string(), |m| format!("{m:.1}"));
        s += &format!("{x} mean={mean} nash_on_known={} checked={} skipped={}\n", v.holds, v.checked, v.skipped);
    }
    s
}

fn analyze(file: &MatrixFile, max_n: usize) -> Result<String> {
    if file.header.partial {
        return Ok(analyze_partial(file));
    }
    let game = CompleteGame::with_cap(&file.matrix, max_n)?;
    let x0 = game.x0();
    let all = game.classify_all();
    let count = |t: EquilibriumTag| all.iter().filter(|c| c.class.tag == t).count();
    let mut s = String::new();
    s += &format!("scenario_hash: {}\n", file.header.scenario_hash);
    s += &format!("supply_mode: {}\n", file.header.supply_mode.as_str());
    s += &format!("actions: {}\n", all.len());
    for t in [EquilibriumTag::NotNash, EquilibriumTag::Nash, EquilibriumTag::StrongNash] {
        s += &format!("{}: {}\n", t.as_str(), count(t));
    }
    s += &format!("x0: {} system_optimal={}\n", all[0].class.tag.as_str(), game.is_system_optimal(x0)?);
    let clubs = if game.is_nash(x0)? { game.clubs_at(x0)? } else { Vec::new() };
    s += &format!("clubs_at_x0: {}\n", clubs.len());
    for c in &clubs {
        let graph = build_club_graph(&file.matrix, *c)?;
        let leaves = graph.terminal_coalitions().leaves;
        let se = se_candidates(&game, &graph)?;
        let fmt = |v: &[Coalition]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        s += &format!("  club {c} graph_nodes={} leaves=[{}] se_leaves=[{}]\n", graph.nodes().len(), fmt(&leaves), fmt(&se));
    }
    for c in all.iter().filter(|c| c.class.tag == EquilibriumTag::StrongNash) {
        s += &format!("strong: {}\n", c.action);
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { config, mode, out, max_n } => {
            let cfg = scenario(config.as_deref(), mode)?;
            let g = generate_payoff_matrix_with_cap(&cfg, max_n)?;
            let file = MatrixFile::complete(g, cfg.payoff_quantum, cfg.supply_mode, scenario_hash(&cfg));
            emit(out.as_deref(), &render_matrix(&file))
        }
        Command::Analyze { matrix, out, max_n } => {
            let file = load_matrix(&matrix)?;
            emit(out.as_deref(), &analyze(&file, max_n)?)
        }
        Command::Graph { matrix, root, out, max_n } => {
            let file = load_matrix(&matrix)?;
            complete(&file)?;
            let game = CompleteGame::with_cap(&file.matrix, max_n)?;
            let root = match root {
                Some(r) => r,
                None => *game.find_clubs(game.x0())?.first().ok_or_else(|| {
                    Error::Precondition("no club at the all-Route-0 action".into())
                })?,
            };
            let graph = build_club_graph(&file.matrix, root)?;
            let se = se_candidates(&game, &graph)?;
            emit(out.as_deref(), &render_dot(&graph, &se))
        }
        Command::Form { config, matrix, leader, policy, max_days, out, max_n } => {
            let cfg = scenario(config.as_deref(), None)?;
            let hash = scenario_hash(&cfg);
            let g = match matrix {
                Some(p) => {
                    let file = load_matrix(&p)?;
                    complete(&file)?;
                    if file.header.scenario_hash != hash {
                        return Err(Error::Precondition(format!(
                            "matrix was generated for scenario {} but the scenario hashes to {hash}",
                            file.header.scenario_hash
                        )));
                    }
                    file.matrix
                }
                None => generate_payoff_matrix_with_cap(&cfg, max_n)?,
            };
            let game = CompleteGame::with_cap(&g, max_n)?;
            let policy = FormationPolicy {
                leader,
                target_selection: match policy {
                    Policy::First => TargetSelection::FirstClubContainingLeader,
                    Policy::Stable => TargetSelection::StabilitySeeking,
                },
                max_days: max_days.unwrap_or(3 + 4 * cfg.n_av()),
            };
            let t = run_formation(&cfg, &game, &policy)?;
            let mut buf = Vec::new();
            write_formation_log(&t, &policy, &g, &hash, &mut buf)?;
            emit(out.as_deref(), &String::from_utf8(buf).expect("log is UTF-8"))
        }
        Command::Scatter { matrix, out, max_n } => {
            let file = load_matrix(&matrix)?;
            complete(&file)?;
            let game = CompleteGame::with_cap(&file.matrix, max_n)?;
            let rows = scatter_rows(&file.matrix, &game.classify_all())?;
            match out {
                Some(p) => avclub::scatter::export_scatter(&rows, p),
                None => write_scatter(&rows, std::io::stdout().lock()),
            }
        }
        Command::Calibrate { config, headways, route1_times, offsets, out } => {
            let base = scenario(config.as_deref(), Some(Mode::Adaptive))?;
            let mut grid = CalibrationGrid::default();
            for (given, axis) in [
                (headways, &mut grid.departure_headways),
                (route1_times, &mut grid.free_flow_r1_to_j),
                (offsets, &mut grid.phase_offsets),
            ] {
                if !given.is_empty() {
                    *axis = given;
                }
            }
            let report = search(&base, &grid, true)?;
            let (label, pick) = match (&report.chosen, &report.best_miss) {
                (Some(c), _) => ("chosen", c),
                (None, Some(m)) => ("best near miss", m),
                (None, None) => return Err(Error::Config("the grid is empty".into())),
            };
            let summary = format!(
                "evaluated: {}\nqualifying: {}\n{label}: {:?}\n",
                report.evaluated, report.qualifying, pick.1
            );
            let text = render_scenario(&pick.0);
            match out {
                Some(p) => {
                    emit(None, &summary)?;
                    std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
                }
                None => emit(None, &(summary + &text))?,
            }
            if report.chosen.is_none() {
                return Err(Error::Precondition("no scenario qualifies".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
