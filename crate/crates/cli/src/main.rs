use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ssl_predict::dribbler::{self, REFERENCE_MASSES};
use ssl_predict::format::sig6;
use ssl_predict::imu_yaw::{to_imu_frame, yaw_offset};
use ssl_predict::possession::RosterEntry;
use ssl_predict::scheduler::{Candidate, DirectAction, Scheduler, TickOutput};
use ssl_predict::{
    predict_possession, predict_pursuit, pursuit_heatmap, BallState, EstimatorRegistry, GridSpec, RobotState,
    RunConfig, TeamSnapshot, Vec2,
};

#[derive(Parser)]
#[command(
    name = "ssl-predict",
    version,
    about = "Ball pursuit, possession, IMU yaw and dribbler tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// JSON run configuration; missing keys take defaults, unknown keys are rejected
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Predict where and when a robot catches a rolling ball
    Pursue {
        /// Ball position (m)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        ball_pos: Vec2,
        /// Ball velocity (m/s)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        ball_vel: Vec2,
        /// Robot position (m)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        robot_pos: Vec2,
        /// Robot velocity (m/s)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
        robot_vel: Vec2,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Pursuit-time field over a grid of robot start positions centred on the ball
    Heatmap {
        /// Ball velocity (m/s)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        ball_vel: Vec2,
        /// Ball position (m), also the grid centre
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
        ball_pos: Vec2,
        /// Number of cells along x and y
        #[arg(long, value_name = "NX,NY", value_parser = parse_dims, default_value = "61,61")]
        grid: (usize, usize),
        /// Cell size (m)
        #[arg(long, value_name = "SIZE", default_value_t = 0.2)]
        cell: f64,
        /// Output file; .csv writes x,y,time_s rows, .pgm writes a P5 image plus a <FILE>.txt legend
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Decide which team gains a free ball first
    Possess {
        /// Our roster: {"robots": [{"id", "position", "velocity", "is_goalie"}]}
        #[arg(long, value_name = "FILE")]
        ours: PathBuf,
        /// Opponent roster, same schema
        #[arg(long, value_name = "FILE")]
        theirs: PathBuf,
        /// Ball position (m)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        ball_pos: Vec2,
        /// Ball velocity (m/s)
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
        ball_vel: Vec2,
        /// Gain-time estimator for our robots: pursuit, interception or min [default: from config, "min"]
        #[arg(long, value_name = "NAME")]
        our_estimator: Option<String>,
        /// Gain-time estimator for opponents [default: from config, "min"]
        #[arg(long, value_name = "NAME")]
        their_estimator: Option<String>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Simulate the ball / dribbler impact
    Dribbler {
        /// Dribbler mass (kg) [default: from config, 0.15]
        #[arg(long = "M", value_name = "VAL")]
        mass: Option<f64>,
        /// Run several masses and write one summary row per mass
        #[arg(long, value_name = "M1,M2,...", value_delimiter = ',', num_args = 1.., conflicts_with = "mass")]
        sweep: Option<Vec<f64>>,
        /// Run the reference masses 0.05, 0.15, 0.25 as a sweep
        #[arg(long, conflicts_with_all = ["mass", "sweep"])]
        reference: bool,
        /// Output CSV: per-step trace (t,x1,x2,v1,v2,contact) or sweep summary (M,peak_m,settling_s,separations)
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Yaw offset between the vision and IMU frames
    ImuOffset {
        /// Current IMU yaw (rad)
        #[arg(long, value_name = "R", allow_hyphen_values = true)]
        imu_yaw: f64,
        /// Current vision yaw (rad)
        #[arg(long, value_name = "R", allow_hyphen_values = true)]
        ssl_yaw: f64,
        /// Target yaw in the vision frame to convert (rad)
        #[arg(long, value_name = "R", allow_hyphen_values = true)]
        target: Option<f64>,
    },
    /// Replay a scripted timeline through the decision-holding scheduler
    Schedule {
        /// Timeline: {"ticks": [{"t", "candidate"?, "direct"?}]}
        #[arg(long, value_name = "FILE")]
        timeline: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Divergence(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Divergence(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Divergence(m) => m,
        }
    }
}

impl From<ssl_predict::Error> for CliError {
    fn from(e: ssl_predict::Error) -> Self {
        match e {
            ssl_predict::Error::Divergence { .. } => CliError::Divergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn parse_pair(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y] = parts[..] else {
        return Err(format!("expected X,Y, got {s:?}"));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("invalid number {t:?} in {s:?}"))
    };
    Ok(Vec2::new(num(x)?, num(y)?))
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected NX,NY, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load_config(arg: &ConfigArg) -> Result<RunConfig, CliError> {
    match &arg.config {
        Some(path) => Ok(RunConfig::from_json(&read_text(path)?)?),
        None => Ok(RunConfig::default()),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn finish(path: &Path, result: io::Result<()>) -> Result<(), CliError> {
    result.map_err(|e| io_error(path, e))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then(|| sig6(x))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Roster {
    robots: Vec<RosterEntry>,
}

fn load_roster(path: &Path, cfg: &RunConfig) -> Result<TeamSnapshot, CliError> {
    let roster: Roster =
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if roster.robots.is_empty() {
        return Err(CliError::Usage(format!("{}: roster is empty", path.display())));
    }
    Ok(TeamSnapshot::new(roster.robots, cfg.robot)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Timeline {
    ticks: Vec<TimelineTick>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimelineTick {
    t: f64,
    #[serde(default)]
    candidate: Option<Candidate>,
    #[serde(default)]
    direct: Option<DirectAction>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pursue {
            ball_pos,
            ball_vel,
            robot_pos,
            robot_vel,
            config,
        } => {
            let cfg = load_config(&config)?;
            let ball = BallState::new(ball_pos, ball_vel);
            let robot = RobotState::new(robot_pos, robot_vel);
            let r = predict_pursuit(&ball, &robot, &cfg.pursuit_config())?;
            print_json(&json!({
                "point": {"x": sig6(r.point.x), "y": sig6(r.point.y)},
                "time_s": finite(r.time),
                "termination": r.termination,
            }))
        }
        Command::Heatmap {
            ball_vel,
            ball_pos,
            grid: (nx, ny),
            cell,
            out,
            config,
        } => {
            let cfg = load_config(&config)?;
            let ext = out.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
            if !matches!(ext.as_deref(), Some("csv" | "pgm")) {
                return Err(CliError::Usage(format!(
                    "{}: output must end in .csv or .pgm",
                    out.display()
                )));
            }
            let spec = GridSpec::centered(ball_pos, cell, nx, ny);
            let ball = BallState::new(ball_pos, ball_vel);
            let grid = pursuit_heatmap(&ball, &spec, &cfg.pursuit_config())?;
            let mut w = create(&out)?;
            if ext.as_deref() == Some("csv") {
                finish(&out, grid.write_csv(&mut w).and_then(|_| w.flush()))
            } else {
                let mapping = grid.write_pgm(&mut w).and_then(|m| w.flush().map(|_| m));
                let mapping = mapping.map_err(|e| io_error(&out, e))?;
                let mut legend_path = out.clone().into_os_string();
                legend_path.push(".txt");
                let legend_path = PathBuf::from(legend_path);
                std::fs::write(&legend_path, mapping.describe()).map_err(|e| io_error(&legend_path, e))
            }
        }
        Command::Possess {
            ours,
            theirs,
            ball_pos,
            ball_vel,
            our_estimator,
            their_estimator,
            config,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(name) = our_estimator {
                cfg.possession.our_estimator = name;
            }
            if let Some(name) = their_estimator {
                cfg.possession.their_estimator = name;
            }
            let ours = load_roster(&ours, &cfg)?;
            let theirs = load_roster(&theirs, &cfg)?;
            let ball = BallState::new(ball_pos, ball_vel);
            let registry = EstimatorRegistry::default();
            let report = predict_possession(&ours, &theirs, &ball, &cfg.pursuit_config(), &cfg.possession, &registry)?;
            print_json(&report.to_json())
        }
        Command::Dribbler {
            mass,
            sweep,
            reference,
            out,
            config,
        } => {
            let cfg = load_config(&config)?;
            let base = cfg.dribbler.params;
            let masses = if reference {
                Some(REFERENCE_MASSES.to_vec())
            } else {
                sweep
            };
            let mut w = create(&out)?;
            match masses {
                Some(masses) => {
                    let rows = dribbler::sweep(&base, &masses, cfg.dribbler.band_fraction)?;
                    finish(&out, dribbler::write_sweep_csv(&rows, &mut w).and_then(|_| w.flush()))
                }
                None => {
                    let params = mass.map_or(base, |m| base.with_mass(m));
                    let trace = dribbler::simulate(&params)?;
                    finish(&out, trace.write_csv(&mut w).and_then(|_| w.flush()))
                }
            }
        }
        Command::ImuOffset {
            imu_yaw,
            ssl_yaw,
            target,
        } => {
            let offset = yaw_offset(imu_yaw, ssl_yaw)?;
            let mut obj = serde_json::Map::new();
            obj.insert("delta_theta".into(), json!(sig6(offset.delta_theta)));
            if let Some(t) = target {
                obj.insert("theta_t_imu".into(), json!(sig6(to_imu_frame(t, offset)?)));
            }
            print_json(&obj)
        }
        Command::Schedule { timeline, config } => {
            let cfg = load_config(&config)?;
            let timeline: Timeline = serde_json::from_str(&read_text(&timeline)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", timeline.display())))?;
            let mut scheduler = Scheduler::new(cfg.scheduler)?;
            for tick in &timeline.ticks {
                let out = scheduler.tick(tick.t, tick, |w| w.candidate, |w| w.direct)?;
                let line = match out {
                    TickOutput::Held(h) => json!({
                        "t": sig6(tick.t),
                        "output": "held",
                        "decision_id": h.decision_id,
                        "payload": {"x": sig6(h.payload.x), "y": sig6(h.payload.y)},
                        "chosen_at": sig6(h.chosen_at),
                    }),
                    TickOutput::Direct(d) => json!({
                        "t": sig6(tick.t),
                        "output": "direct",
                        "kind": d.kind,
                        "target": {"x": sig6(d.target.x), "y": sig6(d.target.y)},
                        "held_id": scheduler.held().map(|h| h.decision_id),
                    }),
                    TickOutput::Idle => json!({"t": sig6(tick.t), "output": "idle"}),
                };
                print_json(&line)?;
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
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
