use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clobber_cgt::enumeration::{
    calibrate_normalization, table, to_csv, to_json, EnumerationConfig, Regime,
};
use clobber_cgt::preference::compare_prudent;
use clobber_cgt::{
    evaluate, evaluate_all_starts, evaluate_value, normalize, parse_value, Base, Comparison,
    EvalResult, Player, Position, PreferenceMode, Profile, RenderStyle,
};

/// Values of N-player Clobber positions under different player preferences.
#[derive(Parser, Debug)]
#[command(name = "clobber", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a 1×n board given as a digit string (0 = empty).
    Solve {
        board: String,
        #[command(flatten)]
        common: Common,
        /// Player to move first.
        #[arg(long, default_value_t = 1)]
        start: u8,
        /// Evaluate once for every starting player.
        #[arg(long)]
        all_starts: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Normalize a value; with a preference mode, re-evaluate it from the
    /// perspective of the player choosing at the root.
    Simplify {
        value: String,
        #[command(flatten)]
        common: Common,
        /// Player choosing at the root (default 1).
        #[arg(short, long)]
        perspective: Option<u8>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare two values from one player's point of view.
    Compare {
        left: String,
        right: String,
        #[arg(short, long)]
        perspective: u8,
        #[arg(long, value_enum, default_value_t = Relation::Base)]
        relation: Relation,
        #[arg(long, default_value_t = 3)]
        players: u8,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count distinct starting values over all novel boards of one length.
    Enumerate {
        n: usize,
        #[command(flatten)]
        run: RunOptions,
        /// Include the sorted list of distinct values.
        #[arg(long)]
        inventory: bool,
    },
    /// Count distinct starting values for board lengths 2 through MAX_N.
    Table {
        max_n: usize,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Compare the profile-dependent columns against the published counts
    /// under every candidate normalization profile.
    Calibrate {
        #[arg(default_value_t = 9)]
        max_n: usize,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 3)]
    players: u8,
    /// raw, syntactic, selfish, prudent or indifferent.
    #[arg(long, default_value = "raw")]
    mode: PreferenceMode,
    #[arg(long, default_value_t = Profile::default())]
    profile: Profile,
    /// Defaults to bar notation for prudent results, brackets otherwise.
    #[arg(long, value_enum)]
    render: Option<Render>,
}

#[derive(clap::Args, Debug)]
struct RunOptions {
    /// Comma-separated columns: unsimplified, syntactic, selfish, prudent.
    #[arg(long, value_delimiter = ',', default_values_t = Regime::ALL)]
    modes: Vec<Regime>,
    #[arg(long, default_value_t = Profile::default())]
    profile: Profile,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Render {
    Brackets,
    Bar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    /// Selfish weaker-or-equal relation.
    Base,
    /// Losses to different opponents count as equal.
    Indifferent,
    Prudent,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<clobber_cgt::Error> for Failure {
    fn from(e: clobber_cgt::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Solve {
            board,
            common,
            start,
            all_starts,
            format,
        } => solve(&board, &common, start, all_starts, format),
        Command::Simplify {
            value,
            common,
            perspective,
            format,
        } => simplify(&value, &common, perspective, format),
        Command::Compare {
            left,
            right,
            perspective,
            relation,
            players,
            format,
        } => compare(&left, &right, perspective, relation, players, format),
        Command::Enumerate { n, run, inventory } => {
            check_length(n, 2)?;
            let reports = vec![clobber_cgt::enumeration::enumerate(
                n,
                &config(&run).inventory(inventory),
            )?];
            emit(&run, &reports)
        }
        Command::Table { max_n, run } => {
            check_length(max_n, 2)?;
            let reports = table(max_n, &config(&run))?;
            emit(&run, &reports)
        }
        Command::Calibrate { max_n, jobs, format } => {
            check_length(max_n, 2)?;
            let c = calibrate_normalization(2, max_n, jobs)?;
            Ok(match format {
                Format::Json => line(serde_json::to_string_pretty(&c).expect("serializable")),
                _ => c.report(),
            })
        }
    }
}

fn check_length(n: usize, min: usize) -> Result<(), Failure> {
    if (min..=13).contains(&n) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("board length must be in {min}..=13, got {n}")))
    }
}

fn config(run: &RunOptions) -> EnumerationConfig {
    EnumerationConfig::new(&run.modes, run.profile).workers(run.jobs)
}

fn emit(run: &RunOptions, reports: &[clobber_cgt::enumeration::EnumerationReport]) -> Result<String, Failure> {
    let body = match run.format {
        Format::Json => line(to_json(reports)),
        Format::Csv | Format::Text => to_csv(reports, &run.modes),
    };
    match &run.out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn line(s: String) -> String {
    s + "\n"
}

fn style(common: &Common) -> RenderStyle {
    match common.render {
        Some(Render::Bar) => RenderStyle::Bar,
        Some(Render::Brackets) => RenderStyle::Brackets,
        None if common.mode == PreferenceMode::Prudent => RenderStyle::Bar,
        None => RenderStyle::Brackets,
    }
}

fn render(result: &EvalResult, style: RenderStyle) -> String {
    match (result, style) {
        (EvalResult::Simple(s), RenderStyle::Brackets) => s.expand().to_brackets(),
        (EvalResult::Raw(v), _) => v.render(style),
        _ => result.to_string(),
    }
}

fn result_json(result: &EvalResult, style: RenderStyle) -> Value {
    match result {
        EvalResult::Class { mine, exponent } => json!({
            "relative": if *mine { "mine" } else { "other" },
            "exponent": exponent,
            "class": result.to_string(),
        }),
        _ => json!({ "value": render(result, style) }),
    }
}

fn player(id: u8, players: u8) -> Result<Player, Failure> {
    Player::new(id, players).map_err(|e| Failure::Usage(e.to_string()))
}

fn solve(board: &str, common: &Common, start: u8, all: bool, format: Format) -> Result<String, Failure> {
    let style = style(common);
    let position = Position::line(board, common.players, start).map_err(|e| match e {
        clobber_cgt::Error::PlayerOutOfRange { .. } | clobber_cgt::Error::PlayerCount(_) => {
            Failure::Usage(e.to_string())
        }
        other => Failure::Domain(other.to_string()),
    })?;
    let results: Vec<(Player, EvalResult)> = if all {
        evaluate_all_starts(&position.game, &position.occupancy, common.mode, common.profile)?
    } else {
        vec![(position.mover, evaluate(&position, common.mode, common.profile)?)]
    };
    Ok(match format {
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|(p, r)| {
                    let mut obj = result_json(r, style);
                    obj["board"] = json!(board);
                    obj["start"] = json!(p.id());
                    obj["mode"] = json!(common.mode.name());
                    obj["profile"] = json!(common.profile.to_string());
                    obj
                })
                .collect();
            let out = if all { Value::Array(rows) } else { rows.into_iter().next().unwrap() };
            line(serde_json::to_string_pretty(&out).expect("serializable"))
        }
        Format::Csv => {
            let mut s = String::from("board,start,mode,value\n");
            for (p, r) in &results {
                s.push_str(&format!("{board},{},{},\"{}\"\n", p.id(), common.mode, render(r, style)));
            }
            s
        }
        Format::Text if all => results
            .iter()
            .map(|(p, r)| format!("{p}: {}\n", render(r, style)))
            .collect(),
        Format::Text => line(render(&results[0].1, style)),
    })
}

fn parse(text: &str, players: u8) -> Result<clobber_cgt::GameValue, Failure> {
    Ok(parse_value(text, players)?)
}

fn simplify(text: &str, common: &Common, perspective: Option<u8>, format: Format) -> Result<String, Failure> {
    let style = style(common);
    let value = parse(text, common.players)?;
    let result = match (perspective, common.mode) {
        (_, PreferenceMode::Raw | PreferenceMode::Syntactic) => {
            EvalResult::Raw(normalize(&value, common.profile, common.players))
        }
        (p, mode) => {
            let mover = player(p.unwrap_or(1), common.players)?;
            evaluate_value(&value, mover, common.players, mode, common.profile)?
        }
    };
    Ok(match format {
        Format::Json => line(serde_json::to_string_pretty(&result_json(&result, style)).expect("serializable")),
        _ => line(render(&result, style)),
    })
}

fn compare(
    left: &str,
    right: &str,
    perspective: u8,
    relation: Relation,
    players: u8,
    format: Format,
) -> Result<String, Failure> {
    let p = player(perspective, players)?;
    let x = parse(left, players)?;
    let y = parse(right, players)?;
    let verdict: Comparison = match relation {
        Relation::Base => clobber_cgt::preference::compare(&x, &y, p, Base::Selfish),
        Relation::Indifferent => clobber_cgt::preference::compare(&x, &y, p, Base::Indifferent),
        Relation::Prudent => compare_prudent(&x, &y, p),
    };
    Ok(match format {
        Format::Json => line(
            serde_json::to_string_pretty(&json!({
                "left": x.to_brackets(),
                "right": y.to_brackets(),
                "perspective": perspective,
                "result": verdict,
            }))
            .expect("serializable"),
        ),
        _ => line(verdict.to_string()),
    })
}
