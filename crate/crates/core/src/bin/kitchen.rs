use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coop_kitchen::llm::Transcript;
use coop_kitchen::metrics::{compute_report, MetricsReport};
use coop_kitchen::session::{
    comparison_table, rerun_with_transcript, run_validation, run_with, server, verify_log, AgentSide, BackendMode, EpisodeLog,
    Script, ScriptedHuman, SessionConfig, TeammateHuman, ValidationOptions,
};

#[derive(Parser)]
#[command(name = "kitchen", version, about = "Two-chef burger kitchen: sessions, validation games, replay and metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Host sessions for browser clients over WebSocket.
    Serve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Agent versus the rule-based teammate, without messages.
    Validate {
        #[arg(long, default_value_t = 10)]
        games: u32,
        #[arg(long, value_enum, default_value = "both")]
        tom: Toggle,
        #[arg(long, default_value = "mock")]
        backend: BackendMode,
        /// Transcript directory: written by live and mock runs, read by replay.
        #[arg(long)]
        transcripts: Option<PathBuf>,
        /// Session config supplying live backend and game settings.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Re-execute a log and verify every state hash.
    Replay {
        #[arg(long)]
        log: PathBuf,
        /// Also rerun the agent from this LLM transcript and compare logs.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Print the metrics report for a log.
    Metrics {
        #[arg(long)]
        log: PathBuf,
        /// One CSV row instead of the JSON document.
        #[arg(long)]
        csv: bool,
        /// Print the CSV header line first.
        #[arg(long, requires = "csv")]
        header: bool,
    },
    /// Headless game driven by a script file.
    Selfplay {
        #[arg(long)]
        script: PathBuf,
        /// Session config; the script's seed and orders override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the episode log.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type Res = Result<ExitCode, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Serve { config, port } => serve(&config, port),
        Command::Validate { games, tom, backend, transcripts, config } => validate(games, tom, backend, transcripts, config),
        Command::Replay { log, transcript } => replay(&log, transcript.as_deref()),
        Command::Metrics { log, csv, header } => metrics(&log, csv, header),
        Command::Selfplay { script, config, out } => selfplay(&script, config.as_deref(), out.as_deref()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}

fn serve(config: &Path, port: u16) -> Res {
    let cfg = SessionConfig::load(config)?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
        server::serve(listener, cfg).await
    })?;
    Ok(ExitCode::SUCCESS)
}

fn validate(games: u32, tom: Toggle, backend: BackendMode, transcripts: Option<PathBuf>, config: Option<PathBuf>) -> Res {
    let base = config.map(|p| SessionConfig::load(&p)).transpose()?.unwrap_or_default();
    if let Some(dir) = &transcripts {
        std::fs::create_dir_all(dir)?;
    }
    let arms: &[bool] = match tom {
        Toggle::On => &[true],
        Toggle::Off => &[false],
        Toggle::Both => &[true, false],
    };
    let mut tables = Vec::new();
    for &arm in arms {
        let mut opts = ValidationOptions::new(games, arm, backend);
        opts.transcripts = transcripts.clone();
        opts.live = base.live.clone();
        opts.game = base.game.clone();
        let t = run_validation(&opts);
        println!("{}", t.per_game());
        tables.push(t);
    }
    println!("{}", comparison_table(&tables.iter().collect::<Vec<_>>()));
    Ok(ExitCode::SUCCESS)
}

fn replay(log: &Path, transcript: Option<&Path>) -> Res {
    let log = EpisodeLog::load(log)?;
    let report = verify_log(&log)?;
    match report.mismatch_at {
        Some(t) => println!("state hash mismatch at tick {t} ({} ticks verified)", report.ticks_verified),
        None => println!("{} ticks verified, final score {} (footer {})", report.ticks_verified, report.final_score, report.footer_score),
    }
    let mut ok = report.ok();
    if let Some(p) = transcript {
        let rerun = rerun_with_transcript(&log, Transcript::load(p)?)?;
        let same = rerun.content_hash() == log.content_hash();
        println!("transcript rerun: {} (hash {})", if same { "identical" } else { "DIFFERENT" }, rerun.content_hash());
        ok &= same;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn metrics(log: &Path, csv: bool, header: bool) -> Res {
    let report = compute_report(&EpisodeLog::load(log)?)?;
    if csv {
        if header {
            println!("{}", MetricsReport::CSV_HEADER);
        }
        println!("{}", report.csv_row());
    } else {
        println!("{}", report.to_json());
    }
    Ok(ExitCode::SUCCESS)
}

fn selfplay(script: &Path, config: Option<&Path>, out: Option<&Path>) -> Res {
    let mut cfg = config.map(SessionConfig::load).transpose()?.unwrap_or_default();
    let script = Script::parse(&std::fs::read_to_string(script)?)?;
    if let Some(seed) = script.seed {
        cfg.seed = seed;
    }
    if !script.orders.is_empty() {
        cfg.game.orders.scripted = script.orders.clone();
    }
    let agent = if script.agent.is_empty() {
        AgentSide::llm(cfg.agent_config(), cfg.load_prompts()?, cfg.build_gateway()?)
    } else {
        AgentSide::Script(script.agent.clone())
    };
    let (log, _) = if script.human.is_empty() {
        run_with(&cfg, agent, &mut TeammateHuman::default())?
    } else {
        run_with(&cfg, agent, &mut ScriptedHuman::new(script.human.clone()))?
    };
    println!("final score {}  ticks {}  hash {}", log.footer.final_score, log.ticks.len(), log.content_hash());
    if let Some(r) = &log.footer.report {
        println!("{}", r.to_json());
    }
    if let Some(p) = out {
        log.save(p)?;
        println!("log written to {}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}
