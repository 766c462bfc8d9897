//! Sessions: the tick loop, human input sources, episode logs, replay,
//! validation games and the WebSocket server.

pub mod author;
mod config;
pub mod human;
mod episode;
mod replay;
mod run;
pub mod script;
pub mod server;
pub mod validate;
pub mod wire;

pub use config::{BackendMode, HumanSourceConfig, SessionConfig, SessionConfigError};
pub use human::{HumanInput, HumanSource, LoggedHuman, NoisyTeammate, ScriptedHuman, TeammateHuman, WireHuman};
pub use episode::{AgentDriver, EpisodeFooter, EpisodeHeader, EpisodeLog, TickRecord, LOG_FORMAT};
pub use replay::{config_from_header, rerun_with_transcript, verify_log, ReplayError, ReplayReport, Replayer};
pub use run::{human_from_config, run_session, run_with, AgentSide, Rejections, Session, SessionError};
pub use script::{ChefScript, Script, ScriptError};
pub use validate::{comparison_table, run_validation, ValidationOptions, ValidationTable};
