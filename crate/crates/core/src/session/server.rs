//! WebSocket front end. Each joined session runs its tick loop on a
//! dedicated thread; the connection task only moves frames.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use futures_util::{SinkExt, StreamExt};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc;
use tokio_tungstenite::tungstenite::Message as WsMessage;

use super::config::SessionConfig;
use super::human::{HumanSource, WireHuman};
use super::episode::EpisodeLog;
use super::run::{Session, SessionError};
use super::wire::{handle_client_input, welcome, ClientFrame, ClientInput, ErrorCode, OrderUpdate, Sender, ServerFrame, StateDelta, WireState};

/// Wall-clock pacing for [`run_wire_session`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pace {
    RealTime,
    /// As fast as possible, countdown skipped.
    Headless,
}

/// Plays one session against a wire client, emitting every server frame
/// through `out`. Ticks that overrun their slot are counted in the log
/// output but never skipped.
pub fn run_wire_session(
    name: &str,
    config: &SessionConfig,
    human: WireHuman,
    pace: Pace,
    mut out: impl FnMut(ServerFrame),
) -> Result<EpisodeLog, SessionError> {
    let mut session = Session::new(config)?;
    let mut human = human;
    let hz = config.game.tick_rate_hz;
    out(welcome(name, config.comm_condition, config.game.episode_ticks, hz));
    if pace == Pace::RealTime {
        for s in (1..=config.countdown_secs).rev() {
            out(ServerFrame::Countdown { seconds_left: s });
            std::thread::sleep(Duration::from_secs(1));
        }
    }
    let mut view = WireState::of(session.state());
    out(ServerFrame::StateFull { state: view.clone() });
    out(ServerFrame::OrderUpdate(OrderUpdate::of(session.state())));

    let period = Duration::from_secs_f64(1.0 / hz.max(0.001));
    let mut deadline = Instant::now() + period;
    let mut overruns = 0u32;
    while !session.is_finished() {
        if pace == Pace::RealTime {
            let now = Instant::now();
            if now < deadline {
                std::thread::sleep(deadline - now);
            } else {
                overruns += 1;
            }
            deadline += period;
        }
        if human.disconnected() {
            break;
        }
        let input = human.input(session.state());
        let rec = session.tick(input)?.record.clone();
        let next = WireState::of(session.state());
        out(ServerFrame::StateDelta { delta: StateDelta::between(&view, &next) });
        if next.score != view.score {
            out(ServerFrame::Score { tick: rec.tick, score: next.score });
        }
        if let Some(m) = rec.human_message {
            out(ServerFrame::Message { sender: Sender::Human, text: m.text, tick: m.tick });
        }
        if let Some(m) = rec.agent_message {
            out(ServerFrame::Message { sender: Sender::Agent, text: m.text, tick: m.tick });
        }
        out(ServerFrame::OrderUpdate(OrderUpdate::of(session.state())));
        view = next;
    }
    if overruns > 0 {
        log::warn!("session {name}: {overruns} ticks started late");
    }
    let log = session.finish();
    out(ServerFrame::GameOver { final_score: log.footer.final_score, aborted: log.footer.aborted_at.is_some(), report: log.footer.report.clone() });
    Ok(log)
}

type Registry = Arc<Mutex<HashSet<String>>>;

/// Accepts clients until the listener fails.
pub async fn serve(listener: TcpListener, config: SessionConfig) -> std::io::Result<()> {
    let registry: Registry = Arc::default();
    log::info!("listening on {}", listener.local_addr()?);
    loop {
        let (stream, peer) = listener.accept().await?;
        let (cfg, reg) = (config.clone(), registry.clone());
        tokio::spawn(async move {
            if let Err(e) = handle_connection(stream, cfg, reg).await {
                log::warn!("{peer}: {e}");
            }
        });
    }
}

fn frame_text(f: &ServerFrame) -> WsMessage {
    WsMessage::text(serde_json::to_string(f).expect("frame serializes"))
}

fn error_frame(code: ErrorCode, message: impl Into<String>) -> ServerFrame {
    ServerFrame::Error { code, message: message.into() }
}

async fn handle_connection(stream: TcpStream, config: SessionConfig, registry: Registry) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let mut ws = tokio_tungstenite::accept_async(stream).await?;

    let name = loop {
        let Some(msg) = ws.next().await else { return Ok(()) };
        let msg = msg?;
        if !msg.is_text() {
            continue;
        }
        match serde_json::from_str::<ClientFrame>(msg.to_text()?) {
            Ok(ClientFrame::Join { session }) => {
                if registry.lock().expect("registry").insert(session.clone()) {
                    break session;
                }
                ws.send(frame_text(&error_frame(ErrorCode::SessionBusy, format!("session {session:?} already has a player")))).await?;
            }
            Ok(_) => ws.send(frame_text(&error_frame(ErrorCode::NotJoined, "send a join frame first"))).await?,
            Err(e) => ws.send(frame_text(&error_frame(ErrorCode::BadFrame, e.to_string()))).await?,
        }
    };

    let human = WireHuman::default();
    let (tx, mut rx) = mpsc::unbounded_channel::<ServerFrame>();
    let (thread_human, thread_name, cond) = (human.clone(), name.clone(), config.comm_condition);
    let worker = std::thread::spawn(move || {
        let result = run_wire_session(&thread_name, &config, thread_human, Pace::RealTime, |f| {
            let _ = tx.send(f);
        });
        match result {
            Ok(log) => {
                if let Some(dir) = &config.log_dir {
                    let path = dir.join(format!("{thread_name}-seed{}.json", config.seed));
                    if let Err(e) = std::fs::create_dir_all(dir).and_then(|()| log.save(&path)) {
                        log::error!("cannot write {}: {e}", path.display());
                    }
                }
            }
            Err(e) => {
                log::error!("session {thread_name}: {e}");
                let _ = tx.send(error_frame(ErrorCode::NotRunning, e.to_string()));
            }
        }
    });

    let (mut sink, mut stream) = ws.split();
    loop {
        tokio::select! {
            frame = rx.recv() => match frame {
                Some(f) => {
                    let over = matches!(f, ServerFrame::GameOver { .. });
                    sink.send(frame_text(&f)).await?;
                    if over {
                        break;
                    }
                }
                None => break,
            },
            msg = stream.next() => match msg {
                Some(Ok(m)) if m.is_text() => {
                    let reply = match serde_json::from_str::<ClientFrame>(m.to_text()?) {
                        Ok(f) => match handle_client_input(&f, cond) {
                            Ok(ClientInput::Key(a)) => { human.key(a); None }
                            Ok(ClientInput::Button(id)) => { human.button(id); None }
                            Err((code, message)) => Some(error_frame(code, message)),
                        },
                        Err(e) => Some(error_frame(ErrorCode::BadFrame, e.to_string())),
                    };
                    if let Some(r) = reply {
                        sink.send(frame_text(&r)).await?;
                    }
                }
                Some(Ok(m)) if m.is_close() => { human.disconnect(); break; }
                Some(Ok(_)) => {}
                Some(Err(_)) | None => { human.disconnect(); break; }
            },
        }
    }
    human.disconnect();
    let _ = tokio::task::spawn_blocking(move || worker.join()).await;
    registry.lock().expect("registry").remove(&name);
    let _ = sink.close().await;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::CommCondition;
    use crate::env::ControlAction;

    #[test]
    fn headless_wire_session_frames() {
        let mut cfg = SessionConfig::new(CommCondition::BiComm, true, 4);
        cfg.game.episode_ticks = 40;
        let human = WireHuman::default();
        human.key(ControlAction::Right);
        human.button(2);
        let mut frames = Vec::new();
        let log = run_wire_session("t", &cfg, human, Pace::Headless, |f| frames.push(f)).unwrap();
        assert!(matches!(frames[0], ServerFrame::Welcome { buttons_enabled: true, .. }));
        assert!(matches!(frames[1], ServerFrame::StateFull { .. }));
        assert_eq!(frames.iter().filter(|f| matches!(f, ServerFrame::StateDelta { .. })).count(), 40);
        assert!(frames.iter().any(|f| matches!(f, ServerFrame::Message { sender: Sender::Human, tick: 0, .. })));
        assert!(matches!(frames.last(), Some(ServerFrame::GameOver { aborted: false, .. })));
        assert_eq!(log.ticks[0].record.human_action, ControlAction::Right);
        assert_eq!(log.ticks[1].record.human_action, ControlAction::Noop);
    }

    #[test]
    fn disconnect_aborts_the_log() {
        let cfg = SessionConfig::new(CommCondition::NoComm, false, 4);
        let human = WireHuman::default();
        let h2 = human.clone();
        let mut n = 0;
        let log = run_wire_session("t", &cfg, human, Pace::Headless, |f| {
            if matches!(f, ServerFrame::StateDelta { .. }) {
                n += 1;
                if n == 10 {
                    h2.disconnect();
                }
            }
        })
        .unwrap();
        assert_eq!(log.ticks.len(), 10);
        assert_eq!(log.footer.aborted_at, Some(9));
        assert!(log.footer.report.is_none());
    }
}
