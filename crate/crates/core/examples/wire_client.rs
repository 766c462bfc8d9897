//! Start the WebSocket server on a free port and play a short game as a
//! client: join, press keys, click a button, wait for game over.

use futures_util::{SinkExt, StreamExt};
use serde_json::{json, Value};
use tokio_tungstenite::tungstenite::Message;

use coop_kitchen::agent::CommCondition;
use coop_kitchen::session::{server, SessionConfig};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = SessionConfig::new(CommCondition::BiComm, false, 4);
    cfg.game.episode_ticks = 50;
    cfg.game.tick_rate_hz = 25.0;
    cfg.countdown_secs = 1;
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(server::serve(listener, cfg));

    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}")).await?;
    ws.send(Message::text(json!({"type": "join", "session": "demo"}).to_string())).await?;

    let keys = ["left", "left", "up", "interact"];
    let mut deltas = 0;
    while let Some(msg) = ws.next().await {
        let v: Value = serde_json::from_str(msg?.to_text()?)?;
        match v["type"].as_str() {
            Some("state_delta") => {
                deltas += 1;
                if let Some(k) = keys.get(deltas / 5) {
                    if deltas % 5 == 0 {
                        ws.send(Message::text(json!({"type": "key", "action": k}).to_string())).await?;
                    }
                }
                if deltas == 12 {
                    ws.send(Message::text(json!({"type": "button", "template_id": 3}).to_string())).await?;
                }
            }
            Some("order_update") => {}
            Some("game_over") => {
                println!("game over: score {} after {deltas} deltas", v["final_score"]);
                break;
            }
            _ => println!("{v}"),
        }
    }
    Ok(())
}
