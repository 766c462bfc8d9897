//! Plain-text action scripts for one or both chefs.
//!
//! ```text
//! # comments run to end of line
//! seed 7
//! order 0 BeefBurger 200          # tick, burger, lifetime
//! 0 human right x3                # ticks 0, 1 and 2
//! 3 human interact
//! 4 agent up
//! 10 human say 2                  # template id
//! 12 agent say Beef is on the pan
//! ```
//!
//! Ticks without a line are `noop`. A chef that never appears is not scripted.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::env::{BurgerKind, ControlAction, Player, ScriptedOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChefScript {
    pub actions: BTreeMap<u32, ControlAction>,
    /// Template ids for the human, free text for the agent.
    pub says: BTreeMap<u32, String>,
}

impl ChefScript {
    pub fn is_empty(&self) -> bool {
        self.actions.is_empty() && self.says.is_empty()
    }

    pub fn action(&self, tick: u32) -> ControlAction {
        self.actions.get(&tick).copied().unwrap_or(ControlAction::Noop)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub seed: Option<u64>,
    pub orders: Vec<ScriptedOrder>,
    pub agent: ChefScript,
    pub human: ChefScript,
}

impl Script {
    pub fn chef(&self, p: Player) -> &ChefScript {
        match p {
            Player::Agent => &self.agent,
            Player::Human => &self.human,
        }
    }

    fn chef_mut(&mut self, p: Player) -> &mut ChefScript {
        match p {
            Player::Agent => &mut self.agent,
            Player::Human => &mut self.human,
        }
    }

    pub fn parse(text: &str) -> Result<Script, ScriptError> {
        let mut script = Script::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ScriptError { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks[0] {
                "seed" => {
                    let [_, s] = toks[..] else { return Err(err("expected `seed <n>`".into())) };
                    script.seed = Some(s.parse().map_err(|_| err(format!("bad seed {s:?}")))?);
                }
                "order" => {
                    let [_, t, k, l] = toks[..] else { return Err(err("expected `order <tick> <burger> <lifetime>`".into())) };
                    script.orders.push(ScriptedOrder {
                        tick: t.parse().map_err(|_| err(format!("bad tick {t:?}")))?,
                        kind: BurgerKind::from_name(k).ok_or_else(|| err(format!("unknown burger {k:?}")))?,
                        lifetime: l.parse().map_err(|_| err(format!("bad lifetime {l:?}")))?,
                    });
                }
                t => {
                    let tick: u32 = t.parse().map_err(|_| err(format!("expected a tick, got {t:?}")))?;
                    let who = match toks.get(1) {
                        Some(&"agent") => Player::Agent,
                        Some(&"human") => Player::Human,
                        other => return Err(err(format!("expected agent or human, got {other:?}"))),
                    };
                    let verb = toks.get(2).ok_or_else(|| err("missing action".into()))?;
                    if *verb == "say" {
                        let said = toks[3..].join(" ");
                        if said.is_empty() {
                            return Err(err("`say` needs a message".into()));
                        }
                        if who == Player::Human && said.parse::<u8>().is_err() {
                            return Err(err(format!("human messages are template ids, got {said:?}")));
                        }
                        if script.chef_mut(who).says.insert(tick, said).is_some() {
                            return Err(err(format!("second message for {who} at tick {tick}")));
                        }
                        continue;
                    }
                    let action = ControlAction::from_name(verb).ok_or_else(|| err(format!("unknown action {verb:?}")))?;
                    let count = match toks.get(3) {
                        None => 1,
                        Some(r) => r
                            .strip_prefix('x')
                            .and_then(|n| n.parse::<u32>().ok())
                            .filter(|n| *n > 0)
                            .ok_or_else(|| err(format!("expected a repeat like x3, got {r:?}")))?,
                    };
                    if toks.len() > 4 {
                        return Err(err("trailing tokens".into()));
                    }
                    for t in tick..tick + count {
                        if script.chef_mut(who).actions.insert(t, action).is_some() {
                            return Err(err(format!("second action for {who} at tick {t}")));
                        }
                    }
                }
            }
        }
        Ok(script)
    }

    /// Canonical text form; parses back to an equal script.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed {s}");
        }
        for o in &self.orders {
            let _ = writeln!(out, "order {} {} {}", o.tick, o.kind.name(), o.lifetime);
        }
        for p in Player::BOTH {
            let name = if p == Player::Agent { "agent" } else { "human" };
            let c = self.chef(p);
            for (t, a) in &c.actions {
                let _ = writeln!(out, "{t} {name} {}", a.name());
            }
            for (t, s) in &c.says {
                let _ = writeln!(out, "{t} {name} say {s}");
            }
        }
        out
    }
}
