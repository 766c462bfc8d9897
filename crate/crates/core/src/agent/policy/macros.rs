use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::BurgerKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrepareTarget {
    Beef,
    Lettuce,
    Bread,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PassTarget {
    Plate,
    Bread,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verb {
    Prepare(PrepareTarget),
    Assemble(BurgerKind),
    PassOn(PassTarget),
    Serve(BurgerKind),
    /// Also clears overcooked beef out of pans and bins spoiled plates.
    PutoutFire,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MacroSource {
    Fsm,
    Snippet,
    HumanMessageHandler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MacroAction {
    pub verb: Verb,
    pub issued_tick: u32,
    pub source: MacroSource,
}

impl MacroAction {
    pub fn new(verb: Verb, issued_tick: u32, source: MacroSource) -> Self {
        Self { verb, issued_tick, source }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verb::Prepare(t) => write!(f, "Prepare({t:?})"),
            Verb::Assemble(k) => write!(f, "Assemble({k})"),
            Verb::PassOn(t) => write!(f, "PassOn({t:?})"),
            Verb::Serve(k) => write!(f, "Serve({k})"),
            Verb::PutoutFire => f.write_str("PutoutFire"),
            Verb::Idle => f.write_str("Idle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown macro action {0:?}")]
pub struct BadMacro(pub String);

impl FromStr for Verb {
    type Err = BadMacro;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadMacro(s.to_owned());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, arg) = match compact.split_once('(') {
            Some((name, rest)) => (name, Some(rest.strip_suffix(')').ok_or_else(bad)?)),
            None => (compact.as_str(), None),
        };
        let burger = |a: Option<&str>| a.and_then(BurgerKind::from_name).ok_or_else(bad);
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("prepare", Some(a)) => Ok(Verb::Prepare(match a.to_ascii_lowercase().as_str() {
                "beef" => PrepareTarget::Beef,
                "lettuce" => PrepareTarget::Lettuce,
                "bread" => PrepareTarget::Bread,
                _ => return Err(bad()),
            })),
            ("passon", Some(a)) => Ok(Verb::PassOn(match a.to_ascii_lowercase().as_str() {
                "plate" => PassTarget::Plate,
                "bread" => PassTarget::Bread,
                _ => return Err(bad()),
            })),
            ("assemble", a) => Ok(Verb::Assemble(burger(a)?)),
            ("serve", a) => Ok(Verb::Serve(burger(a)?)),
            ("putoutfire", None | Some("")) => Ok(Verb::PutoutFire),
            ("idle", None | Some("")) => Ok(Verb::Idle),
            _ => Err(bad()),
        }
    }
}
