//! Condition language for policy snippets.
//!
//! ```text
//! expr    := or
//! or      := and (("or" | "||") and)*
//! and     := unary (("and" | "&&") unary)*
//! unary   := ("not" | "!") unary | "(" expr ")" | atom
//! atom    := "true" | "false"
//!          | pan_empty | pan_on_fire | pan_cooking | beef_ready | beef_overcooked
//!          | lettuce_chopped | cutboard_empty
//!          | agent_holding(THING) | human_holding(THING) | counter_has(THING)
//!          | order(KIND) | order_id(N)
//!          | order_time_left(KIND) CMP N | orders CMP N | tick CMP N
//! THING   := nothing | bread | beef | lettuce | chopped_lettuce | plate
//!          | extinguisher | spoiled_plate | KIND
//! CMP     := "<" | "<=" | ">" | ">=" | "==" | "=" | "!="
//! ```
//!
//! Keywords are case-insensitive. Evaluation is total: an atom about an
//! order or item that no longer exists is false.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::env::{BurgerKind, CookState, GameState, Item, ItemKind, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Cmp {
    pub fn apply(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "==",
            Cmp::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thing {
    Nothing,
    Bread,
    Beef,
    Lettuce,
    ChoppedLettuce,
    Plate,
    Extinguisher,
    SpoiledPlate,
    Burger(BurgerKind),
}

impl Thing {
    fn parse(s: &str) -> Option<Thing> {
        Some(match s.to_ascii_lowercase().as_str() {
            "nothing" | "none" | "empty" => Thing::Nothing,
            "bread" => Thing::Bread,
            "beef" => Thing::Beef,
            "lettuce" => Thing::Lettuce,
            "chopped_lettuce" => Thing::ChoppedLettuce,
            "plate" => Thing::Plate,
            "extinguisher" | "fire_extinguisher" => Thing::Extinguisher,
            "spoiled_plate" => Thing::SpoiledPlate,
            _ => Thing::Burger(BurgerKind::from_name(s)?),
        })
    }

    fn name(self) -> String {
        match self {
            Thing::Nothing => "nothing".into(),
            Thing::Bread => "bread".into(),
            Thing::Beef => "beef".into(),
            Thing::Lettuce => "lettuce".into(),
            Thing::ChoppedLettuce => "chopped_lettuce".into(),
            Thing::Plate => "plate".into(),
            Thing::Extinguisher => "extinguisher".into(),
            Thing::SpoiledPlate => "spoiled_plate".into(),
            Thing::Burger(k) => k.name().into(),
        }
    }

    fn matches(self, state: &GameState, item: Option<&Item>) -> bool {
        match (self, item) {
            (Thing::Nothing, None) => true,
            (_, None) | (Thing::Nothing, Some(_)) => false,
            (Thing::Bread, Some(i)) => i.kind == ItemKind::Bread,
            (Thing::Beef, Some(i)) => matches!(i.kind, ItemKind::Beef { .. }),
            (Thing::Lettuce, Some(i)) => matches!(i.kind, ItemKind::Lettuce { .. }),
            (Thing::ChoppedLettuce, Some(i)) => state.is_chopped(i),
            (Thing::Plate, Some(i)) => matches!(i.kind, ItemKind::Plate { .. }),
            (Thing::Extinguisher, Some(i)) => i.kind == ItemKind::FireExtinguisher,
            (Thing::SpoiledPlate, Some(i)) => i.kind == ItemKind::SpoiledPlate,
            (Thing::Burger(k), Some(i)) => i.plate_contents().and_then(|c| c.burger()) == Some(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    PanEmpty,
    PanOnFire,
    PanCooking,
    BeefReady,
    BeefOvercooked,
    LettuceChopped,
    CutboardEmpty,
    Holding(Player, Thing),
    CounterHas(Thing),
    Order(BurgerKind),
    OrderId(u32),
    OrderTimeLeft(BurgerKind, Cmp, i64),
    Orders(Cmp, i64),
    Tick(Cmp, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    Const(bool),
    Atom(Atom),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at {pos}")]
    BadChar { ch: char, pos: usize },
    #[error("unexpected end of condition")]
    UnexpectedEnd,
    #[error("unexpected token {found:?} at {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("bad argument {arg:?} for {atom}")]
    BadArgument { atom: String, arg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(i64),
    LParen,
    RParen,
    And,
    Or,
    Not,
    Cmp(Cmp),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let two = chars.get(i + 1).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '&' if two == Some('&') => {
                i += 1;
                Tok::And
            }
            '|' if two == Some('|') => {
                i += 1;
                Tok::Or
            }
            '!' if two == Some('=') => {
                i += 1;
                Tok::Cmp(Cmp::Ne)
            }
            '!' => Tok::Not,
            '<' | '>' | '=' => {
                let eq = two == Some('=');
                if eq {
                    i += 1;
                }
                Tok::Cmp(match (c, eq) {
                    ('<', false) => Cmp::Lt,
                    ('<', true) => Cmp::Le,
                    ('>', false) => Cmp::Gt,
                    ('>', true) => Cmp::Ge,
                    _ => Cmp::Eq,
                })
            }
            c if c.is_ascii_digit() || (c == '-' && two.is_some_and(|d| d.is_ascii_digit())) => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((Tok::Num(text.parse().map_err(|_| ParseError::BadChar { ch: c, pos: start })?), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.to_ascii_lowercase().as_str() {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    _ => Tok::Ident(word),
                };
                out.push((tok, start));
                continue;
            }
            ch => return Err(ParseError::BadChar { ch, pos: start }),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone()).ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn unexpected(&self, back: usize) -> ParseError {
        let (tok, pos) = &self.toks[self.pos - back];
        ParseError::Unexpected { found: format!("{tok:?}"), pos: *pos }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.next()? == want {
            Ok(())
        } else {
            Err(self.unexpected(1))
        }
    }

    fn or(&mut self) -> Result<Cond, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Cond::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Cond, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Cond::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Cond, ParseError> {
        match self.next()? {
            Tok::Not => Ok(Cond::Not(Box::new(self.unary()?))),
            Tok::LParen => {
                let inner = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.atom(name),
            _ => Err(self.unexpected(1)),
        }
    }

    fn arg(&mut self) -> Result<String, ParseError> {
        self.expect(Tok::LParen)?;
        let arg = match self.next()? {
            Tok::Ident(s) => s,
            Tok::Num(n) => n.to_string(),
            _ => return Err(self.unexpected(1)),
        };
        self.expect(Tok::RParen)?;
        Ok(arg)
    }

    fn comparison(&mut self) -> Result<(Cmp, i64), ParseError> {
        let cmp = match self.next()? {
            Tok::Cmp(c) => c,
            _ => return Err(self.unexpected(1)),
        };
        match self.next()? {
            Tok::Num(n) => Ok((cmp, n)),
            _ => Err(self.unexpected(1)),
        }
    }

    fn atom(&mut self, name: String) -> Result<Cond, ParseError> {
        let lower = name.to_ascii_lowercase();
        let bad = |arg: &str| ParseError::BadArgument { atom: name.clone(), arg: arg.to_owned() };
        let atom = match lower.as_str() {
            "true" => return Ok(Cond::Const(true)),
            "false" => return Ok(Cond::Const(false)),
            "pan_empty" => Atom::PanEmpty,
            "pan_on_fire" => Atom::PanOnFire,
            "pan_cooking" => Atom::PanCooking,
            "beef_ready" => Atom::BeefReady,
            "beef_overcooked" => Atom::BeefOvercooked,
            "lettuce_chopped" => Atom::LettuceChopped,
            "cutboard_empty" => Atom::CutboardEmpty,
            "agent_holding" | "human_holding" | "counter_has" => {
                let arg = self.arg()?;
                let thing = Thing::parse(&arg).ok_or_else(|| bad(&arg))?;
                match lower.as_str() {
                    "agent_holding" => Atom::Holding(Player::Agent, thing),
                    "human_holding" => Atom::Holding(Player::Human, thing),
                    _ => Atom::CounterHas(thing),
                }
            }
            "order" => {
                let arg = self.arg()?;
                Atom::Order(BurgerKind::from_name(&arg).ok_or_else(|| bad(&arg))?)
            }
            "order_id" => {
                let arg = self.arg()?;
                Atom::OrderId(arg.parse().map_err(|_| bad(&arg))?)
            }
            "order_time_left" => {
                let arg = self.arg()?;
                let kind = BurgerKind::from_name(&arg).ok_or_else(|| bad(&arg))?;
                let (cmp, n) = self.comparison()?;
                Atom::OrderTimeLeft(kind, cmp, n)
            }
            "orders" => {
                let (cmp, n) = self.comparison()?;
                Atom::Orders(cmp, n)
            }
            "tick" => {
                let (cmp, n) = self.comparison()?;
                Atom::Tick(cmp, n)
            }
            _ => return Err(ParseError::UnknownAtom(name)),
        };
        Ok(Cond::Atom(atom))
    }
}

impl FromStr for Cond {
    type Err = ParseError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { toks: lex(src)?, pos: 0 };
        let cond = p.or()?;
        if p.pos < p.toks.len() {
            p.pos += 1;
            return Err(p.unexpected(1));
        }
        Ok(cond)
    }
}

impl Atom {
    pub fn eval(&self, s: &GameState) -> bool {
        match *self {
            Atom::PanEmpty => s.pans.iter().any(|p| p.is_free()),
            Atom::PanOnFire => s.pans.iter().any(|p| p.on_fire),
            Atom::PanCooking => s.pans.iter().any(|p| matches!(p.cook_state(), Some(CookState::Cooking { .. }))),
            Atom::BeefReady => s.pans.iter().any(|p| !p.on_fire && matches!(p.cook_state(), Some(CookState::WellDone { .. }))),
            Atom::BeefOvercooked => s.pans.iter().any(|p| p.cook_state() == Some(CookState::Overcooked)),
            Atom::LettuceChopped => s.items().any(|(i, _)| s.is_chopped(i)),
            Atom::CutboardEmpty => s.cutboards.iter().any(|b| b.item.is_none()),
            Atom::Holding(p, thing) => thing.matches(s, s.chef(p).held.as_ref()),
            Atom::CounterHas(thing) => s.counters.iter().any(|c| thing.matches(s, c.item.as_ref())),
            Atom::Order(kind) => s.orders.iter().any(|o| o.kind == kind),
            Atom::OrderId(id) => s.orders.iter().any(|o| o.id == id),
            Atom::OrderTimeLeft(kind, cmp, n) => s
                .orders
                .iter()
                .filter(|o| o.kind == kind)
                .map(|o| o.remaining(s.tick))
                .min()
                .is_some_and(|left| cmp.apply(i64::from(left), n)),
            Atom::Orders(cmp, n) => cmp.apply(s.orders.len() as i64, n),
            Atom::Tick(cmp, n) => cmp.apply(i64::from(s.tick), n),
        }
    }
}

impl Cond {
    pub fn eval(&self, s: &GameState) -> bool {
        match self {
            Cond::Const(b) => *b,
            Cond::Atom(a) => a.eval(s),
            Cond::Not(c) => !c.eval(s),
            Cond::And(a, b) => a.eval(s) && b.eval(s),
            Cond::Or(a, b) => a.eval(s) || b.eval(s),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::PanEmpty => f.write_str("pan_empty"),
            Atom::PanOnFire => f.write_str("pan_on_fire"),
            Atom::PanCooking => f.write_str("pan_cooking"),
            Atom::BeefReady => f.write_str("beef_ready"),
            Atom::BeefOvercooked => f.write_str("beef_overcooked"),
            Atom::LettuceChopped => f.write_str("lettuce_chopped"),
            Atom::CutboardEmpty => f.write_str("cutboard_empty"),
            Atom::Holding(Player::Agent, t) => write!(f, "agent_holding({})", t.name()),
            Atom::Holding(Player::Human, t) => write!(f, "human_holding({})", t.name()),
            Atom::CounterHas(t) => write!(f, "counter_has({})", t.name()),
            Atom::Order(k) => write!(f, "order({k})"),
            Atom::OrderId(id) => write!(f, "order_id({id})"),
            Atom::OrderTimeLeft(k, c, n) => write!(f, "order_time_left({k}) {} {n}", c.symbol()),
            Atom::Orders(c, n) => write!(f, "orders {} {n}", c.symbol()),
            Atom::Tick(c, n) => write!(f, "tick {} {n}", c.symbol()),
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Const(b) => write!(f, "{b}"),
            Cond::Atom(a) => write!(f, "{a}"),
            Cond::Not(c) => write!(f, "not ({c})"),
            Cond::And(a, b) => write!(f, "({a}) and ({b})"),
            Cond::Or(a, b) => write!(f, "({a}) or ({b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, GameConfig, Layout, OrderPolicy, ScriptedOrder};

    fn state_with_orders() -> GameState {
        let cfg = GameConfig {
            orders: OrderPolicy {
                scripted: vec![
                    ScriptedOrder { tick: 0, kind: BurgerKind::BeefBurger, lifetime: 30 },
                    ScriptedOrder { tick: 0, kind: BurgerKind::LettuceBurger, lifetime: 90 },
                ],
                ..OrderPolicy::default()
            },
            ..GameConfig::default()
        };
        init_game(&Layout::counter_circuit(), &cfg, 1)
    }

    fn eval(src: &str, s: &GameState) -> bool {
        src.parse::<Cond>().unwrap_or_else(|e| panic!("{src}: {e}")).eval(s)
    }

    #[test]
    fn precedence_and_connectives() {
        let s = state_with_orders();
        assert!(eval("true or false and false", &s));
        assert!(!eval("(true or false) and false", &s));
        assert!(eval("not false && !false", &s));
        assert!(eval("pan_empty and order(BeefBurger)", &s));
        assert!(!eval("pan_on_fire || beef_ready", &s));
    }

    #[test]
    fn order_atoms_track_the_live_order_list() {
        let mut s = state_with_orders();
        assert!(eval("order_id(1) and order_time_left(BeefBurger) <= 30 and orders == 2", &s));
        assert!(eval("agent_holding(nothing) and counter_has(nothing)", &s));
        s.orders.retain(|o| o.kind != BurgerKind::BeefBurger);
        assert!(!eval("order(BeefBurger)", &s));
        assert!(!eval("order_id(1)", &s));
        // No order left to measure: false under every comparison.
        assert!(!eval("order_time_left(BeefBurger) > 0", &s));
        assert!(!eval("order_time_left(BeefBurger) < 1000", &s));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "pan_empty and", "order(Pizza)", "fly", "tick >", "(pan_empty", "pan_empty pan_empty", "a $ b"] {
            assert!(bad.parse::<Cond>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn display_reparses_to_the_same_tree() {
        for src in [
            "not (pan_empty or beef_ready) and order_time_left(LettuceBurger) >= 20",
            "human_holding(BeefBurger) || tick != 7",
            "orders < 3 and counter_has(chopped_lettuce)",
        ] {
            let c: Cond = src.parse().unwrap();
            assert_eq!(c.to_string().parse::<Cond>().unwrap(), c);
        }
    }
}
