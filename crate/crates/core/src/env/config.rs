use serde::{Deserialize, Serialize};

use super::item::BurgerKind;

/// Engine timing and order policy. Every field has a default so partial TOML
/// documents work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    pub episode_ticks: u32,
    /// Ticks a beef spends in the pan before it is well done.
    pub cook_ticks: u32,
    /// Ticks well-done beef may sit unattended before the pan catches fire.
    pub fire_delay_ticks: u32,
    /// Interacts needed to chop one lettuce.
    pub chop_count: u8,
    /// Consecutive interact ticks with an extinguisher to put out a fire.
    pub extinguish_ticks: u32,
    /// Wall-clock rate for live sessions.
    pub tick_rate_hz: f64,
    pub orders: OrderPolicy,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            episode_ticks: 500,
            cook_ticks: 20,
            fire_delay_ticks: 20,
            chop_count: 3,
            extinguish_ticks: 10,
            tick_rate_hz: 5.0,
            orders: OrderPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrderPolicy {
    pub initial_orders: u32,
    pub min_active: u32,
    pub max_active: u32,
    /// Delay before a fulfilled or missed order is replaced.
    pub replacement_gap: u32,
    pub lifetime: u32,
    /// Extra arrivals every this many ticks while below `max_active`; 0 disables.
    pub arrival_interval: u32,
    /// When non-empty, replaces random spawning entirely.
    pub scripted: Vec<ScriptedOrder>,
}

impl Default for OrderPolicy {
    fn default() -> Self {
        Self {
            initial_orders: 2,
            min_active: 2,
            max_active: 4,
            replacement_gap: 10,
            lifetime: 150,
            arrival_interval: 100,
            scripted: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedOrder {
    pub tick: u32,
    pub kind: BurgerKind,
    pub lifetime: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("order policy: min_active {min} exceeds max_active {max}")]
    OrderBounds { min: u32, max: u32 },
    #[error("invalid config document: {0}")]
    Parse(#[from] toml::de::Error),
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks = [
            ("episode_ticks", self.episode_ticks),
            ("cook_ticks", self.cook_ticks),
            ("fire_delay_ticks", self.fire_delay_ticks),
            ("chop_count", u32::from(self.chop_count)),
            ("extinguish_ticks", self.extinguish_ticks),
            ("orders.lifetime", self.orders.lifetime),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, v)| *v == 0) {
            return Err(ConfigError::NonPositive(name));
        }
        if self.tick_rate_hz.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(ConfigError::NonPositive("tick_rate_hz"));
        }
        if self.orders.min_active > self.orders.max_active {
            return Err(ConfigError::OrderBounds { min: self.orders.min_active, max: self.orders.max_active });
        }
        if self.orders.scripted.iter().any(|o| o.lifetime == 0) {
            return Err(ConfigError::NonPositive("orders.scripted.lifetime"));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<GameConfig, ConfigError> {
        let cfg: GameConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
