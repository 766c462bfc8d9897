use std::fmt;

use serde::{Deserialize, Serialize};

/// Stable identity of a physical item for the whole episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ingredient {
    Bread,
    Lettuce,
    Beef,
}

/// Ingredients sitting on a plate. Only usable ingredients (bread, chopped
/// lettuce, well-done beef) can ever be added, each at most once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlateContents {
    pub bread: bool,
    pub lettuce: bool,
    pub beef: bool,
}

impl PlateContents {
    pub const EMPTY: PlateContents = PlateContents { bread: false, lettuce: false, beef: false };

    pub fn has(self, ingredient: Ingredient) -> bool {
        match ingredient {
            Ingredient::Bread => self.bread,
            Ingredient::Lettuce => self.lettuce,
            Ingredient::Beef => self.beef,
        }
    }

    pub fn with(mut self, ingredient: Ingredient) -> PlateContents {
        match ingredient {
            Ingredient::Bread => self.bread = true,
            Ingredient::Lettuce => self.lettuce = true,
            Ingredient::Beef => self.beef = true,
        }
        self
    }

    pub fn is_empty(self) -> bool {
        self == PlateContents::EMPTY
    }

    pub fn is_subset_of(self, other: PlateContents) -> bool {
        (!self.bread || other.bread) && (!self.lettuce || other.lettuce) && (!self.beef || other.beef)
    }

    pub fn ingredients(self) -> impl Iterator<Item = Ingredient> {
        [Ingredient::Bread, Ingredient::Lettuce, Ingredient::Beef].into_iter().filter(move |i| self.has(*i))
    }

    pub fn count(self) -> usize {
        self.ingredients().count()
    }

    /// The burger these contents form exactly, if any.
    pub fn burger(self) -> Option<BurgerKind> {
        BurgerKind::ALL.into_iter().find(|k| k.recipe() == self)
    }
}

impl fmt::Display for PlateContents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .ingredients()
            .map(|i| match i {
                Ingredient::Bread => "bread",
                Ingredient::Lettuce => "lettuce",
                Ingredient::Beef => "beef",
            })
            .collect();
        write!(f, "[{}]", names.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BurgerKind {
    LettuceBurger,
    BeefBurger,
    BeefLettuceBurger,
}

impl BurgerKind {
    pub const ALL: [BurgerKind; 3] = [BurgerKind::LettuceBurger, BurgerKind::BeefBurger, BurgerKind::BeefLettuceBurger];

    pub fn recipe(self) -> PlateContents {
        match self {
            BurgerKind::LettuceBurger => PlateContents { bread: true, lettuce: true, beef: false },
            BurgerKind::BeefBurger => PlateContents { bread: true, lettuce: false, beef: true },
            BurgerKind::BeefLettuceBurger => PlateContents { bread: true, lettuce: true, beef: true },
        }
    }

    /// Score for serving this burger against a matching order.
    pub fn reward(self) -> i32 {
        match self {
            BurgerKind::LettuceBurger => 15,
            BurgerKind::BeefBurger => 20,
            BurgerKind::BeefLettuceBurger => 25,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BurgerKind::LettuceBurger => "LettuceBurger",
            BurgerKind::BeefBurger => "BeefBurger",
            BurgerKind::BeefLettuceBurger => "BeefLettuceBurger",
        }
    }

    pub fn from_name(name: &str) -> Option<BurgerKind> {
        BurgerKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name.trim()))
    }
}

impl fmt::Display for BurgerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Penalty for serving anything that does not fulfil an active order.
pub const WRONG_SERVE_PENALTY: i32 = -10;
/// Penalty for letting an order expire.
pub const MISSED_ORDER_PENALTY: i32 = -10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CookState {
    Fresh,
    Cooking { ticks: u32 },
    WellDone { ticks_since_done: u32 },
    Overcooked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ItemKind {
    Bread,
    Lettuce { chop_progress: u8 },
    Beef { cook: CookState },
    Plate { contents: PlateContents },
    /// A plate carrying overcooked beef scraped out of a pan. It can only be
    /// binned at an ingredient station (or served, as a wrong dish).
    SpoiledPlate,
    FireExtinguisher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item {
    pub id: ItemId,
    pub kind: ItemKind,
}

impl Item {
    pub fn plate_contents(&self) -> Option<PlateContents> {
        match self.kind {
            ItemKind::Plate { contents } => Some(contents),
            _ => None,
        }
    }

    pub fn tag(&self) -> ItemTag {
        ItemTag::of(&self.kind)
    }
}

/// Coarse item category used in events and conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ItemTag {
    Bread,
    Lettuce,
    Beef,
    Plate,
    SpoiledPlate,
    FireExtinguisher,
}

impl ItemTag {
    pub fn of(kind: &ItemKind) -> ItemTag {
        match kind {
            ItemKind::Bread => ItemTag::Bread,
            ItemKind::Lettuce { .. } => ItemTag::Lettuce,
            ItemKind::Beef { .. } => ItemTag::Beef,
            ItemKind::Plate { .. } => ItemTag::Plate,
            ItemKind::SpoiledPlate => ItemTag::SpoiledPlate,
            ItemKind::FireExtinguisher => ItemTag::FireExtinguisher,
        }
    }
}
