use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// The twelve color categories. Declaration order is the canonical order
/// used for tie-breaking and for report layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryId {
    Green,
    Yellow,
    LightOrange,
    DeepOrange,
    Red,
    Pink,
    Purple,
    Ultramarine,
    Blue,
    Teal,
    Brown,
    Neutral,
}

impl CategoryId {
    pub const ALL: [CategoryId; 12] = [
        CategoryId::Green,
        CategoryId::Yellow,
        CategoryId::LightOrange,
        CategoryId::DeepOrange,
        CategoryId::Red,
        CategoryId::Pink,
        CategoryId::Purple,
        CategoryId::Ultramarine,
        CategoryId::Blue,
        CategoryId::Teal,
        CategoryId::Brown,
        CategoryId::Neutral,
    ];

    /// Hue classes in counterclockwise order of the AB plane, starting
    /// just below the positive A axis.
    pub const HUE_RING: [CategoryId; 10] = [
        CategoryId::Pink,
        CategoryId::Red,
        CategoryId::DeepOrange,
        CategoryId::LightOrange,
        CategoryId::Yellow,
        CategoryId::Green,
        CategoryId::Teal,
        CategoryId::Blue,
        CategoryId::Ultramarine,
        CategoryId::Purple,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<CategoryId> {
        Self::ALL.get(i).copied()
    }

    pub fn is_hue(self) -> bool {
        !matches!(self, CategoryId::Brown | CategoryId::Neutral)
    }

    pub fn name(self) -> &'static str {
        match self {
            CategoryId::Green => "Green",
            CategoryId::Yellow => "Yellow",
            CategoryId::LightOrange => "Light Orange",
            CategoryId::DeepOrange => "Deep Orange",
            CategoryId::Red => "Red",
            CategoryId::Pink => "Pink",
            CategoryId::Purple => "Purple",
            CategoryId::Ultramarine => "Ultramarine",
            CategoryId::Blue => "Blue",
            CategoryId::Teal => "Teal",
            CategoryId::Brown => "Brown",
            CategoryId::Neutral => "Neutral",
        }
    }

    /// File-name friendly form, e.g. `light_orange`.
    pub fn slug(self) -> String {
        self.name().to_ascii_lowercase().replace(' ', "_")
    }

    /// Display color for composite label images and swatches.
    pub fn display_rgb(self) -> [u8; 3] {
        match self {
            CategoryId::Green => [40, 160, 60],
            CategoryId::Yellow => [240, 220, 40],
            CategoryId::LightOrange => [250, 170, 40],
            CategoryId::DeepOrange => [240, 100, 20],
            CategoryId::Red => [210, 30, 40],
            CategoryId::Pink => [240, 120, 180],
            CategoryId::Purple => [140, 50, 170],
            CategoryId::Ultramarine => [70, 50, 200],
            CategoryId::Blue => [30, 110, 220],
            CategoryId::Teal => [0, 160, 160],
            CategoryId::Brown => [130, 80, 40],
            CategoryId::Neutral => [128, 128, 128],
        }
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown color category '{0}'")]
pub struct UnknownCategory(pub String);

impl FromStr for CategoryId {
    type Err = UnknownCategory;

    /// Case, spaces, hyphens and underscores are ignored, and the older
    /// names Yellow-Orange, Red-Orange and Achromatic are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_'))
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let cat = match key.as_str() {
            "green" => CategoryId::Green,
            "yellow" => CategoryId::Yellow,
            "lightorange" | "yelloworange" => CategoryId::LightOrange,
            "deeporange" | "redorange" => CategoryId::DeepOrange,
            "red" => CategoryId::Red,
            "pink" => CategoryId::Pink,
            "purple" => CategoryId::Purple,
            "ultramarine" => CategoryId::Ultramarine,
            "blue" => CategoryId::Blue,
            "teal" => CategoryId::Teal,
            "brown" => CategoryId::Brown,
            "neutral" | "achromatic" => CategoryId::Neutral,
            _ => return Err(UnknownCategory(s.to_string())),
        };
        Ok(cat)
    }
}

impl Serialize for CategoryId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for CategoryId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
