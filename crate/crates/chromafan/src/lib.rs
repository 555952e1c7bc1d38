//! Color classification in a polar CIELAB AB plane.
//!
//! Pixels are converted to chroma radius and hue angle, sorted into twelve
//! categories by boundaries derived from a reference hue wheel, and named
//! as percentage blends of those categories with fuzzy memberships.

pub mod analysis;
pub mod category;
pub mod classifier;
pub mod colorspace;
pub mod error;
pub mod fuzzy;
pub mod knowledge;

pub use category::CategoryId;
pub use colorspace::{lab_to_polar, srgb_to_lab, srgb_to_polar, LabColor, PolarPixel, Rgb8};
pub use error::{Error, Result};
pub use knowledge::{ColorModel, PreparedModel};
