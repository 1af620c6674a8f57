//! Persistence and rendering: versioned JSON documents, check reports and
//! SVG slice figures.

pub mod json;
pub mod report;
pub mod svg;

pub use json::{FanDocument, JsonQ, FORMAT_VERSION};
pub use report::CheckReport;
pub use svg::{render, Panel};
