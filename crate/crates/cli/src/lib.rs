//! Command-line driver crate: configuration, suite execution, and report
//! emission for the transfer-matrix verification toolkit.

pub mod config;
pub mod draws;
pub mod report;
pub mod suites;

use serde::Serialize;

/// Catalogue entry used by the `list` command.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogueEntry {
    pub id: &'static str,
    pub summary: &'static str,
}

/// The suite catalogue in stable order.
pub fn catalogue() -> Vec<CatalogueEntry> {
    suites::CATALOGUE
        .iter()
        .map(|s| CatalogueEntry { id: s.as_str(), summary: s.summary() })
        .collect()
}

/// The catalogue as a JSON document (schema-versioned like the report).
pub fn catalogue_json() -> String {
    #[derive(Serialize)]
    struct Doc {
        schema: u32,
        count: usize,
        suites: Vec<CatalogueEntry>,
    }
    let entries = catalogue();
    let doc = Doc { schema: 1, count: entries.len(), suites: entries };
    let mut text = serde_json::to_string_pretty(&doc).expect("catalogue serializes");
    text.push('\n');
    text
}
