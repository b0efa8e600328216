use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::candidate_source::ComponentId;

/// Statement counts for one model's belief output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    pub file: String,
    pub media_type: String,
    /// The model's encoding of each base statement.
    pub encoding_statements: u64,
    /// Plain base triples asserted alongside the encoding.
    pub asserted_triples: u64,
    /// Labels, preferred labels and types from fields 7 to 12.
    pub auxiliary_triples: u64,
    /// Provenance triples anchored at the attachment terms.
    pub metadata_triples: u64,
    /// Everything written, in any graph.
    pub total_statements: u64,
}

impl ModelStats {
    /// Statements excluding provenance metadata.
    pub fn without_metadata(&self) -> u64 {
        self.encoding_statements + self.asserted_triples + self.auxiliary_triples
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub kind: String,
    /// Data rows, excluding blank and header lines.
    pub rows_read: u64,
    pub rows_skipped: u64,
    pub beliefs_converted: u64,
    pub beliefs_with_iri_object: u64,
    /// Default-graph statements across all belief outputs.
    pub triples_emitted: u64,
    /// Named-graph statements across all belief outputs.
    pub quads_emitted: u64,
    pub ontology_triples: u64,
    pub prov_ontology_triples: u64,
    pub dataset_metadata_triples: u64,
    pub models: BTreeMap<String, ModelStats>,
    pub executions_by_component: BTreeMap<String, u64>,
    pub diagnostics: u64,
    pub promotion_warnings: u64,
    pub wall_time_ms: u64,
}

impl RunStats {
    pub fn new(kind: &str) -> Self {
        RunStats {
            kind: kind.to_owned(),
            rows_read: 0,
            rows_skipped: 0,
            beliefs_converted: 0,
            beliefs_with_iri_object: 0,
            triples_emitted: 0,
            quads_emitted: 0,
            ontology_triples: 0,
            prov_ontology_triples: 0,
            dataset_metadata_triples: 0,
            models: BTreeMap::new(),
            executions_by_component: ComponentId::ALL.iter().map(|c| (c.name().to_owned(), 0)).collect(),
            diagnostics: 0,
            promotion_warnings: 0,
            wall_time_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("stats serialize");
        s.push('\n');
        s
    }
}
