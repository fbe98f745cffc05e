//! JSON reports. The digest is the SHA-256 of the canonical JSON of the
//! property, outcome, witness and result, so a replay that reproduces the
//! verdict reproduces the digest.

use std::collections::BTreeMap;

use finitopos_core::presheaf::Presheaf;
use finitopos_core::verdict::{Outcome, Verdict, Witness};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// The schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub property: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub examined: u64,
    pub inconclusive: u64,
}

/// A computed presheaf: labels per object and its canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultData {
    pub carriers: BTreeMap<String, Vec<String>>,
    pub text: String,
}

impl ResultData {
    pub fn new(x: &Presheaf, text: String) -> Self {
        let c = x.base();
        let carriers = c
            .objects()
            .map(|o| (c.obj_name(o).to_string(), x.set(o).labels().to_vec()))
            .collect();
        ResultData { carriers, text }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub bounds: BTreeMap<String, u64>,
    pub verdict: VerdictSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub corpus_stats: CorpusStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultData>,
    pub digest: String,
}

#[derive(Serialize)]
struct DigestInput<'a> {
    property: &'a str,
    outcome: Outcome,
    witness: &'a Option<Witness>,
    result: &'a Option<ResultData>,
}

/// SHA-256 over the canonical (sorted-key, compact) JSON of the verdict content.
pub fn digest(property: &str, outcome: Outcome, witness: &Option<Witness>, result: &Option<ResultData>) -> String {
    let input = DigestInput {
        property,
        outcome,
        witness,
        result,
    };
    // going through Value sorts every object's keys
    let value = serde_json::to_value(&input).expect("report content serializes");
    hex::encode(Sha256::digest(value.to_string().as_bytes()))
}

impl Report {
    pub fn new(command: &str, v: &Verdict, result: Option<ResultData>) -> Self {
        let digest = digest(&v.property, v.outcome, &v.witness, &result);
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            bounds: v.bounds.clone(),
            verdict: VerdictSummary {
                property: v.property.clone(),
                outcome: v.outcome,
                notes: v.stats.notes.clone(),
            },
            witness: v.witness.clone(),
            corpus_stats: CorpusStats {
                examined: v.stats.examined,
                inconclusive: v.stats.inconclusive,
            },
            result,
            digest,
        }
    }

    /// The digest recomputed from the stored content.
    pub fn expected_digest(&self) -> String {
        digest(&self.verdict.property, self.verdict.outcome, &self.witness, &self.result)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let r: Report = serde_json::from_str(text).map_err(|e| format!("not a report: {e}"))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {}", r.schema_version));
        }
        Ok(r)
    }
}
