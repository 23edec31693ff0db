//! The versioned wrapper around every JSON report.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub report: T,
    pub notes: Vec<String>,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(command: &'static str, input: &[u8], name: Option<String>, report: T, notes: Vec<String>) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest: digest(input),
            name,
            report,
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn digest(input: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(input)))
}
