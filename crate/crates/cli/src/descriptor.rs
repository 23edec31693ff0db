//! Descriptor files: TOML with a `family` tag, the family's parameters, and
//! optional `name` and `notes`.
//!
//! Rationals are strings such as `"-3/4"` (plain integers are accepted),
//! matrices are `"[[a, b], [c, d]]"` row-major, vectors are `["x", "y"]`.

use hirsch3::families::GroupDescriptor;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(flatten)]
    pub descriptor: GroupDescriptor,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_descriptor(text: &str, origin: &str) -> Result<DescriptorFile, CliError> {
    let file: DescriptorFile = toml::from_str(text).map_err(|e| {
        let msg = e.message().trim().to_string();
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                CliError::Input(format!("{origin}:{line}:{col}: {msg}"))
            }
            None => CliError::Input(format!("{origin}: {msg}")),
        }
    })?;
    file.descriptor
        .validate()
        .map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    Ok(file)
}

pub fn read_descriptor(path: &str) -> Result<(DescriptorFile, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let file = parse_descriptor(text, path)?;
    Ok((file, bytes))
}
