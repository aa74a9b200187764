//! Dataset manifests.
//!
//! ```json
//! { "name": "lol-eval", "mode": "paired",
//!   "entries": [ { "low": "low/1.png", "gt": "high/1.png" } ] }
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Low-light inputs with ground truth; scored with PSNR, SSIM and FSIM.
    Paired,
    /// Low-light inputs only; scored with NIQE.
    Unpaired,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Paired => "paired",
            Mode::Unpaired => "unpaired",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    /// Path as written in the manifest; used as the image id in reports.
    pub id: String,
    pub low: PathBuf,
    pub gt: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub name: String,
    pub mode: Mode,
    pub niqe_model_path: Option<PathBuf>,
    pub entries: Vec<ManifestEntry>,
}

/// Reads and validates a manifest, checking that every referenced file exists.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| tagc::Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let manifest = parse_manifest(&text, base).map_err(|(field, message)| HarnessError::Manifest {
        path: path.to_path_buf(),
        field,
        message,
    })?;

    let mut missing = Vec::new();
    let mut check = |p: &PathBuf| {
        if !p.is_file() {
            missing.push(p.clone());
        }
    };
    manifest.niqe_model_path.iter().for_each(&mut check);
    for entry in &manifest.entries {
        check(&entry.low);
        entry.gt.iter().for_each(&mut check);
    }
    if !missing.is_empty() {
        return Err(HarnessError::MissingFiles {
            manifest: path.to_path_buf(),
            missing,
        });
    }
    Ok(manifest)
}

type FieldError = (String, String);

fn field_err(field: impl Into<String>, message: impl Into<String>) -> FieldError {
    (field.into(), message.into())
}

fn string_field(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Option<String>, FieldError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) if s.is_empty() => Err(field_err(at, "must not be empty")),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(field_err(at, "expected a string")),
    }
}

fn parse_manifest(text: &str, base: &Path) -> Result<DatasetManifest, FieldError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| field_err("<root>", format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| field_err("<root>", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "mode" | "niqe_model_path" | "entries") {
            return Err(field_err(key.as_str(), "unknown field"));
        }
    }

    let name = string_field(obj, "name", "name")?.ok_or_else(|| field_err("name", "required"))?;
    let mode = match string_field(obj, "mode", "mode")?.as_deref() {
        Some("paired") => Mode::Paired,
        Some("unpaired") => Mode::Unpaired,
        Some(other) => return Err(field_err("mode", format!("expected \"paired\" or \"unpaired\", got {other:?}"))),
        None => return Err(field_err("mode", "required")),
    };
    let niqe_model_path = string_field(obj, "niqe_model_path", "niqe_model_path")?.map(|p| base.join(p));
    if mode == Mode::Unpaired && niqe_model_path.is_none() {
        return Err(field_err("niqe_model_path", "required for unpaired datasets"));
    }

    let raw_entries = match obj.get("entries") {
        Some(Value::Array(items)) => items,
        Some(_) => return Err(field_err("entries", "expected an array")),
        None => return Err(field_err("entries", "required")),
    };
    if raw_entries.is_empty() {
        return Err(field_err("entries", "must not be empty"));
    }
    let mut entries = Vec::with_capacity(raw_entries.len());
    for (i, item) in raw_entries.iter().enumerate() {
        let at = |key: &str| format!("entries[{i}].{key}");
        let item = item
            .as_object()
            .ok_or_else(|| field_err(format!("entries[{i}]"), "expected an object"))?;
        if let Some(key) = item.keys().find(|k| !matches!(k.as_str(), "low" | "gt")) {
            return Err(field_err(at(key), "unknown field"));
        }
        let low = string_field(item, "low", &at("low"))?.ok_or_else(|| field_err(at("low"), "required"))?;
        let gt = string_field(item, "gt", &at("gt"))?;
        match (mode, &gt) {
            (Mode::Paired, None) => return Err(field_err(at("gt"), "required for paired datasets")),
            (Mode::Unpaired, Some(_)) => {
                return Err(field_err(at("gt"), "not allowed for unpaired datasets"))
            }
            _ => {}
        }
        entries.push(ManifestEntry {
            low: base.join(&low),
            gt: gt.map(|g| base.join(g)),
            id: low,
        });
    }

    Ok(DatasetManifest {
        name,
        mode,
        niqe_model_path,
        entries,
    })
}
