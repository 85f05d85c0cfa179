//! File loading and space resolution.
//!
//! A space reference that is a path is resolved relative to the directory
//! of the file that contains it.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::Value;
use ultrameasure::io::{self, MeasureJson, SpaceRef};
use ultrameasure::{FinUltrametricSpace, Measure};

use crate::error::{CliError, CliResult};

pub type Space = Arc<FinUltrametricSpace>;

pub fn read_value(path: &Path) -> CliResult<Value> {
    read(path)
}

pub fn read<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::json(path, e))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn space(path: &Path) -> CliResult<Space> {
    Ok(io::space_from_json(&read(path)?)?)
}

/// Resolves a reference found inside `referrer`.
pub fn space_ref(r: &SpaceRef, referrer: &Path) -> CliResult<Space> {
    match r {
        SpaceRef::Inline(s) => Ok(io::space_from_json(s)?),
        SpaceRef::Path(p) => space(&base_dir(referrer).join(p)),
    }
}

/// Picks the explicit space when given, after checking that any space the
/// file carries agrees with it.
pub fn pick_space(
    own: Option<&SpaceRef>,
    referrer: &Path,
    explicit: Option<&Space>,
) -> CliResult<Space> {
    let own = own.map(|r| space_ref(r, referrer)).transpose()?;
    match (own, explicit) {
        (Some(o), Some(e)) if *o != **e => Err(ultrameasure::Error::MismatchedSpaces.into()),
        (_, Some(e)) => Ok(e.clone()),
        (Some(o), None) => Ok(o),
        (None, None) => Err(CliError::Input(format!(
            "{}: no space given inline, by path, or with --space",
            referrer.display()
        ))),
    }
}

pub fn measure(path: &Path, explicit: Option<&Space>) -> CliResult<Measure> {
    let json: MeasureJson = read(path)?;
    let space = pick_space(json.space.as_ref(), path, explicit)?;
    Ok(io::measure_from_json(&json, space)?)
}

/// Measures that must share one space: the first resolved space is used
/// as the explicit space for the rest.
pub fn measures_on_one_space(
    paths: &[PathBuf],
    explicit: Option<&Space>,
) -> CliResult<Vec<Measure>> {
    let mut shared = explicit.cloned();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let m = measure(p, shared.as_ref())?;
        shared.get_or_insert_with(|| m.space().clone());
        out.push(m);
    }
    Ok(out)
}

/// Label tuples given as a JSON array or a comma-separated list.
pub fn labels(arg: &str) -> CliResult<Vec<String>> {
    let trimmed = arg.trim();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| CliError::Input(format!("bad label array {arg:?}: {e}")))
    } else if trimmed.is_empty() {
        Ok(Vec::new())
    } else {
        Ok(trimmed.split(',').map(|s| s.trim().to_string()).collect())
    }
}

pub fn indices(space: &FinUltrametricSpace, labels: &[String]) -> CliResult<Vec<usize>> {
    Ok(labels
        .iter()
        .map(|l| space.index_of(l))
        .collect::<ultrameasure::Result<_>>()?)
}
