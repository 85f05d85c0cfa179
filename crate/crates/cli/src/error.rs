use std::path::{Path, PathBuf};

use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Domain(#[from] ultrameasure::Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn json(path: &Path, err: serde_json::Error) -> Self {
        CliError::Json {
            path: path.to_path_buf(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Io { path, source } => json!({
                "kind": "io",
                "file": path.display().to_string(),
                "message": source.to_string(),
            }),
            CliError::Json {
                path,
                line,
                column,
                message,
            } => json!({
                "kind": "json",
                "file": path.display().to_string(),
                "line": line,
                "column": column,
                "message": message,
            }),
            CliError::Domain(e) => json!({
                "kind": "domain",
                "variant": variant_name(e),
                "message": e.to_string(),
            }),
            CliError::Input(m) => json!({ "kind": "input", "message": m }),
        };
        json!({ "error": body })
    }
}

fn variant_name(e: &ultrameasure::Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

pub type CliResult<T> = Result<T, CliError>;
