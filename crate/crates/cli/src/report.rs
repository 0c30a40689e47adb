//! Report emission: a machine-readable TOML document plus a
//! human-readable summary, written atomically (temp file then rename).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::RunError;

#[derive(Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub config: ResolvedConfig,
    pub pass: bool,
    pub result: R,
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| RunError::Io {
        what: format!("creating {}: {e}", dir.display()),
    })?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .and_then(|s| s.to_str())
            .unwrap_or("report")
    ));
    fs::write(&tmp, contents).map_err(|e| RunError::Io {
        what: format!("writing {}: {e}", tmp.display()),
    })?;
    fs::rename(&tmp, path).map_err(|e| RunError::Io {
        what: format!("renaming into {}: {e}", path.display()),
    })?;
    Ok(())
}

pub fn emit<R: Serialize>(
    out_dir: &Path,
    report: &Report<R>,
    summary: &str,
    csv: Option<(&str, String)>,
) -> Result<(), RunError> {
    let toml_text = toml::to_string_pretty(report).map_err(|e| RunError::Io {
        what: format!("serializing report: {e}"),
    })?;
    write_atomic(&out_dir.join("report.toml"), &toml_text)?;
    write_atomic(&out_dir.join("summary.txt"), summary)?;
    if let Some((name, data)) = csv {
        write_atomic(&out_dir.join(name), &data)?;
    }
    Ok(())
}

pub fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row);
        s.push('\n');
    }
    s
}

pub fn out_path(base: &Path, command: &str) -> PathBuf {
    base.join(command)
}
