//! Loading of closed-schema JSON documents.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::config::Override;

/// Reads `path`, applies `overrides` and deserializes the result.
///
/// Syntax errors carry the line and column of the file. Schema errors carry
/// the path of the offending field; unknown fields are errors.
pub fn load<T: DeserializeOwned>(path: &Path, overrides: &[Override]) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text, overrides).with_context(|| format!("in {}", path.display()))
}

/// As [`load`], from text.
pub fn parse<T: DeserializeOwned>(text: &str, overrides: &[Override]) -> Result<T> {
    if overrides.is_empty() {
        let de = &mut serde_json::Deserializer::from_str(text);
        return serde_path_to_error::deserialize(de).map_err(|e| schema_error(e.path(), e.inner()));
    }
    let mut doc: Value = serde_json::from_str(text)
        .map_err(|e| anyhow!("line {}, column {}: {e}", e.line(), e.column()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    serde_path_to_error::deserialize(doc).map_err(|e| schema_error(e.path(), e.inner()))
}

fn schema_error(path: &serde_path_to_error::Path, e: &serde_json::Error) -> anyhow::Error {
    let field = path.to_string();
    let at = if e.line() > 0 { format!(" (line {}, column {})", e.line(), e.column()) } else { String::new() };
    if field == "." {
        anyhow!("{e}{at}")
    } else {
        anyhow!("field `{field}`: {e}{at}")
    }
}

/// Sets `o.path` in `doc`, creating missing objects along the way. Array
/// elements are addressed by index.
pub fn apply_override(doc: &mut Value, o: &Override) -> Result<()> {
    let mut node = doc;
    for (depth, key) in o.path.iter().enumerate() {
        let last = depth + 1 == o.path.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(key.clone(), o.value.clone());
                    return Ok(());
                }
                map.entry(key.clone()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let i: usize = key.parse().with_context(|| format!("`{key}` indexes an array"))?;
                let len = items.len();
                let slot = items.get_mut(i).ok_or_else(|| anyhow!("index {i} outside an array of length {len}"))?;
                if last {
                    *slot = o.value.clone();
                    return Ok(());
                }
                slot
            }
            _ => bail!("override `{}`: `{key}` is below a scalar", o.path.join(".")),
        };
    }
    Ok(())
}

/// Top-level `*.json` files of `dir`, sorted by file name.
pub fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    out.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(out)
}

/// File name of `path`, for reports that must not depend on the working directory.
pub fn display_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Deserialize, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct Inner {
        n: usize,
    }

    #[derive(Debug, Deserialize, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        name: String,
        inner: Inner,
        #[serde(default)]
        list: Vec<f64>,
    }

    fn o(s: &str) -> Override {
        s.parse().unwrap()
    }

    #[test]
    fn unknown_field_names_its_path() {
        let e = parse::<Doc>(r#"{"name": "a", "inner": {"n": 1, "m": 2}}"#, &[]).unwrap_err().to_string();
        assert!(e.contains("inner.m") && e.contains("unknown field"), "{e}");
    }

    #[test]
    fn syntax_error_has_line_and_column() {
        let e = format!("{:#}", parse::<Doc>("{\n  \"name\": \"a\",\n  \"inner\": {\"n\": }\n}", &[o("name=b")]).unwrap_err());
        assert!(e.contains("line 3"), "{e}");
    }

    #[test]
    fn overrides_patch_and_type_check() {
        let text = r#"{"name": "a", "inner": {"n": 1}, "list": [1, 2]}"#;
        let d: Doc = parse(text, &[o("inner.n=7"), o("list.1=5.5"), o("name=b")]).unwrap();
        assert_eq!(d, Doc { name: "b".into(), inner: Inner { n: 7 }, list: vec![1.0, 5.5] });
        assert!(parse::<Doc>(text, &[o("inner.n=seven")]).is_err());
        assert!(parse::<Doc>(text, &[o("inner.k=1")]).is_err());
        assert!(parse::<Doc>(text, &[o("list.9=1")]).is_err());
        assert!(parse::<Doc>(text, &[o("name.x=1")]).is_err());
    }
}
