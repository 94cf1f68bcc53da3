use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use sbc_core::{Layer, RequirementRecord};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read dataset {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: field `{field}`: {message}")]
    Malformed { line: usize, field: String, message: String },
    #[error("duplicate question id {0}")]
    DuplicateId(u64),
}

fn malformed(line: usize, field: &str, message: impl Into<String>) -> DatasetError {
    DatasetError::Malformed { line, field: field.to_string(), message: message.into() }
}

/// Loads a dataset from JSON Lines or headered CSV (`id,layer,technology,
/// requirement`). Files ending in `.csv` are read as CSV; anything else is
/// read as JSON Lines unless its first non-blank character is not `{`.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<RequirementRecord>, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.into(), source })?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        || text.trim_start().chars().next().is_some_and(|c| c != '{');
    if is_csv {
        parse_csv(&text)
    } else {
        parse_jsonl(&text)
    }
}

pub fn parse_jsonl(text: &str) -> Result<Vec<RequirementRecord>, DatasetError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw).map_err(|e| malformed(line, "<row>", e.to_string()))?;
        let field = |name: &str| value.get(name).ok_or_else(|| malformed(line, name, "missing"));
        let id = field("id")?.as_u64().ok_or_else(|| malformed(line, "id", "expected a positive integer"))?;
        let text_field = |name: &str| -> Result<String, DatasetError> {
            field(name)?.as_str().map(str::to_owned).ok_or_else(|| malformed(line, name, "expected a string"))
        };
        let layer = text_field("layer")?;
        records.push(validate(line, id, &layer, text_field("technology")?, text_field("requirement")?)?);
    }
    check_unique(&records)?;
    Ok(records)
}

pub fn parse_csv(text: &str) -> Result<Vec<RequirementRecord>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::Headers).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| malformed(1, "<header>", e.to_string()))?.clone();
    let column =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| malformed(1, name, "missing column"));
    let (id_col, layer_col, tech_col, req_col) =
        (column("id")?, column("layer")?, column("technology")?, column("requirement")?);

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            malformed(line, "<row>", e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let get = |col: usize| row.get(col).unwrap_or("").to_string();
        let id = get(id_col)
            .trim()
            .parse::<u64>()
            .map_err(|e| malformed(line, "id", format!("expected a positive integer: {e}")))?;
        records.push(validate(line, id, &get(layer_col), get(tech_col), get(req_col))?);
    }
    check_unique(&records)?;
    Ok(records)
}

fn validate(
    line: usize,
    id: u64,
    layer: &str,
    technology: String,
    requirement: String,
) -> Result<RequirementRecord, DatasetError> {
    if id == 0 {
        return Err(malformed(line, "id", "must be strictly positive"));
    }
    let layer: Layer = layer.parse().map_err(|e: String| malformed(line, "layer", e))?;
    if technology.trim().is_empty() {
        return Err(malformed(line, "technology", "must not be empty"));
    }
    if requirement.trim().is_empty() {
        return Err(malformed(line, "requirement", "must not be empty"));
    }
    Ok(RequirementRecord { id, layer, technology, requirement })
}

fn check_unique(records: &[RequirementRecord]) -> Result<(), DatasetError> {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.id) {
            return Err(DatasetError::DuplicateId(r.id));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(name: &str, content: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        fs::write(&path, content).unwrap();
        (dir, path)
    }

    #[test]
    fn empty_file() {
        let (_d, path) = write("empty.jsonl", "");
        assert!(load_dataset(&path).unwrap().is_empty());
    }

    #[test]
    fn one_jsonl_row() {
        let (_d, path) = write(
            "one.jsonl",
            "{\"id\":1,\"layer\":\"DATA\",\"technology\":\"SQL\",\"requirement\":\"Create a user table\"}\n",
        );
        let records = load_dataset(&path).unwrap();
        assert_eq!(
            records,
            [RequirementRecord {
                id: 1,
                layer: Layer::Data,
                technology: "SQL".into(),
                requirement: "Create a user table".into()
            }]
        );
    }

    #[test]
    fn csv_rows_keep_file_order() {
        let (_d, path) = write(
            "d.csv",
            "id,layer,technology,requirement\n3,UI,React,\"Show a list, sorted\"\n1,LOGIC,Java,Compute tax\n",
        );
        let records = load_dataset(&path).unwrap();
        assert_eq!(records.iter().map(|r| r.id).collect::<Vec<_>>(), [3, 1]);
        assert_eq!(records[0].requirement, "Show a list, sorted");
    }

    #[test]
    fn csv_detected_without_extension() {
        let (_d, path) = write("d.txt", "id,layer,technology,requirement\n1,UI,React,Show it\n");
        assert_eq!(load_dataset(&path).unwrap().len(), 1);
    }

    #[test]
    fn malformed_rows_name_line_and_field() {
        let text = "{\"id\":1,\"layer\":\"UI\",\"technology\":\"React\",\"requirement\":\"ok\"}\n\
                    {\"id\":2,\"layer\":\"BACKEND\",\"technology\":\"Go\",\"requirement\":\"x\"}\n";
        match parse_jsonl(text) {
            Err(DatasetError::Malformed { line: 2, field, .. }) => assert_eq!(field, "layer"),
            other => panic!("{other:?}"),
        }
        match parse_jsonl("{\"id\":1,\"layer\":\"UI\",\"technology\":\"React\"}") {
            Err(DatasetError::Malformed { line: 1, field, .. }) => assert_eq!(field, "requirement"),
            other => panic!("{other:?}"),
        }
        match parse_jsonl("{\"id\":0,\"layer\":\"UI\",\"technology\":\"R\",\"requirement\":\"x\"}") {
            Err(DatasetError::Malformed { field, .. }) => assert_eq!(field, "id"),
            other => panic!("{other:?}"),
        }
        match parse_csv("id,layer,technology,requirement\n1,UI,React,ok\nx,UI,React,ok\n") {
            Err(DatasetError::Malformed { line: 3, field, .. }) => assert_eq!(field, "id"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_csv("id,layer,requirement\n"), Err(DatasetError::Malformed { .. })));
        assert!(matches!(parse_jsonl("{not json"), Err(DatasetError::Malformed { line: 1, .. })));
    }

    #[test]
    fn duplicate_ids() {
        let text = "{\"id\":4,\"layer\":\"UI\",\"technology\":\"R\",\"requirement\":\"a\"}\n\
                    {\"id\":4,\"layer\":\"UI\",\"technology\":\"R\",\"requirement\":\"b\"}\n";
        assert!(matches!(parse_jsonl(text), Err(DatasetError::DuplicateId(4))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_dataset("/nonexistent/data.jsonl"), Err(DatasetError::Io { .. })));
    }
}
