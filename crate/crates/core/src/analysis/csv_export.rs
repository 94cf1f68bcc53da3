use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use super::{model_names, ConsolidatedRow};
use crate::error::AnalysisError;
use crate::record::EvaluationResult;

const RESULT_COLUMNS: [&str; 14] = [
    "model",
    "iteration",
    "question_id",
    "technology",
    "input_requirements",
    "generated_code",
    "reverse_generated_requirements",
    "final_accuracy_score",
    "semantic_similarity",
    "BLEU_score",
    "completeness_score",
    "missing_elements",
    "extra_elements",
    "error",
];

const LIST_SEPARATOR: &str = ";";

fn fmt_score(score: Option<f64>) -> String {
    score.map(|s| format!("{s:.6}")).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

/// Row sets that export to a headered CSV.
pub trait CsvRows {
    fn write_csv<W: Write>(&self, w: W) -> Result<(), AnalysisError>;
}

impl CsvRows for [ConsolidatedRow] {
    fn write_csv<W: Write>(&self, w: W) -> Result<(), AnalysisError> {
        write_consolidated_csv(self, w)
    }
}

impl CsvRows for [EvaluationResult] {
    fn write_csv<W: Write>(&self, w: W) -> Result<(), AnalysisError> {
        write_results_csv(self, w)
    }
}

/// Writes `rows` as CSV to `path`, replacing any existing file.
pub fn export_csv<R: CsvRows + ?Sized>(rows: &R, path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    let mut file = BufWriter::new(File::create(path)?);
    rows.write_csv(&mut file)?;
    file.flush()?;
    Ok(())
}

/// Columns: `question_id`, then one column per model in name order. Scores use
/// six fixed decimals; a model without a score for a question gets an empty
/// cell.
pub fn write_consolidated_csv<W: Write>(rows: &[ConsolidatedRow], w: W) -> Result<(), AnalysisError> {
    let models = model_names(rows);
    let mut out = writer(w);
    out.write_record(std::iter::once("question_id").chain(models.iter().map(String::as_str)))?;
    for row in rows {
        let mut record = vec![row.question_id.to_string()];
        record.extend(models.iter().map(|m| fmt_score(row.per_model_max.get(m).copied())));
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_consolidated_csv<R: Read>(r: R) -> Result<Vec<ConsolidatedRow>, AnalysisError> {
    let mut reader = ReaderBuilder::new().from_reader(r);
    let headers = reader.headers()?.clone();
    if headers.get(0) != Some("question_id") {
        return Err(AnalysisError::CsvField { line: 1, message: "first column must be question_id".into() });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let question_id = parse_field(record.get(0).unwrap_or(""), line, "question_id")?;
        let mut per_model_max = BTreeMap::new();
        for (model, cell) in headers.iter().zip(record.iter()).skip(1) {
            if !cell.is_empty() {
                per_model_max.insert(model.to_string(), parse_field(cell, line, model)?);
            }
        }
        rows.push(ConsolidatedRow { question_id, per_model_max });
    }
    Ok(rows)
}

/// One row per result with the result-file field names as header. Keyword
/// lists are joined with `;`.
pub fn write_results_csv<W: Write>(results: &[EvaluationResult], w: W) -> Result<(), AnalysisError> {
    let mut out = writer(w);
    out.write_record(RESULT_COLUMNS)?;
    for r in results {
        out.write_record([
            r.model.clone(),
            r.iteration.to_string(),
            r.question_id.to_string(),
            r.technology.clone(),
            r.input_requirements.clone(),
            r.generated_code.clone(),
            r.reverse_generated_requirements.clone(),
            fmt_score(r.final_accuracy_score),
            fmt_score(r.semantic_similarity),
            fmt_score(r.bleu_score),
            fmt_score(r.completeness_score),
            r.missing_elements.join(LIST_SEPARATOR),
            r.extra_elements.join(LIST_SEPARATOR),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(r: R) -> Result<Vec<EvaluationResult>, AnalysisError> {
    let mut reader = ReaderBuilder::new().from_reader(r);
    let headers = reader.headers()?;
    if headers.iter().ne(RESULT_COLUMNS) {
        return Err(AnalysisError::CsvField { line: 1, message: "unexpected header".into() });
    }
    let mut results = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let score = |i: usize| -> Result<Option<f64>, AnalysisError> {
            match field(i) {
                "" => Ok(None),
                s => parse_field(s, line, RESULT_COLUMNS[i]).map(Some),
            }
        };
        let list = |i: usize| -> Vec<String> {
            match field(i) {
                "" => Vec::new(),
                s => s.split(LIST_SEPARATOR).map(str::to_owned).collect(),
            }
        };
        results.push(EvaluationResult {
            model: field(0).to_owned(),
            iteration: parse_field(field(1), line, "iteration")?,
            question_id: parse_field(field(2), line, "question_id")?,
            technology: field(3).to_owned(),
            input_requirements: field(4).to_owned(),
            generated_code: field(5).to_owned(),
            reverse_generated_requirements: field(6).to_owned(),
            final_accuracy_score: score(7)?,
            semantic_similarity: score(8)?,
            bleu_score: score(9)?,
            completeness_score: score(10)?,
            missing_elements: list(11),
            extra_elements: list(12),
            error: Some(field(13).to_owned()).filter(|e| !e.is_empty()),
        });
    }
    Ok(results)
}

fn parse_field<T: std::str::FromStr>(cell: &str, line: u64, column: &str) -> Result<T, AnalysisError>
where
    T::Err: std::fmt::Display,
{
    cell.trim().parse().map_err(|e| AnalysisError::CsvField { line, message: format!("{column}: {e}") })
}

#[cfg(test)]
mod tests {
    use super::super::consolidate_max;
    use super::super::fixtures::result;
    use super::*;
    use proptest::prelude::*;

    fn to_string(rows: &[ConsolidatedRow]) -> String {
        let mut buf = Vec::new();
        write_consolidated_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_rows_header_only() {
        assert_eq!(to_string(&[]), "question_id\n");
    }

    #[test]
    fn three_questions_two_models() {
        let rs: Vec<_> =
            (1..=3).flat_map(|q| [result("beta", 1, q, Some(0.5)), result("alpha", 1, q, Some(0.25))]).collect();
        let text = to_string(&consolidate_max(&rs));
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), "question_id,alpha,beta");
        assert_eq!(text.lines().nth(1).unwrap(), "1,0.250000,0.500000");
    }

    #[test]
    fn absent_model_is_empty_cell() {
        let rows = consolidate_max(&[result("a", 1, 1, Some(1.0)), result("b", 1, 2, Some(0.125))]);
        assert_eq!(to_string(&rows), "question_id,a,b\n1,1.000000,\n2,,0.125000\n");
        assert_eq!(read_consolidated_csv(to_string(&rows).as_bytes()).unwrap(), rows);
    }

    #[test]
    fn results_csv_quotes_and_round_trips() {
        let mut r = result("m,1", 2, 3, Some(0.5));
        r.generated_code = "fn main() {\n    println!(\"hi\");\n}".into();
        r.missing_elements = vec!["table".into(), "user".into()];
        let failed = result("m,1", 2, 4, None);
        let rs = vec![r, failed];
        let mut first = Vec::new();
        write_results_csv(&rs, &mut first).unwrap();
        let text = String::from_utf8(first.clone()).unwrap();
        assert!(text.starts_with("model,iteration,question_id,"));
        assert!(text.contains("\"m,1\""));
        let parsed = read_results_csv(first.as_slice()).unwrap();
        assert_eq!(parsed, rs);
        let mut second = Vec::new();
        write_results_csv(&parsed, &mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_consolidated_csv("id,a\n1,0.5\n".as_bytes()).is_err());
        assert!(matches!(
            read_consolidated_csv("question_id,a\n1,abc\n".as_bytes()),
            Err(AnalysisError::CsvField { line: 2, .. })
        ));
        assert!(read_results_csv("model\nx\n".as_bytes()).is_err());
    }

    #[test]
    fn export_to_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let rows = consolidate_max(&[result("a", 1, 1, Some(0.5))]);
        export_csv(rows.as_slice(), &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "question_id,a\n1,0.500000\n");
        export_csv(rows.as_slice(), &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "question_id,a\n1,0.500000\n");
        assert!(export_csv(rows.as_slice(), dir.path().join("no/such/dir.csv")).is_err());
    }

    proptest! {
        #[test]
        fn consolidated_round_trip_is_byte_identical(
            cells in proptest::collection::vec(
                (1u64..50, proptest::option::of(0.0..=1.0f64), proptest::option::of(0.0..=1.0f64)), 0..10)
        ) {
            let mut rs = Vec::new();
            for (q, a, b) in &cells {
                if let Some(a) = a { rs.push(result("a", 1, *q, Some(*a))); }
                if let Some(b) = b { rs.push(result("b", 1, *q, Some(*b))); }
            }
            let first = to_string(&consolidate_max(&rs));
            let reparsed = read_consolidated_csv(first.as_bytes()).unwrap();
            let second = to_string(&reparsed);
            prop_assert_eq!(&first, &second);
            for (orig, back) in consolidate_max(&rs).iter().zip(&reparsed) {
                for (model, score) in &orig.per_model_max {
                    prop_assert!((back.per_model_max[model] - score).abs() <= 5e-7);
                }
            }
        }
    }
}
