//! Feature CSV: header `id,label,<feature names...>`, one row per ROI.

use std::io::{Read, Write};

use mammotex_core::{Dataset, Sample};

use crate::error::{CliError, Result};

/// One extracted ROI.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub label: String,
    pub values: Vec<f64>,
}

/// Writes rows sorted by id. Values use the shortest decimal form that
/// parses back to the same `f64`.
pub fn write_features<W: Write>(out: W, names: &[String], rows: &[FeatureRow]) -> Result<()> {
    let mut sorted: Vec<&FeatureRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Internal(format!("writing CSV: {e}"));
    w.write_record(
        ["id", "label"]
            .into_iter()
            .chain(names.iter().map(String::as_str)),
    )
    .map_err(io)?;
    for row in sorted {
        if row.values.len() != names.len() {
            return Err(CliError::Internal(format!(
                "row {} has {} values for {} columns",
                row.id,
                row.values.len(),
                names.len()
            )));
        }
        let mut record = vec![row.id.clone(), row.label.clone()];
        record.extend(row.values.iter().map(f64::to_string));
        w.write_record(&record).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Internal(format!("writing CSV: {e}")))?;
    Ok(())
}

pub fn dataset_to_rows(data: &Dataset) -> Vec<FeatureRow> {
    data.samples()
        .iter()
        .map(|s| FeatureRow {
            id: s.id.clone(),
            label: s.label.clone(),
            values: s.features.clone(),
        })
        .collect()
}

/// Reads a feature CSV into a dataset whose classes are the distinct labels.
pub fn read_dataset<R: Read>(input: R) -> Result<Dataset> {
    let bad = |msg: String| CliError::FeatureCsv(msg);
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.len() < 3 || &header[0] != "id" || &header[1] != "label" {
        return Err(bad(
            "header must start with id,label and name at least one feature".into(),
        ));
    }
    let names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
    let mut samples = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let row = i + 2;
        let features = record
            .iter()
            .skip(2)
            .zip(&names)
            .map(|(field, name)| match field.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(bad(format!(
                    "row {row}, column {name}: {field:?} is not a finite number"
                ))),
            })
            .collect::<Result<Vec<f64>>>()?;
        samples.push(Sample::new(&record[0], features, &record[1]));
    }
    Ok(Dataset::new(names, samples)?)
}
