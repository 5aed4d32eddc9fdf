//! Feature cache: `#` header comments, then `path,label,<features...>` rows
//! with every value written to 17 significant digits so it reads back exactly.

use std::fmt::Write as _;
use std::path::Path;

use trapframe_core::Dataset;

use crate::error::{AppError, AppResult};
use crate::manifest::class_labels;

/// A dataset together with the file and label text of every row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub paths: Vec<String>,
    pub labels: Vec<String>,
    pub data: Dataset,
}

impl FeatureTable {
    pub fn write_csv(&self, header: &str) -> String {
        let mut out = String::from(header);
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut head = vec!["path".to_string(), "label".to_string()];
        head.extend(self.data.feature_names().iter().cloned());
        w.write_record(&head).expect("in-memory write");
        for (i, row) in self.data.rows().enumerate() {
            let mut rec = vec![self.paths[i].clone(), self.labels[i].clone()];
            rec.extend(row.iter().map(|v| format_value(*v)));
            w.write_record(&rec).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 input"));
        out
    }

    pub fn read_csv(text: &str, path: &Path) -> AppResult<Self> {
        let err = |message: String| AppError::Cache {
            path: path.display().to_string(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let head = reader.headers().map_err(|e| err(e.to_string()))?.clone();
        if head.len() < 3 || &head[0] != "path" || &head[1] != "label" {
            return Err(err("header must start with `path,label` and list features".into()));
        }
        let names: Vec<String> = head.iter().skip(2).map(str::to_string).collect();
        let (mut paths, mut labels, mut values) = (Vec::new(), Vec::new(), Vec::new());
        for rec in reader.records() {
            let rec = rec.map_err(|e| err(e.to_string()))?;
            paths.push(rec[0].to_string());
            labels.push(rec[1].to_string());
            for field in rec.iter().skip(2) {
                values.push(
                    field
                        .parse::<f64>()
                        .map_err(|_| err(format!("row {}: `{field}` is not a number", paths.len())))?,
                );
            }
        }
        let pair = class_labels(labels.iter().map(String::as_str)).map_err(|e| err(e.to_string()))?;
        let classes = labels
            .iter()
            .map(|l| {
                if *l == pair[0] {
                    trapframe_core::Class::One
                } else {
                    trapframe_core::Class::Two
                }
            })
            .collect();
        let data = Dataset::new(names, values, classes).map_err(|e| err(e.to_string()))?;
        Ok(Self { paths, labels, data })
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::read_csv(&text, path)
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_value(v: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "{v:.16e}");
    s
}
