//! Corpus manifests: a CSV with header `path,label` and exactly two labels.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use trapframe_core::Class;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ManifestError {
    #[error("manifest header must be `path,label`")]
    MissingHeader,
    #[error("path listed twice: {0}")]
    DuplicatePath(String),
    #[error("manifest needs exactly two labels, found {0:?}")]
    NotTwoClasses(Vec<String>),
    #[error("manifest lists no files")]
    EmptyManifest,
    #[error("manifest line {line}: {message}")]
    Parse { line: u64, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: String,
    pub label: String,
    pub class: Class,
}

/// Validated manifest. Labels sort lexicographically; the first is class 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
    labels: [String; 2],
}

impl Manifest {
    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn labels(&self) -> &[String; 2] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn label_of(&self, class: Class) -> &str {
        &self.labels[class.index()]
    }

    /// Resolves an entry path against the manifest's directory.
    pub fn resolve(&self, base: &Path, entry: &ManifestEntry) -> PathBuf {
        let p = Path::new(&entry.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }
}

/// Maps two distinct label strings to classes (sorted order).
pub fn class_labels<'a, I: IntoIterator<Item = &'a str>>(labels: I) -> Result<[String; 2], ManifestError> {
    let mut distinct: Vec<String> = labels.into_iter().map(str::to_string).collect();
    distinct.sort();
    distinct.dedup();
    match <[String; 2]>::try_from(distinct) {
        Ok(pair) => Ok(pair),
        Err(found) => Err(ManifestError::NotTwoClasses(found)),
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(parse_error(&e)),
        None => return Err(ManifestError::MissingHeader),
    };
    if header.len() != 2 || &header[0] != "path" || &header[1] != "label" {
        return Err(ManifestError::MissingHeader);
    }
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for record in records {
        let record = record.map_err(|e| parse_error(&e))?;
        if record.len() != 2 || record[0].is_empty() || record[1].is_empty() {
            return Err(ManifestError::Parse {
                line: record.position().map_or(0, |p| p.line()),
                message: "expected a non-empty path and label".into(),
            });
        }
        if !seen.insert(record[0].to_string()) {
            return Err(ManifestError::DuplicatePath(record[0].to_string()));
        }
        rows.push((record[0].to_string(), record[1].to_string()));
    }
    if rows.is_empty() {
        return Err(ManifestError::EmptyManifest);
    }
    let labels = class_labels(rows.iter().map(|(_, l)| l.as_str()))?;
    let entries = rows
        .into_iter()
        .map(|(path, label)| {
            let class = if label == labels[0] { Class::One } else { Class::Two };
            ManifestEntry { path, label, class }
        })
        .collect();
    Ok(Manifest { entries, labels })
}

fn parse_error(e: &csv::Error) -> ManifestError {
    ManifestError::Parse {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}
