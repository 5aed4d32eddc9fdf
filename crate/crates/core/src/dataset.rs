use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Binary class label. Class 1 wins every tie in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Class {
    One,
    Two,
}

impl Class {
    pub const BOTH: [Class; 2] = [Class::One, Class::Two];

    /// `+1` for class 1, `-1` for class 2.
    pub fn sign(self) -> f64 {
        match self {
            Class::One => 1.0,
            Class::Two => -1.0,
        }
    }

    pub fn from_sign(value: f64) -> Self {
        if value >= 0.0 {
            Class::One
        } else {
            Class::Two
        }
    }

    pub fn other(self) -> Self {
        match self {
            Class::One => Class::Two,
            Class::Two => Class::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Class::One => 0,
            Class::Two => 1,
        }
    }
}

/// Feature matrix (rows = clips) with one binary label per row.
///
/// Construction checks that every value is finite and that each class has at
/// least two rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<Class>,
}

impl Dataset {
    /// `values` is row-major with `names.len()` columns.
    pub fn new(names: Vec<String>, values: Vec<f64>, labels: Vec<Class>) -> Result<Self> {
        let cols = names.len();
        if cols == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if values.len() != cols * labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} values do not fill {} rows of {} columns",
                values.len(),
                labels.len(),
                cols
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {:?}",
                pos / cols,
                names[pos % cols]
            )));
        }
        for class in Class::BOTH {
            let n = labels.iter().filter(|&&l| l == class).count();
            if n < 2 {
                return Err(Error::InvalidDataset(format!(
                    "class {:?} has {} rows, at least 2 required",
                    class, n
                )));
            }
        }
        Ok(Self {
            names,
            values,
            labels,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(names: &[&str], rows: &[R], labels: Vec<Class>) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * names.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != names.len() {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    found: r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), values, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.n_features();
        &self.values[i * c..(i + 1) * c]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_features())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownFeature(name.into()))
    }

    /// Row indices belonging to `class`, ascending.
    pub fn class_indices(&self, class: Class) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.labels[i] == class).collect()
    }

    pub fn class_count(&self, class: Class) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }

    /// Values of column `j` for rows of `class`.
    pub fn class_column(&self, class: Class, j: usize) -> Vec<f64> {
        self.rows()
            .zip(&self.labels)
            .filter(|(_, &l)| l == class)
            .map(|(r, _)| r[j])
            .collect()
    }

    pub fn select_rows(&self, indices: &[usize]) -> Result<Dataset> {
        let mut values = Vec::with_capacity(indices.len() * self.n_features());
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset::new(self.names.clone(), values, labels)
    }

    pub fn select_columns(&self, columns: &[usize]) -> Result<Dataset> {
        if columns.is_empty() {
            return Err(Error::InvalidDataset("no columns selected".into()));
        }
        let names = columns.iter().map(|&j| self.names[j].clone()).collect();
        let values = self
            .rows()
            .flat_map(|r| columns.iter().map(move |&j| r[j]))
            .collect();
        Dataset::new(names, values, self.labels.clone())
    }

    /// Same features with replacement labels (e.g. a label permutation).
    pub fn with_labels(&self, labels: Vec<Class>) -> Result<Dataset> {
        Dataset::new(self.names.clone(), self.values.clone(), labels)
    }

    /// Applies `f` to every row, producing a dataset with new column names.
    pub fn map_rows<F>(&self, names: Vec<String>, mut f: F) -> Result<Dataset>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let mut values = Vec::with_capacity(self.n_rows() * names.len());
        for r in self.rows() {
            let out = f(r)?;
            if out.len() != names.len() {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    found: out.len(),
                });
            }
            values.extend(out);
        }
        Dataset::new(names, values, self.labels.clone())
    }
}
