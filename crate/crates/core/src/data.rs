use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` points in `R^d` together with `k` binary properties.
///
/// Labels are stored property-major: `labels[i][j]` is the value (±1) of
/// property `i` on point `j`. Property indices are zero-based in the library;
/// the command line uses one-based numbering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPointSet {
    points: Vec<Vec<f64>>,
    labels: Vec<Vec<i8>>,
}

impl LabeledPointSet {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<Vec<i8>>) -> Result<Self> {
        let set = Self { points, labels };
        set.validate()?;
        Ok(set)
    }

    /// Checks every structural invariant and names the first failure.
    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 {
            return Err(Error::InvariantViolation("point set is empty".into()));
        }
        if self.labels.is_empty() {
            return Err(Error::InvariantViolation("no properties given".into()));
        }
        let d = self.points[0].len();
        if d == 0 {
            return Err(Error::InvariantViolation("dimension must be at least 1".into()));
        }
        for (j, p) in self.points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::InvariantViolation(format!(
                    "point {j} has {} coordinates, expected {d}",
                    p.len()
                )));
            }
            if let Some(c) = p.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvariantViolation(format!(
                    "point {j}, coordinate {c} is not finite"
                )));
            }
        }
        for (i, row) in self.labels.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvariantViolation(format!(
                    "label row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|&a| a != 1 && a != -1) {
                return Err(Error::InvariantViolation(format!(
                    "label row {i}, column {j} is {}, expected -1 or +1",
                    row[j]
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[Vec<i8>] {
        &self.labels
    }

    pub fn label(&self, property: usize, point: usize) -> i8 {
        self.labels[property][point]
    }

    /// Indices of the points with label −1 and +1 for `property`.
    pub fn split_indices(&self, property: usize) -> (Vec<usize>, Vec<usize>) {
        let row = &self.labels[property];
        let neg = (0..self.n()).filter(|&j| row[j] < 0).collect();
        let pos = (0..self.n()).filter(|&j| row[j] > 0).collect();
        (neg, pos)
    }

    /// `(P_−, P_+)` for `property`.
    pub fn split(&self, property: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let (neg, pos) = self.split_indices(property);
        (self.gather(&neg), self.gather(&pos))
    }

    pub fn gather(&self, idx: &[usize]) -> Vec<Vec<f64>> {
        idx.iter().map(|&j| self.points[j].clone()).collect()
    }

    /// Label tuple of point `j` across all properties.
    pub fn label_tuple(&self, j: usize) -> Vec<i8> {
        self.labels.iter().map(|row| row[j]).collect()
    }

    /// Distinct label tuples, sorted.
    pub fn label_census(&self) -> BTreeSet<Vec<i8>> {
        (0..self.n()).map(|j| self.label_tuple(j)).collect()
    }

    /// Same labels, new coordinates (e.g. after a projection).
    pub fn with_points(&self, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(points, self.labels.clone())
    }

    pub fn property_count_check(&self, property: usize) -> Result<()> {
        if property >= self.k() {
            return Err(Error::BadParams(format!(
                "property index {} out of range (k = {})",
                property + 1,
                self.k()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_labels() {
        let err = LabeledPointSet::new(vec![vec![0.0], vec![1.0]], vec![vec![1, 0]]).unwrap_err();
        match err {
            Error::InvariantViolation(msg) => assert!(msg.contains("row 0, column 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_and_census() {
        let s = LabeledPointSet::new(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![vec![-1, 1, 1], vec![1, 1, -1]],
        )
        .unwrap();
        assert_eq!(s.split_indices(0), (vec![0], vec![1, 2]));
        assert_eq!(s.label_census().len(), 3);
    }
}
