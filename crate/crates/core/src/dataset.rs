//! Labeled samples and their CSV form.
//!
//! CSV layout: one column per ambient coordinate (`x0`, `x1`, …) followed by
//! `label`. Floats are written with 17 significant digits.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::geometry::SpherePoint;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<P> {
    points: Vec<P>,
    labels: Vec<f64>,
}

impl<P> LabeledDataset<P> {
    pub fn new(points: Vec<P>, labels: Vec<f64>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        if let Some(i) = labels.iter().position(|y| !y.is_finite()) {
            return Err(Error::invalid(format!("label {i} is not finite")));
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, f64)> {
        self.points.iter().zip(self.labels.iter().copied())
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyDataset)
        } else {
            Ok(())
        }
    }
}

/// Formats a float with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ambient coordinates of a point, for CSV export.
pub trait Coordinates {
    fn coordinates(&self) -> &[f64];
}

impl Coordinates for SpherePoint {
    fn coordinates(&self) -> &[f64] {
        self.coords()
    }
}

impl Coordinates for Vec<f64> {
    fn coordinates(&self) -> &[f64] {
        self
    }
}

impl<P: Coordinates> LabeledDataset<P> {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let width = self.points.first().map_or(0, |p| p.coordinates().len());
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
        header.push("label".into());
        w.write_record(&header)?;
        for (p, y) in self.iter() {
            let mut row: Vec<String> = p.coordinates().iter().map(|&c| format_f64(c)).collect();
            row.push(format_f64(y));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn read_rows<R: Read>(reader: R) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(reader);
    let width = r.headers()?.len();
    if width < 2 {
        return Err(Error::invalid(
            "dataset csv needs coordinate columns and a label column",
        ));
    }
    let (mut points, mut labels) = (Vec::new(), Vec::new());
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|field| field.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::invalid(format!("row {}: {e}", line + 1)))?;
        let (label, coords) = values
            .split_last()
            .expect("csv reader enforces record width");
        labels.push(*label);
        points.push(coords.to_vec());
    }
    Ok((points, labels))
}

impl LabeledDataset<SpherePoint> {
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let (points, labels) = read_rows(reader)?;
        let points = points
            .into_iter()
            .map(SpherePoint::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, labels)
    }
}

impl LabeledDataset<Vec<f64>> {
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let (points, labels) = read_rows(reader)?;
        Self::new(points, labels)
    }
}
