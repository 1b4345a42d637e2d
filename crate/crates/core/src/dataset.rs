use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Ordered observations `(x_i, y_i)` with a fixed input dimension.
///
/// Points are stored row-major in one contiguous buffer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DatasetRepr", into = "DatasetRepr")]
pub struct Dataset {
    dim: usize,
    coords: Vec<f64>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension", "must be at least 1"));
        }
        Ok(Self {
            dim,
            coords: Vec::new(),
            values: Vec::new(),
        })
    }

    pub fn from_pairs<P: AsRef<[f64]>>(dim: usize, pairs: impl IntoIterator<Item = (P, f64)>) -> Result<Self> {
        let mut ds = Self::new(dim)?;
        for (x, y) in pairs {
            ds.push(x.as_ref(), y)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, x: &[f64], y: f64) -> Result<()> {
        check_dim(self.dim, x.len())?;
        self.coords.extend_from_slice(x);
        self.values.push(y);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[f64], f64)> + '_ {
        self.points().zip(self.values.iter().copied())
    }
}

#[derive(Serialize, Deserialize)]
struct DatasetRepr {
    dimension: usize,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl From<Dataset> for DatasetRepr {
    fn from(ds: Dataset) -> Self {
        DatasetRepr {
            dimension: ds.dim,
            points: ds.points().map(<[f64]>::to_vec).collect(),
            values: ds.values,
        }
    }
}

impl TryFrom<DatasetRepr> for Dataset {
    type Error = Error;

    fn try_from(repr: DatasetRepr) -> Result<Self> {
        if repr.points.len() != repr.values.len() {
            return Err(Error::Config(format!(
                "dataset has {} points but {} values",
                repr.points.len(),
                repr.values.len()
            )));
        }
        Dataset::from_pairs(repr.dimension, repr.points.iter().zip(repr.values))
    }
}
