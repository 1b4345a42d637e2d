//! Kernel functions and the Gramian statistics behind the effective number of
//! distinct test locations.
//!
//! The effective count is `t * trace(G) / sum(G)` where `G` is the Gramian of
//! the observed inputs. Points that sit on top of each other share kernel mass,
//! so duplicates add entries to the off-diagonal sum without adding to the
//! count. [`GramianStats`] keeps the two sums so that adding a point costs
//! `O(t)` instead of rebuilding the `t x t` matrix.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// `exp(-|a - b|^2 / (2 width^2))`
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelSpecRepr")]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub width: f64,
}

#[derive(Deserialize)]
struct KernelSpecRepr {
    #[serde(default = "default_family")]
    family: KernelFamily,
    width: f64,
}

fn default_family() -> KernelFamily {
    KernelFamily::Gaussian
}

impl TryFrom<KernelSpecRepr> for KernelSpec {
    type Error = Error;

    fn try_from(r: KernelSpecRepr) -> Result<Self> {
        match r.family {
            KernelFamily::Gaussian => KernelSpec::gaussian(r.width),
        }
    }
}

impl KernelSpec {
    pub fn gaussian(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid("kernel width", format!("must be positive and finite, got {width}")));
        }
        Ok(Self {
            family: KernelFamily::Gaussian,
            width,
        })
    }

    /// Builds a Gaussian kernel from its squared width.
    pub fn gaussian_from_variance(variance: f64) -> Result<Self> {
        Self::gaussian(variance.sqrt())
    }

    /// Evaluates the kernel, checking dimensions.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        check_dim(a.len(), b.len())?;
        Ok(self.eval_unchecked(a, b))
    }

    /// Evaluates the kernel; callers guarantee `a.len() == b.len()`.
    #[inline]
    pub fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self.family {
            KernelFamily::Gaussian => {
                let d2 = squared_distance(a, b);
                (-d2 / (2.0 * self.width * self.width)).exp()
            }
        }
    }
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Running sums of the Gramian matrix of a dataset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GramianStats {
    pub trace_sum: f64,
    pub total_sum: f64,
    pub count: usize,
}

impl GramianStats {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Recomputes the statistics from scratch in `O(t^2)`.
    pub fn from_dataset(dataset: &Dataset, kernel: &KernelSpec) -> Self {
        let mut stats = Self::empty();
        for i in 0..dataset.len() {
            stats = stats.extended(dataset, i, kernel);
        }
        stats
    }

    /// Returns the statistics after appending `new_x` to `dataset`.
    ///
    /// `self` must describe `dataset` exactly; debug builds verify this by
    /// full recomputation for small datasets.
    pub fn update(&self, dataset: &Dataset, kernel: &KernelSpec, new_x: &[f64]) -> Result<Self> {
        check_dim(dataset.dim(), new_x.len())?;
        #[cfg(debug_assertions)]
        if dataset.len() <= 64 {
            let fresh = Self::from_dataset(dataset, kernel);
            debug_assert_eq!(fresh.count, self.count, "gramian stats out of sync with dataset");
            debug_assert!(
                (fresh.total_sum - self.total_sum).abs() <= 1e-9 * fresh.total_sum.max(1.0),
                "gramian stats out of sync with dataset"
            );
        }
        Ok(self.add_point(dataset.points().take(self.count), kernel, new_x))
    }

    fn extended(&self, dataset: &Dataset, i: usize, kernel: &KernelSpec) -> Self {
        self.add_point(dataset.points().take(i), kernel, dataset.point(i))
    }

    fn add_point<'a>(
        &self,
        existing: impl Iterator<Item = &'a [f64]>,
        kernel: &KernelSpec,
        new_x: &[f64],
    ) -> Self {
        let diag = kernel.eval_unchecked(new_x, new_x);
        let cross: f64 = existing.map(|p| kernel.eval_unchecked(p, new_x)).sum();
        Self {
            trace_sum: self.trace_sum + diag,
            total_sum: self.total_sum + diag + 2.0 * cross,
            count: self.count + 1,
        }
    }

    /// `t * trace / total`, or zero when no point has been observed.
    pub fn effective_locations(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.count as f64 * self.trace_sum / self.total_sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds1(xs: &[f64]) -> Dataset {
        Dataset::from_pairs(1, xs.iter().map(|&x| ([x], 0.0))).unwrap()
    }

    #[test]
    fn kernel_identity_and_one_width() {
        let k = KernelSpec::gaussian(0.1).unwrap();
        assert_eq!(k.eval(&[0.3, -2.0], &[0.3, -2.0]).unwrap(), 1.0);
        assert!((k.eval(&[0.0], &[0.1]).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn kernel_at_unit_distance_with_variance_005() {
        // exp(-10) = 4.539992976248485e-5
        let k = KernelSpec::gaussian_from_variance(0.05).unwrap();
        let v = k.eval(&[0.0], &[1.0]).unwrap();
        assert!((v - 4.539_992_976_248_485e-5).abs() < 1e-17);
    }

    #[test]
    fn kernel_rejects_bad_inputs() {
        assert!(KernelSpec::gaussian(0.0).is_err());
        assert!(KernelSpec::gaussian(f64::NAN).is_err());
        let k = KernelSpec::gaussian(1.0).unwrap();
        assert!(matches!(k.eval(&[0.0], &[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kernel_json_requires_positive_width() {
        assert!(serde_json::from_str::<KernelSpec>(r#"{"width": -1.0}"#).is_err());
        let k: KernelSpec = serde_json::from_str(r#"{"family":"gaussian","width": 2.0}"#).unwrap();
        assert_eq!(k.width, 2.0);
    }

    #[test]
    fn gramian_first_point() {
        let k = KernelSpec::gaussian(0.1).unwrap();
        let s = GramianStats::empty().update(&ds1(&[]), &k, &[3.0]).unwrap();
        assert_eq!((s.trace_sum, s.total_sum, s.count), (1.0, 1.0, 1));
    }

    #[test]
    fn gramian_duplicate_point() {
        let k = KernelSpec::gaussian(0.1).unwrap();
        let ds = ds1(&[0.0]);
        let s = GramianStats::from_dataset(&ds, &k).update(&ds, &k, &[0.0]).unwrap();
        assert_eq!((s.trace_sum, s.total_sum, s.count), (2.0, 4.0, 2));
        assert_eq!(s.effective_locations(), 1.0);
    }

    #[test]
    fn gramian_far_apart_points() {
        let k = KernelSpec::gaussian(0.1).unwrap();
        let ds = ds1(&[0.0, 10.0]);
        let s = GramianStats::from_dataset(&ds, &k).update(&ds, &k, &[20.0]).unwrap();
        assert_eq!(s.count, 3);
        assert!((s.total_sum - 3.0).abs() < 1e-300);
        assert!((s.effective_locations() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn effective_locations_of_empty_and_single() {
        assert_eq!(GramianStats::empty().effective_locations(), 0.0);
        let k = KernelSpec::gaussian(0.5).unwrap();
        let s = GramianStats::from_dataset(&ds1(&[1.5]), &k);
        assert_eq!(s.effective_locations(), 1.0);
    }

    #[test]
    fn identical_points_collapse_to_one() {
        let k = KernelSpec::gaussian(0.5).unwrap();
        for n in [2, 5, 17] {
            let s = GramianStats::from_dataset(&ds1(&vec![0.7; n]), &k);
            assert!((s.effective_locations() - 1.0).abs() < 1e-12);
        }
    }
}
