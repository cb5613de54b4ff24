//! Box-plot summaries.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot summarize an empty sample")]
pub struct EmptyInput;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotStats {
    pub median: f64,
    pub lower_quartile: f64,
    pub upper_quartile: f64,
    /// Most extreme observations within 1.5 IQR of the box.
    pub whisker_low: f64,
    pub whisker_high: f64,
    /// Observations beyond the whiskers, in ascending order.
    pub outliers: Vec<f64>,
}

impl BoxplotStats {
    pub fn iqr(&self) -> f64 {
        self.upper_quartile - self.lower_quartile
    }
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `q * (len - 1)`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats, EmptyInput> {
    if values.is_empty() {
        return Err(EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let lower_quartile = quantile(&sorted, 0.25);
    let upper_quartile = quantile(&sorted, 0.75);
    let reach = 1.5 * (upper_quartile - lower_quartile);
    let (fence_low, fence_high) = (lower_quartile - reach, upper_quartile + reach);
    let inside = |x: &&f64| (fence_low..=fence_high).contains(*x);
    Ok(BoxplotStats {
        median: quantile(&sorted, 0.5),
        lower_quartile,
        upper_quartile,
        whisker_low: *sorted.iter().find(inside).expect("the median lies inside"),
        whisker_high: *sorted.iter().rev().find(inside).expect("the median lies inside"),
        outliers: sorted.iter().copied().filter(|x| !inside(&x)).collect(),
    })
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample() {
        let s = boxplot_stats(&[5.0; 4]).unwrap();
        assert_eq!((s.median, s.iqr()), (5.0, 0.0));
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn one_to_nine() {
        let v: Vec<f64> = (1..=9).map(f64::from).collect();
        let s = boxplot_stats(&v).unwrap();
        assert_eq!((s.median, s.lower_quartile, s.upper_quartile), (5.0, 3.0, 7.0));
        assert_eq!((s.whisker_low, s.whisker_high), (1.0, 9.0));
    }

    #[test]
    fn far_point_is_an_outlier() {
        let s = boxplot_stats(&[1.0, 1.0, 1.0, 1.0, 100.0]).unwrap();
        assert_eq!(s.outliers, vec![100.0]);
        assert_eq!(s.whisker_high, 1.0);
    }

    #[test]
    fn interpolated_quartiles() {
        let s = boxplot_stats(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!((s.lower_quartile, s.median, s.upper_quartile), (1.75, 2.5, 3.25));
        assert_eq!(boxplot_stats(&[]), Err(EmptyInput));
    }
}
