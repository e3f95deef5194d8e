//! Piecewise-constant functions on a time grid.
//!
//! A [`StepFunction`] is right-continuous: it takes `values[i]` on
//! `[knots[i], knots[i+1])` and 0 before the first knot. Cumulative
//! hazard functions, survival curves and censoring-survival curves are
//! all represented this way; survival-type curves carry a leading knot
//! at t = 0 with value 1 so that they evaluate to 1 before the first
//! event (observed times are strictly positive).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Build from a strictly increasing knot grid and matching values.
    ///
    /// Panics if the lengths differ, a knot is not finite, or the grid
    /// is not strictly increasing. Callers construct these from sorted
    /// unique event times, so violations are programming errors.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(knots.len(), values.len(), "knots/values length mismatch");
        for w in knots.windows(2) {
            assert!(w[0] < w[1], "knots must be strictly increasing");
        }
        assert!(
            knots.iter().chain(values.iter()).all(|v| v.is_finite()),
            "knots and values must be finite"
        );
        StepFunction { knots, values }
    }

    /// The identically-zero function (no knots).
    pub fn zero() -> Self {
        StepFunction {
            knots: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Value at `t` (right-continuous; 0 before the first knot).
    pub fn eval(&self, t: f64) -> f64 {
        match self.knots.partition_point(|&k| k <= t) {
            0 => 0.0,
            i => self.values[i - 1],
        }
    }

    /// Left limit at `t`: the value just before `t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        match self.knots.partition_point(|&k| k < t) {
            0 => 0.0,
            i => self.values[i - 1],
        }
    }

    /// Final value (0 for the empty function).
    pub fn last_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Survival curve `exp(-H(t))` for a cumulative hazard `H`.
    ///
    /// The result gains a knot at 0 with value 1 so it evaluates to 1
    /// before the first event time.
    pub fn survival_from_chf(chf: &StepFunction) -> StepFunction {
        let mut knots = Vec::with_capacity(chf.knots.len() + 1);
        let mut values = Vec::with_capacity(chf.knots.len() + 1);
        knots.push(0.0);
        values.push(1.0);
        for (k, v) in chf.knots.iter().zip(&chf.values) {
            knots.push(*k);
            values.push((-v).exp());
        }
        StepFunction { knots, values }
    }

    /// Pointwise mean of several step functions on the union grid.
    ///
    /// Returns the zero function for an empty input.
    pub fn average<'a, I>(fns: I) -> StepFunction
    where
        I: IntoIterator<Item = &'a StepFunction>,
        I::IntoIter: Clone,
    {
        let iter = fns.into_iter();
        let count = iter.clone().count();
        if count == 0 {
            return StepFunction::zero();
        }
        let mut grid: Vec<f64> = iter.clone().flat_map(|f| f.knots.iter().copied()).collect();
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
        grid.dedup();
        let mut sums = vec![0.0; grid.len()];
        for f in iter {
            // Merge walk: f's value at each union knot.
            let mut j = 0usize;
            for (i, &t) in grid.iter().enumerate() {
                while j < f.knots.len() && f.knots[j] <= t {
                    j += 1;
                }
                if j > 0 {
                    sums[i] += f.values[j - 1];
                }
            }
        }
        let n = count as f64;
        let values = sums.into_iter().map(|s| s / n).collect();
        StepFunction {
            knots: grid,
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_is_right_continuous_and_zero_before_first_knot() {
        let f = StepFunction::new(vec![1.0, 2.0], vec![0.5, 0.8]);
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(1.5), 0.5);
        assert_eq!(f.eval(2.0), 0.8);
        assert_eq!(f.eval(99.0), 0.8);
    }

    #[test]
    fn left_limit() {
        let f = StepFunction::new(vec![1.0, 2.0], vec![0.5, 0.8]);
        assert_eq!(f.eval_left(1.0), 0.0);
        assert_eq!(f.eval_left(1.5), 0.5);
        assert_eq!(f.eval_left(2.0), 0.5);
        assert_eq!(f.eval_left(3.0), 0.8);
    }

    #[test]
    fn zero_chf_gives_unit_survival() {
        let s = StepFunction::survival_from_chf(&StepFunction::zero());
        assert_eq!(s.eval(0.0), 1.0);
        assert_eq!(s.eval(1e6), 1.0);
    }

    #[test]
    fn survival_transform_applies_exp() {
        let h = StepFunction::new(vec![1.0], vec![2.0]);
        let s = StepFunction::survival_from_chf(&h);
        assert_eq!(s.eval(0.5), 1.0);
        assert!((s.eval(1.5) - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn average_on_union_grid() {
        let a = StepFunction::new(vec![1.0], vec![1.0]);
        let b = StepFunction::new(vec![2.0], vec![3.0]);
        let m = StepFunction::average([&a, &b]);
        assert_eq!(m.knots(), &[1.0, 2.0]);
        assert_eq!(m.eval(1.5), 0.5); // (1 + 0) / 2
        assert_eq!(m.eval(2.5), 2.0); // (1 + 3) / 2
    }

    #[test]
    fn average_of_nothing_is_zero() {
        let m = StepFunction::average(std::iter::empty::<&StepFunction>());
        assert!(m.is_empty());
        assert_eq!(m.eval(1.0), 0.0);
    }

    #[test]
    #[should_panic(expected = "strictly increasing")]
    fn rejects_unsorted_knots() {
        StepFunction::new(vec![2.0, 1.0], vec![0.1, 0.2]);
    }
}
