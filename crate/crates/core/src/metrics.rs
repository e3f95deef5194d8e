//! Survival-model evaluation: Harrell's C-index over permissible pairs,
//! Kaplan-Meier and censoring-survival estimators, IPCW-weighted Brier
//! score / prediction error curves, and the integrated Brier score.

use serde::Serialize;

use crate::error::MetricsError;
use crate::step::StepFunction;

/// One evaluated subject: predicted risk, observed time, status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subject {
    pub risk: f64,
    pub time: f64,
    pub status: u8,
}

impl Subject {
    pub fn new(risk: f64, time: f64, status: u8) -> Self {
        Subject { risk, time, status }
    }
}

/// Summed ensemble cumulative hazard over an event-time grid; the risk
/// ordering used by the concordance index.
pub fn risk_score(chf: &StepFunction, event_times: &[f64]) -> f64 {
    event_times.iter().map(|&t| chf.eval(t)).sum()
}

/// Harrell's concordance index on a 0-100 scale.
///
/// All subject pairs are enumerated; a pair is not permissible when the
/// shorter of two distinct survival times is censored, or when the
/// times are tied and neither subject had the event. Each permissible
/// pair contributes a concordance value of 1, 0.5 or 0:
///
/// - distinct times: 1 if the earlier death has the higher risk, 0.5 on
///   a risk tie, 0 otherwise;
/// - tied times, both events: 1 on a risk tie, 0.5 otherwise;
/// - tied times, one event: 1 if the event subject has the higher risk,
///   0.5 otherwise.
pub fn c_index(subjects: &[Subject]) -> Result<f64, MetricsError> {
    let mut concordance = 0.0f64;
    let mut permissible = 0u64;
    for i in 0..subjects.len() {
        for j in (i + 1)..subjects.len() {
            let (a, b) = (&subjects[i], &subjects[j]);
            if let Some(value) = pair_concordance(a, b) {
                concordance += value;
                permissible += 1;
            }
        }
    }
    if permissible == 0 {
        return Err(MetricsError::NoPermissiblePairs);
    }
    Ok(100.0 * concordance / permissible as f64)
}

fn pair_concordance(a: &Subject, b: &Subject) -> Option<f64> {
    if a.time != b.time {
        // Orient: `early` is the subject with the shorter observed time.
        let (early, late) = if a.time < b.time { (a, b) } else { (b, a) };
        if early.status == 0 {
            return None; // shorter survival time is censored
        }
        Some(if early.risk > late.risk {
            1.0
        } else if early.risk == late.risk {
            0.5
        } else {
            0.0
        })
    } else {
        match (a.status, b.status) {
            (0, 0) => None, // tied times, no event on either side
            (1, 1) => Some(if a.risk == b.risk { 1.0 } else { 0.5 }),
            _ => {
                let (event, censored) = if a.status == 1 { (a, b) } else { (b, a) };
                Some(if event.risk > censored.risk { 1.0 } else { 0.5 })
            }
        }
    }
}

/// Kaplan-Meier product-limit survival estimate.
///
/// The returned curve has a knot at 0 with value 1, then one knot per
/// unique event time.
pub fn kaplan_meier(subjects: &[(f64, u8)]) -> StepFunction {
    let mut event_times: Vec<f64> = subjects
        .iter()
        .filter(|(_, s)| *s == 1)
        .map(|(t, _)| *t)
        .collect();
    event_times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    event_times.dedup();

    let mut knots = Vec::with_capacity(event_times.len() + 1);
    let mut values = Vec::with_capacity(event_times.len() + 1);
    knots.push(0.0);
    values.push(1.0);
    let mut survival = 1.0;
    for &t in &event_times {
        let deaths = subjects
            .iter()
            .filter(|(ti, s)| *ti == t && *s == 1)
            .count() as f64;
        let at_risk = subjects.iter().filter(|(ti, _)| *ti >= t).count() as f64;
        survival *= 1.0 - deaths / at_risk;
        knots.push(t);
        values.push(survival);
    }
    StepFunction::new(knots, values)
}

/// Censoring-survival estimator G: the product-limit estimate with the
/// censoring indicator flipped, so censorings play the role of events.
pub fn censoring_survival(subjects: &[(f64, u8)]) -> StepFunction {
    let flipped: Vec<(f64, u8)> = subjects.iter().map(|&(t, s)| (t, 1 - s)).collect();
    kaplan_meier(&flipped)
}

/// Brier score at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrierAtTime {
    pub error: f64,
    /// Subjects dropped because their IPCW weight required dividing by
    /// a zero censoring-survival value.
    pub n_dropped: usize,
}

/// IPCW-weighted Brier score at time `t`.
///
/// `preds` pairs each subject's predicted survival curve with its
/// observed `(time, status)`. Weights: a subject who died at `T <= t`
/// weighs `1 / G(T-)`; a subject still under observation at `t` weighs
/// `1 / G(t)`; a subject censored by `t` weighs 0. Subjects whose
/// required `G` evaluation is 0 are dropped from the average and
/// counted.
pub fn brier_score(
    preds: &[(&StepFunction, f64, u8)],
    censoring: &StepFunction,
    t: f64,
) -> Result<BrierAtTime, MetricsError> {
    if preds.is_empty() {
        return Err(MetricsError::EmptyTestSet);
    }
    if !t.is_finite() {
        return Err(MetricsError::NonFinite("evaluation time"));
    }
    let mut sum = 0.0;
    let mut dropped = 0usize;
    let mut retained = 0usize;
    for &(survival, time, status) in preds {
        let at_risk = time > t;
        let s_hat = survival.eval(t);
        if at_risk {
            let g = censoring.eval(t);
            if g <= 0.0 {
                dropped += 1;
                continue;
            }
            sum += (1.0 - s_hat) * (1.0 - s_hat) / g;
        } else if status == 1 {
            let g = censoring.eval_left(time);
            if g <= 0.0 {
                dropped += 1;
                continue;
            }
            sum += s_hat * s_hat / g;
        }
        // Censored before t: weight 0, still counted in the average.
        retained += 1;
    }
    if retained == 0 {
        return Err(MetricsError::EmptyTestSet);
    }
    Ok(BrierAtTime {
        error: sum / retained as f64,
        n_dropped: dropped,
    })
}

/// Prediction error over a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionErrorCurve {
    pub times: Vec<f64>,
    pub errors: Vec<f64>,
    /// Total weight-zero drops across all grid points.
    pub n_dropped: usize,
}

/// Brier score at every grid time.
pub fn pec(
    preds: &[(&StepFunction, f64, u8)],
    censoring: &StepFunction,
    grid: &[f64],
) -> Result<PredictionErrorCurve, MetricsError> {
    if grid.is_empty() {
        return Err(MetricsError::EmptyGrid);
    }
    let mut errors = Vec::with_capacity(grid.len());
    let mut dropped = 0usize;
    for &t in grid {
        let b = brier_score(preds, censoring, t)?;
        errors.push(b.error);
        dropped += b.n_dropped;
    }
    Ok(PredictionErrorCurve {
        times: grid.to_vec(),
        errors,
        n_dropped: dropped,
    })
}

/// Integrated Brier score: the piecewise-linear interpolant of the
/// curve, integrated over `[0, tau]` and divided by `tau`.
///
/// Before the first grid point the curve is extended flat at its first
/// value; `tau` must not exceed the last grid time.
pub fn ibs(curve: &PredictionErrorCurve, tau: f64) -> Result<f64, MetricsError> {
    if curve.times.is_empty() {
        return Err(MetricsError::EmptyGrid);
    }
    let last = *curve.times.last().unwrap();
    if tau > last {
        return Err(MetricsError::TauBeyondGrid { tau, last });
    }
    if !(tau > 0.0) {
        return Err(MetricsError::NonFinite("tau must be positive"));
    }
    let mut integral = 0.0;
    // Flat extension on [0, t_0].
    let first_t = curve.times[0].min(tau);
    integral += curve.errors[0] * first_t;
    for i in 1..curve.times.len() {
        let (t0, t1) = (curve.times[i - 1], curve.times[i]);
        let (e0, e1) = (curve.errors[i - 1], curve.errors[i]);
        if tau <= t0 {
            break;
        }
        let hi = tau.min(t1);
        // Trapezoid from t0 to hi on the segment (t0,e0)-(t1,e1).
        let e_hi = if t1 > t0 {
            e0 + (e1 - e0) * (hi - t0) / (t1 - t0)
        } else {
            e1
        };
        integral += 0.5 * (e0 + e_hi) * (hi - t0);
    }
    Ok(integral / tau)
}

/// Aggregate evaluation of one model on one test set.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub c_index: f64,
    pub ibs: f64,
    pub tau: f64,
    pub pec: Vec<PecPoint>,
    pub n_dropped_weight_zero: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PecPoint {
    pub t: f64,
    pub e: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn single_concordant_pair() {
        let s = [Subject::new(2.0, 1.0, 1), Subject::new(1.0, 2.0, 1)];
        assert_eq!(c_index(&s).unwrap(), 100.0);
    }

    #[test]
    fn equal_risks_distinct_times_give_half() {
        let s = [Subject::new(1.0, 1.0, 1), Subject::new(1.0, 2.0, 1)];
        assert_eq!(c_index(&s).unwrap(), 50.0);
    }

    #[test]
    fn censored_shorter_time_is_not_permissible() {
        let s = [Subject::new(2.0, 1.0, 0), Subject::new(1.0, 2.0, 1)];
        assert!(matches!(
            c_index(&s),
            Err(MetricsError::NoPermissiblePairs)
        ));
    }

    #[test]
    fn tied_times_case_table() {
        // Both events, tied risks: concordance 1.
        let s = [Subject::new(1.0, 5.0, 1), Subject::new(1.0, 5.0, 1)];
        assert_eq!(c_index(&s).unwrap(), 100.0);
        // Both events, distinct risks: 0.5.
        let s = [Subject::new(2.0, 5.0, 1), Subject::new(1.0, 5.0, 1)];
        assert_eq!(c_index(&s).unwrap(), 50.0);
        // One event with higher risk: 1.
        let s = [Subject::new(2.0, 5.0, 1), Subject::new(1.0, 5.0, 0)];
        assert_eq!(c_index(&s).unwrap(), 100.0);
        // One event with lower risk: 0.5.
        let s = [Subject::new(1.0, 5.0, 1), Subject::new(2.0, 5.0, 0)];
        assert_eq!(c_index(&s).unwrap(), 50.0);
        // No events: not permissible.
        let s = [Subject::new(1.0, 5.0, 0), Subject::new(2.0, 5.0, 0)];
        assert!(c_index(&s).is_err());
    }

    #[test]
    fn km_without_censoring() {
        let s = [(1.0, 1), (2.0, 1), (3.0, 1)];
        let km = kaplan_meier(&s);
        assert_abs_diff_eq!(km.eval(1.0), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(km.eval(2.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(km.eval(3.0), 0.0, epsilon = 1e-15);
        assert_eq!(km.eval(0.5), 1.0);
    }

    #[test]
    fn km_all_censored_is_one() {
        let km = kaplan_meier(&[(1.0, 0), (2.0, 0)]);
        assert_eq!(km.eval(5.0), 1.0);
    }

    #[test]
    fn km_with_censoring_hand_computed() {
        // Deaths at 1 and 3, censored at 2 (10 subjects total).
        let mut s = vec![(1.0, 1u8), (2.0, 0), (3.0, 1)];
        s.extend(std::iter::repeat((4.0, 0)).take(7));
        let km = kaplan_meier(&s);
        assert_abs_diff_eq!(km.eval(1.0), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(km.eval(3.5), 0.9 * (1.0 - 1.0 / 8.0), epsilon = 1e-15);
    }

    #[test]
    fn censoring_survival_is_flipped_km() {
        let s = [(1.0, 1u8), (2.0, 0), (3.0, 1), (4.0, 0), (5.0, 1)];
        let flipped: Vec<(f64, u8)> = s.iter().map(|&(t, d)| (t, 1 - d)).collect();
        let g = censoring_survival(&s);
        let km = kaplan_meier(&flipped);
        assert_eq!(g, km);
    }

    #[test]
    fn censoring_survival_without_censoring_is_one() {
        let g = censoring_survival(&[(1.0, 1), (2.0, 1)]);
        assert_eq!(g.eval(10.0), 1.0);
    }

    #[test]
    fn brier_perfect_prediction_is_zero() {
        // No censoring; prediction exactly matches observed status.
        let alive = StepFunction::new(vec![0.0], vec![1.0]);
        let dead = StepFunction::new(vec![0.0, 2.0], vec![1.0, 0.0]);
        let preds = vec![(&dead, 2.0, 1u8), (&alive, 9.0, 1u8)];
        let g = censoring_survival(&[(2.0, 1), (9.0, 1)]);
        let b = brier_score(&preds, &g, 3.0).unwrap();
        assert_eq!(b.error, 0.0);
        assert_eq!(b.n_dropped, 0);
    }

    #[test]
    fn brier_constant_half_prediction_is_quarter() {
        let half = StepFunction::new(vec![0.0], vec![0.5]);
        let subjects: Vec<(f64, u8)> = (1..=8).map(|i| (i as f64, 1u8)).collect();
        let preds: Vec<(&StepFunction, f64, u8)> =
            subjects.iter().map(|&(t, s)| (&half, t, s)).collect();
        let g = censoring_survival(&subjects);
        let b = brier_score(&preds, &g, 4.5).unwrap();
        assert_abs_diff_eq!(b.error, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn brier_mixed_censoring_hand_evaluation() {
        // 8 subjects, evaluated at t = 5.
        let times = [2.0, 3.0, 4.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        let statuses = [1u8, 0, 1, 0, 1, 0, 1, 1];
        let obs: Vec<(f64, u8)> = times.iter().copied().zip(statuses).collect();
        let g = censoring_survival(&obs);
        // Every subject predicted S(5) = 0.6.
        let s = StepFunction::new(vec![0.0], vec![0.6]);
        let preds: Vec<(&StepFunction, f64, u8)> =
            obs.iter().map(|&(t, d)| (&s, t, d)).collect();
        let b = brier_score(&preds, &g, 5.0).unwrap();

        // Hand evaluation of each term.
        let mut expected = 0.0;
        for &(t, d) in &obs {
            if t > 5.0 {
                expected += (1.0f64 - 0.6).powi(2) / g.eval(5.0);
            } else if d == 1 {
                expected += 0.6f64.powi(2) / g.eval_left(t);
            }
        }
        expected /= 8.0;
        assert_abs_diff_eq!(b.error, expected, epsilon = 1e-12);
        assert!(b.error > 0.0);
    }

    #[test]
    fn pec_single_time_matches_brier() {
        let s = StepFunction::new(vec![0.0], vec![0.3]);
        let obs = [(1.0, 1u8), (4.0, 1u8)];
        let g = censoring_survival(&obs);
        let preds: Vec<(&StepFunction, f64, u8)> =
            obs.iter().map(|&(t, d)| (&s, t, d)).collect();
        let curve = pec(&preds, &g, &[2.0]).unwrap();
        let b = brier_score(&preds, &g, 2.0).unwrap();
        assert_eq!(curve.errors, vec![b.error]);
    }

    #[test]
    fn ibs_of_constant_curve_is_the_constant() {
        let curve = PredictionErrorCurve {
            times: vec![1.0, 2.0, 4.0],
            errors: vec![0.2, 0.2, 0.2],
            n_dropped: 0,
        };
        assert_abs_diff_eq!(ibs(&curve, 4.0).unwrap(), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(ibs(&curve, 3.0).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn ibs_of_zero_curve_is_zero() {
        let curve = PredictionErrorCurve {
            times: vec![1.0, 2.0],
            errors: vec![0.0, 0.0],
            n_dropped: 0,
        };
        assert_eq!(ibs(&curve, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn ibs_piecewise_linear_matches_analytic_integral() {
        // Curve: flat 0.1 on [0,1], rises linearly to 0.3 at t=3.
        let curve = PredictionErrorCurve {
            times: vec![1.0, 3.0],
            errors: vec![0.1, 0.3],
            n_dropped: 0,
        };
        // Integral = 0.1*1 + (0.1+0.3)/2*2 = 0.5; IBS over tau=3 is 1/6.
        assert_abs_diff_eq!(ibs(&curve, 3.0).unwrap(), 0.5 / 3.0, epsilon = 1e-12);
        // tau=2 cuts the segment at e(2)=0.2: 0.1 + (0.1+0.2)/2 = 0.25.
        assert_abs_diff_eq!(ibs(&curve, 2.0).unwrap(), 0.25 / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ibs_rejects_tau_beyond_grid() {
        let curve = PredictionErrorCurve {
            times: vec![1.0],
            errors: vec![0.1],
            n_dropped: 0,
        };
        assert!(matches!(
            ibs(&curve, 2.0),
            Err(MetricsError::TauBeyondGrid { .. })
        ));
    }

    #[test]
    fn ibs_of_pointwise_max_dominates() {
        let a = PredictionErrorCurve {
            times: vec![1.0, 2.0, 3.0],
            errors: vec![0.1, 0.4, 0.2],
            n_dropped: 0,
        };
        let b = PredictionErrorCurve {
            times: vec![1.0, 2.0, 3.0],
            errors: vec![0.3, 0.1, 0.25],
            n_dropped: 0,
        };
        let max = PredictionErrorCurve {
            times: vec![1.0, 2.0, 3.0],
            errors: (0..3).map(|i| a.errors[i].max(b.errors[i])).collect(),
            n_dropped: 0,
        };
        let m = ibs(&max, 3.0).unwrap();
        assert!(m >= ibs(&a, 3.0).unwrap());
        assert!(m >= ibs(&b, 3.0).unwrap());
    }

    /// Independent unweighted Brier score for censoring-free data.
    fn unweighted_brier(preds: &[(&StepFunction, f64, u8)], t: f64) -> f64 {
        let sum: f64 = preds
            .iter()
            .map(|&(s, time, _)| {
                let y = if time > t { 1.0 } else { 0.0 };
                (y - s.eval(t)).powi(2)
            })
            .sum();
        sum / preds.len() as f64
    }

    proptest! {
        /// With zero censoring all IPCW weights are 1 and the score is
        /// the plain mean squared residual.
        #[test]
        fn ipcw_reduces_to_unweighted_without_censoring(
            times in proptest::collection::vec(1u32..50, 2..20),
            pred in 0.0f64..1.0,
            t_idx in 0usize..18,
        ) {
            let obs: Vec<(f64, u8)> = times.iter().map(|&t| (t as f64, 1u8)).collect();
            let t = obs[t_idx % obs.len()].0 + 0.5;
            let g = censoring_survival(&obs);
            let s = StepFunction::new(vec![0.0], vec![pred]);
            let preds: Vec<(&StepFunction, f64, u8)> =
                obs.iter().map(|&(time, d)| (&s, time, d)).collect();
            let b = brier_score(&preds, &g, t).unwrap();
            prop_assert_eq!(b.n_dropped, 0);
            prop_assert!((b.error - unweighted_brier(&preds, t)).abs() < 1e-12);
        }

        /// The concordance index only depends on the risk ordering.
        #[test]
        fn c_index_invariant_under_monotone_transform(
            risks in proptest::collection::vec(0u8..6, 3..15),
            times in proptest::collection::vec(1u32..8, 3..15),
            statuses in proptest::collection::vec(0u8..2, 3..15),
        ) {
            let n = risks.len().min(times.len()).min(statuses.len());
            let subjects: Vec<Subject> = (0..n)
                .map(|i| Subject::new(risks[i] as f64, times[i] as f64, statuses[i]))
                .collect();
            // exp is strictly increasing; ties are preserved exactly
            // because the inputs are small integers.
            let transformed: Vec<Subject> = subjects
                .iter()
                .map(|s| Subject::new(s.risk.exp(), s.time, s.status))
                .collect();
            match (c_index(&subjects), c_index(&transformed)) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "permissibility must not depend on risks"),
            }
        }

        /// Swapping S -> 1-S while flipping the true statuses leaves the
        /// residuals unchanged.
        #[test]
        fn brier_flip_symmetry(pred in 0.0f64..=1.0, t in 1.0f64..10.0) {
            // Censoring-free so that weights are 1 for both variants.
            let obs: Vec<(f64, u8)> = vec![(t - 0.5, 1), (t + 0.5, 1), (t + 1.5, 1)];
            let s = StepFunction::new(vec![0.0], vec![pred]);
            let s_flip = StepFunction::new(vec![0.0], vec![1.0 - pred]);
            let direct: f64 = obs
                .iter()
                .map(|&(time, _)| {
                    let y = if time > t { 1.0 } else { 0.0 };
                    (y - s.eval(t)).powi(2)
                })
                .sum::<f64>() / obs.len() as f64;
            let flipped: f64 = obs
                .iter()
                .map(|&(time, _)| {
                    let y = if time > t { 0.0 } else { 1.0 };
                    (y - s_flip.eval(t)).powi(2)
                })
                .sum::<f64>() / obs.len() as f64;
            prop_assert!((direct - flipped).abs() < 1e-12);
        }
    }

    /// 12-subject instance with ties and censoring against an
    /// independently written transcription of the concordance table.
    #[test]
    fn c_index_matches_case_table_oracle() {
        let subjects = [
            Subject::new(3.0, 5.0, 1),
            Subject::new(1.0, 5.0, 0),
            Subject::new(3.0, 2.0, 1),
            Subject::new(0.5, 8.0, 0),
            Subject::new(2.0, 2.0, 0),
            Subject::new(2.0, 9.0, 1),
            Subject::new(3.0, 5.0, 1),
            Subject::new(4.0, 1.0, 1),
            Subject::new(1.0, 9.0, 1),
            Subject::new(2.0, 7.0, 0),
            Subject::new(4.0, 5.0, 0),
            Subject::new(0.5, 3.0, 1),
        ];
        let mut total = 0.0;
        let mut count = 0u32;
        for i in 0..subjects.len() {
            for j in 0..subjects.len() {
                if i >= j {
                    continue;
                }
                let (hi, ti, di) = (subjects[i].risk, subjects[i].time, subjects[i].status);
                let (hj, tj, dj) = (subjects[j].risk, subjects[j].time, subjects[j].status);
                // Transcription: exclusions first, then the value table.
                if ti < tj && di == 0 || tj < ti && dj == 0 || ti == tj && di == 0 && dj == 0 {
                    continue;
                }
                count += 1;
                let v = if ti != tj {
                    let (h_first, h_second) = if ti < tj { (hi, hj) } else { (hj, hi) };
                    if h_first > h_second {
                        1.0
                    } else if h_first == h_second {
                        0.5
                    } else {
                        0.0
                    }
                } else if di == 1 && dj == 1 {
                    if hi == hj {
                        1.0
                    } else {
                        0.5
                    }
                } else {
                    let (h_event, h_cens) = if di == 1 { (hi, hj) } else { (hj, hi) };
                    if h_event > h_cens {
                        1.0
                    } else {
                        0.5
                    }
                };
                total += v;
            }
        }
        let expected = 100.0 * total / count as f64;
        assert_abs_diff_eq!(c_index(&subjects).unwrap(), expected, epsilon = 1e-12);
    }
}
