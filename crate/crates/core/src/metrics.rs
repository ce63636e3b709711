//! Evaluation metrics for mutation-effect predictions: rank and linear
//! correlation, stabilizing-mutation detection, ROC AUC, error metrics, and
//! retrieval precision, aggregated per protein pair so mutations from
//! different complexes are never mixed.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("input vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("only one class present")]
    SingleClass,
}

/// 1-based ranks, ties receiving the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation by the moment formula. Inputs need at least two
/// items and two distinct values each.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricError> {
    if x.len() != y.len() {
        return Err(MetricError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MetricError::DegenerateInput("fewer than two items"));
    }
    if x.iter().all(|&v| v == x[0]) || y.iter().all(|&v| v == y[0]) {
        return Err(MetricError::DegenerateInput("constant vector"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    Ok(cov / (vx.sqrt() * vy.sqrt()))
}

/// Spearman rank correlation: Pearson on tie-averaged ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, MetricError> {
    if x.len() != y.len() {
        return Err(MetricError::LengthMismatch(x.len(), y.len()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Precision and recall for the stabilizing class (value strictly below
/// zero, for both prediction and truth). A ratio with an empty denominator
/// is reported as absent rather than zero.
pub fn stabilizing_precision_recall(pred: &[f64], truth: &[f64]) -> (Option<f64>, Option<f64>) {
    assert_eq!(pred.len(), truth.len());
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (&p, &t) in pred.iter().zip(truth) {
        let pp = p < 0.0;
        let tt = t < 0.0;
        match (pp, tt) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp > 0 { Some(tp as f64 / (tp + fp) as f64) } else { None };
    let recall = if tp + fn_ > 0 { Some(tp as f64 / (tp + fn_) as f64) } else { None };
    (precision, recall)
}

/// ROC AUC for recovering the sign of the true effect. The positive class is
/// truth < 0 and the score is the negated prediction, so predictions ranking
/// stabilizing mutations lowest score highest. Mann-Whitney formulation;
/// tied scores count one half.
pub fn roc_auc(pred: &[f64], truth: &[f64]) -> Result<f64, MetricError> {
    if pred.len() != truth.len() {
        return Err(MetricError::LengthMismatch(pred.len(), truth.len()));
    }
    let scores: Vec<f64> = pred.iter().map(|&p| -p).collect();
    let labels: Vec<bool> = truth.iter().map(|&t| t < 0.0).collect();
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricError::SingleClass);
    }
    let ranks = average_ranks(&scores);
    let rank_sum: f64 = ranks.iter().zip(&labels).filter(|(_, &l)| l).map(|(&r, _)| r).sum();
    let u = rank_sum - n_pos as f64 * (n_pos as f64 + 1.0) / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Mean absolute error and root mean squared error.
pub fn mae_rmse(pred: &[f64], truth: &[f64]) -> (f64, f64) {
    assert_eq!(pred.len(), truth.len());
    assert!(!pred.is_empty());
    let n = pred.len() as f64;
    let mut abs = 0.0;
    let mut sq = 0.0;
    for (&p, &t) in pred.iter().zip(truth) {
        let d = p - t;
        abs += d.abs();
        sq += d * d;
    }
    (abs / n, (sq / n).sqrt())
}

/// Indices sorted by ascending prediction; equal predictions keep input
/// order.
pub fn ranked_indices(pred: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pred.len()).collect();
    order.sort_by(|&a, &b| pred[a].total_cmp(&pred[b]));
    order
}

/// Whether the top-ranked candidate (lowest predicted value) is favorable.
pub fn precision_at_1(pred: &[f64], favorable: &[bool]) -> f64 {
    assert_eq!(pred.len(), favorable.len());
    assert!(!pred.is_empty());
    let top = ranked_indices(pred)[0];
    if favorable[top] {
        1.0
    } else {
        0.0
    }
}

/// Fraction of favorable items among the top ceil(k% of n) by ascending
/// prediction.
pub fn precision_at_percent(pred: &[f64], favorable: &[bool], k_percent: f64) -> f64 {
    assert_eq!(pred.len(), favorable.len());
    assert!(!pred.is_empty());
    assert!(k_percent > 0.0 && k_percent <= 100.0);
    let n = pred.len();
    let count = ((k_percent * n as f64 / 100.0).ceil() as usize).clamp(1, n);
    let order = ranked_indices(pred);
    let hits = order[..count].iter().filter(|&&i| favorable[i]).count();
    hits as f64 / count as f64
}

/// One evaluated prediction, optionally missing (to be imputed or skipped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub complex_id: String,
    pub mutation: String,
    pub pred_ddg: Option<f64>,
    pub true_ddg: f64,
}

/// Predictions grouped by complex; every group non-empty, values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    groups: BTreeMap<String, Vec<(f64, f64)>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PredictionSetError {
    #[error("no usable predictions")]
    Empty,
    #[error("non-finite value for complex {0}")]
    NonFinite(String),
}

impl PredictionSet {
    /// Group rows by complex. Rows without a prediction are imputed with
    /// `impute` when given, otherwise skipped; the skip count is returned.
    pub fn from_rows(
        rows: &[PredictionRow],
        impute: Option<f64>,
    ) -> Result<(Self, usize), PredictionSetError> {
        let mut groups: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        let mut skipped = 0;
        for row in rows {
            let pred = match (row.pred_ddg, impute) {
                (Some(p), _) => p,
                (None, Some(v)) => v,
                (None, None) => {
                    skipped += 1;
                    continue;
                }
            };
            if !pred.is_finite() || !row.true_ddg.is_finite() {
                return Err(PredictionSetError::NonFinite(row.complex_id.clone()));
            }
            groups.entry(row.complex_id.clone()).or_default().push((pred, row.true_ddg));
        }
        if groups.is_empty() {
            return Err(PredictionSetError::Empty);
        }
        Ok((PredictionSet { groups }, skipped))
    }

    pub fn groups(&self) -> &BTreeMap<String, Vec<(f64, f64)>> {
        &self.groups
    }

    pub fn n_items(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }
}

/// Per-complex metric values; absent values carry a reason in `exclusions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMetrics {
    pub complex_id: String,
    pub n: usize,
    pub spearman: Option<f64>,
    pub pearson: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub roc_auc: Option<f64>,
    pub mae: f64,
    pub rmse: f64,
    pub exclusions: Vec<String>,
}

/// Unweighted mean over the groups where the metric is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateValue {
    pub mean: Option<f64>,
    /// Number of groups included in the mean.
    pub n_groups: usize,
}

fn aggregate(values: impl Iterator<Item = Option<f64>>) -> AggregateValue {
    let included: Vec<f64> = values.flatten().collect();
    AggregateValue {
        mean: if included.is_empty() {
            None
        } else {
            Some(included.iter().sum::<f64>() / included.len() as f64)
        },
        n_groups: included.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalPrecision {
    pub k_percent: f64,
    pub n_top: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub per_group: Vec<GroupMetrics>,
    pub spearman: AggregateValue,
    pub pearson: AggregateValue,
    pub precision: AggregateValue,
    pub recall: AggregateValue,
    pub roc_auc: AggregateValue,
    pub mae: AggregateValue,
    pub rmse: AggregateValue,
    /// Pool-level retrieval: is the lowest-predicted mutation stabilizing.
    pub p_at_1: f64,
    pub p_at_k: Vec<RetrievalPrecision>,
    pub n_groups: usize,
    pub n_items: usize,
}

/// Compute every metric per group, aggregate by unweighted means over the
/// groups where each metric is defined, and compute retrieval precision on
/// the pooled items. Group order (and thus output order) is alphabetical.
pub fn evaluate(set: &PredictionSet, k_percents: &[f64]) -> MetricReport {
    let mut per_group = Vec::new();
    for (id, items) in set.groups() {
        let pred: Vec<f64> = items.iter().map(|&(p, _)| p).collect();
        let truth: Vec<f64> = items.iter().map(|&(_, t)| t).collect();
        let mut exclusions = Vec::new();
        let spearman = match spearman(&pred, &truth) {
            Ok(v) => Some(v),
            Err(e) => {
                exclusions.push(format!("spearman: {e}"));
                None
            }
        };
        let pearson = match pearson(&pred, &truth) {
            Ok(v) => Some(v),
            Err(e) => {
                exclusions.push(format!("pearson: {e}"));
                None
            }
        };
        let (precision, recall) = stabilizing_precision_recall(&pred, &truth);
        if precision.is_none() {
            exclusions.push("precision: no predicted stabilizing mutations".into());
        }
        if recall.is_none() {
            exclusions.push("recall: no true stabilizing mutations".into());
        }
        let roc = match roc_auc(&pred, &truth) {
            Ok(v) => Some(v),
            Err(e) => {
                exclusions.push(format!("roc_auc: {e}"));
                None
            }
        };
        let (mae, rmse) = mae_rmse(&pred, &truth);
        per_group.push(GroupMetrics {
            complex_id: id.clone(),
            n: items.len(),
            spearman,
            pearson,
            precision,
            recall,
            roc_auc: roc,
            mae,
            rmse,
            exclusions,
        });
    }

    let mut pool_pred = Vec::with_capacity(set.n_items());
    let mut pool_favorable = Vec::with_capacity(set.n_items());
    for items in set.groups().values() {
        for &(p, t) in items {
            pool_pred.push(p);
            pool_favorable.push(t < 0.0);
        }
    }
    let p_at_k = k_percents
        .iter()
        .map(|&k| RetrievalPrecision {
            k_percent: k,
            n_top: ((k * pool_pred.len() as f64 / 100.0).ceil() as usize)
                .clamp(1, pool_pred.len()),
            value: precision_at_percent(&pool_pred, &pool_favorable, k),
        })
        .collect();

    MetricReport {
        spearman: aggregate(per_group.iter().map(|g| g.spearman)),
        pearson: aggregate(per_group.iter().map(|g| g.pearson)),
        precision: aggregate(per_group.iter().map(|g| g.precision)),
        recall: aggregate(per_group.iter().map(|g| g.recall)),
        roc_auc: aggregate(per_group.iter().map(|g| g.roc_auc)),
        mae: aggregate(per_group.iter().map(|g| Some(g.mae))),
        rmse: aggregate(per_group.iter().map(|g| Some(g.rmse))),
        p_at_1: precision_at_1(&pool_pred, &pool_favorable),
        p_at_k,
        n_groups: per_group.len(),
        n_items: set.n_items(),
        per_group,
    }
}

/// Plain-text table: one row per complex, an aggregate row, and the pooled
/// retrieval precision.
pub fn render_table(report: &MetricReport) -> String {
    fn cell(v: Option<f64>) -> String {
        v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".to_string())
    }
    let mut rows: Vec<[String; 9]> = Vec::new();
    rows.push([
        "complex".into(),
        "n".into(),
        "spearman".into(),
        "pearson".into(),
        "precision".into(),
        "recall".into(),
        "roc_auc".into(),
        "mae".into(),
        "rmse".into(),
    ]);
    for g in &report.per_group {
        rows.push([
            g.complex_id.clone(),
            g.n.to_string(),
            cell(g.spearman),
            cell(g.pearson),
            cell(g.precision),
            cell(g.recall),
            cell(g.roc_auc),
            cell(Some(g.mae)),
            cell(Some(g.rmse)),
        ]);
    }
    rows.push([
        "mean".into(),
        report.n_items.to_string(),
        cell(report.spearman.mean),
        cell(report.pearson.mean),
        cell(report.precision.mean),
        cell(report.recall.mean),
        cell(report.roc_auc.mean),
        cell(report.mae.mean),
        cell(report.rmse.mean),
    ]);
    let mut widths = [0usize; 9];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str(&format!("P@1 {:.0}%\n", report.p_at_1 * 100.0));
    for r in &report.p_at_k {
        out.push_str(&format!(
            "P@{}% {:.1}% (top {})\n",
            r.k_percent,
            r.value * 100.0,
            r.n_top
        ));
    }
    out
}

/// Read predictions CSV with columns complex_id, mutation, pred_ddg,
/// true_ddg; pred_ddg may be empty.
pub fn read_predictions<R: Read>(input: R) -> std::io::Result<Vec<PredictionRow>> {
    let bad = |msg: String| std::io::Error::new(std::io::ErrorKind::InvalidData, msg);
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() < 4 {
            return Err(bad("prediction rows need 4 columns".into()));
        }
        let pred_ddg = match &record[2] {
            "" => None,
            s => Some(s.parse().map_err(|e| bad(format!("bad pred_ddg {s:?}: {e}")))?),
        };
        let true_ddg = record[3]
            .parse()
            .map_err(|e| bad(format!("bad true_ddg {:?}: {e}", &record[3])))?;
        rows.push(PredictionRow {
            complex_id: record[0].to_string(),
            mutation: record[1].to_string(),
            pred_ddg,
            true_ddg,
        });
    }
    Ok(rows)
}

pub fn write_predictions<W: Write>(out: W, rows: &[PredictionRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["complex_id", "mutation", "pred_ddg", "true_ddg"])?;
    for row in rows {
        w.write_record([
            &row.complex_id,
            &row.mutation,
            &row.pred_ddg.map(|v| format!("{v}")).unwrap_or_default(),
            &format!("{}", row.true_ddg),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_monotone_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let up = [10.0, 20.0, 30.0, 40.0];
        let down = [4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &down).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_handles_ties_like_the_rank_oracle() {
        let x = [1.0, 2.0, 2.0, 3.0, 5.0];
        let y = [1.0, 1.0, 4.0, 4.0, 2.0];
        // Oracle: assign mean ranks by hand, then Pearson.
        let rx = [1.0, 2.5, 2.5, 4.0, 5.0];
        let ry = [1.5, 1.5, 4.5, 4.5, 3.0];
        let expected = pearson(&rx, &ry).unwrap();
        assert!((spearman(&x, &y).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn spearman_is_invariant_under_monotone_maps() {
        let x = [0.3, -1.2, 5.0, 2.2, 0.9];
        let y = [1.0, 0.5, 3.0, -2.0, 7.0];
        let base = spearman(&x, &y).unwrap();
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        let exped: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        assert!((spearman(&cubed, &exped).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn pearson_affine_extremes() {
        let x = [1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let z: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&x, &z).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_correlations_are_errors() {
        assert_eq!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(MetricError::DegenerateInput("constant vector"))
        );
        assert_eq!(
            pearson(&[1.0], &[1.0]),
            Err(MetricError::DegenerateInput("fewer than two items"))
        );
        assert_eq!(spearman(&[1.0, 2.0], &[5.0]), Err(MetricError::LengthMismatch(2, 1)));
    }

    #[test]
    fn perfect_predictions_have_unit_precision_recall() {
        let v = [-1.0, 2.0, -0.5, 3.0];
        assert_eq!(stabilizing_precision_recall(&v, &v), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn no_predicted_stabilizing_leaves_precision_absent() {
        let pred = [1.0, 2.0, 3.0];
        let truth = [-1.0, 2.0, -3.0];
        assert_eq!(stabilizing_precision_recall(&pred, &truth), (None, Some(0.0)));
    }

    #[test]
    fn zero_counts_as_non_stabilizing() {
        let pred = [0.0, -1.0];
        let truth = [0.0, -1.0];
        let (p, r) = stabilizing_precision_recall(&pred, &truth);
        assert_eq!((p, r), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn roc_auc_extremes() {
        // Stabilizing (truth < 0) items predicted lowest: perfect.
        let pred = [-2.0, -1.0, 1.0, 2.0];
        let truth = [-1.0, -1.0, 1.0, 1.0];
        assert_eq!(roc_auc(&pred, &truth).unwrap(), 1.0);
        let inverted = [2.0, 1.0, -1.0, -2.0];
        assert_eq!(roc_auc(&inverted, &truth).unwrap(), 0.0);
        assert_eq!(roc_auc(&pred, &[1.0, 1.0, 1.0, 1.0]), Err(MetricError::SingleClass));
    }

    #[test]
    fn roc_auc_tie_counts_one_half() {
        let pred = [0.5, 0.5];
        let truth = [-1.0, 1.0];
        assert_eq!(roc_auc(&pred, &truth).unwrap(), 0.5);
    }

    #[test]
    fn roc_auc_matches_pair_counting() {
        let pred = [0.1, -0.4, 0.1, 2.0, -0.3, 0.0];
        let truth = [-1.0, 1.0, -2.0, 3.0, -0.1, 0.5];
        let scores: Vec<f64> = pred.iter().map(|p| -p).collect();
        let labels: Vec<bool> = truth.iter().map(|&t| t < 0.0).collect();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..pred.len() {
            for j in 0..pred.len() {
                if labels[i] && !labels[j] {
                    den += 1.0;
                    if scores[i] > scores[j] {
                        num += 1.0;
                    } else if scores[i] == scores[j] {
                        num += 0.5;
                    }
                }
            }
        }
        assert!((roc_auc(&pred, &truth).unwrap() - num / den).abs() < 1e-12);
    }

    #[test]
    fn error_metrics() {
        let t = [1.0, -2.0, 0.5];
        assert_eq!(mae_rmse(&t, &t), (0.0, 0.0));
        let shifted: Vec<f64> = t.iter().map(|v| v + 0.25).collect();
        let (mae, rmse) = mae_rmse(&shifted, &t);
        assert!((mae - 0.25).abs() < 1e-12);
        assert!((rmse - 0.25).abs() < 1e-12);
    }

    #[test]
    fn retrieval_precision_example() {
        // 80 items; the only favorable one has the lowest prediction.
        let mut pred: Vec<f64> = (0..80).map(|i| i as f64).collect();
        let mut favorable = vec![false; 80];
        pred[0] = -5.0;
        favorable[0] = true;
        assert_eq!(precision_at_1(&pred, &favorable), 1.0);
        assert_eq!(precision_at_percent(&pred, &favorable, 5.0), 0.25);
        assert_eq!(precision_at_percent(&pred, &favorable, 10.0), 0.125);
    }

    #[test]
    fn retrieval_precision_empty_top_slice() {
        let pred = [1.0, 2.0, 3.0];
        let favorable = [false, false, true];
        assert_eq!(precision_at_1(&pred, &favorable), 0.0);
        assert_eq!(precision_at_percent(&pred, &favorable, 34.0), 0.0);
    }

    #[test]
    fn retrieval_ties_break_by_input_order() {
        let pred = [1.0, 1.0];
        let favorable = [false, true];
        assert_eq!(precision_at_1(&pred, &favorable), 0.0);
    }

    fn rows(data: &[(&str, f64, f64)]) -> Vec<PredictionRow> {
        data.iter()
            .enumerate()
            .map(|(i, &(id, p, t))| PredictionRow {
                complex_id: id.to_string(),
                mutation: format!("AA{}A", i + 1),
                pred_ddg: Some(p),
                true_ddg: t,
            })
            .collect()
    }

    #[test]
    fn single_group_aggregate_equals_group_value() {
        let rows = rows(&[("c1", -1.0, -2.0), ("c1", 0.5, 1.0), ("c1", 2.0, 3.0)]);
        let (set, _) = PredictionSet::from_rows(&rows, None).unwrap();
        let report = evaluate(&set, &[5.0, 10.0]);
        assert_eq!(report.n_groups, 1);
        assert_eq!(report.spearman.mean, report.per_group[0].spearman);
    }

    #[test]
    fn aggregate_is_unweighted_mean_of_groups() {
        // Group a: perfectly correlated (4 items). Group b: zero rank
        // correlation (x 1..4 against 2,4,1,3).
        let mut data = vec![
            ("a", 1.0, 1.0),
            ("a", 2.0, 2.0),
            ("a", 3.0, 3.0),
            ("a", 4.0, 4.0),
        ];
        let b_truth = [2.0, 4.0, 1.0, 3.0];
        for (i, &t) in b_truth.iter().enumerate() {
            data.push(("b", (i + 1) as f64, t));
        }
        let (set, _) = PredictionSet::from_rows(&rows(&data), None).unwrap();
        let report = evaluate(&set, &[]);
        let a = report.per_group.iter().find(|g| g.complex_id == "a").unwrap();
        let b = report.per_group.iter().find(|g| g.complex_id == "b").unwrap();
        assert!((a.spearman.unwrap() - 1.0).abs() < 1e-12);
        assert!(b.spearman.unwrap().abs() < 1e-12);
        assert!((report.spearman.mean.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(report.spearman.n_groups, 2);
    }

    #[test]
    fn degenerate_group_is_excluded_from_the_mean() {
        let data = vec![
            ("a", 1.0, 1.0),
            ("a", 2.0, 2.0),
            ("a", 3.0, 3.0),
            ("flat", 1.0, 5.0),
            ("flat", 1.0, 6.0),
        ];
        let (set, _) = PredictionSet::from_rows(&rows(&data), None).unwrap();
        let report = evaluate(&set, &[]);
        let flat = report.per_group.iter().find(|g| g.complex_id == "flat").unwrap();
        assert!(flat.spearman.is_none());
        assert!(!flat.exclusions.is_empty());
        assert_eq!(report.spearman.n_groups, 1);
        assert!((report.spearman.mean.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn groups_are_never_pooled_for_correlations() {
        // Pooled Spearman of these six points is far from the per-group
        // mean; the aggregate must equal the per-group mean.
        let data = vec![
            ("a", 1.0, 101.0),
            ("a", 2.0, 102.0),
            ("a", 3.0, 103.0),
            ("b", 11.0, 1.0),
            ("b", 12.0, 2.0),
            ("b", 13.0, 3.0),
        ];
        let (set, _) = PredictionSet::from_rows(&rows(&data), None).unwrap();
        let report = evaluate(&set, &[]);
        assert!((report.spearman.mean.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_predictions_skip_or_impute() {
        let mut rs = rows(&[("a", 1.0, 1.0), ("a", 2.0, 2.0)]);
        rs.push(PredictionRow {
            complex_id: "a".into(),
            mutation: "AA3A".into(),
            pred_ddg: None,
            true_ddg: 9.0,
        });
        let (set, skipped) = PredictionSet::from_rows(&rs, None).unwrap();
        assert_eq!(skipped, 1);
        assert_eq!(set.n_items(), 2);
        let (set, skipped) = PredictionSet::from_rows(&rs, Some(0.69)).unwrap();
        assert_eq!(skipped, 0);
        assert_eq!(set.n_items(), 3);
        assert_eq!(set.groups()["a"][2].0, 0.69);
    }

    #[test]
    fn predictions_csv_round_trips() {
        let mut rs = rows(&[("a", -0.5, -1.0)]);
        rs.push(PredictionRow {
            complex_id: "b".into(),
            mutation: "TH31W".into(),
            pred_ddg: None,
            true_ddg: 2.5,
        });
        let mut buf = Vec::new();
        write_predictions(&mut buf, &rs).unwrap();
        assert_eq!(read_predictions(buf.as_slice()).unwrap(), rs);
    }

    #[test]
    fn table_renders_all_groups() {
        let data = vec![("a", 1.0, 1.0), ("a", 2.0, 2.0), ("a", -3.0, -3.0)];
        let (set, _) = PredictionSet::from_rows(&rows(&data), None).unwrap();
        let report = evaluate(&set, &[10.0]);
        let table = render_table(&report);
        assert!(table.contains("complex"));
        assert!(table.contains("mean"));
        assert!(table.contains("P@1"));
        assert!(table.contains("P@10%"));
    }
}
