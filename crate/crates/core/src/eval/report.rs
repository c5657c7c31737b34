use serde::Serialize;

use super::metrics::mean_sd;
use super::BenchmarkConfig;
use crate::rng::Seed;

/// One `(proportion, method, metric)` line of the report. Folds that failed
/// are `None` and excluded from the mean and standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub proportion: f64,
    pub method: String,
    pub metric: String,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub fold_values: Vec<Option<f64>>,
}

impl ReportRow {
    pub fn new(proportion: f64, method: &str, metric: &str, fold_values: Vec<Option<f64>>) -> Self {
        let ok: Vec<f64> = fold_values.iter().flatten().copied().collect();
        let (mean, sd) = if ok.is_empty() {
            (None, None)
        } else {
            let (m, s) = mean_sd(&ok);
            (Some(m), Some(s))
        };
        ReportRow {
            proportion,
            method: method.to_string(),
            metric: metric.to_string(),
            mean,
            sd,
            fold_values,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.fold_values.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellError {
    pub proportion: f64,
    pub method: String,
    pub fold: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub master_seed: Seed,
    pub schema_hash: String,
    pub n_rows: usize,
    pub positive_rate: f64,
    /// How missing slots enter the reconstruction baselines.
    pub prefill: String,
    pub config: BenchmarkConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
    pub errors: Vec<CellError>,
    /// Selected rank per `(proportion, method, fold)` for rank-tuned methods.
    pub selected_ranks: Vec<(f64, String, usize, usize)>,
}

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x}"))
}

impl EvalReport {
    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }

    pub fn row(&self, proportion: f64, method: &str, metric: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.proportion == proportion && r.method == method && r.metric == metric)
    }

    pub fn mean(&self, proportion: f64, method: &str, metric: &str) -> Option<f64> {
        self.row(proportion, method, metric).and_then(|r| r.mean)
    }

    /// Distinct proportions in report order.
    pub fn proportions(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.proportion) {
                out.push(r.proportion);
            }
        }
        out
    }

    /// `proportion,method,metric,mean,sd,fold_values`, fold values joined by
    /// `;` with `NA` for failed folds.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["proportion", "method", "metric", "mean", "sd", "fold_values"])
            .expect("in-memory write");
        for r in &self.rows {
            let folds: Vec<String> = r.fold_values.iter().map(|v| fmt(*v)).collect();
            w.write_record([
                format!("{}", r.proportion),
                r.method.clone(),
                r.metric.clone(),
                fmt(r.mean),
                fmt(r.sd),
                folds.join(";"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_folds_are_marked_and_skipped() {
        let r = ReportRow::new(0.3, "svd", "auroc", vec![Some(0.5), None, Some(0.7)]);
        assert!((r.mean.unwrap() - 0.6).abs() < 1e-12);
        assert!(!r.is_complete());
        let none = ReportRow::new(0.3, "svd", "auroc", vec![None]);
        assert_eq!(none.mean, None);
    }
}
