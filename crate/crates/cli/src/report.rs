use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};
use simbias_core::harness::HarvestResult;
use simbias_core::metrics::{auc, empirical_distribution, expressivity, spearman, CorrelationResult};

use crate::config::RunSpec;
use crate::error::{Result, RunError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub complexity: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub label: String,
    pub architecture: String,
    pub sam_kind: String,
    pub init: String,
    pub auc: f64,
    pub exp: f64,
    pub sam_parameter_count: usize,
    pub parameter_count: usize,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

impl From<CorrelationResult> for Correlation {
    fn from(r: CorrelationResult) -> Self {
        Correlation { rho: r.rho, p_value: r.p_value, n: r.n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedReport {
    pub trials: usize,
    pub input_bits: usize,
    pub seed: u64,
    pub c_min: f64,
    pub c_max: f64,
    /// Descending AUC, ties by label.
    pub configs: Vec<ConfigReport>,
    pub selected: Vec<String>,
    /// Spearman(AUC, EXP) across configs; absent when undefined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auc_exp_correlation: Option<Correlation>,
}

fn config_failure(label: &str) -> impl Fn(simbias_core::Error) -> RunError + '_ {
    move |source| RunError::Config { label: label.to_owned(), source }
}

/// Scores and ranks harvested configs against one shared integration range.
pub fn build_report(spec: &RunSpec, results: &[HarvestResult]) -> Result<RankedReport> {
    let c_min = spec.input_bits as f64;
    let c_max = results
        .iter()
        .flat_map(|r| r.scores.iter().map(|s| s.value()))
        .fold(c_min, f64::max);

    let mut configs = Vec::with_capacity(results.len());
    for r in results {
        let cfg = &r.config;
        let fail = config_failure(&cfg.label);
        let dist = empirical_distribution(&r.scores).map_err(&fail)?;
        configs.push(ConfigReport {
            label: cfg.label.clone(),
            architecture: cfg.architecture.to_string(),
            sam_kind: cfg.sam_kind.to_string(),
            init: cfg.init.as_str().to_owned(),
            auc: auc(&dist, c_min, c_max).map_err(&fail)?,
            exp: expressivity(&r.functions).map_err(&fail)?,
            sam_parameter_count: cfg.sam_parameter_count().map_err(&fail)?,
            parameter_count: cfg.total_parameter_count().map_err(&fail)?,
            histogram: dist.iter().map(|(complexity, probability)| HistogramBin { complexity, probability }).collect(),
        });
    }
    configs.sort_by(|a, b| b.auc.partial_cmp(&a.auc).unwrap_or(Ordering::Equal).then_with(|| a.label.cmp(&b.label)));

    let aucs: Vec<f64> = configs.iter().map(|c| c.auc).collect();
    let exps: Vec<f64> = configs.iter().map(|c| c.exp).collect();
    let auc_exp_correlation = spearman(&aucs, &exps).ok().map(Correlation::from);
    let selected = configs.iter().take(spec.top_k).map(|c| c.label.clone()).collect();

    Ok(RankedReport {
        trials: spec.trials,
        input_bits: spec.input_bits,
        seed: spec.master_seed,
        c_min,
        c_max,
        configs,
        selected,
        auc_exp_correlation,
    })
}

impl RankedReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `label,auc,exp,params` in report order.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "auc", "exp", "params"])?;
        for c in &self.configs {
            w.write_record([c.label.clone(), c.auc.to_string(), c.exp.to_string(), c.parameter_count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_summary_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn find(&self, label: &str) -> Option<&ConfigReport> {
        self.configs.iter().find(|c| c.label == label)
    }
}

impl ConfigReport {
    /// Histogram plus cumulative column, for plotting.
    pub fn distribution_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["complexity", "probability", "cdf"]).expect("in-memory csv");
        let mut acc = 0.0;
        for (i, bin) in self.histogram.iter().enumerate() {
            acc += bin.probability;
            let cdf = if i + 1 == self.histogram.len() { 1.0 } else { acc };
            w.write_record([bin.complexity.to_string(), bin.probability.to_string(), cdf.to_string()])
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use simbias_core::harness::{Architecture, ModelConfig, SamKind};
    use simbias_core::lz::{BitString, LzScore};
    use simbias_core::nn::InitKind;

    fn result(label: &str, funcs: &[&str]) -> HarvestResult {
        let functions: Vec<BitString> = funcs.iter().map(|f| BitString::parse(f).unwrap()).collect();
        let scores: Vec<LzScore> = functions.iter().map(|f| simbias_core::lz::lz_complexity(f).unwrap()).collect();
        let mut config = ModelConfig::new(label, Architecture::DecoderCore, SamKind::Classical, InitKind::Normal);
        config.input_bits = 2;
        HarvestResult { config, seed: 0, functions, scores }
    }

    fn spec(configs: &[&HarvestResult], top_k: usize) -> RunSpec {
        RunSpec {
            configs: configs.iter().map(|r| r.config.clone()).collect(),
            trials: 2,
            input_bits: 2,
            master_seed: 0,
            top_k,
        }
    }

    #[test]
    fn ranks_by_auc_then_label() {
        let flat = result("b", &["0000", "0000"]);
        let busy = result("a", &["0110", "0101"]);
        let flat2 = result("c", &["1111", "0000"]);
        let report = build_report(&spec(&[&busy, &flat, &flat2], 2), &[busy.clone(), flat.clone(), flat2.clone()]).unwrap();
        let labels: Vec<&str> = report.configs.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["b", "c", "a"]);
        assert_eq!(report.selected, ["b", "c"]);
        assert_eq!(report.c_min, 2.0);
        let b = report.find("b").unwrap();
        assert!((b.auc - (report.c_max - report.c_min)).abs() < 1e-12);
        assert_eq!(b.exp, 0.5);
        assert_eq!(report.find("c").unwrap().exp, 1.0);
    }

    #[test]
    fn csv_outputs() {
        let r = result("x", &["0000", "0110"]);
        let report = build_report(&spec(&[&r], 1), &[r]).unwrap();
        let csv = report.summary_csv();
        assert!(csv.starts_with("label,auc,exp,params\nx,"));
        let dist = report.configs[0].distribution_csv();
        assert_eq!(dist.lines().count(), 3);
        assert!(dist.lines().last().unwrap().ends_with(",1"));
        let back: RankedReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
