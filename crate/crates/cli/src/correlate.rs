//! Rank correlation of report metrics against externally measured performance.

use std::io::Read;

use serde::{Deserialize, Serialize};
use simbias_core::metrics::spearman;

use crate::error::{Result, RunError};
use crate::report::{Correlation, RankedReport};

pub const MIN_OVERLAP: usize = 3;

/// `label,metric1,metric2,...` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceTable {
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl PerformanceTable {
    pub fn from_reader<R: Read>(input: R) -> std::result::Result<Self, String> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = r.headers().map_err(|e| e.to_string())?.clone();
        if header.get(0) != Some("label") {
            return Err("first column must be `label`".into());
        }
        if header.len() < 2 {
            return Err("no metric columns".into());
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| e.to_string())?;
            let label = rec.get(0).unwrap_or_default().to_owned();
            let values = rec
                .iter()
                .skip(1)
                .zip(&columns)
                .map(|(v, col)| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| format!("row {} column {col}: not a number: {v:?}", line + 2))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if rows.iter().any(|(l, _): &(String, Vec<f64>)| *l == label) {
                return Err(format!("duplicate label {label:?}"));
            }
            rows.push((label, values));
        }
        Ok(PerformanceTable { columns, rows })
    }
}

/// Rows are `auc` and `exp`; columns follow the performance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Correlation>>,
}

pub fn correlate(report: &RankedReport, table: &PerformanceTable) -> Result<CorrelationMatrix> {
    let mut auc = Vec::new();
    let mut exp = Vec::new();
    let mut labels = Vec::new();
    for (label, _) in &table.rows {
        let c = report
            .find(label)
            .ok_or_else(|| RunError::Spec(format!("label {label:?} is not in the report")))?;
        auc.push(c.auc);
        exp.push(c.exp);
        labels.push(label.clone());
    }
    if labels.len() < MIN_OVERLAP {
        return Err(RunError::Spec(format!(
            "need at least {MIN_OVERLAP} labels shared with the report, got {}",
            labels.len()
        )));
    }
    let mut cells = Vec::new();
    for metric in [&auc, &exp] {
        let mut row = Vec::new();
        for (j, col) in table.columns.iter().enumerate() {
            let perf: Vec<f64> = table.rows.iter().map(|(_, v)| v[j]).collect();
            let r = spearman(metric, &perf).map_err(|e| RunError::Spec(format!("column {col}: {e}")))?;
            row.push(Correlation::from(r));
        }
        cells.push(row);
    }
    Ok(CorrelationMatrix { rows: vec!["auc".into(), "exp".into()], columns: table.columns.clone(), labels, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ConfigReport;

    fn report(points: &[(&str, f64, f64)]) -> RankedReport {
        RankedReport {
            trials: 10,
            input_bits: 5,
            seed: 0,
            c_min: 5.0,
            c_max: 20.0,
            configs: points
                .iter()
                .map(|&(label, auc, exp)| ConfigReport {
                    label: label.into(),
                    architecture: "DecoderCore".into(),
                    sam_kind: "Classical".into(),
                    init: "N".into(),
                    auc,
                    exp,
                    sam_parameter_count: 0,
                    parameter_count: 0,
                    histogram: vec![],
                })
                .collect(),
            selected: vec![],
            auc_exp_correlation: None,
        }
    }

    #[test]
    fn identity_and_negation() {
        let rep = report(&[("a", 3.0, 0.1), ("b", 1.0, 0.5), ("c", 2.0, 0.2), ("d", 4.0, 0.05)]);
        let csv = "label,same,neg\na,3,-3\nb,1,-1\nc,2,-2\nd,4,-4\n";
        let m = correlate(&rep, &PerformanceTable::from_reader(csv.as_bytes()).unwrap()).unwrap();
        assert_eq!(m.columns, ["same", "neg"]);
        assert_eq!(m.cells[0][0].rho, 1.0);
        assert_eq!(m.cells[0][1].rho, -1.0);
        assert_eq!(m.cells[1][0].rho, -1.0);
        assert_eq!(m.cells[0][0].n, 4);
    }

    #[test]
    fn overlap_and_format_errors() {
        let rep = report(&[("a", 3.0, 0.1), ("b", 1.0, 0.5), ("c", 2.0, 0.2)]);
        let two = "label,acc\na,1\nb,2\n";
        assert!(correlate(&rep, &PerformanceTable::from_reader(two.as_bytes()).unwrap()).is_err());
        let unknown = "label,acc\na,1\nb,2\nz,3\n";
        assert!(correlate(&rep, &PerformanceTable::from_reader(unknown.as_bytes()).unwrap()).is_err());
        assert!(PerformanceTable::from_reader("name,acc\na,1\n".as_bytes()).is_err());
        assert!(PerformanceTable::from_reader("label,acc\na,1.0e\n".as_bytes()).is_err());
        assert!(PerformanceTable::from_reader("label,acc\na,1\na,2\n".as_bytes()).is_err());
    }
}
