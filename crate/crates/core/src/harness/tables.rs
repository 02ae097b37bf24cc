use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::heatmap::render_heatmap;
use super::run::RunResult;
use super::{Family, HarnessError};
use crate::centrality::Measure;
use crate::stats::{GranularityReport, NetworkGranularity, RankCorrelationMatrix};

/// Row/column order of the correlation table.
pub const CORRELATION_ORDER: [Measure; 8] = [
    Measure::Closeness,
    Measure::Betweenness,
    Measure::Degree,
    Measure::Eigenvector,
    Measure::Information,
    Measure::Subgraph,
    Measure::WalkBetweenness,
    Measure::Eccentricity,
];

/// Row order of the granularity and best-granularity tables.
pub const GRANULARITY_ORDER: [Measure; 8] = [
    Measure::Betweenness,
    Measure::Closeness,
    Measure::Degree,
    Measure::Eccentricity,
    Measure::Eigenvector,
    Measure::Information,
    Measure::Subgraph,
    Measure::WalkBetweenness,
];

/// Column order of the best-granularity table.
pub const FAMILY_ORDER: [Family; 7] = [
    Family::Ni,
    Family::Cs,
    Family::Sf,
    Family::Sw,
    Family::Gr,
    Family::Er,
    Family::Kg,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Correlation,
    Granularity,
    Best,
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "correlation" => Ok(TableKind::Correlation),
            "granularity" => Ok(TableKind::Granularity),
            "best" => Ok(TableKind::Best),
            other => Err(format!("unknown table `{other}`")),
        }
    }
}

fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Measures present in every successful result, in canonical order.
fn measures_of(ok: &[&RunResult]) -> Vec<Measure> {
    Measure::ALL
        .into_iter()
        .filter(|&m| ok.iter().all(|r| r.distinct(m).is_some()))
        .collect()
}

fn successful(results: &[RunResult]) -> Result<Vec<&RunResult>, HarnessError> {
    let ok: Vec<&RunResult> = results.iter().filter(|r| r.is_ok()).collect();
    if ok.is_empty() {
        Err(HarnessError::EmptyResults)
    } else {
        Ok(ok)
    }
}

/// Mean tau-b per metric pair over the successful results accepted by
/// `keep`, in correlation-table order.
pub fn correlation_matrix(
    results: &[RunResult],
    keep: impl Fn(&RunResult) -> bool,
    confidence: f64,
) -> RankCorrelationMatrix {
    let samples = results
        .iter()
        .filter(|r| r.is_ok() && keep(r))
        .flat_map(|r| r.correlations.iter().map(|p| (p.a, p.b, p.tau)));
    RankCorrelationMatrix::from_samples(&CORRELATION_ORDER, samples, confidence)
}

fn correlation_csv(matrix: &RankCorrelationMatrix) -> String {
    let mut out = String::from("metric");
    for m in CORRELATION_ORDER {
        out.push(',');
        out.push_str(m.label());
    }
    out.push('\n');
    for (i, row) in CORRELATION_ORDER.iter().enumerate() {
        out.push_str(row.label());
        for (j, col) in CORRELATION_ORDER.iter().enumerate() {
            out.push(',');
            if j < i {
                if let Some(mean) = matrix.mean(*row, *col) {
                    out.push_str(&fixed(mean, 2));
                }
            }
        }
        out.push('\n');
    }
    out
}

fn correlation_pairs_csv(matrix: &RankCorrelationMatrix) -> String {
    let mut out = String::from("metric_a,metric_b,mean,ci_half_width,networks\n");
    for (i, a) in CORRELATION_ORDER.iter().enumerate() {
        for b in &CORRELATION_ORDER[..i] {
            if let Some(stat) = matrix.get(*a, *b) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    a.label(),
                    b.label(),
                    fixed(stat.mean, 4),
                    stat.half_width.map(|h| fixed(h, 4)).unwrap_or_default(),
                    stat.count
                );
            }
        }
    }
    out
}

/// Per-network distinct counts aligned with `measures`.
pub fn granularity_networks(
    results: &[&RunResult],
    measures: &[Measure],
) -> Vec<NetworkGranularity> {
    results
        .iter()
        .filter_map(|r| {
            let distinct: Option<Vec<usize>> = measures.iter().map(|&m| r.distinct(m)).collect();
            distinct.map(|distinct| NetworkGranularity { n: r.n, distinct })
        })
        .collect()
}

fn granularity_csv(ok: &[&RunResult], confidence: f64) -> String {
    let measures = measures_of(ok);
    let complex: Vec<&RunResult> = ok
        .iter()
        .copied()
        .filter(|r| r.family != Family::Ni)
        .collect();
    let corpus: Vec<&RunResult> = ok
        .iter()
        .copied()
        .filter(|r| r.family == Family::Ni)
        .collect();
    let sizes: BTreeSet<usize> = corpus.iter().map(|r| r.n).collect();

    let mut groups: Vec<(String, Vec<&RunResult>)> = vec![
        ("complex".to_string(), complex),
        ("non_isomorphic".to_string(), corpus.clone()),
    ];
    for &n in &sizes {
        let members = corpus.iter().copied().filter(|r| r.n == n).collect();
        groups.push((format!("non_isomorphic_n{n}"), members));
    }
    let reports: Vec<Option<GranularityReport>> = groups
        .iter()
        .map(|(_, members)| {
            (!members.is_empty()).then(|| {
                GranularityReport::from_networks(
                    &measures,
                    &granularity_networks(members, &measures),
                    confidence,
                )
            })
        })
        .collect();

    let mut out = String::from("metric");
    for (name, _) in &groups {
        let _ = write!(out, ",{name}_mean,{name}_ci");
    }
    out.push('\n');
    for m in GRANULARITY_ORDER {
        out.push_str(m.label());
        for report in &reports {
            match report.as_ref().and_then(|r| r.metric(m)) {
                Some(g) => {
                    let _ = write!(
                        out,
                        ",{},{}",
                        fixed(g.mean_percent, 2),
                        g.half_width.map(|h| fixed(h, 2)).unwrap_or_default()
                    );
                }
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

fn best_csv(ok: &[&RunResult], confidence: f64) -> String {
    let measures = measures_of(ok);
    let families: Vec<Family> = FAMILY_ORDER
        .into_iter()
        .filter(|f| ok.iter().any(|r| r.family == *f))
        .collect();
    let reports: Vec<GranularityReport> = families
        .iter()
        .map(|f| {
            let members: Vec<&RunResult> = ok.iter().copied().filter(|r| r.family == *f).collect();
            GranularityReport::from_networks(
                &measures,
                &granularity_networks(&members, &measures),
                confidence,
            )
        })
        .collect();

    let mut out = String::from("metric");
    for f in &families {
        out.push(',');
        out.push_str(f.label());
    }
    out.push('\n');
    for m in GRANULARITY_ORDER {
        out.push_str(m.label());
        for report in &reports {
            out.push(',');
            if let Some(p) = report.best_percent(m) {
                out.push_str(&fixed(p, 1));
            }
        }
        out.push('\n');
    }
    out
}

/// One report table as CSV text.
pub fn emit_tables(
    results: &[RunResult],
    which: TableKind,
    confidence: f64,
) -> Result<String, HarnessError> {
    let ok = successful(results)?;
    Ok(match which {
        TableKind::Correlation => {
            correlation_csv(&correlation_matrix(results, |_| true, confidence))
        }
        TableKind::Granularity => granularity_csv(&ok, confidence),
        TableKind::Best => best_csv(&ok, confidence),
    })
}

/// Writes every roll-up CSV (and the heatmap when all eight metrics are
/// present) into `dir`; returns the paths written.
pub fn emit_all_tables(
    dir: &Path,
    results: &[RunResult],
    confidence: f64,
) -> Result<Vec<PathBuf>, HarnessError> {
    let ok = successful(results)?;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut files: Vec<(String, String)> = vec![
        (
            "correlation.csv".into(),
            emit_tables(results, TableKind::Correlation, confidence)?,
        ),
        (
            "granularity.csv".into(),
            emit_tables(results, TableKind::Granularity, confidence)?,
        ),
        (
            "best.csv".into(),
            emit_tables(results, TableKind::Best, confidence)?,
        ),
    ];
    let pooled = correlation_matrix(results, |_| true, confidence);
    files.push((
        "correlation_pairs.csv".into(),
        correlation_pairs_csv(&pooled),
    ));
    for family in FAMILY_ORDER {
        if ok.iter().any(|r| r.family == family) {
            let matrix = correlation_matrix(results, |r| r.family == family, confidence);
            files.push((
                format!("correlation_{}.csv", family.key()),
                correlation_csv(&matrix),
            ));
        }
    }
    if pooled.is_complete() {
        files.push(("heatmap.svg".into(), render_heatmap(&pooled)?));
    }

    let mut written = Vec::with_capacity(files.len());
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::{MetricSummary, PairTau};

    fn result(family: Family, n: usize, distinct: [usize; 8], tau: f64) -> RunResult {
        let mut correlations = Vec::new();
        for i in 0..8 {
            for j in i + 1..8 {
                correlations.push(PairTau {
                    a: Measure::ALL[i],
                    b: Measure::ALL[j],
                    tau,
                });
            }
        }
        RunResult {
            cell: 0,
            sample: 0,
            family,
            config: String::new(),
            params: None,
            seed: None,
            graph6: None,
            n,
            m: 0,
            retries: 0,
            error: None,
            metrics: Measure::ALL
                .iter()
                .zip(distinct)
                .map(|(&measure, distinct)| MetricSummary { measure, distinct })
                .collect(),
            correlations,
            vectors: None,
            timings: Vec::new(),
        }
    }

    #[test]
    fn correlation_has_28_lower_cells() {
        let rs = vec![result(Family::Er, 10, [10; 8], 0.5)];
        let csv = emit_tables(&rs, TableKind::Correlation, 0.99).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "metric,C_c,C_b,C_d,C_e,C_i,C_s,C_w,C_x");
        assert_eq!(lines.len(), 9);
        let populated = csv.matches("0.50").count();
        assert_eq!(populated, 28);
        assert_eq!(lines[1], "C_c,,,,,,,,");
        assert_eq!(lines[8], "C_x,0.50,0.50,0.50,0.50,0.50,0.50,0.50,");
    }

    #[test]
    fn single_network_granularity_has_no_half_width() {
        let rs = vec![result(Family::Sf, 8, [8, 4, 2, 1, 8, 8, 6, 8], 1.0)];
        let csv = emit_tables(&rs, TableKind::Granularity, 0.99).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "metric,complex_mean,complex_ci,non_isomorphic_mean,non_isomorphic_ci"
        );
        assert_eq!(lines[1], "C_b,100.00,,,");
        assert_eq!(lines[2], "C_c,50.00,,,");
        assert_eq!(lines[4], "C_x,12.50,,,");
    }

    #[test]
    fn granularity_groups_by_corpus_size() {
        let rs = vec![
            result(Family::Ni, 6, [6; 8], 1.0),
            result(Family::Ni, 6, [3; 8], 1.0),
            result(Family::Ni, 7, [7; 8], 1.0),
        ];
        let csv = emit_tables(&rs, TableKind::Granularity, 0.99).unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.ends_with("non_isomorphic_n6_mean,non_isomorphic_n6_ci,non_isomorphic_n7_mean,non_isomorphic_n7_ci"));
        let row = csv.lines().nth(1).unwrap();
        assert!(row.starts_with("C_b,,,83.33,"));
        assert!(row.contains(",75.00,"));
        assert!(row.ends_with(",100.00,"));
    }

    #[test]
    fn best_columns_may_exceed_100() {
        let rs = vec![
            result(Family::Ni, 6, [1; 8], 1.0),
            result(Family::Er, 10, [10, 3, 3, 1, 9, 10, 10, 10], 1.0),
        ];
        let csv = emit_tables(&rs, TableKind::Best, 0.99).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "metric,N_ni,M_er");
        assert_eq!(lines[1], "C_b,100.0,100.0");
        assert_eq!(lines[2], "C_c,100.0,0.0");
        assert_eq!(lines[5], "C_e,100.0,0.0");
        let column_total: f64 = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
            .sum();
        assert!(column_total > 100.0);
    }

    #[test]
    fn empty_or_failed_results_are_an_error() {
        assert!(matches!(
            emit_tables(&[], TableKind::Best, 0.99),
            Err(HarnessError::EmptyResults)
        ));
        let mut failed = result(Family::Er, 5, [5; 8], 1.0);
        failed.error = Some("boom".into());
        assert!(emit_tables(&[failed], TableKind::Correlation, 0.99).is_err());
    }

    #[test]
    fn negative_zero_is_printed_plainly() {
        assert_eq!(fixed(-0.001, 2), "0.00");
        assert_eq!(fixed(-0.25, 1), "-0.2");
    }
}
