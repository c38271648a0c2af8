//! Rendering of reports to JSON, CSV, and markdown. JSON always carries
//! full precision (it is the machine format and must round-trip); CSV and
//! markdown honor the `--precision` flag.

use std::fmt::Write as _;

use clap::ValueEnum;

use sensan::analysis::CaptureAnalysis;
use sensan::sensitiveness::{Tails, TestFamily};
use sensan::simulation::StudySummary;
use sensan::tables::TableRow;
use sensan::{DistributionParams, TestSpec};

use crate::report::{MesReport, PosthocReport, PowerReport, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Sample sizes for sensitiveness and for 80% power, side by side.
    Table2,
    /// Minimum N with critical value and achieved effect size.
    Supp2,
}

pub fn family_label(spec: &TestSpec) -> String {
    match spec.family() {
        TestFamily::TTwoSample => "t2".to_string(),
        TestFamily::PointBiserialR => "r".to_string(),
        TestFamily::Chi2Gof { df } => format!("chi2(df={df})"),
        TestFamily::OneWayF { groups } => format!("anova(k={groups})"),
    }
}

pub fn tails_label(spec: &TestSpec) -> &'static str {
    match spec.tails() {
        Tails::One => "1",
        Tails::Two => "2",
    }
}

fn df_label(params: &DistributionParams) -> String {
    match params {
        DistributionParams::StudentT { df } => format!("t({df})"),
        DistributionParams::ChiSquare { df } => format!("chi2({df})"),
        DistributionParams::FisherF { df1, df2 } => format!("F({df1},{df2})"),
    }
}

fn num(v: f64, precision: usize) -> String {
    format!("{v:.precision$}")
}

fn csv_from_rows(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

fn markdown_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut s = String::new();
    writeln!(s, "| {} |", header.join(" | ")).unwrap();
    writeln!(s, "|{}|", header.iter().map(|_| " --- ").collect::<Vec<_>>().join("|")).unwrap();
    for row in rows {
        writeln!(s, "| {} |", row.join(" | ")).unwrap();
    }
    s
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn render_solve(report: &SolveReport, format: Format, precision: usize) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv | Format::Markdown => {
            let header = [
                "test", "sig", "tails", "target", "n_min", "critical_value", "achieved",
                "df", "at_df_floor", "equal_split_possible",
            ];
            let row = vec![
                family_label(&report.spec),
                num(report.spec.sig(), precision),
                tails_label(&report.spec).to_string(),
                format!("{} = {}", report.target.metric(), num(report.target.value(), precision)),
                report.result.n_min.to_string(),
                num(report.result.critical_value, precision),
                format!(
                    "{} = {}",
                    report.result.achieved_mes.metric(),
                    num(report.result.achieved_mes.value(), precision)
                ),
                df_label(&report.result.df),
                report.result.at_df_floor.to_string(),
                report.result.equal_split_possible.to_string(),
            ];
            if format == Format::Csv {
                csv_from_rows(vec![header.iter().map(|s| s.to_string()).collect(), row])
            } else {
                markdown_table(&header, vec![row])
            }
        }
    }
}

pub fn render_mes(report: &MesReport, format: Format, precision: usize) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv | Format::Markdown => {
            let header = ["test", "sig", "tails", "n", "critical_value", "mes", "df"];
            let row = vec![
                family_label(&report.spec),
                num(report.spec.sig(), precision),
                tails_label(&report.spec).to_string(),
                report.result.n.to_string(),
                num(report.result.critical_value, precision),
                format!(
                    "{} = {}",
                    report.result.mes.metric(),
                    num(report.result.mes.value(), precision)
                ),
                df_label(&report.result.df),
            ];
            if format == Format::Csv {
                csv_from_rows(vec![header.iter().map(|s| s.to_string()).collect(), row])
            } else {
                markdown_table(&header, vec![row])
            }
        }
    }
}

pub fn render_posthoc(report: &PosthocReport, format: Format, precision: usize) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv | Format::Markdown => {
            let header = ["n_actual", "n_min", "sensitiveness_pct"];
            let row = vec![
                report.n_actual.to_string(),
                report.n_min.to_string(),
                num(report.sensitiveness_pct, precision),
            ];
            if format == Format::Csv {
                csv_from_rows(vec![header.iter().map(|s| s.to_string()).collect(), row])
            } else {
                markdown_table(&header, vec![row])
            }
        }
    }
}

pub fn render_power(report: &PowerReport, format: Format, precision: usize) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv | Format::Markdown => {
            let header = ["test", "alpha", "tails", "es", "target_power", "n", "power"];
            let row = vec![
                family_label(&report.spec),
                num(report.spec.sig(), precision),
                tails_label(&report.spec).to_string(),
                format!(
                    "{} = {}",
                    report.population_es.metric(),
                    num(report.population_es.value(), precision)
                ),
                report
                    .target_power
                    .map(|p| num(p, precision))
                    .unwrap_or_else(|| "-".to_string()),
                report.n.to_string(),
                num(report.power, precision),
            ];
            if format == Format::Csv {
                csv_from_rows(vec![header.iter().map(|s| s.to_string()).collect(), row])
            } else {
                markdown_table(&header, vec![row])
            }
        }
    }
}

pub fn render_table(
    rows: &[TableRow],
    kind: TableKind,
    format: Format,
    precision: usize,
) -> String {
    if format == Format::Json {
        return json(&rows);
    }
    let (header, body): (Vec<&str>, Vec<Vec<String>>) = match kind {
        TableKind::Table2 => (
            vec!["test", "es", "size", "target", "n_sns", "n_pwr"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.test_label.clone(),
                        r.target_es.metric().to_string(),
                        r.size.to_string(),
                        num(r.target_es.value(), precision),
                        r.n_sns.to_string(),
                        r.n_pwr.to_string(),
                    ]
                })
                .collect(),
        ),
        TableKind::Supp2 => (
            vec!["test", "es", "size", "target", "n", "critical_value", "actual_es"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.test_label.clone(),
                        r.target_es.metric().to_string(),
                        r.size.to_string(),
                        num(r.target_es.value(), precision),
                        r.n_sns.to_string(),
                        num(r.critical_value, precision),
                        num(r.actual_es.value(), precision),
                    ]
                })
                .collect(),
        ),
    };
    if format == Format::Csv {
        let mut all = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
        all.extend(body);
        csv_from_rows(all)
    } else {
        markdown_table(&header, body)
    }
}

fn capture_rows(analysis: &CaptureAnalysis, _precision: usize) -> Vec<Vec<String>> {
    analysis
        .totals
        .iter()
        .map(|(name, &f)| {
            // shares are conventionally printed at one decimal
            vec![name.clone(), f.to_string(), num(analysis.shares[name], 1)]
        })
        .collect()
}

fn comparison_rows(analysis: &CaptureAnalysis, precision: usize) -> Vec<Vec<String>> {
    analysis
        .pairwise
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                num(c.w, precision),
                num(c.chi2, precision),
                num(c.p, precision),
            ]
        })
        .collect()
}

/// Stdout summary of a simulation run: capture totals with shares, then
/// the pairwise comparisons.
pub fn render_capture_analysis(
    analysis: &CaptureAnalysis,
    format: Format,
    precision: usize,
) -> String {
    match format {
        Format::Json => json(analysis),
        Format::Csv => {
            let mut head = vec![vec![
                "condition".to_string(),
                "captures".to_string(),
                "share_pct".to_string(),
            ]];
            head.extend(capture_rows(analysis, precision));
            let mut cmp = vec![vec![
                "comparison".to_string(),
                "w".to_string(),
                "chi2".to_string(),
                "p".to_string(),
            ]];
            cmp.extend(comparison_rows(analysis, precision));
            format!("{}\n{}", csv_from_rows(head), csv_from_rows(cmp))
        }
        Format::Markdown => {
            let captures = markdown_table(
                &["condition", "captures", "share_pct"],
                capture_rows(analysis, precision),
            );
            let comparisons = markdown_table(
                &["comparison", "w", "chi2", "p"],
                comparison_rows(analysis, precision),
            );
            format!("{captures}\n{comparisons}")
        }
    }
}

/// Per-study descriptive table (one row per study).
pub fn studies_csv(summaries: &[StudySummary], precision: usize) -> String {
    let mut rows = Vec::new();
    let conditions: Vec<String> = summaries
        .first()
        .map(|s| s.pct_significant.keys().cloned().collect())
        .unwrap_or_default();
    let mut header = vec![
        "study".to_string(),
        "research_n".to_string(),
        "populations".to_string(),
        "mean1".to_string(),
        "sd1".to_string(),
        "mean2".to_string(),
        "sd2".to_string(),
        "d".to_string(),
    ];
    for c in &conditions {
        header.push(format!("pct_sig_{c}"));
    }
    for c in &conditions {
        header.push(format!("captures_{c}"));
    }
    rows.push(header);
    for s in summaries {
        let mut row = vec![
            (s.study_index + 1).to_string(),
            s.research_n.to_string(),
            s.populations.to_string(),
            num(s.mean1, precision),
            num(s.sd1, precision),
            num(s.mean2, precision),
            num(s.sd2, precision),
            num(s.d, precision),
        ];
        for c in &conditions {
            row.push(num(s.pct_significant[c], 1));
        }
        for c in &conditions {
            row.push(s.captures[c].to_string());
        }
        rows.push(row);
    }
    csv_from_rows(rows)
}

/// Aggregate capture counts and shares (one row per condition).
pub fn capture_summary_csv(analysis: &CaptureAnalysis, precision: usize) -> String {
    let mut rows = vec![vec![
        "condition".to_string(),
        "captures".to_string(),
        "share_pct".to_string(),
    ]];
    rows.extend(capture_rows(analysis, precision));
    csv_from_rows(rows)
}

/// Aggregate pairwise comparisons (one row per condition pair).
pub fn comparisons_csv(analysis: &CaptureAnalysis, precision: usize) -> String {
    let mut rows = vec![vec![
        "comparison".to_string(),
        "w".to_string(),
        "chi2".to_string(),
        "p".to_string(),
    ]];
    rows.extend(comparison_rows(analysis, precision));
    csv_from_rows(rows)
}

/// Per-study capture counts, shares, and pairwise statistics, one column
/// per study plus an all-studies column.
pub fn comparisons_by_study_csv(analysis: &CaptureAnalysis, precision: usize) -> String {
    let studies = &analysis.per_study;
    let mut header = vec!["statistic".to_string()];
    for s in studies {
        header.push(format!("study_{}", s.study_index + 1));
    }
    header.push("all_studies".to_string());

    let mut rows = vec![header];
    for name in analysis.totals.keys() {
        let mut row = vec![format!("f_{name}")];
        for s in studies {
            row.push(s.captures.get(name).copied().unwrap_or(0).to_string());
        }
        row.push(analysis.totals[name].to_string());
        rows.push(row);
    }
    for name in analysis.totals.keys() {
        let mut row = vec![format!("pct_{name}")];
        for s in studies {
            row.push(
                s.shares
                    .get(name)
                    .map(|v| num(*v, 1))
                    .unwrap_or_else(|| "-".to_string()),
            );
        }
        row.push(num(analysis.shares[name], 1));
        rows.push(row);
    }
    for (i, aggregate) in analysis.pairwise.iter().enumerate() {
        let mut chi2_row = vec![format!("chi2_{}", aggregate.label)];
        let mut w_row = vec![format!("w_{}", aggregate.label)];
        for s in studies {
            match s.pairwise.get(i) {
                Some(c) if c.label == aggregate.label => {
                    chi2_row.push(num(c.chi2, precision));
                    w_row.push(num(c.w, precision));
                }
                _ => {
                    let found = s.pairwise.iter().find(|c| c.label == aggregate.label);
                    chi2_row.push(found.map(|c| num(c.chi2, precision)).unwrap_or("-".into()));
                    w_row.push(found.map(|c| num(c.w, precision)).unwrap_or("-".into()));
                }
            }
        }
        chi2_row.push(num(aggregate.chi2, precision));
        w_row.push(num(aggregate.w, precision));
        rows.push(chi2_row);
        rows.push(w_row);
    }
    csv_from_rows(rows)
}
