//! Evaluation reports and their CSV / Markdown renderings.
//!
//! Renderings are pure functions of the report contents. The creation time is
//! kept as metadata but never rendered, so repeated runs give identical bytes.

use std::fmt::Write as _;

use crate::eval::EvalMethod;
use crate::manifest::Mode;

/// Scores of one manifest entry. A failed entry carries `error` and no scores.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageRow {
    pub image: String,
    pub gamma: Option<f64>,
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
    pub fsim: Option<f64>,
    pub niqe: Option<f64>,
    pub error: Option<String>,
}

/// Arithmetic means over successful rows; PSNR is averaged in dB.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricMeans {
    pub gamma: Option<f64>,
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
    pub fsim: Option<f64>,
    pub niqe: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl MetricMeans {
    pub fn from_rows(rows: &[ImageRow]) -> Self {
        let ok = || rows.iter().filter(|r| r.error.is_none());
        Self {
            gamma: mean(ok().filter_map(|r| r.gamma)),
            psnr: mean(ok().filter_map(|r| r.psnr)),
            ssim: mean(ok().filter_map(|r| r.ssim)),
            fsim: mean(ok().filter_map(|r| r.fsim)),
            niqe: mean(ok().filter_map(|r| r.niqe)),
        }
    }

    /// Per-metric mean of several aggregates, skipping those that lack the metric.
    pub fn mean_of(all: &[MetricMeans]) -> Self {
        Self {
            gamma: mean(all.iter().filter_map(|m| m.gamma)),
            psnr: mean(all.iter().filter_map(|m| m.psnr)),
            ssim: mean(all.iter().filter_map(|m| m.ssim)),
            fsim: mean(all.iter().filter_map(|m| m.fsim)),
            niqe: mean(all.iter().filter_map(|m| m.niqe)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub dataset: String,
    pub mode: Mode,
    pub method: EvalMethod,
    /// Seconds since the Unix epoch when the run finished.
    pub created_unix: u64,
    /// One row per manifest entry, in manifest order.
    pub rows: Vec<ImageRow>,
    pub aggregate: MetricMeans,
}

impl EvalReport {
    pub fn failures(&self) -> impl Iterator<Item = &ImageRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

/// Three decimals; infinite PSNR renders as `inf`.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.3}")
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_field(s: &str) -> String {
    s.replace('|', "\\|").replace(['\n', '\r'], " ")
}

const CSV_HEADER: &str = "image,gamma,psnr,ssim,fsim,niqe";

fn csv_line(out: &mut String, label: &str, gamma: Option<f64>, m: [Option<f64>; 4]) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{}",
        csv_field(label),
        cell(gamma),
        cell(m[0]),
        cell(m[1]),
        cell(m[2]),
        cell(m[3])
    );
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Markdown => render_markdown(report),
    }
}

fn render_csv(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        csv_line(&mut out, &row.image, row.gamma, [row.psnr, row.ssim, row.fsim, row.niqe]);
    }
    let a = &report.aggregate;
    csv_line(&mut out, "mean", a.gamma, [a.psnr, a.ssim, a.fsim, a.niqe]);
    out
}

fn metric_headers(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::Paired => &["PSNR ↑", "SSIM ↑", "FSIM ↑"],
        Mode::Unpaired => &["NIQE ↓"],
    }
}

fn metric_cells(mode: Mode, m: [Option<f64>; 4]) -> Vec<String> {
    match mode {
        Mode::Paired => vec![cell(m[0]), cell(m[1]), cell(m[2])],
        Mode::Unpaired => vec![cell(m[3])],
    }
}

fn table_row(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

fn table_header(out: &mut String, headers: &[String]) {
    table_row(out, headers);
    let rule: Vec<String> = headers
        .iter()
        .enumerate()
        .map(|(i, _)| if i == 0 { "---".into() } else { "---:".into() })
        .collect();
    table_row(out, &rule);
}

fn render_markdown(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "### {} ({}, {})\n",
        md_field(&report.dataset),
        report.mode.as_str(),
        report.method.describe()
    );
    let mut headers = vec!["Image".to_string(), "γ".to_string()];
    headers.extend(metric_headers(report.mode).iter().map(|h| h.to_string()));
    table_header(&mut out, &headers);
    for row in &report.rows {
        let mut cells = vec![md_field(&row.image), cell(row.gamma)];
        if row.error.is_some() {
            cells.extend(metric_headers(report.mode).iter().map(|_| "failed".to_string()));
        } else {
            cells.extend(metric_cells(report.mode, [row.psnr, row.ssim, row.fsim, row.niqe]));
        }
        table_row(&mut out, &cells);
    }
    let a = &report.aggregate;
    let mut cells = vec!["**Mean**".to_string(), cell(a.gamma)];
    cells.extend(metric_cells(report.mode, [a.psnr, a.ssim, a.fsim, a.niqe]));
    table_row(&mut out, &cells);

    let failed: Vec<_> = report.failures().collect();
    if !failed.is_empty() {
        let _ = writeln!(out, "\nFailed images ({}):\n", failed.len());
        for row in failed {
            let _ = writeln!(
                out,
                "- {}: {}",
                md_field(&row.image),
                md_field(row.error.as_deref().unwrap_or_default())
            );
        }
    }
    out
}

/// Cross-dataset summary: one method row, one column group per dataset, and
/// an `Average` NIQE column when several unpaired datasets are present.
pub fn render_summary(reports: &[EvalReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => summary_csv(reports),
        ReportFormat::Markdown => summary_markdown(reports),
    }
}

fn summary_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from("dataset,mode,images,failed,gamma,psnr,ssim,fsim,niqe\n");
    for r in reports {
        let a = &r.aggregate;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.dataset),
            r.mode.as_str(),
            r.rows.len(),
            r.failures().count(),
            cell(a.gamma),
            cell(a.psnr),
            cell(a.ssim),
            cell(a.fsim),
            cell(a.niqe)
        );
    }
    let avg = cross_average(reports);
    let _ = writeln!(
        out,
        "average,,,,{},{},{},{},{}",
        cell(avg.gamma),
        cell(avg.psnr),
        cell(avg.ssim),
        cell(avg.fsim),
        cell(avg.niqe)
    );
    out
}

fn cross_average(reports: &[EvalReport]) -> MetricMeans {
    let all: Vec<MetricMeans> = reports.iter().map(|r| r.aggregate).collect();
    MetricMeans::mean_of(&all)
}

fn summary_markdown(reports: &[EvalReport]) -> String {
    let label = reports
        .first()
        .map(|r| r.method.label())
        .unwrap_or_else(|| "TAGC".into());
    let mut out = String::new();
    for mode in [Mode::Paired, Mode::Unpaired] {
        let group: Vec<&EvalReport> = reports.iter().filter(|r| r.mode == mode).collect();
        if group.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let mut headers = vec!["Algorithm".to_string()];
        let mut cells = vec![label.clone()];
        for r in &group {
            let a = &r.aggregate;
            for h in metric_headers(mode) {
                headers.push(format!("{} {h}", md_field(&r.dataset)));
            }
            cells.extend(metric_cells(mode, [a.psnr, a.ssim, a.fsim, a.niqe]));
        }
        if mode == Mode::Unpaired && group.len() > 1 {
            headers.push("Average".into());
            cells.push(cell(MetricMeans::mean_of(&group.iter().map(|r| r.aggregate).collect::<Vec<_>>()).niqe));
        }
        table_header(&mut out, &headers);
        table_row(&mut out, &cells);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(rows: Vec<ImageRow>) -> EvalReport {
        EvalReport {
            dataset: "set".into(),
            mode: Mode::Paired,
            method: EvalMethod::default(),
            created_unix: 0,
            aggregate: MetricMeans::from_rows(&rows),
            rows,
        }
    }

    fn row(image: &str, psnr: f64) -> ImageRow {
        ImageRow {
            image: image.into(),
            gamma: Some(5.0),
            psnr: Some(psnr),
            ssim: Some(0.5),
            fsim: Some(0.9),
            ..Default::default()
        }
    }

    #[test]
    fn three_decimals() {
        assert_eq!(format_value(14.5514), "14.551");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(1.0), "1.000");
    }

    #[test]
    fn one_row_csv() {
        let text = render_report(&report(vec![row("a.png", 14.5514)]), ReportFormat::Csv);
        assert_eq!(
            text,
            "image,gamma,psnr,ssim,fsim,niqe\na.png,5.000,14.551,0.500,0.900,\nmean,5.000,14.551,0.500,0.900,\n"
        );
    }

    #[test]
    fn failed_rows_are_excluded_from_means() {
        let mut bad = row("b.png", 0.0);
        bad.error = Some("boom".into());
        bad.psnr = None;
        let r = report(vec![row("a.png", 10.0), bad, row("c.png", 20.0)]);
        assert_eq!(r.aggregate.psnr, Some(15.0));
        let md = render_report(&r, ReportFormat::Markdown);
        assert!(md.contains("| b.png | 5.000 | failed | failed | failed |"));
        assert!(md.contains("- b.png: boom"));
        assert!(md.contains("| Image | γ | PSNR ↑ | SSIM ↑ | FSIM ↑ |"));
    }

    #[test]
    fn awkward_names_are_escaped() {
        let text = render_report(&report(vec![row("a,\"b\".png", 1.0)]), ReportFormat::Csv);
        assert!(text.contains("\"a,\"\"b\"\".png\",5.000"));
    }

    #[test]
    fn summary_has_average_for_several_unpaired_sets() {
        let mk = |name: &str, niqe: f64| {
            let rows = vec![ImageRow {
                image: "x".into(),
                gamma: Some(4.0),
                niqe: Some(niqe),
                ..Default::default()
            }];
            EvalReport {
                dataset: name.into(),
                mode: Mode::Unpaired,
                method: EvalMethod::default(),
                created_unix: 0,
                aggregate: MetricMeans::from_rows(&rows),
                rows,
            }
        };
        let md = render_summary(&[mk("DICM", 3.713), mk("LIME", 3.877)], ReportFormat::Markdown);
        assert!(md.contains("| Algorithm | DICM NIQE ↓ | LIME NIQE ↓ | Average |"), "{md}");
        assert!(md.contains("| TAGC | 3.713 | 3.877 | 3.795 |"), "{md}");
    }
}
