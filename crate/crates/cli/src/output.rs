//! Text tables, CSV tables, SVG plots and the JSON report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use lpadm_core::embedding::EmbeddingBound;
use lpadm_core::model::{CatalogListing, CatalogParams};
use lpadm_core::oracle::ConstantProfile;
use lpadm_core::{Admissible, AnalysisConfig, SystemDescriptor, ThresholdScan, Verdict};
use serde::Serialize;

use crate::svg::{Plot, Series, Style};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Svg,
}

/// A CSV table: header plus rows of already formatted cells.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Where artifacts go and which ones are wanted.
pub struct Output {
    dir: PathBuf,
    text: bool,
    csv: bool,
    svg: bool,
}

impl Output {
    pub fn new(dir: PathBuf, formats: &[Format]) -> Self {
        Output {
            dir,
            text: formats.contains(&Format::Text),
            csv: formats.contains(&Format::Csv),
            svg: formats.contains(&Format::Svg),
        }
    }

    pub fn text(&self) -> bool {
        self.text
    }

    pub fn svg_enabled(&self) -> bool {
        self.svg
    }

    fn writes_files(&self) -> bool {
        self.csv || self.svg
    }

    fn path(&self, name: &str) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        Ok(self.dir.join(name))
    }

    fn announce(&self, path: &Path) {
        if !self.text {
            println!("wrote {}", path.display());
        }
    }

    pub fn csv(&self, name: &str, table: Table) -> anyhow::Result<()> {
        if !self.csv {
            return Ok(());
        }
        let path = self.path(name)?;
        let mut w =
            csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        self.announce(&path);
        Ok(())
    }

    pub fn svg(&self, name: &str, plot: &Plot) -> anyhow::Result<()> {
        let path = self.path(name)?;
        fs::write(&path, plot.render()).with_context(|| format!("writing {}", path.display()))?;
        self.announce(&path);
        Ok(())
    }

    /// `report.json`, written next to any csv or svg artifact.
    pub fn json(
        &self,
        command: &str,
        system: &SystemDescriptor,
        config: &AnalysisConfig,
        result: serde_json::Value,
    ) -> anyhow::Result<()> {
        if !self.writes_files() {
            return Ok(());
        }
        #[derive(Serialize)]
        struct Report<'a> {
            command: &'a str,
            version: &'a str,
            system: &'a SystemDescriptor,
            config: &'a AnalysisConfig,
            result: serde_json::Value,
        }
        let report = Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            system,
            config,
            result,
        };
        let path = self.path("report.json")?;
        fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        self.announce(&path);
        Ok(())
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn short(x: f64) -> String {
    if !x.is_finite() {
        num(x)
    } else if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
        format!("{x:.4e}")
    } else {
        format!("{x:.6}")
    }
}

fn short_opt(x: Option<f64>) -> String {
    x.map(short).unwrap_or_else(|| "-".into())
}

fn debug_str<T: std::fmt::Debug>(t: T) -> String {
    format!("{t:?}")
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system:     {}", v.system);
    let _ = writeln!(s, "p:          {}", v.p);
    let _ = writeln!(s, "admissible: {}", v.admissible.as_str());
    let _ = writeln!(s, "scope:      {:?}", v.time_scope);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<18} {:<22} {:<11} {:<13} {:>14} {:>10} {:<13} advisory",
        "criterion", "verdict", "strength", "scope", "witness", "growth", "series"
    );
    for r in &v.evidence {
        let series = r
            .series
            .map(|sv| format!("{:?}", sv.classification))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<18} {:<22} {:<11} {:<13} {:>14} {:>10} {:<13} {}",
            r.criterion.as_str(),
            debug_str(r.verdict),
            debug_str(r.sufficiency),
            debug_str(r.time_scope),
            short(r.witness),
            short_opt(r.growth_exponent),
            series,
            if r.advisory { "yes" } else { "no" }
        );
        for note in &r.notes {
            let _ = writeln!(s, "    {note}");
        }
    }
    for c in &v.contradictions {
        let _ = writeln!(s, "contradiction: {c}");
    }
    s
}

pub fn verdict_csv(v: &Verdict) -> Table {
    Table {
        header: vec![
            "criterion",
            "verdict",
            "sufficiency",
            "time_scope",
            "advisory",
            "witness",
            "growth_exponent",
            "series_classification",
            "series_mode",
            "tail_exponent",
            "margin",
            "partial_value",
        ],
        rows: v
            .evidence
            .iter()
            .map(|r| {
                let (class, mode, tail, margin, partial) = match r.series {
                    Some(sv) => (
                        debug_str(sv.classification),
                        debug_str(sv.mode),
                        num(sv.tail_exponent),
                        num(sv.margin),
                        num(sv.partial_value),
                    ),
                    None => Default::default(),
                };
                vec![
                    r.criterion.as_str().to_string(),
                    debug_str(r.verdict),
                    debug_str(r.sufficiency),
                    debug_str(r.time_scope),
                    r.advisory.to_string(),
                    num(r.witness),
                    opt_num(r.growth_exponent),
                    class,
                    mode,
                    tail,
                    margin,
                    partial,
                ]
            })
            .collect(),
    }
}

fn deciding(ids: &[lpadm_core::CriterionId]) -> String {
    ids.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(";")
}

pub fn threshold_text(scan: &ThresholdScan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system:     {}", scan.system);
    let _ = writeln!(s, "bracket:    [{}, {}]", scan.p_low, scan.p_high);
    let _ = writeln!(s, "p*:         {:.6}", scan.p_star);
    let _ = writeln!(s, "resolution: {}", scan.resolution);
    if scan.sufficient_only {
        let _ = writeln!(
            s,
            "lower side accepted as Unknown: only a sufficient criterion applies"
        );
    }
    if let Some(p) = scan.halted_at {
        let _ = writeln!(s, "halted at p = {p}: verdict Unknown");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>4} {:>12} {:<8} deciding", "step", "p", "verdict");
    for (i, t) in scan.trace.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:>4} {:>12.6} {:<8} {}",
            i,
            t.p,
            t.admissible.as_str(),
            deciding(&t.deciding)
        );
    }
    s
}

pub fn trace_csv(scan: &ThresholdScan) -> Table {
    Table {
        header: vec!["step", "p", "admissible", "deciding"],
        rows: scan
            .trace
            .iter()
            .enumerate()
            .map(|(i, t)| {
                vec![
                    i.to_string(),
                    num(t.p),
                    t.admissible.as_str().to_string(),
                    deciding(&t.deciding),
                ]
            })
            .collect(),
    }
}

pub fn trace_plot(scan: &ThresholdScan) -> Plot {
    let series = [
        (Admissible::Yes, "seagreen"),
        (Admissible::No, "firebrick"),
        (Admissible::Unknown, "goldenrod"),
    ]
    .into_iter()
    .map(|(a, color)| Series {
        label: a.as_str().to_string(),
        color,
        style: Style::Markers,
        points: scan
            .trace
            .iter()
            .enumerate()
            .filter(|(_, t)| t.admissible == a)
            .map(|(i, t)| (i as f64, t.p))
            .collect(),
    })
    .collect();
    Plot {
        title: format!("{}: verdict trace", scan.system),
        x_label: "step".into(),
        y_label: "p".into(),
        log_x: false,
        log_y: false,
        series,
        guides: vec![
            (scan.p_low, format!("p_low = {:.4}", scan.p_low)),
            (scan.p_high, format!("p_high = {:.4}", scan.p_high)),
        ],
    }
}

const PALETTE: [&str; 4] = ["steelblue", "darkorange", "purple", "black"];

/// `lambda^(1/p) ||R(lambda) b||` for each `(p, curve)`.
pub fn witness_plot(system: &str, curves: &[(f64, Vec<(f64, f64)>)]) -> Plot {
    Plot {
        title: format!("{system}: resolvent witness"),
        x_label: "lambda".into(),
        y_label: "lambda^(1/p) |R(lambda) b|".into(),
        log_x: true,
        log_y: true,
        series: curves
            .iter()
            .enumerate()
            .map(|(i, (p, pts))| Series {
                label: format!("p = {p:.4}"),
                color: PALETTE[i % PALETTE.len()],
                style: Style::Line,
                points: pts.clone(),
            })
            .collect(),
        guides: vec![],
    }
}

pub fn profile_text(system: &str, p: f64, profile: &ConstantProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system:         {system}");
    let _ = writeln!(s, "p:              {p}");
    let _ = writeln!(s, "classification: {:?}", profile.classification);
    let _ = writeln!(s, "terminal slope: {}", short_opt(profile.terminal_slope));
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>10} {:>14}", "t", "C_est(t)");
    for (t, c) in profile.times.iter().zip(&profile.constants) {
        let _ = writeln!(s, "{:>10} {:>14}", t, short(*c));
    }
    s
}

pub fn profile_csv(profile: &ConstantProfile) -> Table {
    Table {
        header: vec!["t", "c_est"],
        rows: profile
            .times
            .iter()
            .zip(&profile.constants)
            .map(|(t, c)| vec![num(*t), num(*c)])
            .collect(),
    }
}

pub fn profile_plot(system: &str, p: f64, profile: &ConstantProfile) -> Plot {
    Plot {
        title: format!("{system}: simulated constant, p = {p}"),
        x_label: "t".into(),
        y_label: "C_est(t)".into(),
        log_x: true,
        log_y: true,
        series: vec![Series {
            label: format!("{:?}", profile.classification),
            color: PALETTE[0],
            style: Style::Line,
            points: profile
                .times
                .iter()
                .copied()
                .zip(profile.constants.iter().copied())
                .collect(),
        }],
        guides: vec![],
    }
}

pub fn embedding_text(system: &str, p: f64, bound: &EmbeddingBound) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system: {system}");
    let _ = writeln!(s, "p:      {p}");
    let _ = writeln!(s, "bound:  {}", short(bound.bound));
    let _ = writeln!(s, "trend:  {}", short(bound.trend));
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>12} {:>14}", "rate", "ratio");
    for (r, v) in &bound.exponential_ratios {
        let _ = writeln!(s, "{:>12} {:>14}", short(*r), short(*v));
    }
    s
}

pub fn embedding_csv(bound: &EmbeddingBound) -> Table {
    Table {
        header: vec!["rate", "ratio"],
        rows: bound
            .exponential_ratios
            .iter()
            .map(|(r, v)| vec![num(*r), num(*v)])
            .collect(),
    }
}

pub fn embedding_plot(system: &str, p: f64, bound: &EmbeddingBound) -> Plot {
    Plot {
        title: format!("{system}: embedding ratio, p = {p}"),
        x_label: "rate".into(),
        y_label: "|Lu|_L2(mu) / |u|_p".into(),
        log_x: true,
        log_y: true,
        series: vec![Series {
            label: "exponentials".into(),
            color: PALETTE[0],
            style: Style::Line,
            points: bound.exponential_ratios.clone(),
        }],
        guides: vec![],
    }
}

/// One catalog row, owned.
pub struct CatalogRow {
    pub label: String,
    pub params: String,
    pub known_threshold: Option<f64>,
    pub citation: String,
    pub note: Option<String>,
}

fn params_str(params: CatalogParams) -> String {
    let mut parts = Vec::new();
    if let Some(n) = params.n {
        parts.push(format!("n={n}"));
    }
    if let Some(p0) = params.p0 {
        parts.push(format!("p0={p0}"));
    }
    parts.join(";")
}

impl From<CatalogListing> for CatalogRow {
    fn from(l: CatalogListing) -> Self {
        CatalogRow {
            label: l.name.to_string(),
            params: params_str(l.params),
            known_threshold: l.known_threshold,
            citation: l.citation,
            note: l.note,
        }
    }
}

pub fn listing_of(name: &str, params: CatalogParams, system: &SystemDescriptor) -> CatalogRow {
    CatalogRow {
        label: name.to_string(),
        params: params_str(params),
        known_threshold: system.known_threshold,
        citation: system.citation.clone().unwrap_or_default(),
        note: system.note.clone(),
    }
}

pub fn catalog_text(rows: &[CatalogRow], detailed: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<34} {:<8} {:>10}", "name", "params", "p*");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<34} {:<8} {:>10}",
            r.label,
            r.params,
            r.known_threshold
                .map(|t| format!("{t:.6}"))
                .unwrap_or_else(|| "-".into())
        );
        let _ = writeln!(s, "    {}", r.citation);
        if detailed {
            if let Some(note) = &r.note {
                let _ = writeln!(s, "    note: {note}");
            }
        }
    }
    s
}

pub fn catalog_csv(rows: &[CatalogRow]) -> Table {
    Table {
        header: vec!["name", "params", "known_threshold", "citation", "note"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    r.params.clone(),
                    opt_num(r.known_threshold),
                    r.citation.clone(),
                    r.note.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    }
}

pub fn catalog_rows(listings: Vec<CatalogListing>) -> Vec<CatalogRow> {
    listings.into_iter().map(CatalogRow::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(4.0), "4.0000000000000000e0");
        assert_eq!(num(f64::INFINITY), "inf");
        let back: f64 = num(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn params_render() {
        assert_eq!(
            params_str(CatalogParams {
                n: Some(2),
                p0: None
            }),
            "n=2"
        );
        assert_eq!(params_str(CatalogParams::default()), "");
    }
}
