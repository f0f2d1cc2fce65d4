//! Campaign reports and their JSON, CSV and table renderings.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::{CampaignConfig, CampaignName, Format};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    /// Statement id from the registry.
    pub id: String,
    pub params: Value,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub version: u32,
    pub campaign: CampaignName,
    pub config: CampaignConfig,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub duration_ms: Option<u64>,
}

impl CampaignReport {
    /// Drops the wall-clock duration so the report is reproducible byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.duration_ms = None;
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit_report<W: Write>(report: &CampaignReport, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["id", "params", "expected", "computed", "pass"])?;
            for r in &report.records {
                w.write_record([
                    r.id.clone(),
                    compact(&r.params),
                    compact(&r.expected),
                    compact(&r.computed),
                    r.pass.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Human => {
            writeln!(
                out,
                "campaign {} over F_{} (schema v{}): {} records, {}",
                report.campaign,
                report.config.q,
                report.version,
                report.records.len(),
                if report.pass { "PASS" } else { "FAIL" }
            )?;
            writeln!(out, "statement: {}", report.campaign.statement().statement)?;
            if let Some(ms) = report.duration_ms {
                writeln!(out, "duration: {ms} ms")?;
            }
            let rows: Vec<[String; 4]> = report
                .records
                .iter()
                .map(|r| {
                    [
                        compact(&r.params),
                        compact(&r.expected),
                        compact(&r.computed),
                        if r.pass { "ok" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            write_table(&mut out, ["params", "expected", "computed", "pass"], &rows)?;
        }
    }
    Ok(())
}

pub(crate) fn write_table<W: Write, const N: usize>(
    out: &mut W,
    header: [&str; N],
    rows: &[[String; N]],
) -> Result<()> {
    let mut widths = header.map(|h| h.chars().count());
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    writeln!(
        out,
        "{}",
        line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect())
    )?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
