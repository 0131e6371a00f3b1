use std::fmt::Write;
use std::str::FromStr;

use super::{MatchGroup, MatchKind, MatchReport, Polarity};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

/// `label (rank)` or `label (rank, Nx)`; negative labels bold, positive
/// labels italic, subsumption labels plain.
pub fn markdown_cell(g: &MatchGroup) -> String {
    let label = match g.kind {
        MatchKind::Sentiment {
            polarity: Polarity::Negative,
        } => format!("**{}**", g.label),
        MatchKind::Sentiment {
            polarity: Polarity::Positive,
        } => format!("*{}*", g.label),
        MatchKind::Subsumption => g.label.clone(),
    };
    if g.occurrence_count > 1 {
        format!("{label} ({}, {}x)", g.best_rank, g.occurrence_count)
    } else {
        format!("{label} ({})", g.best_rank)
    }
}

fn median_cell(m: Option<f64>) -> String {
    m.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn markdown(report: &MatchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", report.entity);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "Aliases: {}. Top {} neighbors, lexicon matches within edit distance {}.",
        report.aliases.join(", "),
        report.k,
        report.max_edit
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "| Space | Matches |");
    let _ = writeln!(out, "|---|---|");
    for s in &report.spaces {
        let cells: Vec<String> = s.groups.iter().map(markdown_cell).collect();
        let _ = writeln!(out, "| {} | {} |", s.space, cells.join("; "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "| Space | Median positive rank | Median negative rank |");
    let _ = writeln!(out, "|---|---|---|");
    for s in &report.spaces {
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            s.space,
            median_cell(s.median_positive_rank),
            median_cell(s.median_negative_rank)
        );
    }
    out
}

pub fn render_report(report: &MatchReport, format: ReportFormat) -> Result<Vec<u8>> {
    Ok(match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Markdown => markdown(report).into_bytes(),
    })
}
