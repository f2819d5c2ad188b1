//! Significance filtering of observed dyad weights.
//!
//! Each dyad with positive observed weight `Â_ij` is compared with its
//! marginal under the ensemble. Without correction a dyad is significant when
//! `Pr(A_ij ≤ Â_ij) > 1 − α`. The corrections work on the upper-tail p-value
//! `Pr(A_ij ≥ Â_ij)`: Bonferroni keeps `p ≤ α / N` and Benjamini–Hochberg
//! applies the step-up procedure at level α over the `N` tested dyads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{degree_fingerprint, Ensemble};
use crate::error::{Error, Result};
use crate::graph::{degrees, MultiGraph};
use crate::numerics::DEFAULT_TOL;

/// Significance level in the open interval (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidArgument(format!(
                "alpha must lie in (0, 1), got {value}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correction {
    #[default]
    None,
    Bonferroni,
    BenjaminiHochberg,
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Correction::None => "none",
            Correction::Bonferroni => "bonferroni",
            Correction::BenjaminiHochberg => "benjamini-hochberg",
        })
    }
}

impl FromStr for Correction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Correction::None),
            "bonferroni" => Ok(Correction::Bonferroni),
            "bh" | "benjamini-hochberg" => Ok(Correction::BenjaminiHochberg),
            _ => Err(Error::InvalidArgument(format!("unknown correction `{s}`"))),
        }
    }
}

/// Test result of one observed dyad.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadPValue {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
    /// `Pr(A_ij ≤ Â_ij)`
    pub cdf: f64,
    /// `Pr(A_ij ≥ Â_ij)`
    pub pvalue: f64,
    /// False when the observed weight is impossible under the ensemble.
    pub in_support: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PValueReport {
    pub directed: bool,
    pub labels: Vec<String>,
    pub fingerprint: String,
    pub dyads: Vec<DyadPValue>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PValueOptions {
    pub tol: f64,
    /// Require the ensemble to come from the graph's own degree sequence.
    pub check_degrees: bool,
}

impl Default for PValueOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            check_degrees: true,
        }
    }
}

/// Tests every dyad of `g` with positive weight against `e`, in row-major
/// dyad order.
pub fn dyad_pvalues(g: &MultiGraph, e: &Ensemble, options: &PValueOptions) -> Result<PValueReport> {
    if g.node_count() != e.n() {
        return Err(Error::DimensionMismatch {
            expected: e.n(),
            found: g.node_count(),
        });
    }
    if g.is_directed() != e.is_directed() {
        return Err(Error::EnsembleMismatch);
    }
    if options.check_degrees && e.source_degrees() != Some(degree_fingerprint(&degrees(g)).as_str())
    {
        return Err(Error::EnsembleMismatch);
    }
    let observed: Vec<_> = g.weights().iter().filter(|&(_, w)| w > 0).collect();
    let dyads = observed
        .par_iter()
        .map(|&((i, j), weight)| {
            let tails = e.marginal_tails(i, j, weight, options.tol)?;
            if !tails.in_support {
                warn!(
                    "weight {weight} of dyad ({}, {}) lies outside the ensemble support",
                    g.label(i),
                    g.label(j)
                );
            }
            Ok(DyadPValue {
                source: i,
                target: j,
                weight,
                cdf: tails.cdf(),
                pvalue: tails.upper_pvalue(),
                in_support: tails.in_support,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PValueReport {
        directed: g.is_directed(),
        labels: g.labels().to_vec(),
        fingerprint: e.fingerprint().to_owned(),
        dyads,
    })
}

/// Significance flag of each dyad of the report, in report order.
pub fn significance_flags(r: &PValueReport, alpha: Alpha, correction: Correction) -> Vec<bool> {
    let a = alpha.get();
    let tested = r.dyads.len();
    match correction {
        Correction::None => r.dyads.iter().map(|d| d.cdf > 1.0 - a).collect(),
        Correction::Bonferroni => {
            let level = a / tested.max(1) as f64;
            r.dyads.iter().map(|d| d.pvalue <= level).collect()
        }
        Correction::BenjaminiHochberg => {
            let mut order: Vec<usize> = (0..tested).collect();
            order.sort_by(|&x, &y| {
                r.dyads[x]
                    .pvalue
                    .total_cmp(&r.dyads[y].pvalue)
                    .then(x.cmp(&y))
            });
            let cutoff = order
                .iter()
                .enumerate()
                .rev()
                .find(|&(rank, &k)| r.dyads[k].pvalue <= a * (rank + 1) as f64 / tested as f64)
                .map_or(0, |(rank, _)| rank + 1);
            let mut flags = vec![false; tested];
            for &k in &order[..cutoff] {
                flags[k] = true;
            }
            flags
        }
    }
}

/// The observed graph restricted to its significant dyads.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredGraph {
    pub graph: MultiGraph,
    pub alpha: Alpha,
    pub correction: Correction,
    /// Flag per dyad of the report the graph was filtered from.
    pub significant: Vec<bool>,
}

pub fn significant_links(
    r: &PValueReport,
    alpha: Alpha,
    correction: Correction,
) -> Result<FilteredGraph> {
    let significant = significance_flags(r, alpha, correction);
    let mut graph = MultiGraph::new(r.directed, r.labels.clone())?;
    for (d, _) in r.dyads.iter().zip(&significant).filter(|&(_, &s)| s) {
        graph.add_edges(d.source, d.target, d.weight)?;
    }
    Ok(FilteredGraph {
        graph,
        alpha,
        correction,
        significant,
    })
}

/// Link and multi-edge counts before and after filtering.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub links_before: usize,
    pub links_after: usize,
    pub edges_before: u64,
    pub edges_after: u64,
    pub link_fraction: f64,
    pub edge_fraction: f64,
}

pub fn summarize(before: &MultiGraph, after: &FilteredGraph) -> Summary {
    let fraction = |part: f64, whole: f64| if whole > 0.0 { part / whole } else { 0.0 };
    let links_before = before.link_count();
    let links_after = after.graph.link_count();
    let edges_before = before.edge_count();
    let edges_after = after.graph.edge_count();
    Summary {
        links_before,
        links_after,
        edges_before,
        edges_after,
        link_fraction: fraction(links_after as f64, links_before as f64),
        edge_fraction: fraction(edges_after as f64, edges_before as f64),
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "links: {} observed, {} significant ({:.1}%)",
            self.links_before,
            self.links_after,
            100.0 * self.link_fraction
        )?;
        write!(
            f,
            "multi-edges: {} observed, {} retained ({:.1}%)",
            self.edges_before,
            self.edges_after,
            100.0 * self.edge_fraction
        )
    }
}

/// Shortest round-trip decimal, in scientific notation for tiny magnitudes.
fn number(v: f64) -> String {
    if v == 0.0 || v.abs() >= 1e-4 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// CSV report: one row per tested dyad, then `# key,value` footer lines.
pub fn write_report_csv<W: Write>(
    r: &PValueReport,
    f: &FilteredGraph,
    summary: &Summary,
    mut out: W,
) -> Result<()> {
    writeln!(out, "source,target,weight,cdf,pvalue,significant")?;
    for (d, &s) in r.dyads.iter().zip(&f.significant) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.labels[d.source],
            r.labels[d.target],
            d.weight,
            number(d.cdf),
            number(d.pvalue),
            s
        )?;
    }
    writeln!(out, "# alpha,{}", number(f.alpha.get()))?;
    writeln!(out, "# correction,{}", f.correction)?;
    writeln!(out, "# ensemble,{}", r.fingerprint)?;
    writeln!(out, "# links_before,{}", summary.links_before)?;
    writeln!(out, "# links_after,{}", summary.links_after)?;
    writeln!(out, "# edges_before,{}", summary.edges_before)?;
    writeln!(out, "# edges_after,{}", summary.edges_after)?;
    writeln!(out, "# link_fraction,{}", number(summary.link_fraction))?;
    writeln!(out, "# edge_fraction,{}", number(summary.edge_fraction))?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDyad<'a> {
    source: &'a str,
    target: &'a str,
    weight: u64,
    cdf: f64,
    pvalue: f64,
    significant: bool,
    in_support: bool,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    alpha: Alpha,
    correction: Correction,
    ensemble: &'a str,
    directed: bool,
    dyads: Vec<JsonDyad<'a>>,
    summary: &'a Summary,
}

pub fn write_report_json<W: Write>(
    r: &PValueReport,
    f: &FilteredGraph,
    summary: &Summary,
    mut out: W,
) -> Result<()> {
    let dyads = r
        .dyads
        .iter()
        .zip(&f.significant)
        .map(|(d, &significant)| JsonDyad {
            source: &r.labels[d.source],
            target: &r.labels[d.target],
            weight: d.weight,
            cdf: d.cdf,
            pvalue: d.pvalue,
            significant,
            in_support: d.in_support,
        })
        .collect();
    let report = JsonReport {
        alpha: f.alpha,
        correction: f.correction,
        ensemble: &r.fingerprint,
        directed: r.directed,
        dyads,
        summary,
    };
    serde_json::to_writer_pretty(&mut out, &report).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
