//! JSON run reports. Field order is fixed by the struct layout and every
//! collection is sorted, so equal runs produce byte-identical reports.

use serde::Serialize;

use krho::solvers::SolveResult;
use krho::{BallCertificate, DeficiencyReport, Params, Shortcut, Verification, Vertex, Violation, WeightedGraph};

#[derive(Debug, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub m: usize,
    pub directed: bool,
}

impl InstanceSummary {
    pub fn of(g: &WeightedGraph) -> Self {
        Self {
            n: g.vertex_count(),
            m: g.edge_count(),
            directed: g.is_directed(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DeficientSummary {
    pub count: usize,
    pub vertices: Vec<Vertex>,
    pub certificates: Vec<BallCertificate>,
}

impl DeficientSummary {
    pub fn of(report: &DeficiencyReport) -> Self {
        Self {
            count: report.deficient.len(),
            vertices: report.deficient.iter().copied().collect(),
            certificates: report
                .deficient
                .iter()
                .map(|&v| report.certificates[v])
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolutionSummary {
    pub algorithm: String,
    pub size: usize,
    pub optimal: bool,
    pub explored: u64,
    pub shortcuts: Vec<Shortcut>,
}

impl SolutionSummary {
    pub fn of(algorithm: &str, r: &SolveResult) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            size: r.shortcuts.len(),
            optimal: r.optimal,
            explored: r.explored,
            shortcuts: r.shortcuts.iter().copied().collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationSummary {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub remaining_deficient: Vec<Vertex>,
}

impl VerificationSummary {
    pub fn of(v: &Verification) -> Self {
        Self {
            valid: v.valid,
            violations: v.violations.clone(),
            remaining_deficient: v.report.deficient.iter().copied().collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub instance: InstanceSummary,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficient: Option<DeficientSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
    /// Wall-clock time; only present when asked for, since it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &'static str, g: &WeightedGraph, params: Params) -> Self {
        Self {
            command,
            instance: InstanceSummary::of(g),
            params,
            deficient: None,
            solution: None,
            verification: None,
            timing_ms: None,
        }
    }
}

pub fn write_report<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports contain only plain data");
    text.push('\n');
    text
}
