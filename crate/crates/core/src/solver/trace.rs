//! Solver traces and their CSV/JSON export.

use std::io::Write;

use serde_json::{json, Map, Value as Json};

use super::Variant;
use crate::divergence::DivergenceKind;
use crate::error::{Error, Result};
use crate::permutation::Allocation;
use crate::rational;

/// Iterate `k` before the step it drives.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub phi_quadratic: f64,
    pub phi_kl: f64,
    pub phi_eg: f64,
    /// Objective of the configured kind.
    pub phi: f64,
    /// Vertex order chosen at this iterate; `None` for the final one.
    pub permutation: Option<Vec<usize>>,
    /// `ρ^(k)` every `stride` iterations and at the end.
    pub densities: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub variant: Variant,
    pub kind: DivergenceKind,
    pub iterations: usize,
    pub labels: Vec<String>,
    /// One record per iterate `0..=T`.
    pub records: Vec<TraceRecord>,
    pub final_x: Vec<f64>,
    pub final_y: Vec<f64>,
    pub final_rho: Vec<f64>,
    /// Exact final allocation in rational mode.
    pub final_exact: Option<Allocation>,
}

fn num(v: f64) -> Json {
    // JSON has no infinities; -log 0 shows up as null
    serde_json::Number::from_f64(v).map_or(Json::Null, Json::Number)
}

impl SolverTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace has at least one record")
    }

    pub fn final_phi(&self) -> f64 {
        self.last().phi
    }

    /// Columns `k, phi_quadratic, phi_kl, phi_eg`, then one `rho_<label>`
    /// column per element when `densities` is set (empty between snapshots).
    pub fn write_csv<W: Write>(&self, out: W, densities: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "k".to_string(),
            "phi_quadratic".into(),
            "phi_kl".into(),
            "phi_eg".into(),
        ];
        if densities {
            header.extend(self.labels.iter().map(|l| format!("rho_{l}")));
        }
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.records {
            let mut row = vec![
                r.k.to_string(),
                r.phi_quadratic.to_string(),
                r.phi_kl.to_string(),
                r.phi_eg.to_string(),
            ];
            if densities {
                match &r.densities {
                    Some(d) => row.extend(d.iter().map(|v| v.to_string())),
                    None => row.extend(std::iter::repeat_n(String::new(), self.labels.len())),
                }
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, densities: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, densities)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// Same content as the CSV, plus run metadata and the final iterate.
    pub fn to_json(&self) -> Json {
        let records: Vec<Json> = self
            .records
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("k".into(), json!(r.k));
                m.insert("phi_quadratic".into(), num(r.phi_quadratic));
                m.insert("phi_kl".into(), num(r.phi_kl));
                m.insert("phi_eg".into(), num(r.phi_eg));
                if let Some(p) = &r.permutation {
                    m.insert("permutation".into(), json!(p));
                }
                if let Some(d) = &r.densities {
                    m.insert("densities".into(), Json::Array(d.iter().map(|&v| num(v)).collect()));
                }
                Json::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("variant".into(), json!(self.variant.to_string()));
        m.insert("kind".into(), json!(self.kind.name()));
        m.insert("iterations".into(), json!(self.iterations));
        m.insert("labels".into(), json!(self.labels));
        m.insert(
            "final_x".into(),
            Json::Array(self.final_x.iter().map(|&v| num(v)).collect()),
        );
        m.insert(
            "final_y".into(),
            Json::Array(self.final_y.iter().map(|&v| num(v)).collect()),
        );
        m.insert(
            "final_rho".into(),
            Json::Array(self.final_rho.iter().map(|&v| num(v)).collect()),
        );
        if let Some(a) = &self.final_exact {
            m.insert(
                "final_exact_x".into(),
                json!(a.x.iter().map(rational::format).collect::<Vec<_>>()),
            );
            m.insert(
                "final_exact_y".into(),
                json!(a.y.iter().map(rational::format).collect::<Vec<_>>()),
            );
        }
        m.insert("records".into(), Json::Array(records));
        Json::Object(m)
    }
}
