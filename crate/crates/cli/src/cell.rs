//! `toda-flag cell`: the cell matrix, its PDS and a flag-minor summary.

use anyhow::Result;
use serde::Serialize;
use toda_core::symgroup::interval;
use toda_core::tnncell::{flag_minors_nonnegative, interval_by_minors, matroid_of_projection};
use toda_core::{CellPoint, Permutation};

use crate::config::{ParamSpec, RunConfig, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
pub struct PdsReport {
    pub mask: Vec<bool>,
    pub rendered: String,
    pub j_plus: Vec<usize>,
    pub j_circ: Vec<usize>,
    pub positive_distinguished: bool,
}

#[derive(Debug, Serialize)]
pub struct MinorSummary {
    pub nonnegative: bool,
    /// Bases of `M(A_k)`, `k = 1..n-1`.
    pub matroids: Vec<Vec<Vec<usize>>>,
    /// Positivity of the `z`-minors picks out exactly `[v, w]`.
    pub interval_matches: bool,
}

#[derive(Debug, Serialize)]
pub struct CellReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub params_mode: &'static str,
    pub n: usize,
    pub v: Permutation,
    pub w: Permutation,
    pub w_word: Vec<usize>,
    pub params: Vec<String>,
    pub pds: PdsReport,
    pub g: Vec<Vec<String>>,
    pub det: String,
    pub flag_minors: MinorSummary,
    pub pass: bool,
}

pub fn params_mode(p: &ParamSpec) -> &'static str {
    match p {
        ParamSpec::Explicit(_) => "explicit",
        ParamSpec::Ones => "ones",
        ParamSpec::Random => "random",
    }
}

pub fn report(cfg: &RunConfig, cell: &CellPoint) -> Result<CellReport> {
    let g = cell.build_g();
    let n = cfg.n;
    let sub = cell.pds();
    let pds = PdsReport {
        mask: sub.mask().to_vec(),
        rendered: sub.render(),
        j_plus: sub.j_plus().to_vec(),
        j_circ: sub.j_circ().to_vec(),
        positive_distinguished: sub.is_positive_distinguished() && sub.value() == *cell.v(),
    };
    let iv = interval(cell.v(), &cell.w())?;
    let mut interval_matches = true;
    for z in Permutation::all(n) {
        if interval_by_minors(&g, &z)? != iv.contains(&z) {
            interval_matches = false;
        }
    }
    let flag_minors = MinorSummary {
        nonnegative: flag_minors_nonnegative(&g)?,
        matroids: (1..n).map(|k| matroid_of_projection(&g, k)).collect::<toda_core::Result<_>>()?,
        interval_matches,
    };
    let det = g.det()?;
    let pass = pds.positive_distinguished
        && flag_minors.nonnegative
        && flag_minors.interval_matches
        && det == toda_core::linalg::rat_int(1);
    Ok(CellReport {
        schema_version: SCHEMA_VERSION,
        command: "cell",
        seed: cfg.seed,
        params_mode: params_mode(&cfg.params),
        n,
        v: cell.v().clone(),
        w: cell.w(),
        w_word: cell.w_word().letters().to_vec(),
        params: cell.params().iter().map(ToString::to_string).collect(),
        pds,
        g: g.to_strings(),
        det: det.to_string(),
        flag_minors,
        pass,
    })
}
