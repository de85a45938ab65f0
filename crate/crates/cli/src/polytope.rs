//! `toda-flag polytope`: `P_{v,w}` as JSON plus an optional moment-map
//! trajectory as CSV.

use anyhow::Result;
use serde::Serialize;
use toda_core::fktflow::direction_to_fixed_point;
use toda_core::momentpoly::{
    bruhat_interval_polytope, check_edge_theorem, verify_moment_closure, MomentReport, SamplePlan,
};
use toda_core::symgroup::interval;
use toda_core::{Embedding, MomentMap, MultiTime, Permutation};

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::output::{csv_text, num};

#[derive(Debug, Serialize)]
pub struct PolytopeReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub n: usize,
    pub v: Permutation,
    pub w: Permutation,
    pub embedding: Embedding,
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<Permutation>,
    pub non_vertices: Vec<Permutation>,
    /// Edges of appendix-embedding `P_{v^{-1}, w^{-1}}` that are not covers.
    pub edge_theorem_violations: Vec<[Permutation; 2]>,
    pub minkowski_matches: bool,
    pub closure: MomentReport,
    pub pass: bool,
}

pub struct PolytopeOutput {
    pub json: PolytopeReport,
    pub trajectory: Option<String>,
}

pub fn run(cfg: &RunConfig, with_trajectory: bool) -> Result<PolytopeOutput> {
    let n = cfg.n;
    let lam = &cfg.spectrum;
    let cell = cfg.cell()?;
    let (v, w) = (cell.v().clone(), cell.w());
    let bp = bruhat_interval_polytope(&v, &w, cfg.embedding)?;
    let edges = bp.polytope.edges()?;
    let app = bruhat_interval_polytope(&v.inverse(), &w.inverse(), Embedding::Appendix)?;
    let violations: Vec<[Permutation; 2]> =
        check_edge_theorem(&app)?.into_iter().map(|(a, b)| [a, b]).collect();

    let g = cell.build_g();
    let mm = MomentMap::from_g(&g, lam)?;
    let moment = match cfg.embedding {
        Embedding::Moment => bp.polytope.clone(),
        Embedding::Appendix => bruhat_interval_polytope(&v, &w, Embedding::Moment)?.polytope,
    };
    let minkowski_matches = mm.matroid_sum()? == moment;
    let plan = SamplePlan::default_for(lam);
    let closure = verify_moment_closure(&mm, lam, &v, &w, &plan)?;
    let pass = violations.is_empty() && minkowski_matches && closure.pass;

    let trajectory = if with_trajectory {
        let mut header = vec!["sample".to_string(), "z".to_string(), "scale".to_string()];
        header.extend((1..n).map(|k| format!("t{k}")));
        header.extend((1..=n).map(|i| format!("phi_{i}")));
        let mut rows = Vec::new();
        let mut push = |kind: &str, z: String, s: f64, t: &MultiTime| {
            let mut row = vec![kind.to_string(), z, num(s)];
            row.extend(t.as_slice().iter().map(|&x| num(x)));
            row.extend(mm.point(t).iter().map(|&x| num(x)));
            rows.push(row);
        };
        for &t1 in &plan.line {
            push("line", String::new(), t1, &MultiTime::t1(n, t1));
        }
        for z in interval(&v, &w)? {
            let c = direction_to_fixed_point(&z, lam)?;
            for &s in plan.ray_scales.iter().chain(std::iter::once(&plan.limit_scale)) {
                push("ray", z.to_string(), s, &c.scaled(s));
            }
        }
        let preamble = vec![
            format!("toda-flag polytope trajectory schema_version={SCHEMA_VERSION}"),
            format!("seed={} n={n} v={v} w={w}", cfg.seed),
        ];
        Some(csv_text(&preamble, &header, &rows, &[])?)
    } else {
        None
    };

    Ok(PolytopeOutput {
        json: PolytopeReport {
            schema_version: SCHEMA_VERSION,
            command: "polytope",
            seed: cfg.seed,
            n,
            v,
            w,
            embedding: cfg.embedding,
            vertices: bp
                .polytope
                .vertices()
                .iter()
                .map(|p| p.iter().map(ToString::to_string).collect())
                .collect(),
            edges: edges.into_iter().map(|(a, b)| [a, b]).collect(),
            labels: bp.labels,
            non_vertices: bp.non_vertices,
            edge_theorem_violations: violations,
            minkowski_matches,
            closure,
            pass,
        },
        trajectory,
    })
}
