//! `toda-flag verify`: the invariant suites of every module, run on one cell.

use anyhow::Result;
use serde::Serialize;
use toda_core::fktflow::{
    asymptotic_check, direction_to_fixed_point, fixed_point, lax_residual,
};
use toda_core::linalg::companion;
use toda_core::momentpoly::{
    bruhat_interval_polytope, check_edge_theorem, verify_moment_closure, verify_sym_moment,
    SamplePlan,
};
use toda_core::symgroup::interval;
use toda_core::symtoda::{consistency_psi, lax_residual_sym};
use toda_core::tnncell::{check_exchange, flag_minors, matroid_of_projection};
use toda_core::{
    CellPoint, Embedding, KtFlow, Matrix, MomentMap, MultiTime, Permutation, Rational, SymFlow,
};

use crate::config::{Mutation, RunConfig, SCHEMA_VERSION};
use crate::flow::{chevalley_error, CHEVALLEY_TOL, RESIDUAL_STEP};
use crate::output::num;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Suite {
    pub module: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub n: usize,
    pub v: Permutation,
    pub w: Permutation,
    pub w_word: Vec<usize>,
    pub params: Vec<String>,
    pub grid_points: usize,
    pub mutation: Option<&'static str>,
    pub suites: Vec<Suite>,
    pub pass: bool,
}

struct SuiteBuilder {
    module: &'static str,
    checks: Vec<Check>,
}

impl SuiteBuilder {
    fn new(module: &'static str) -> Self {
        Self { module, checks: Vec::new() }
    }

    fn check(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, pass, detail: detail.into() });
    }

    fn finish(self) -> Suite {
        Suite {
            module: self.module,
            pass: self.checks.iter().all(|c| c.pass),
            checks: self.checks,
        }
    }
}

type MinorTable = Vec<Vec<(Vec<usize>, Rational)>>;

/// Flips the sign of the last non-zero coordinate of the first projection.
fn flip_one_sign(table: &mut MinorTable) -> String {
    let level = &mut table[0];
    let (set, d) = level
        .iter_mut()
        .rev()
        .find(|(_, d)| *d != Rational::from_integer(0.into()))
        .expect("an invertible matrix has a non-zero first column");
    *d = -d.clone();
    format!("negated Delta_{set:?} of the first projection")
}

fn symgroup_suite(cell: &CellPoint) -> Result<Suite> {
    let mut s = SuiteBuilder::new("symgroup");
    let (v, w) = (cell.v(), cell.w());
    s.check("v_below_w", v.bruhat_leq(&w)?, format!("v={v} w={w}"));
    s.check(
        "reduced_word_length",
        cell.w_word().len() == w.length(),
        format!("len={} length(w)={}", cell.w_word().len(), w.length()),
    );
    let sub = cell.pds();
    let prefixes = sub.prefixes();
    let monotone = prefixes.windows(2).all(|p| p[1].length() >= p[0].length());
    s.check(
        "pds_positive_distinguished",
        sub.is_positive_distinguished() && sub.value() == *v && sub.j_bullet().is_empty() && monotone,
        sub.render(),
    );
    Ok(s.finish())
}

fn tnncell_suite(cfg: &RunConfig, g: &Matrix<Rational>) -> Result<Suite> {
    let mut s = SuiteBuilder::new("tnncell");
    let n = cfg.n;
    let zero = Rational::from_integer(0.into());
    let det = g.det()?;
    s.check("det_is_one", det == Rational::from_integer(1.into()), format!("det={det}"));
    let mut table: MinorTable = (1..n).map(|k| flag_minors(g, k)).collect::<toda_core::Result<_>>()?;
    if cfg.mutate == Some(Mutation::PluckerSign) {
        let what = flip_one_sign(&mut table);
        s.check("mutation_applied", true, what);
    }
    let negative = table.iter().flatten().filter(|(_, d)| *d < zero).count();
    s.check("flag_minors_nonnegative", negative == 0, format!("negative minors: {negative}"));
    let iv = interval(&cfg.v, &cfg.w())?;
    let mut mismatches = Vec::new();
    for z in Permutation::all(n) {
        let positive = (1..n).all(|k| {
            let set = z.act_prefix(k).expect("k < n");
            table[k - 1].iter().any(|(s, d)| *s == set && *d > zero)
        });
        if positive != iv.contains(&z) {
            mismatches.push(z.to_string());
        }
    }
    s.check(
        "minors_characterize_interval",
        mismatches.is_empty(),
        format!("interval size {}; mismatches: {:?}", iv.len(), mismatches),
    );
    let mut exchange = true;
    let mut extremes = true;
    for k in 1..n {
        let m = matroid_of_projection(g, k)?;
        exchange &= check_exchange(&m).is_ok();
        extremes &= m.first() == Some(&cfg.v.act_prefix(k)?) && m.last() == Some(&cfg.w().act_prefix(k)?);
    }
    s.check("matroid_exchange", exchange, "");
    s.check("matroid_lexicographic_extremes", extremes, "");
    Ok(s.finish())
}

fn fktflow_suite(cfg: &RunConfig, kt: &KtFlow, times: &[MultiTime]) -> Result<Suite> {
    let mut s = SuiteBuilder::new("fktflow");
    let lam = &cfg.spectrum;
    let cp = kt.l0_exact().char_poly()?;
    s.check(
        "initial_matrix_isospectral",
        cp == companion(lam.exact()).char_poly()?,
        "",
    );
    let (mut chev, mut lax, mut diag_gap) = (0.0f64, 0.0f64, 0.0f64);
    let mut finite = true;
    for t in times {
        let l = kt.at(t)?;
        chev = chev.max(chevalley_error(l.matrix(), lam));
        lax = lax.max(lax_residual(kt, t, RESIDUAL_STEP)?);
        finite &= kt.log_taus(t).iter().all(|x| x.is_finite());
        for (a, b) in l.diag().iter().zip(kt.diag_via_tau(t)) {
            diag_gap = diag_gap.max((a - b).abs());
        }
    }
    s.check("tau_positive", finite, "");
    s.check("chevalley_conserved", chev < CHEVALLEY_TOL, format!("max relative drift {}", num(chev)));
    s.check("lax_residual", lax < cfg.tol.lax, format!("max residual {} at h={RESIDUAL_STEP}", num(lax)));
    s.check("diagonal_from_tau", diag_gap < 1e-8, format!("max gap {}", num(diag_gap)));
    let rep = asymptotic_check(kt, &cfg.v, &cfg.w(), cfg.horizon, cfg.tol.limit)?;
    s.check(
        "sorting_asymptotics",
        rep.pass,
        format!("max_diag_error={} max_subdiag={}", num(rep.max_diag_error), num(rep.max_subdiag)),
    );
    let scale = 40.0 / lam.min_gap();
    let mut worst = 0.0f64;
    for z in interval(&cfg.v, &cfg.w())? {
        let c = direction_to_fixed_point(&z, lam)?;
        let l = kt.at(&c.scaled(scale))?;
        worst = worst.max(l.matrix().max_diff(fixed_point(&z, lam).matrix()));
    }
    s.check("fixed_point_rays", worst < cfg.tol.limit, format!("max distance {}", num(worst)));
    Ok(s.finish())
}

fn symtoda_suite(
    cfg: &RunConfig,
    g: &Matrix<Rational>,
    kt: &KtFlow,
    sym: &SymFlow,
    times: &[MultiTime],
) -> Result<Suite> {
    let mut s = SuiteBuilder::new("symtoda");
    let n = cfg.n;
    let lam = &cfg.spectrum;
    let psi = consistency_psi(kt, sym, times)?;
    s.check("psi_consistency", psi < cfg.tol.psi, format!("max |psi(L) - calL| {}", num(psi)));
    let (mut asym, mut lax) = (0.0f64, 0.0f64);
    for t in times {
        asym = asym.max(sym.at(t)?.symmetry_residual());
        lax = lax.max(lax_residual_sym(sym, t, RESIDUAL_STEP)?);
    }
    s.check("symmetric", asym < 1e-10, format!("max asymmetry {}", num(asym)));
    s.check("lax_residual", lax < cfg.tol.lax, format!("max residual {}", num(lax)));
    let minus = sym.at(&MultiTime::t1(n, -cfg.horizon))?;
    let plus = sym.at(&MultiTime::t1(n, cfg.horizon))?;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let err = dist(&minus.diag(), &lam.permuted(&cfg.v))
        .max(dist(&plus.diag(), &lam.permuted(&cfg.w())))
        .max(minus.max_offdiag())
        .max(plus.max_offdiag());
    s.check("sorting_asymptotics", err < cfg.tol.limit, format!("max error {}", num(err)));
    let mut same = true;
    for k in 1..n {
        same &= sym.matroid(k) == matroid_of_projection(g, k)?;
    }
    s.check("matroids_of_q_equal_a", same, "");
    Ok(s.finish())
}

fn momentpoly_suite(cfg: &RunConfig, g: &Matrix<Rational>, sym: &SymFlow) -> Result<Suite> {
    let mut s = SuiteBuilder::new("momentpoly");
    let n = cfg.n;
    let lam = &cfg.spectrum;
    let (v, w) = (&cfg.v, cfg.w());
    let mm = MomentMap::from_g(g, lam)?;
    let plan = SamplePlan::default_for(lam);
    let closure = verify_moment_closure(&mm, lam, v, &w, &plan)?;
    s.check(
        "moment_closure",
        closure.pass,
        format!(
            "samples={} violations={} max_limit_error={} hull_matches={} vertices={} non_vertices={:?}",
            closure.samples,
            closure.containment_violations,
            num(closure.max_limit_error),
            closure.hull_matches,
            closure.vertex_count,
            closure.non_vertices.iter().map(ToString::to_string).collect::<Vec<_>>()
        ),
    );
    let target = bruhat_interval_polytope(v, &w, Embedding::Moment)?;
    s.check("minkowski_identity", mm.matroid_sum()? == target.polytope, "");
    let app = bruhat_interval_polytope(&v.inverse(), &w.inverse(), Embedding::Appendix)?;
    s.check("embedding_bridge", app.polytope.reflect(n as i64) == target.polytope, "");
    let bad = check_edge_theorem(&app)?;
    s.check(
        "edges_are_covers",
        bad.is_empty(),
        format!("offending pairs: {:?}", bad.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>()),
    );
    let symrep = verify_sym_moment(&mm, sym, lam, v, &w, &plan)?;
    s.check(
        "symmetric_moment_map",
        symrep.pass,
        format!(
            "max_weight_difference={} max_point_difference={}",
            num(symrep.max_weight_difference),
            num(symrep.max_point_difference)
        ),
    );
    Ok(s.finish())
}

pub fn run(cfg: &RunConfig) -> Result<VerifyReport> {
    let grid = cfg.require_grid()?;
    let n = cfg.n;
    let cell = cfg.cell()?;
    let g = cell.build_g();
    let times: Vec<MultiTime> = grid.iter().map(|&t| MultiTime::t1(n, t)).collect();
    let kt = KtFlow::new(&g, &cfg.spectrum)?;
    let sym = SymFlow::new(&g, &cfg.spectrum)?;
    let suites = vec![
        symgroup_suite(&cell)?,
        tnncell_suite(cfg, &g)?,
        fktflow_suite(cfg, &kt, &times)?,
        symtoda_suite(cfg, &g, &kt, &sym, &times)?,
        momentpoly_suite(cfg, &g, &sym)?,
    ];
    let pass = suites.iter().all(|s| s.pass);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        seed: cfg.seed,
        n,
        v: cell.v().clone(),
        w: cell.w(),
        w_word: cell.w_word().letters().to_vec(),
        params: cell.params().iter().map(ToString::to_string).collect(),
        grid_points: grid.len(),
        mutation: cfg.mutate.map(|_| "plucker-sign"),
        suites,
        pass,
    })
}
