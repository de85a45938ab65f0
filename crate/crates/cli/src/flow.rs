//! `toda-flag flow`: trajectories of the Kostant-Toda and symmetric flows on
//! a `t1` grid, followed by an asymptotic summary.

use anyhow::Result;
use toda_core::fktflow::{asymptotic_check, chevalley, lax_residual};
use toda_core::symtoda::{consistency_psi, lax_residual_sym};
use toda_core::{KtFlow, Matrix, MultiTime, Spectrum, SymFlow};

use crate::config::{RunConfig, System, SCHEMA_VERSION};
use crate::output::{csv_text, fmt_list, num};

/// Step of the central-difference Lax residual column.
pub const RESIDUAL_STEP: f64 = 1e-4;

/// Relative tolerance for the conserved traces.
pub const CHEVALLEY_TOL: f64 = 1e-9;

/// Largest relative drift of `tr L^{k+1}`, `k = 1..n-1`.
pub fn chevalley_error(l: &Matrix<f64>, spectrum: &Spectrum) -> f64 {
    let lam = spectrum.to_f64();
    chevalley(l)
        .iter()
        .enumerate()
        .map(|(i, got)| {
            let p = i as i32 + 2;
            let want: f64 = lam.iter().map(|x| x.powi(p)).sum();
            let scale: f64 = lam.iter().map(|x| x.abs().powi(p)).sum();
            (got - want).abs() / scale
        })
        .fold(0.0, f64::max)
}

fn lower_entries(m: &Matrix<f64>) -> Vec<f64> {
    let n = m.rows();
    (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

fn lower_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|i| (1..=i).map(move |j| format!("{prefix}a_{i}_{j}")))
        .collect()
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub struct FlowOutput {
    pub csv: String,
    pub pass: bool,
}

pub fn run(cfg: &RunConfig) -> Result<FlowOutput> {
    let grid = cfg.require_grid()?;
    let n = cfg.n;
    let cell = cfg.cell()?;
    let g = cell.build_g();
    let lam = &cfg.spectrum;
    let want_kt = cfg.system != System::Sym;
    let want_sym = cfg.system != System::Kt;
    let kt = KtFlow::new(&g, lam)?;
    let sym = if want_sym { Some(SymFlow::new(&g, lam)?) } else { None };

    let mut header: Vec<String> = (1..n).map(|k| format!("t{k}")).collect();
    if want_kt {
        header.extend(lower_names("", n));
        header.push("max_subdiag".into());
        header.extend((1..n).map(|k| format!("log_tau_{k}")));
        header.push("lax_residual".into());
        header.push("chevalley_error".into());
    }
    if want_sym {
        header.extend(lower_names("sym_", n));
        header.push("sym_max_offdiag".into());
        header.extend((1..n).map(|k| format!("sym_log_tau_{k}")));
        header.push("sym_lax_residual".into());
    }
    if want_kt && want_sym {
        header.push("psi_error".into());
    }

    let mut rows = Vec::with_capacity(grid.len());
    let (mut max_lax, mut max_chev, mut max_psi, mut max_sym_asym) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut taus_finite = true;
    for &t1 in grid {
        let t = MultiTime::t1(n, t1);
        let mut row: Vec<f64> = t.as_slice().to_vec();
        if want_kt {
            let l = kt.at(&t)?;
            row.extend(lower_entries(l.matrix()));
            row.push(l.max_subdiag());
            let taus = kt.log_taus(&t);
            taus_finite &= taus.iter().all(|x| x.is_finite());
            row.extend(taus);
            let r = lax_residual(&kt, &t, RESIDUAL_STEP)?;
            max_lax = max_lax.max(r);
            row.push(r);
            let c = chevalley_error(l.matrix(), lam);
            max_chev = max_chev.max(c);
            row.push(c);
        }
        if let Some(sym) = &sym {
            let l = sym.at(&t)?;
            max_sym_asym = max_sym_asym.max(l.symmetry_residual());
            row.extend(lower_entries(l.matrix()));
            row.push(l.max_offdiag());
            let taus: Vec<f64> = (1..n).map(|k| sym.log_tau(k, &t)).collect();
            taus_finite &= taus.iter().all(|x| x.is_finite());
            row.extend(taus);
            let r = lax_residual_sym(sym, &t, RESIDUAL_STEP)?;
            max_lax = max_lax.max(r);
            row.push(r);
            if want_kt {
                let e = consistency_psi(&kt, sym, std::slice::from_ref(&t))?;
                max_psi = max_psi.max(e);
                row.push(e);
            }
        }
        rows.push(row.iter().map(|&x| num(x)).collect());
    }

    let (v, w) = (cell.v().clone(), cell.w());
    let mut trailer = Vec::new();
    let mut pass = taus_finite && max_lax < cfg.tol.lax;
    if want_kt {
        let rep = asymptotic_check(&kt, &v, &w, cfg.horizon, cfg.tol.limit)?;
        trailer.push(format!(
            "kt_limits horizon={} diag_minus={} diag_plus={} max_subdiag={} max_diag_error={} pass={}",
            num(rep.horizon),
            fmt_list(&rep.diag_minus),
            fmt_list(&rep.diag_plus),
            num(rep.max_subdiag),
            num(rep.max_diag_error),
            rep.pass
        ));
        pass &= rep.pass && max_chev < CHEVALLEY_TOL;
    }
    if let Some(sym) = &sym {
        let minus = sym.at(&MultiTime::t1(n, -cfg.horizon))?;
        let plus = sym.at(&MultiTime::t1(n, cfg.horizon))?;
        let err = max_dist(&minus.diag(), &lam.permuted(&v)).max(max_dist(&plus.diag(), &lam.permuted(&w)));
        let off = minus.max_offdiag().max(plus.max_offdiag());
        let ok = err < cfg.tol.limit && off < cfg.tol.limit;
        trailer.push(format!(
            "sym_limits horizon={} diag_minus={} diag_plus={} max_offdiag={} max_diag_error={} pass={}",
            num(cfg.horizon),
            fmt_list(&minus.diag()),
            fmt_list(&plus.diag()),
            num(off),
            num(err),
            ok
        ));
        pass &= ok && max_sym_asym < 1e-10;
        if want_kt {
            pass &= max_psi < cfg.tol.psi;
        }
    }
    trailer.push(format!(
        "summary max_lax_residual={} max_chevalley_error={} max_psi_error={} taus_finite={taus_finite} pass={pass}",
        num(max_lax),
        num(max_chev),
        num(max_psi)
    ));
    let preamble = vec![
        format!("toda-flag flow schema_version={SCHEMA_VERSION}"),
        format!(
            "seed={} n={n} v={v} w={w} w_word={:?} params={} spectrum={}",
            cfg.seed,
            cell.w_word().letters(),
            cell.params().iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            lam.exact().iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        ),
    ];
    Ok(FlowOutput {
        csv: csv_text(&preamble, &header, &rows, &trailer)?,
        pass,
    })
}
