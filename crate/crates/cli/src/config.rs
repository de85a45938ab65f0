//! Command-line flags, the optional JSON config file and their resolution
//! into a validated [`RunConfig`].

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;
use toda_core::fktflow::default_horizon;
use toda_core::linalg::parse_rational;
use toda_core::{CellPoint, Embedding, Permutation, Rational, ReducedWord, Spectrum};

/// Version tag written into every JSON document and CSV header.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable selecting the float regime.
pub const PRECISION_ENV: &str = "TODA_FLAG_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "toda-flag", version, about = "Toda flows on totally non-negative flag cells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the cell matrix g and report its PDS and flag minors (JSON).
    Cell(CommonArgs),
    /// Evolve the Kostant-Toda and/or symmetric flow along t1 (CSV).
    Flow(FlowArgs),
    /// Run the invariant suites of every module on one cell (JSON).
    Verify(VerifyArgs),
    /// Export P_{v,w} (JSON) and an optional moment-map trajectory (CSV).
    Polytope(PolytopeArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Eigenvalues `l1,l2,...` (rationals, increasing, zero sum) or `default`.
    #[arg(long, allow_hyphen_values = true)]
    pub spectrum: Option<String>,
    /// Permutation v: one-line `1,3,2`, word `s3s4s2`, or `e`.
    #[arg(long)]
    pub v: Option<String>,
    /// Permutation w: one-line, reduced word `s2s3s1` (used as given), `e` or `w0`.
    #[arg(long)]
    pub w: Option<String>,
    /// Cell parameters: `p1,p2,...`, `ones`, `random` or `random:SEED`.
    #[arg(long)]
    pub params: Option<String>,
    /// Seed of the random generator.
    #[arg(long)]
    pub seed: Option<u64>,
    /// t1 grid: `start:end:count` or an explicit list `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// |t1| at which asymptotic limits are read (default 40 / min gap).
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Tolerance for limits and fixed points.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Bound on the central-difference Lax residual at h = 1e-4.
    #[arg(long)]
    pub lax_tol: Option<f64>,
    /// Bound on |psi(L) - calL|.
    #[arg(long)]
    pub psi_tol: Option<f64>,
    /// Output path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Kt,
    Sym,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Negate one non-zero Plücker coordinate before the minor checks.
    PluckerSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingArg {
    Moment,
    Appendix,
}

impl From<EmbeddingArg> for Embedding {
    fn from(e: EmbeddingArg) -> Self {
        match e {
            EmbeddingArg::Moment => Embedding::Moment,
            EmbeddingArg::Appendix => Embedding::Appendix,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which flow to evolve.
    #[arg(long, value_enum)]
    pub system: Option<System>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Corrupt the input on purpose; the suites must then fail.
    #[arg(long, value_enum)]
    pub mutate: Option<Mutation>,
}

#[derive(Debug, Clone, Args)]
pub struct PolytopeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Vertex coordinates.
    #[arg(long, value_enum)]
    pub embedding: Option<EmbeddingArg>,
    /// Write the sampled moment-map trajectory here (CSV).
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

/// Contents of `--config`; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub spectrum: Option<Value>,
    pub v: Option<Value>,
    pub w: Option<Value>,
    pub params: Option<Value>,
    pub seed: Option<u64>,
    pub grid: Option<Value>,
    pub horizon: Option<f64>,
    pub tol: Option<f64>,
    pub lax_tol: Option<f64>,
    pub psi_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub system: Option<System>,
    pub mutate: Option<Mutation>,
    pub embedding: Option<EmbeddingArg>,
    pub trajectory: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Arrays become comma lists, numbers and strings their text.
fn value_text(v: &Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(x) => x.to_string(),
        Value::Array(xs) => xs.iter().map(value_text).collect::<Result<Vec<_>>>()?.join(","),
        other => bail!("unsupported config value {other}"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSpec {
    Explicit(Vec<Rational>),
    Ones,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub limit: f64,
    pub lax: f64,
    pub psi: f64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub spectrum: Spectrum,
    pub v: Permutation,
    pub w_word: ReducedWord,
    pub params: ParamSpec,
    pub seed: u64,
    pub grid: Vec<f64>,
    pub horizon: f64,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
    pub system: System,
    pub mutate: Option<Mutation>,
    pub embedding: Embedding,
    pub trajectory: Option<PathBuf>,
}

/// Per-command extras merged with the common flags.
#[derive(Debug, Clone, Default)]
pub struct Extras {
    pub system: Option<System>,
    pub mutate: Option<Mutation>,
    pub embedding: Option<EmbeddingArg>,
    pub trajectory: Option<PathBuf>,
}

/// Checks the precision environment variable; only `f64` is available.
pub fn check_precision() -> Result<()> {
    match std::env::var(PRECISION_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Ok(s) if s.trim().eq_ignore_ascii_case("f64") => Ok(()),
        Ok(s) => bail!("{PRECISION_ENV}={s:?} is not supported; the only precision mode is f64"),
        Err(e) => bail!("{PRECISION_ENV}: {e}"),
    }
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_spectrum(s: &str, n: Option<usize>) -> Result<Option<Spectrum>> {
    if s.trim().eq_ignore_ascii_case("default") {
        return Ok(n.map(Spectrum::default_for));
    }
    let xs = parse_list(s)
        .into_iter()
        .map(parse_rational)
        .collect::<toda_core::Result<Vec<_>>>()?;
    Ok(Some(Spectrum::new(xs)?))
}

/// Letters of a word written `s3s4s2` (or `s3 s4 s2`).
fn word_letters(s: &str) -> Result<Vec<usize>> {
    s.split('s')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| anyhow!("bad letter {t:?} in word {s:?}")))
        .collect()
}

enum PermText {
    Identity,
    Longest,
    Word(Vec<usize>),
    OneLine(Vec<usize>),
}

fn parse_perm_text(s: &str) -> Result<PermText> {
    let t = s.trim();
    Ok(match t {
        "e" | "id" => PermText::Identity,
        "w0" => PermText::Longest,
        _ if t.starts_with('s') => PermText::Word(word_letters(t)?),
        _ => {
            let parts = parse_list(t);
            let digits: Vec<&str> = if parts.len() == 1 && t.len() > 1 {
                // compact form `132` for n < 10
                t.split("").filter(|x| !x.is_empty()).collect()
            } else {
                parts
            };
            PermText::OneLine(
                digits
                    .iter()
                    .map(|d| d.parse::<usize>().map_err(|_| anyhow!("bad permutation {s:?}")))
                    .collect::<Result<_>>()?,
            )
        }
    })
}

fn perm_len(p: &PermText) -> Option<usize> {
    match p {
        PermText::OneLine(w) => Some(w.len()),
        _ => None,
    }
}

fn to_perm(p: &PermText, n: usize) -> Result<Permutation> {
    Ok(match p {
        PermText::Identity => Permutation::identity(n),
        PermText::Longest => Permutation::longest(n),
        PermText::Word(l) => Permutation::from_letters(n, l)?,
        PermText::OneLine(w) => Permutation::new(w.clone())?,
    })
}

fn to_word(p: &PermText, n: usize) -> Result<ReducedWord> {
    Ok(match p {
        PermText::Word(l) => ReducedWord::new(n, l.clone())?,
        other => to_perm(other, n)?.reduced_word(),
    })
}

fn parse_params(s: &str) -> Result<(ParamSpec, Option<u64>)> {
    let t = s.trim();
    if t == "ones" {
        return Ok((ParamSpec::Ones, None));
    }
    if t == "random" {
        return Ok((ParamSpec::Random, None));
    }
    if let Some(seed) = t.strip_prefix("random:") {
        let seed = seed.trim().parse().map_err(|_| anyhow!("bad seed in {t:?}"))?;
        return Ok((ParamSpec::Random, Some(seed)));
    }
    let xs = parse_list(t)
        .into_iter()
        .map(parse_rational)
        .collect::<toda_core::Result<Vec<_>>>()?;
    Ok((ParamSpec::Explicit(xs), None))
}

/// `start:end:count` (inclusive ends) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let t = s.trim();
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        let [a, b, c] = parts[..] else {
            bail!("grid {t:?} is not start:end:count");
        };
        let a: f64 = a.trim().parse().map_err(|_| anyhow!("bad grid start {a:?}"))?;
        let b: f64 = b.trim().parse().map_err(|_| anyhow!("bad grid end {b:?}"))?;
        let c: usize = c.trim().parse().map_err(|_| anyhow!("bad grid count {c:?}"))?;
        return Ok(match c {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..c).map(|i| a + (b - a) * i as f64 / (c - 1) as f64).collect(),
        });
    }
    parse_list(t)
        .into_iter()
        .map(|x| x.parse::<f64>().map_err(|_| anyhow!("bad grid value {x:?}")))
        .collect()
}

pub const DEFAULT_GRID: &str = "-10:10:41";

impl RunConfig {
    /// Merges the flags over the config file and validates the result.
    pub fn resolve(args: &CommonArgs, extras: &Extras) -> Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let text = |flag: &Option<String>, key: &Option<Value>| -> Result<Option<String>> {
            match (flag, key) {
                (Some(s), _) => Ok(Some(s.clone())),
                (None, Some(v)) => value_text(v).map(Some),
                (None, None) => Ok(None),
            }
        };
        let spectrum_text = text(&args.spectrum, &file.spectrum)?;
        let v_text = text(&args.v, &file.v)?.map(|s| parse_perm_text(&s)).transpose()?;
        let w_text = text(&args.w, &file.w)?.map(|s| parse_perm_text(&s)).transpose()?;

        let mut n = args.n.or(file.n);
        let mut spectrum = None;
        if let Some(s) = &spectrum_text {
            spectrum = parse_spectrum(s, n)?;
            n = n.or(spectrum.as_ref().map(Spectrum::n));
        }
        let n = n
            .or(v_text.as_ref().and_then(perm_len))
            .or(w_text.as_ref().and_then(perm_len))
            .ok_or_else(|| anyhow!("cannot infer n; pass --n, a spectrum list or a one-line permutation"))?;
        if n < 2 {
            bail!("n must be at least 2");
        }
        let spectrum = spectrum.unwrap_or_else(|| Spectrum::default_for(n));
        if spectrum.n() != n {
            bail!("spectrum has {} eigenvalues but n = {n}", spectrum.n());
        }
        let v = to_perm(v_text.as_ref().unwrap_or(&PermText::Identity), n)?;
        let w_word = to_word(w_text.as_ref().unwrap_or(&PermText::Longest), n)?;
        if v.n() != n {
            bail!("v has size {} but n = {n}", v.n());
        }
        if !v.bruhat_leq(&w_word.target())? {
            bail!("v = {v} is not below w = {} in Bruhat order", w_word.target());
        }

        let (params, params_seed) = match text(&args.params, &file.params)? {
            Some(s) => parse_params(&s)?,
            None => (ParamSpec::Random, None),
        };
        let seed = args.seed.or(params_seed).or(file.seed).unwrap_or(0);
        let grid = parse_grid(&text(&args.grid, &file.grid)?.unwrap_or_else(|| DEFAULT_GRID.into()))?;
        let horizon = args
            .horizon
            .or(file.horizon)
            .unwrap_or_else(|| default_horizon(&spectrum));
        let tol = Tolerances {
            limit: args.tol.or(file.tol).unwrap_or(1e-6),
            lax: args.lax_tol.or(file.lax_tol).unwrap_or(1e-5),
            psi: args.psi_tol.or(file.psi_tol).unwrap_or(1e-8),
        };
        Ok(Self {
            n,
            spectrum,
            v,
            w_word,
            params,
            seed,
            grid,
            horizon,
            tol,
            out: args.out.clone().or(file.out),
            system: extras.system.or(file.system).unwrap_or(System::Both),
            mutate: extras.mutate.or(file.mutate),
            embedding: extras.embedding.or(file.embedding).unwrap_or(EmbeddingArg::Moment).into(),
            trajectory: extras.trajectory.clone().or(file.trajectory),
        })
    }

    pub fn w(&self) -> Permutation {
        self.w_word.target()
    }

    /// The generator every random draw goes through.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn cell(&self) -> Result<CellPoint> {
        let (v, word) = (self.v.clone(), self.w_word.clone());
        Ok(match &self.params {
            ParamSpec::Explicit(p) => CellPoint::new(v, word, p.clone())?,
            ParamSpec::Ones => CellPoint::unit(v, word)?,
            ParamSpec::Random => CellPoint::random(v, word, &mut self.rng())?,
        })
    }

    pub fn require_grid(&self) -> Result<&[f64]> {
        if self.grid.is_empty() {
            bail!("the t1 grid is empty");
        }
        Ok(&self.grid)
    }
}
