//! Library side of the `toda-flag` binary: configuration and the four
//! commands `cell`, `flow`, `verify` and `polytope`.

pub mod cell;
pub mod config;
pub mod flow;
pub mod output;
pub mod polytope;
pub mod verify;

use anyhow::Result;

use config::{Cli, Command, CommonArgs, Extras, RunConfig};
use output::{emit, to_json};

/// Runs one command; `Ok(false)` means an invariant was violated.
pub fn run(cli: Cli) -> Result<bool> {
    config::check_precision()?;
    let resolve = |common: &CommonArgs, extras: Extras| RunConfig::resolve(common, &extras);
    match cli.command {
        Command::Cell(common) => {
            let cfg = resolve(&common, Extras::default())?;
            let rep = cell::report(&cfg, &cfg.cell()?)?;
            emit(cfg.out.as_deref(), &to_json(&rep)?)?;
            Ok(rep.pass)
        }
        Command::Flow(args) => {
            let extras = Extras {
                system: args.system,
                ..Extras::default()
            };
            let cfg = resolve(&args.common, extras)?;
            let out = flow::run(&cfg)?;
            emit(cfg.out.as_deref(), &out.csv)?;
            Ok(out.pass)
        }
        Command::Verify(args) => {
            let extras = Extras {
                mutate: args.mutate,
                ..Extras::default()
            };
            let cfg = resolve(&args.common, extras)?;
            let rep = verify::run(&cfg)?;
            emit(cfg.out.as_deref(), &to_json(&rep)?)?;
            Ok(rep.pass)
        }
        Command::Polytope(args) => {
            let extras = Extras {
                embedding: args.embedding,
                trajectory: args.trajectory.clone(),
                ..Extras::default()
            };
            let cfg = resolve(&args.common, extras)?;
            let out = polytope::run(&cfg, cfg.trajectory.is_some())?;
            if let (Some(path), Some(csv)) = (&cfg.trajectory, &out.trajectory) {
                emit(Some(path), csv)?;
            }
            emit(cfg.out.as_deref(), &to_json(&out.json)?)?;
            Ok(out.json.pass)
        }
    }
}
