use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::table::{Column, TableWriter};
use super::{CliError, RunConfig};
use crate::ca::{CAStep, CaEngine, Checkpoint, EngineConfig, FactoredCA};

/// On-disk checkpoint: engine state, per-command accumulator, and how much
/// output had been written.
#[derive(Serialize, Deserialize)]
struct SavedRun<A> {
    command: String,
    steps_done: u64,
    output_offset: u64,
    engine: Checkpoint,
    acc: A,
}

pub(crate) struct StepView<'a> {
    pub step: &'a CAStep,
    /// The state before the step; `None` when it is `n = 1`.
    pub previous: Option<&'a FactoredCA>,
    pub state: &'a FactoredCA,
    pub last: bool,
}

fn save<A: Serialize>(path: &Path, run: &SavedRun<A>) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        serde_json::to_writer(&mut w, run).map_err(|e| CliError::Checkpoint(e.to_string()))?;
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load<A: DeserializeOwned>(path: &Path) -> Result<SavedRun<A>, CliError> {
    let r = BufReader::new(File::open(path)?);
    serde_json::from_reader(r).map_err(|e| CliError::Checkpoint(format!("{}: {e}", path.display())))
}

/// Run the generator up to `config.steps`, handing every step to
/// `per_step`, with checkpointing and resume.
pub(crate) fn drive<A, F>(
    config: &RunConfig,
    command: &str,
    columns: &'static [Column],
    acc: A,
    mut per_step: F,
) -> Result<A, CliError>
where
    A: Serialize + DeserializeOwned,
    F: FnMut(&mut A, StepView<'_>, &mut TableWriter) -> Result<(), CliError>,
{
    config.validate()?;
    let out = config.output_path.as_deref();
    let (mut engine, mut writer, mut acc, mut done) = match &config.resume_path {
        Some(path) => {
            let saved: SavedRun<A> = load(path)?;
            if saved.command != command {
                return Err(CliError::Checkpoint(format!(
                    "checkpoint was written by `{}`, not `{command}`",
                    saved.command
                )));
            }
            if saved.engine.config.precision != config.precision_bits
                || saved.engine.config.precision_cap != config.precision_cap_bits
            {
                return Err(CliError::Config(format!(
                    "checkpoint precision {}/{} differs from the requested {}/{}",
                    saved.engine.config.precision,
                    saved.engine.config.precision_cap,
                    config.precision_bits,
                    config.precision_cap_bits
                )));
            }
            let writer =
                TableWriter::resume(out, config.output_format, columns, saved.output_offset)?;
            (
                CaEngine::resume(saved.engine)?,
                writer,
                saved.acc,
                saved.steps_done,
            )
        }
        None => {
            let engine = CaEngine::new(EngineConfig {
                precision: config.precision_bits,
                precision_cap: config.precision_cap_bits,
            })?;
            let writer = TableWriter::create(out, config.output_format, columns)?;
            (engine, writer, acc, 0)
        }
    };

    while done < config.steps {
        let before = engine.state().clone();
        let step = engine.next_step()?;
        done += 1;
        let view = StepView {
            step: &step,
            previous: (before.step_index() > 0 || !before.runs().is_empty()).then_some(&before),
            state: engine.state(),
            last: done == config.steps,
        };
        per_step(&mut acc, view, &mut writer)?;
        if let Some(path) = &config.checkpoint_path {
            if done % config.checkpoint_every == 0 {
                writer.flush()?;
                let run = SavedRun {
                    command: command.to_string(),
                    steps_done: done,
                    output_offset: writer.written(),
                    engine: engine.checkpoint(),
                    acc,
                };
                save(path, &run)?;
                acc = run.acc;
            }
        }
    }
    writer.flush()?;
    Ok(acc)
}

/// Step indices `1, 2, 5, 10, 20, 50, ...`.
pub(crate) fn is_log_checkpoint(i: u64) -> bool {
    let mut scale = 1u64;
    while scale <= i {
        if i == scale || i == 2 * scale || i == 5 * scale {
            return true;
        }
        scale = match scale.checked_mul(10) {
            Some(s) => s,
            None => return false,
        };
    }
    false
}
