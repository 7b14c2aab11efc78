//! The `.bwci` instance bundle: paths to a game and a model plus thresholds.
//!
//! ```text
//! game <path>
//! model <path>
//! mu <p/q>
//! nu <p/q>
//! objective mp|sp
//! ```
//!
//! Relative paths resolve against the bundle's directory. For the `sp`
//! objective the target set is the game's `target` declarations.

use crate::diag::{tokenize, Diagnostic, SourceSpan};
use crate::game::parse_game;
use crate::machine::parse_machine;
use core_model::{BwcInstance, InstanceError, Objective, Rational};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ObjectiveTag {
    Mp,
    Sp,
}

/// The parsed bundle, before any referenced file is read.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InstanceFile {
    pub game_path: String,
    pub model_path: String,
    pub mu: Rational,
    pub nu: Rational,
    pub objective: ObjectiveTag,
}

pub fn parse_instance(text: &str, file: &str) -> Result<InstanceFile, Vec<Diagnostic>> {
    let mut errs: Vec<Diagnostic> = Vec::new();
    let mut game_path: Option<&str> = None;
    let mut model_path: Option<&str> = None;
    let mut mu: Option<Rational> = None;
    let mut nu: Option<Rational> = None;
    let mut objective: Option<ObjectiveTag> = None;
    for (li, line) in text.lines().enumerate() {
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let at = |col: u32| SourceSpan::new(file, (li + 1) as u32, col);
        let head = toks[0];
        if toks.len() != 2 {
            errs.push(Diagnostic::new(
                at(head.column),
                format!("expected `{} <value>`", head.text),
            ));
            continue;
        }
        let val = toks[1];
        let mut set_path = |slot: &mut Option<&'_ str>, errs: &mut Vec<Diagnostic>| {
            if slot.is_some() {
                errs.push(Diagnostic::new(at(head.column), format!("duplicate `{}`", head.text)));
            }
        };
        match head.text {
            "game" => {
                set_path(&mut game_path, &mut errs);
                game_path = Some(val.text);
            }
            "model" => {
                set_path(&mut model_path, &mut errs);
                model_path = Some(val.text);
            }
            "mu" | "nu" => match val.text.parse::<Rational>() {
                Ok(r) => {
                    let slot = if head.text == "mu" { &mut mu } else { &mut nu };
                    if slot.is_some() {
                        errs.push(Diagnostic::new(
                            at(head.column),
                            format!("duplicate `{}`", head.text),
                        ));
                    }
                    *slot = Some(r);
                }
                Err(_) => errs.push(Diagnostic::new(
                    at(val.column),
                    format!("malformed rational `{}`", val.text),
                )),
            },
            "objective" => {
                let tag = match val.text {
                    "mp" => Some(ObjectiveTag::Mp),
                    "sp" => Some(ObjectiveTag::Sp),
                    other => {
                        errs.push(Diagnostic::new(
                            at(val.column),
                            format!("objective must be `mp` or `sp`, found `{}`", other),
                        ));
                        None
                    }
                };
                if objective.is_some() {
                    errs.push(Diagnostic::new(at(head.column), "duplicate `objective`"));
                } else {
                    objective = tag;
                }
            }
            other => errs.push(Diagnostic::new(
                at(head.column),
                format!("unknown directive `{}`", other),
            )),
        }
    }
    let parse_clean = errs.is_empty();
    for (slot_missing, what) in [
        (game_path.is_none(), "game"),
        (model_path.is_none(), "model"),
        (mu.is_none(), "mu"),
        (nu.is_none(), "nu"),
        (objective.is_none(), "objective"),
    ] {
        if slot_missing && parse_clean {
            errs.push(Diagnostic::new(
                SourceSpan::new(file, 1, 1),
                format!("missing `{}` directive", what),
            ));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    Ok(InstanceFile {
        game_path: game_path.expect("checked").to_string(),
        model_path: model_path.expect("checked").to_string(),
        mu: mu.expect("checked"),
        nu: nu.expect("checked"),
        objective: objective.expect("checked"),
    })
}

pub fn serialize_instance(inst: &InstanceFile) -> String {
    format!(
        "game {}\nmodel {}\nmu {}\nnu {}\nobjective {}\n",
        inst.game_path,
        inst.model_path,
        inst.mu,
        inst.nu,
        match inst.objective {
            ObjectiveTag::Mp => "mp",
            ObjectiveTag::Sp => "sp",
        }
    )
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Parse(Vec<Diagnostic>),
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceError),
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path)
        .map_err(|e| LoadError::Io { path: path.display().to_string(), source: e })
}

/// Reads a `.bwci` bundle and the files it references, then assembles and
/// validates the full instance.
pub fn load_instance(path: &Path) -> Result<BwcInstance, LoadError> {
    let text = read(path)?;
    let name = path.display().to_string();
    let inst = parse_instance(&text, &name).map_err(LoadError::Parse)?;
    let base: PathBuf = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    let game_path = base.join(&inst.game_path);
    let game_text = read(&game_path)?;
    let game = parse_game(&game_text, &game_path.display().to_string()).map_err(LoadError::Parse)?;
    let model_path = base.join(&inst.model_path);
    let model_text = read(&model_path)?;
    let model = parse_machine(&model_text, &model_path.display().to_string(), &game)
        .map_err(LoadError::Parse)?;
    let objective = match inst.objective {
        ObjectiveTag::Mp => Objective::MeanPayoff,
        ObjectiveTag::Sp => Objective::ShortestPath(game.targets().clone()),
    };
    Ok(BwcInstance::new(game, model, inst.mu, inst.nu, objective)?)
}
