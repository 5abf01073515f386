//! Line-oriented scenario scripts.
//!
//! ```text
//! # comments start with '#'
//! qubit a 0.5 0.5            # blue and orange fractions, optional '-' on orange
//! pair a b 0.25 0.25 0.25 -0.25   # signed fractions in Gray order 00 01 11 10
//! epr a b
//! gate H a
//! cnot a b
//! measure a b
//! cancel
//! audit
//! render svg out.svg stacked
//! bb84 100 eve
//! teleport full 0.72 -
//! ```
//!
//! Every register command runs on the disk track and the exact track
//! together. Measurements, BB84 and teleportation draw from one seeded
//! stream, so a script and a seed fix every artifact byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Component, Path};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::disk::{Color, DiskSystem};
use crate::error::Error;
use crate::exact::Gate;
use crate::protocols::{bb84_run, teleport_classical, teleport_full, Bb84Params, Stage};
use crate::render::{render_svg, render_text, Layout, RenderSpec};
use crate::verifier::{audit_table, Lockstep, Step, StepEffect, StepReport};

/// Tolerance on fractions typed by a person.
const SURFACE_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("step {step} (line {line}): {source}")]
    Runtime {
        step: usize,
        line: usize,
        #[source]
        source: Error,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl ScenarioError {
    /// Process exit code: 1 for parse errors, 2 for everything at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse { .. } => 1,
            ScenarioError::Runtime { .. } | ScenarioError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Qubit { name: String, blue: f64, orange: f64, negative: bool },
    Pair { names: [String; 2], fractions: [f64; 4] },
    Epr { names: [String; 2] },
    Gate { gate: Gate, name: String },
    Cnot { control: String, target: String },
    Measure { names: Vec<String> },
    Cancel,
    Audit,
    Render { format: RenderFormat, file: String, layout: Layout },
    Bb84 { rounds: usize, eve: bool },
    Teleport { stage: Stage, blue: f64, negative: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Commands with their 1-based source line.
    pub commands: Vec<(usize, Command)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse { line, message: message.into() }
}

fn number(line: usize, tok: &str) -> Result<f64, ScenarioError> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(line, format!("expected a number, found `{tok}`")))
}

fn fraction(line: usize, tok: &str) -> Result<f64, ScenarioError> {
    let x = number(line, tok)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(parse_err(line, format!("fraction {x} outside [0, 1]")));
    }
    Ok(x)
}

fn minus_flag(line: usize, tok: Option<&&str>) -> Result<bool, ScenarioError> {
    match tok {
        None => Ok(false),
        Some(&"-") => Ok(true),
        Some(other) => Err(parse_err(line, format!("unexpected `{other}`, only `-` may follow"))),
    }
}

fn arity(line: usize, toks: &[&str], min: usize, max: usize) -> Result<(), ScenarioError> {
    let n = toks.len() - 1;
    if n < min || n > max {
        let want = if min == max { min.to_string() } else { format!("{min}-{max}") };
        return Err(parse_err(line, format!("`{}` takes {want} argument(s), got {n}", toks[0])));
    }
    Ok(())
}

/// Parses one line against the names declared so far, declaring new names.
/// Blank and comment lines yield `None`.
pub fn parse_line(
    line: usize,
    text: &str,
    declared: &mut Vec<String>,
) -> Result<Option<Command>, ScenarioError> {
    let code = text.split('#').next().unwrap_or("");
    let toks: Vec<&str> = code.split_whitespace().collect();
    let Some(&head) = toks.first() else { return Ok(None) };

    let known = |name: &str| -> Result<String, ScenarioError> {
        if declared.iter().any(|d| d == name) {
            Ok(name.to_string())
        } else {
            Err(parse_err(line, format!("qubit `{name}` is not declared")))
        }
    };
    let fresh = |name: &str, declared: &[String]| -> Result<String, ScenarioError> {
        if declared.iter().any(|d| d == name) {
            return Err(parse_err(line, format!("qubit `{name}` already declared")));
        }
        if name.parse::<f64>().is_ok() || name == "-" {
            return Err(parse_err(line, format!("`{name}` is not a valid qubit name")));
        }
        Ok(name.to_string())
    };

    let command = match head {
        "qubit" => {
            arity(line, &toks, 3, 4)?;
            let name = fresh(toks[1], declared)?;
            let (blue, orange) = (fraction(line, toks[2])?, fraction(line, toks[3])?);
            if (blue + orange - 1.0).abs() > SURFACE_TOL {
                return Err(parse_err(line, format!("fractions sum to {}, expected 1", blue + orange)));
            }
            let negative = minus_flag(line, toks.get(4))?;
            declared.push(name.clone());
            Command::Qubit { name, blue, orange, negative }
        }
        "pair" => {
            arity(line, &toks, 6, 6)?;
            let a = fresh(toks[1], declared)?;
            let b = fresh(toks[2], declared)?;
            if a == b {
                return Err(parse_err(line, "pair needs two distinct names"));
            }
            let mut fractions = [0.0; 4];
            for (f, tok) in fractions.iter_mut().zip(&toks[3..7]) {
                *f = number(line, tok)?;
            }
            let total: f64 = fractions.iter().map(|f| f.abs()).sum();
            if (total - 1.0).abs() > SURFACE_TOL {
                return Err(parse_err(line, format!("area magnitudes sum to {total}, expected 1")));
            }
            declared.extend([a.clone(), b.clone()]);
            Command::Pair { names: [a, b], fractions }
        }
        "epr" => {
            arity(line, &toks, 2, 2)?;
            let a = fresh(toks[1], declared)?;
            let b = fresh(toks[2], declared)?;
            if a == b {
                return Err(parse_err(line, "epr needs two distinct names"));
            }
            declared.extend([a.clone(), b.clone()]);
            Command::Epr { names: [a, b] }
        }
        "gate" => {
            arity(line, &toks, 2, 2)?;
            let gate = match toks[1] {
                "X" | "Z" | "H" => Gate::by_name(toks[1]).expect("preset"),
                other => return Err(parse_err(line, format!("unknown gate `{other}`, expected X, Z or H"))),
            };
            Command::Gate { gate, name: known(toks[2])? }
        }
        "cnot" => {
            arity(line, &toks, 2, 2)?;
            if toks[1] == toks[2] {
                return Err(parse_err(line, "control and target must differ"));
            }
            Command::Cnot { control: known(toks[1])?, target: known(toks[2])? }
        }
        "measure" => {
            if toks.len() < 2 {
                return Err(parse_err(line, "`measure` needs at least one qubit"));
            }
            let names = toks[1..].iter().map(|t| known(t)).collect::<Result<Vec<_>, _>>()?;
            if names.iter().enumerate().any(|(i, n)| names[..i].contains(n)) {
                return Err(parse_err(line, "qubit listed twice"));
            }
            Command::Measure { names }
        }
        "cancel" => {
            arity(line, &toks, 0, 0)?;
            Command::Cancel
        }
        "audit" => {
            arity(line, &toks, 0, 0)?;
            Command::Audit
        }
        "render" => {
            arity(line, &toks, 2, 3)?;
            let format = match toks[1] {
                "svg" => RenderFormat::Svg,
                "text" => RenderFormat::Text,
                other => return Err(parse_err(line, format!("unknown format `{other}`"))),
            };
            let file = toks[2];
            let plain = Path::new(file).components().all(|c| matches!(c, Component::Normal(_)));
            if !plain {
                return Err(parse_err(line, format!("render target `{file}` must be a relative path")));
            }
            let layout = match toks.get(3) {
                None | Some(&"side") => Layout::SideBySide,
                Some(&"stacked") => Layout::Stacked,
                Some(other) => return Err(parse_err(line, format!("unknown layout `{other}`"))),
            };
            Command::Render { format, file: file.to_string(), layout }
        }
        "bb84" => {
            arity(line, &toks, 1, 2)?;
            let rounds = toks[1]
                .parse::<usize>()
                .ok()
                .filter(|&r| r > 0)
                .ok_or_else(|| parse_err(line, format!("bad round count `{}`", toks[1])))?;
            let eve = match toks.get(2) {
                None => false,
                Some(&"eve") => true,
                Some(other) => return Err(parse_err(line, format!("unexpected `{other}`"))),
            };
            Command::Bb84 { rounds, eve }
        }
        "teleport" => {
            arity(line, &toks, 2, 3)?;
            let stage = match toks[1] {
                "classical" => Stage::Classical,
                "full" => Stage::Full,
                other => return Err(parse_err(line, format!("unknown stage `{other}`"))),
            };
            let blue = fraction(line, toks[2])?;
            let negative = minus_flag(line, toks.get(3))?;
            if negative && stage == Stage::Classical {
                return Err(parse_err(line, "the classical stage carries no sign"));
            }
            Command::Teleport { stage, blue, negative }
        }
        other => return Err(parse_err(line, format!("unknown command `{other}`"))),
    };
    Ok(Some(command))
}

/// Parses a whole script.
pub fn parse(name: &str, text: &str) -> Result<Scenario, ScenarioError> {
    let mut declared = Vec::new();
    let mut commands = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(cmd) = parse_line(i + 1, raw, &mut declared)? {
            commands.push((i + 1, cmd));
        }
    }
    Ok(Scenario { name: name.to_string(), commands })
}

/// A file produced by a `render` command.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

/// Incremental execution of scenario commands. Drives `run_scenario` and is
/// the surface an interactive front end talks to.
#[derive(Debug)]
pub struct Session {
    declared: Vec<String>,
    track: Lockstep,
    rng: ChaCha8Rng,
    transcript: String,
    checkpoints: Vec<String>,
    protocol_audits: Vec<String>,
    artifacts: Vec<Artifact>,
    commands_run: usize,
    lines_seen: usize,
    last_window: Option<f64>,
}

fn amplitude(signed_fraction: f64, total: f64) -> f64 {
    signed_fraction.signum() * (signed_fraction.abs() / total).sqrt()
}

impl Session {
    pub fn new(seed: u64) -> Self {
        Session {
            declared: Vec::new(),
            track: Lockstep::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            transcript: String::new(),
            checkpoints: Vec::new(),
            protocol_audits: Vec::new(),
            artifacts: Vec::new(),
            commands_run: 0,
            lines_seen: 0,
            last_window: None,
        }
    }

    fn index_of(&self, name: &str) -> usize {
        self.declared.iter().position(|d| d == name).expect("parser checked the name")
    }

    /// Parses and executes one line, returning the transcript text it added.
    pub fn step(&mut self, text: &str) -> Result<String, ScenarioError> {
        self.lines_seen += 1;
        let line = self.lines_seen;
        let mut declared = self.declared.clone();
        match parse_line(line, text, &mut declared)? {
            None => Ok(String::new()),
            Some(cmd) => self.execute(line, &cmd),
        }
    }

    /// Executes one parsed command.
    pub fn execute(&mut self, line: usize, command: &Command) -> Result<String, ScenarioError> {
        let step = self.commands_run;
        let text = self.run(command).map_err(|source| ScenarioError::Runtime { step, line, source })?;
        self.commands_run += 1;
        self.transcript.push_str(&text);
        Ok(text)
    }

    fn register_step(&mut self, label: String, step: Step) -> Result<String, Error> {
        let (report, effect) = self.track.apply(&step)?;
        let disk = self.track.disk().expect("tracks exist after a step");
        let detail = match effect {
            StepEffect::Measured(reading) => {
                let colors: String = reading.outcomes.iter().map(|o| o.color.letter()).collect();
                self.last_window = reading.outcomes.first().map(|o| o.window_angle);
                format!(
                    " -> {colors} p={:.9} window={:.9}",
                    reading.probability, reading.outcomes[0].window_angle
                )
            }
            StepEffect::Cancelled(c) => {
                format!(" pairs={} removed={:.9} sound={}", c.cancelled_pairs, c.removed_fraction, c.sound)
            }
            _ => String::new(),
        };
        Ok(format!(
            "{} {label}{detail} | {} | {}\n",
            self.commands_run,
            render_text(disk),
            report.classification
        ))
    }

    fn run(&mut self, command: &Command) -> Result<String, Error> {
        match command {
            Command::Qubit { name, blue, orange, negative } => {
                let total = blue + orange;
                let alpha = (blue / total).sqrt();
                let beta = (orange / total).sqrt() * if *negative { -1.0 } else { 1.0 };
                let out = self.register_step(format!("qubit {name}"), Step::Prepare { alpha, beta })?;
                self.declared.push(name.clone());
                Ok(out)
            }
            Command::Pair { names, fractions } => {
                let total: f64 = fractions.iter().map(|f| f.abs()).sum();
                let gray = fractions.map(|f| amplitude(f, total));
                let out = self
                    .register_step(format!("pair {} {}", names[0], names[1]), Step::PreparePair { gray })?;
                self.declared.extend(names.iter().cloned());
                Ok(out)
            }
            Command::Epr { names } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let out = self.register_step(
                    format!("epr {} {}", names[0], names[1]),
                    Step::PreparePair { gray: [s, 0.0, s, 0.0] },
                )?;
                self.declared.extend(names.iter().cloned());
                Ok(out)
            }
            Command::Gate { gate, name } => {
                let target = self.index_of(name);
                self.register_step(format!("gate {} {name}", gate.name()), Step::Gate { gate: *gate, target })
            }
            Command::Cnot { control, target } => {
                let (c, t) = (self.index_of(control), self.index_of(target));
                self.register_step(
                    format!("cnot {control} {target}"),
                    Step::Controlled { gate: Gate::X, control: c, target: t },
                )
            }
            Command::Measure { names } => {
                let qubits = names.iter().map(|n| self.index_of(n)).collect();
                let draw: f64 = self.rng.random();
                self.register_step(format!("measure {}", names.join(" ")), Step::Measure { qubits, draw })
            }
            Command::Cancel => self.register_step("cancel".into(), Step::Cancel),
            Command::Audit => {
                let report = self.track.checkpoint()?;
                let breakdowns = self.track.reports().iter().filter(|r| !r.is_sound()).count();
                let line = format!(
                    "{} audit after {} step(s): {} gap={:.9} breakdowns={breakdowns}\n",
                    self.commands_run,
                    self.track.reports().len(),
                    report.classification,
                    report.max_abs_gap
                );
                self.checkpoints.push(line.clone());
                Ok(line)
            }
            Command::Render { format, file, layout } => {
                let disk = self
                    .track
                    .disk()
                    .ok_or_else(|| Error::InvalidParameter("nothing to render yet".into()))?;
                let contents = match format {
                    RenderFormat::Text => format!("{}\n{disk}", render_text(disk)),
                    RenderFormat::Svg => render_svg(
                        disk,
                        &RenderSpec { layout: *layout, window_angle: self.last_window, ..Default::default() },
                    )?,
                };
                self.artifacts.retain(|a| &a.file != file);
                self.artifacts.push(Artifact { file: file.clone(), contents });
                Ok(format!("{} render {file}\n", self.commands_run))
            }
            Command::Bb84 { rounds, eve } => {
                let params = Bb84Params {
                    rounds: *rounds,
                    eve_present: *eve,
                    seed: self.rng.random(),
                    ..Default::default()
                };
                let run = bb84_run(&params)?;
                self.protocol_audits.push(format!(
                    "bb84 rounds={rounds} eve={eve}: steps={} breakdowns={} max_gap={:.9}\n",
                    run.audit.steps, run.audit.breakdowns, run.audit.max_gap
                ));
                let mut out =
                    format!("{} bb84 {rounds}{}\n", self.commands_run, if *eve { " eve" } else { "" });
                for l in run.transcript().lines() {
                    let _ = writeln!(out, "  {l}");
                }
                Ok(out)
            }
            Command::Teleport { stage, blue, negative } => {
                let t = match stage {
                    Stage::Classical => teleport_classical(*blue, self.rng.random())?,
                    Stage::Full => {
                        let beta = (1.0 - blue).sqrt() * if *negative { -1.0 } else { 1.0 };
                        teleport_full(blue.sqrt(), beta, [self.rng.random(), self.rng.random()])?
                    }
                };
                let breakdowns = t.steps.iter().filter(|s| !s.is_sound()).count();
                self.protocol_audits
                    .push(format!("teleport {stage}: steps={} breakdowns={breakdowns}\n", t.steps.len()));
                let mut out = format!("{} teleport {stage} {blue}\n", self.commands_run);
                for l in t.transcript().lines() {
                    let _ = writeln!(out, "  {l}");
                }
                Ok(out)
            }
        }
    }

    pub fn transcript(&self) -> &str {
        &self.transcript
    }

    pub fn reports(&self) -> &[StepReport] {
        self.track.reports()
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    pub fn disk(&self) -> Option<&DiskSystem> {
        self.track.disk()
    }

    /// Everything produced so far.
    pub fn output(&self) -> RunOutput {
        RunOutput {
            transcript: self.transcript.clone(),
            audit: self.audit_text(),
            artifacts: self.artifacts.clone(),
            reports: self.track.reports().to_vec(),
        }
    }

    pub fn qubit_names(&self) -> &[String] {
        &self.declared
    }

    /// Current disk (canonical form) and both probability readings.
    pub fn state_text(&self) -> String {
        let (Some(disk), Some(exact)) = (self.track.disk(), self.track.exact()) else {
            return "empty\n".to_string();
        };
        let fmt = |v: Vec<f64>| v.iter().map(|p| format!("{p:.9}")).collect::<Vec<_>>().join(" ");
        format!(
            "qubits {}\n{disk}naive {}\nexact {}\n",
            self.declared.join(" "),
            fmt(disk.naive_probabilities()),
            fmt(exact.probabilities())
        )
    }

    /// The per-step table followed by checkpoints and protocol summaries.
    pub fn audit_text(&self) -> String {
        let mut out = audit_table(self.track.reports());
        for line in self.checkpoints.iter().chain(&self.protocol_audits) {
            out.push_str(line);
        }
        out
    }

    /// Colors a measurement would show at `angle`, without committing it.
    pub fn peek_window(&self, angle: f64) -> Option<Vec<Color>> {
        let disk = self.track.disk()?;
        let i = disk.region_at(angle);
        Some(disk.regions()[i].colors.clone())
    }
}

/// Output of a complete run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub transcript: String,
    pub audit: String,
    pub artifacts: Vec<Artifact>,
    pub reports: Vec<StepReport>,
}

/// Parses and runs `script`. With an output directory, writes
/// `transcript.txt`, `audit.txt` and every requested render there.
pub fn run_scenario(script: &str, seed: u64, out_dir: Option<&Path>) -> Result<RunOutput, ScenarioError> {
    let output = run_session(script, seed)?.output();
    if let Some(dir) = out_dir {
        write_output(&output, dir)?;
    }
    Ok(output)
}

/// Parses and runs `script`, handing back the finished session.
pub fn run_session(script: &str, seed: u64) -> Result<Session, ScenarioError> {
    let scenario = parse("scenario", script)?;
    let mut session = Session::new(seed);
    for (line, cmd) in &scenario.commands {
        session.execute(*line, cmd)?;
    }
    Ok(session)
}

/// Writes the artifacts of a run into `dir`.
pub fn write_output(output: &RunOutput, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("transcript.txt"), &output.transcript)?;
    fs::write(dir.join("audit.txt"), &output.audit)?;
    for a in &output.artifacts {
        let path = dir.join(&a.file);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, &a.contents)?;
    }
    Ok(())
}
