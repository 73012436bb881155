//! Job files: a line-oriented description of one algebra and one task.
//!
//! ```text
//! field = Q
//!
//! [base]
//! var x intdeg=1
//! rel x^2
//!
//! [bounds]
//! max_hdeg = 8
//! max_intdeg = 10
//!
//! [task]
//! command = deviations
//! ```
//!
//! The full grammar is in `docs/job-format.md`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use semifree::base::{truncate_quotient, BasePresentation, TruncatedBase};
use semifree::dg::{DgAlgebra, DgElement, VariableKind};
use semifree::expr;
use semifree::invariants::Statement;
use semifree::linear::Field;
use semifree::model::Switching;
use semifree::module::{FiniteModule, ModulePresentation};
use semifree::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for JobError {}

fn at(line: usize, column: usize, message: impl Into<String>) -> JobError {
    JobError {
        line,
        column,
        message: message.into(),
    }
}

/// Positions a kernel error; parse errors inside an expression are shifted to
/// the expression's column.
fn kernel(line: usize, column: usize, e: Error) -> JobError {
    match e {
        Error::Parse { column: c, message } => at(line, column + c - 1, message),
        Error::NonHomogeneous { relation } => at(line, column, format!("non-homogeneous relation `{relation}`")),
        Error::ParityMismatch { name, hdeg, kind } => at(
            line,
            column,
            format!("parity mismatch: `{name}` has homological degree {hdeg} but kind {kind}"),
        ),
        other => at(line, column, other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Deviations,
    AcyclicClosure,
    MinimalModel,
    Betti,
    Poincare,
    Classify,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Deviations => "deviations",
            Command::AcyclicClosure => "acyclic-closure",
            Command::MinimalModel => "minimal-model",
            Command::Betti => "betti",
            Command::Poincare => "poincare",
            Command::Classify => "classify",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "deviations" => Command::Deviations,
            "acyclic-closure" => Command::AcyclicClosure,
            "minimal-model" => Command::MinimalModel,
            "betti" => Command::Betti,
            "poincare" => Command::Poincare,
            "classify" => Command::Classify,
            "verify" => Command::Verify,
            _ => return Err(format!("unknown command `{s}`")),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Task {
    pub command: Option<Command>,
    pub switching: Option<Switching>,
    pub order: Option<usize>,
    pub statement: Option<Statement>,
    pub koszul_variable: Option<String>,
}

#[derive(Debug)]
pub struct Job {
    pub field: Field,
    pub algebra: DgAlgebra,
    pub max_hdeg: usize,
    pub max_intdeg: usize,
    pub task: Task,
    pub module: Option<FiniteModule>,
}

impl Job {
    pub fn base(&self) -> &Arc<TruncatedBase> {
        self.algebra.base()
    }
}

/// One nonblank, noncomment line, split into whitespace-separated words with
/// their 1-based columns.
struct Line<'a> {
    number: usize,
    text: &'a str,
    words: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn new(number: usize, text: &'a str) -> Self {
        let mut words = Vec::new();
        let mut start = None;
        for (k, (i, c)) in text.char_indices().enumerate() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some((k, i)),
                (true, Some((col, s))) => {
                    words.push((col + 1, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((col, s)) = start {
            words.push((col + 1, &text[s..]));
        }
        Self { number, text, words }
    }

    fn err(&self, column: usize, message: impl Into<String>) -> JobError {
        at(self.number, column, message)
    }

    /// Text after the `k`-th word, with its column.
    fn rest_after(&self, k: usize) -> (usize, &'a str) {
        let (col, w) = self.words[k];
        let byte = self.byte_of(col) + w.len();
        let tail = &self.text[byte..];
        let trimmed = tail.trim_start();
        let skipped = tail[..tail.len() - trimmed.len()].chars().count();
        (col + w.chars().count() + skipped, trimmed.trim_end())
    }

    fn byte_of(&self, column: usize) -> usize {
        self.text.char_indices().nth(column - 1).map_or(self.text.len(), |(i, _)| i)
    }

    /// `key = value` or `key=value`.
    fn setting(&self) -> Result<(usize, &'a str, usize, &'a str), JobError> {
        let text = self.text.trim_end();
        let Some(eq) = text.find('=') else {
            return Err(self.err(self.words[0].0, format!("expected `key = value`, found `{}`", text.trim())));
        };
        let key = text[..eq].trim();
        let value = text[eq + 1..].trim();
        let key_col = self.words[0].0;
        let value_col = text[..eq + 1].chars().count() + 1 + (text[eq + 1..].len() - text[eq + 1..].trim_start().len());
        if value.is_empty() {
            return Err(self.err(key_col, format!("`{key}` has no value")));
        }
        Ok((key_col, key, value_col, value))
    }

    /// `key=value` attributes from word `from` on; `d=` swallows the rest of
    /// the line.
    fn attributes(&self, from: usize) -> Result<Vec<(usize, &'a str, &'a str)>, JobError> {
        let mut out = Vec::new();
        for &(col, w) in self.words.iter().skip(from) {
            let Some((key, value)) = w.split_once('=') else {
                return Err(self.err(col, format!("expected `key=value`, found `{w}`")));
            };
            if key == "d" {
                let byte = self.byte_of(col) + 2;
                let expr = self.text[byte..].trim();
                if expr.is_empty() {
                    return Err(self.err(col, "empty boundary"));
                }
                out.push((col + 2, key, expr));
                return Ok(out);
            }
            if value.is_empty() {
                return Err(self.err(col, format!("`{key}` has no value")));
            }
            out.push((col, key, value));
        }
        Ok(out)
    }
}

fn number(line: &Line, column: usize, key: &str, value: &str) -> Result<usize, JobError> {
    value
        .parse()
        .map_err(|_| line.err(column, format!("`{key}` must be a nonnegative integer, found `{value}`")))
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix("Fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| format!("field must be `Q` or `Fp:<prime>`, found `{s}`"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

pub fn parse_switching(s: &str) -> Result<Switching, String> {
    match s {
        "inf" | "infinity" => Ok(Switching::Infinite),
        _ => s
            .parse()
            .map(Switching::Finite)
            .map_err(|_| format!("switching degree must be an integer or `inf`, found `{s}`")),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Top,
    Base,
    Dg,
    Bounds,
    Task,
    Module,
}

#[derive(Default)]
struct Sections<'a> {
    field: Option<(usize, Field)>,
    base: Vec<Line<'a>>,
    dg: Vec<Line<'a>>,
    bounds: Vec<Line<'a>>,
    task: Vec<Line<'a>>,
    module: Vec<Line<'a>>,
    module_header: Option<usize>,
}

fn split(src: &str) -> Result<Sections<'_>, JobError> {
    let mut s = Sections::default();
    let mut section = Section::Top;
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let line = Line::new(i + 1, text);
        if line.words.is_empty() {
            continue;
        }
        let first = line.words[0];
        if first.1.starts_with('[') {
            section = match text.trim() {
                "[base]" => Section::Base,
                "[dg]" => Section::Dg,
                "[bounds]" => Section::Bounds,
                "[task]" => Section::Task,
                "[module]" => {
                    s.module_header = Some(line.number);
                    Section::Module
                }
                other => return Err(line.err(first.0, format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::Top => {
                let (kc, key, vc, value) = line.setting()?;
                if key != "field" {
                    return Err(line.err(kc, format!("unknown field `{key}`")));
                }
                let f = parse_field(value).map_err(|m| line.err(vc, m))?;
                s.field = Some((line.number, f));
            }
            Section::Base => s.base.push(line),
            Section::Dg => s.dg.push(line),
            Section::Bounds => s.bounds.push(line),
            Section::Task => s.task.push(line),
            Section::Module => s.module.push(line),
        }
    }
    Ok(s)
}

fn build_base(field: Field, lines: &[Line]) -> Result<BasePresentation, JobError> {
    let mut p = BasePresentation::new(field);
    for line in lines {
        let (col, word) = line.words[0];
        match word {
            "var" => {
                let Some(&(ncol, name)) = line.words.get(1) else {
                    return Err(line.err(col, "`var` needs a name"));
                };
                let (mut hdeg, mut intdeg) = (0, None);
                for (c, key, value) in line.attributes(2)? {
                    match key {
                        "intdeg" => intdeg = Some(number(line, c, key, value)?),
                        "hdeg" => hdeg = number(line, c, key, value)?,
                        _ => return Err(line.err(c, format!("unknown field `{key}`"))),
                    }
                }
                let intdeg = intdeg.ok_or_else(|| line.err(ncol, format!("`{name}` needs `intdeg=`")))?;
                p.add_graded_variable(name, hdeg, intdeg).map_err(|e| kernel(line.number, ncol, e))?;
            }
            "rel" => {
                if line.words.len() < 2 {
                    return Err(line.err(col, "`rel` needs an expression"));
                }
                let (ecol, e) = line.rest_after(0);
                p.add_relation(e).map_err(|err| kernel(line.number, ecol, err))?;
            }
            other => return Err(line.err(col, format!("unknown field `{other}` in [base]"))),
        }
    }
    Ok(p)
}

fn build_dg(base: Arc<TruncatedBase>, lines: &[Line]) -> Result<DgAlgebra, JobError> {
    let mut a = DgAlgebra::new(base);
    for line in lines {
        let (col, word) = line.words[0];
        if word != "var" {
            return Err(line.err(col, format!("unknown field `{word}` in [dg]")));
        }
        let Some(&(ncol, name)) = line.words.get(1) else {
            return Err(line.err(col, "`var` needs a name"));
        };
        let (mut hdeg, mut intdeg, mut kind, mut boundary) = (None, None, None, None);
        for (c, key, value) in line.attributes(2)? {
            match key {
                "hdeg" => hdeg = Some(number(line, c, key, value)?),
                "intdeg" => intdeg = Some(number(line, c, key, value)?),
                "kind" => kind = Some((c, VariableKind::from_str(value).map_err(|e| kernel(line.number, c, e))?)),
                "d" => boundary = Some((c, value)),
                _ => return Err(line.err(c, format!("unknown field `{key}`"))),
            }
        }
        let missing = |what: &str| line.err(ncol, format!("`{name}` needs `{what}=`"));
        let hdeg = hdeg.ok_or_else(|| missing("hdeg"))?;
        let intdeg = intdeg.ok_or_else(|| missing("intdeg"))?;
        let (kcol, kind) = kind.ok_or_else(|| missing("kind"))?;
        if hdeg == 0 {
            return Err(line.err(ncol, format!("`{name}` needs homological degree at least 1")));
        }
        if kind.is_odd() != (hdeg % 2 == 1) {
            return Err(kernel(
                line.number,
                kcol,
                Error::ParityMismatch {
                    name: name.into(),
                    hdeg,
                    kind: kind.name().into(),
                },
            ));
        }
        let z = match boundary {
            None => DgElement::zero(hdeg - 1, intdeg),
            Some((c, src)) => {
                let zero = expr::parse(src).map_err(|e| kernel(line.number, c, e))?.is_zero();
                if zero {
                    DgElement::zero(hdeg - 1, intdeg)
                } else {
                    a.parse_element(src, hdeg - 1, intdeg)
                        .map_err(|e| kernel(line.number, c, e))?
                }
            }
        };
        a.declare_variable(name, hdeg, intdeg, kind, z)
            .map_err(|e| kernel(line.number, ncol, e))?;
    }
    Ok(a)
}

fn build_bounds(lines: &[Line]) -> Result<(usize, usize), JobError> {
    let (mut h, mut j) = (None, None);
    for line in lines {
        let (kc, key, vc, value) = line.setting()?;
        match key {
            "max_hdeg" => h = Some(number(line, vc, key, value)?),
            "max_intdeg" => j = Some(number(line, vc, key, value)?),
            _ => return Err(line.err(kc, format!("unknown field `{key}`"))),
        }
    }
    match (h, j) {
        (Some(h), Some(j)) => Ok((h, j)),
        (None, _) => Err(at(0, 0, "missing bound `max_hdeg` in [bounds]")),
        (_, None) => Err(at(0, 0, "missing bound `max_intdeg` in [bounds]")),
    }
}

fn build_task(lines: &[Line]) -> Result<Task, JobError> {
    let mut t = Task::default();
    for line in lines {
        let (kc, key, vc, value) = line.setting()?;
        let bad = |m: String| line.err(vc, m);
        match key {
            "command" => t.command = Some(value.parse().map_err(bad)?),
            "switch" => t.switching = Some(parse_switching(value).map_err(bad)?),
            "order" => t.order = Some(number(line, vc, key, value)?),
            "statement" => t.statement = Some(value.parse().map_err(|e: Error| bad(e.to_string()))?),
            "koszul_variable" => t.koszul_variable = Some(value.to_string()),
            _ => return Err(line.err(kc, format!("unknown field `{key}`"))),
        }
    }
    Ok(t)
}

fn build_module(base: Arc<TruncatedBase>, lines: &[Line]) -> Result<FiniteModule, JobError> {
    let mut p = ModulePresentation::new(base);
    let mut differentials = Vec::new();
    for line in lines {
        let (col, word) = line.words[0];
        match word {
            "gen" => {
                let Some(&(ncol, name)) = line.words.get(1) else {
                    return Err(line.err(col, "`gen` needs a name"));
                };
                let (mut hdeg, mut intdeg) = (0, 0);
                for (c, key, value) in line.attributes(2)? {
                    match key {
                        "hdeg" => hdeg = number(line, c, key, value)?,
                        "intdeg" => intdeg = number(line, c, key, value)?,
                        _ => return Err(line.err(c, format!("unknown field `{key}`"))),
                    }
                }
                p.add_generator(name, hdeg, intdeg).map_err(|e| kernel(line.number, ncol, e))?;
            }
            "rel" => {
                if line.words.len() < 2 {
                    return Err(line.err(col, "`rel` needs an expression"));
                }
                let (ecol, e) = line.rest_after(0);
                p.add_relation(e).map_err(|err| kernel(line.number, ecol, err))?;
            }
            "d" => differentials.push(line),
            other => return Err(line.err(col, format!("unknown field `{other}` in [module]"))),
        }
    }
    // Differentials may mention generators declared after them.
    for line in differentials {
        let (kc, key, vc, value) = line.setting()?;
        let gen = key.strip_prefix('d').map(str::trim).unwrap_or("");
        if gen.is_empty() {
            return Err(line.err(kc, "expected `d <generator> = <expression>`"));
        }
        p.set_differential(gen, value).map_err(|e| kernel(line.number, vc, e))?;
    }
    FiniteModule::new(p).map_err(|e| at(0, 0, format!("module: {e}")))
}

pub fn parse_job_str(src: &str) -> Result<Job, JobError> {
    let s = split(src)?;
    let (_, field) = s.field.ok_or_else(|| at(0, 0, "missing `field = ...` line"))?;
    let (max_hdeg, max_intdeg) = build_bounds(&s.bounds)?;
    let presentation = build_base(field, &s.base)?;
    let base = Arc::new(truncate_quotient(&presentation, max_intdeg));
    let algebra = build_dg(base.clone(), &s.dg)?;
    let task = build_task(&s.task)?;
    let module = match s.module_header {
        Some(_) => Some(build_module(base, &s.module)?),
        None => None,
    };
    Ok(Job {
        field,
        algebra,
        max_hdeg,
        max_intdeg,
        task,
        module,
    })
}

pub fn parse_job(path: &Path) -> Result<Job, JobError> {
    let src = std::fs::read_to_string(path).map_err(|e| at(0, 0, format!("{}: {e}", path.display())))?;
    parse_job_str(&src)
}

/// A standalone `[module]` block over the base of an already parsed job.
pub fn parse_module(path: &Path, base: Arc<TruncatedBase>) -> Result<FiniteModule, JobError> {
    let src = std::fs::read_to_string(path).map_err(|e| at(0, 0, format!("{}: {e}", path.display())))?;
    let s = split(&src)?;
    if s.module_header.is_none() {
        return Err(at(0, 0, format!("{}: no [module] section", path.display())));
    }
    build_module(base, &s.module)
}
