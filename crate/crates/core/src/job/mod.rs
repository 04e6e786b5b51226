//! Job files and reports.
//!
//! A job file is a sequence of `key: value` lines. Lines starting with
//! whitespace continue the previous key, and `#` starts a comment.
//!
//! ```text
//! kind: homogenize
//! N: 6
//! vars: x, y
//! relations: y^2 - x^2 - x^3
//! map:
//!   x -> 1/2*x
//!   y -> 1/2*y
//! ```
//!
//! The full grammar is documented in the book chapter on the CLI.

mod expr;
mod report;
mod selftest;

use std::fmt::Write as _;

pub use expr::{expression_ring, parse_constant, parse_expression, ExprError, EXPR_DEGREE_LIMIT};
pub use report::{run_job, run_source, Diagnostic, Report, Severity, REPORT_SCHEMA};
pub use selftest::selftest;

use crate::error::{Error, Result};
use crate::field::{Field, GaussRat};
use crate::series::{is_identifier, Series, SeriesRing};

/// Largest accepted truncation order.
pub const MAX_TRUNCATION: usize = EXPR_DEGREE_LIMIT;
/// Largest accepted quaternionic dimension.
pub const MAX_QUATERNIONIC_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobKind {
    Lambda,
    SolveEigen,
    Homogenize,
    Psi,
    Planes,
}

impl JobKind {
    pub const ALL: [JobKind; 5] = [JobKind::Lambda, JobKind::SolveEigen, JobKind::Homogenize, JobKind::Psi, JobKind::Planes];

    pub fn name(self) -> &'static str {
        match self {
            JobKind::Lambda => "lambda",
            JobKind::SolveEigen => "solve-eigen",
            JobKind::Homogenize => "homogenize",
            JobKind::Psi => "psi",
            JobKind::Planes => "planes",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            JobKind::Lambda => &["n", "I", "J"],
            JobKind::SolveEigen => &["N", "vars", "map", "r"],
            JobKind::Homogenize => &["N", "vars", "map"],
            JobKind::Psi => &["N", "n", "I", "J"],
            JobKind::Planes => &["N", "n", "I", "planes"],
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            JobKind::Lambda => &["N"],
            JobKind::SolveEigen => &["lambda"],
            JobKind::Homogenize => &["relations", "conjugate"],
            JobKind::Psi => &["planes"],
            JobKind::Planes => &["J"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// `I: a, b, c` is taken as a unit vector; `I: dir(a, b, c)` is normalized.
#[derive(Clone, Debug, PartialEq)]
pub enum StructureSpec {
    Unit([GaussRat; 3]),
    Direction([GaussRat; 3]),
}

impl StructureSpec {
    fn render(&self) -> String {
        let join = |v: &[GaussRat; 3]| v.iter().map(GaussRat::render).collect::<Vec<_>>().join(", ");
        match self {
            StructureSpec::Unit(v) => join(v),
            StructureSpec::Direction(v) => format!("dir({})", join(v)),
        }
    }
}

/// One quaternionic plane of a `planes:` entry.
#[derive(Clone, Debug, PartialEq)]
pub enum PlaneSpec {
    /// Real spanning vectors of length `4n`, `;`-separated.
    Vectors(Vec<Vec<GaussRat>>),
    /// `line(c_1, ..., c_n)`: the quaternionic line through a real vector.
    Line(Vec<GaussRat>),
}

impl PlaneSpec {
    fn render(&self) -> String {
        let join = |v: &[GaussRat]| v.iter().map(GaussRat::render).collect::<Vec<_>>().join(", ");
        match self {
            PlaneSpec::Vectors(vs) => vs.iter().map(|v| join(v)).collect::<Vec<_>>().join("; "),
            PlaneSpec::Line(c) => format!("line({})", join(c)),
        }
    }
}

/// A validated job. Expressions live in [`expression_ring`] over `vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct JobFile {
    pub kind: JobKind,
    pub backend: Backend,
    pub truncation: Option<usize>,
    pub n: Option<usize>,
    pub i: Option<StructureSpec>,
    pub j: Option<StructureSpec>,
    pub vars: Vec<String>,
    pub relations: Vec<Series<GaussRat>>,
    /// Image of each variable, in the order of `vars`.
    pub map: Option<Vec<Series<GaussRat>>>,
    /// A coordinate change `C`; the job's map becomes `C ∘ map ∘ C⁻¹`.
    pub conjugate: Option<Vec<Series<GaussRat>>>,
    pub lambda: Option<GaussRat>,
    pub r: Option<Series<GaussRat>>,
    pub planes: Vec<PlaneSpec>,
}

impl JobFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_job(text)
    }

    /// The same job at another truncation order.
    pub fn with_truncation(&self, truncation: usize) -> Self {
        JobFile { truncation: Some(truncation), ..self.clone() }
    }

    /// Canonical text; parsing it gives back an equal job.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind: {}", self.kind.name());
        let _ = writeln!(out, "backend: {}", self.backend.name());
        if let Some(n) = self.truncation {
            let _ = writeln!(out, "N: {n}");
        }
        if let Some(n) = self.n {
            let _ = writeln!(out, "n: {n}");
        }
        if let Some(s) = &self.i {
            let _ = writeln!(out, "I: {}", s.render());
        }
        if let Some(s) = &self.j {
            let _ = writeln!(out, "J: {}", s.render());
        }
        if !self.vars.is_empty() {
            let _ = writeln!(out, "vars: {}", self.vars.join(", "));
        }
        if !self.relations.is_empty() {
            out.push_str("relations:\n");
            for g in &self.relations {
                let _ = writeln!(out, "  {}", g.render());
            }
        }
        for (key, images) in [("map", &self.map), ("conjugate", &self.conjugate)] {
            if let Some(images) = images {
                let _ = writeln!(out, "{key}:");
                for (v, f) in self.vars.iter().zip(images) {
                    let _ = writeln!(out, "  {v} -> {}", f.render());
                }
            }
        }
        if let Some(l) = &self.lambda {
            let _ = writeln!(out, "lambda: {}", l.render());
        }
        if let Some(r) = &self.r {
            let _ = writeln!(out, "r: {}", r.render());
        }
        if !self.planes.is_empty() {
            out.push_str("planes:\n");
            for p in &self.planes {
                let _ = writeln!(out, "  {}", p.render());
            }
        }
        out
    }

    /// The ring of the job at its truncation order.
    pub fn ring(&self) -> Result<SeriesRing> {
        let n = self.truncation.ok_or_else(|| Error::validation("N", "missing"))?;
        SeriesRing::new(&self.vars, n)
    }
}

/// A piece of the input with the 1-based position of its first character.
#[derive(Clone, Debug)]
struct Chunk {
    line: usize,
    col: usize,
    text: String,
}

impl Chunk {
    fn parse_error(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.col + offset, message: message.into() }
    }

    /// Splits on `sep`, trimming each piece and dropping empty ones.
    fn split(&self, sep: char) -> Vec<Chunk> {
        let chars: Vec<char> = self.text.chars().collect();
        let mut pieces = Vec::new();
        let mut start = 0;
        for end in (0..=chars.len()).filter(|&k| k == chars.len() || chars[k] == sep) {
            if let Some(piece) = self.sub(&chars, start, end) {
                pieces.push(piece);
            }
            start = end + 1;
        }
        pieces
    }

    /// The trimmed characters `start..end`, or `None` if blank.
    fn sub(&self, chars: &[char], start: usize, end: usize) -> Option<Chunk> {
        let mut s = start;
        let mut e = end;
        while s < e && chars[s].is_whitespace() {
            s += 1;
        }
        while e > s && chars[e - 1].is_whitespace() {
            e -= 1;
        }
        (s < e).then(|| Chunk { line: self.line, col: self.col + s, text: chars[s..e].iter().collect() })
    }

    /// The text after `prefix(` and before a final `)`, if it has that shape.
    fn call(&self, prefix: &str) -> Option<Chunk> {
        let chars: Vec<char> = self.text.chars().collect();
        let head: Vec<char> = prefix.chars().collect();
        let mut k = head.len();
        if !chars.starts_with(&head) {
            return None;
        }
        while k < chars.len() && chars[k].is_whitespace() {
            k += 1;
        }
        if chars.get(k) != Some(&'(') || chars.last() != Some(&')') {
            return None;
        }
        Some(self.sub(&chars, k + 1, chars.len() - 1).unwrap_or(Chunk {
            line: self.line,
            col: self.col + k + 1,
            text: String::new(),
        }))
    }
}

struct Entry {
    key: String,
    at: Chunk,
    chunks: Vec<Chunk>,
}

const KEYS: [&str; 13] = ["kind", "backend", "N", "n", "I", "J", "vars", "relations", "map", "conjugate", "lambda", "r", "planes"];

fn lex(text: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Chunk { line: idx + 1, col: 1, text: content.to_string() };
        let chars: Vec<char> = content.chars().collect();
        let Some(body) = line.sub(&chars, 0, chars.len()) else { continue };
        if chars[0].is_whitespace() {
            match entries.last_mut() {
                Some(entry) => entry.chunks.push(body),
                None => return Err(body.parse_error(0, "continuation line before any key")),
            }
            continue;
        }
        let Some(colon) = chars.iter().position(|&c| c == ':') else {
            return Err(line.parse_error(0, "expected `key: value`"));
        };
        let key = line.sub(&chars, 0, colon).ok_or_else(|| line.parse_error(0, "missing key before `:`"))?;
        if !KEYS.contains(&key.text.as_str()) {
            return Err(Error::validation(key.text.clone(), format!("unknown key (line {})", key.line)));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key.text) {
            return Err(Error::validation(
                key.text.clone(),
                format!("given twice (lines {} and {})", prev.at.line, key.line),
            ));
        }
        let chunks = line.sub(&chars, colon + 1, chars.len()).into_iter().collect();
        entries.push(Entry { key: key.text.clone(), at: key, chunks });
    }
    Ok(entries)
}

fn single(entry: &Entry) -> Result<&Chunk> {
    match entry.chunks.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::validation(entry.key.clone(), "missing value")),
        [_, extra, ..] => Err(extra.parse_error(0, format!("`{}` takes a single value", entry.key))),
    }
}

fn constant_at(chunk: &Chunk, field: &str) -> Result<GaussRat> {
    let ring = expression_ring(&[]);
    expr_at(chunk, &ring, field).map(|s| s.constant_term())
}

fn expr_at(chunk: &Chunk, ring: &SeriesRing, field: &str) -> Result<Series<GaussRat>> {
    parse_expression(&chunk.text, ring).map_err(|err| match err {
        ExprError::Syntax { offset, message } => chunk.parse_error(offset, message),
        ExprError::Undeclared { offset, name } => Error::validation(
            field,
            format!("undeclared variable `{name}` at line {}, column {}", chunk.line, chunk.col + offset),
        ),
    })
}

fn integer_at(chunk: &Chunk, field: &str, range: std::ops::RangeInclusive<usize>) -> Result<usize> {
    let value: usize = chunk.text.parse().map_err(|_| chunk.parse_error(0, "expected a nonnegative integer"))?;
    if !range.contains(&value) {
        return Err(Error::validation(field, format!("{value} is outside {}..={}", range.start(), range.end())));
    }
    Ok(value)
}

fn structure_at(chunk: &Chunk, field: &str) -> Result<StructureSpec> {
    let (inner, direction) = match chunk.call("dir") {
        Some(inner) => (inner, true),
        None => (chunk.clone(), false),
    };
    let parts = inner.split(',');
    if parts.len() != 3 {
        return Err(Error::validation(field, format!("expected three coefficients, found {}", parts.len())));
    }
    let mut coeffs = Vec::with_capacity(3);
    for p in &parts {
        let c = constant_at(p, field)?;
        if !c.is_real() {
            return Err(Error::validation(field, "coefficients must be real"));
        }
        coeffs.push(c);
    }
    let coeffs: [GaussRat; 3] = coeffs.try_into().expect("three coefficients");
    Ok(if direction { StructureSpec::Direction(coeffs) } else { StructureSpec::Unit(coeffs) })
}

fn map_at(entry: &Entry, vars: &[String], ring: &SeriesRing) -> Result<Vec<Series<GaussRat>>> {
    let key = entry.key.as_str();
    let mut images: Vec<Option<Series<GaussRat>>> = vec![None; vars.len()];
    for chunk in &entry.chunks {
        for piece in chunk.split(';') {
            let Some(arrow) = piece.text.find("->") else {
                return Err(piece.parse_error(0, "expected `variable -> expression`"));
            };
            let chars: Vec<char> = piece.text.chars().collect();
            let arrow = piece.text[..arrow].chars().count();
            let name = piece.sub(&chars, 0, arrow).ok_or_else(|| piece.parse_error(0, "missing variable before `->`"))?;
            let field = format!("{key}.{}", name.text);
            let idx = vars
                .iter()
                .position(|v| *v == name.text)
                .ok_or_else(|| Error::validation(field.clone(), "not a declared variable"))?;
            if images[idx].is_some() {
                return Err(Error::validation(field, "image given twice"));
            }
            let rhs = piece.sub(&chars, arrow + 2, chars.len()).ok_or_else(|| piece.parse_error(arrow + 2, "missing image"))?;
            let image = expr_at(&rhs, ring, &field)?;
            if !image.constant_term().is_zero() {
                return Err(Error::validation(field, "image must vanish at the origin"));
            }
            images[idx] = Some(image);
        }
    }
    images
        .into_iter()
        .zip(vars)
        .map(|(img, v)| img.ok_or_else(|| Error::validation(key, format!("no image for `{v}`"))))
        .collect()
}

fn plane_at(chunk: &Chunk, field: &str) -> Result<PlaneSpec> {
    let components = |c: &Chunk| c.split(',').iter().map(|p| constant_at(p, field)).collect::<Result<Vec<_>>>();
    if let Some(inner) = chunk.call("line") {
        return Ok(PlaneSpec::Line(components(&inner)?));
    }
    Ok(PlaneSpec::Vectors(chunk.split(';').iter().map(components).collect::<Result<_>>()?))
}

/// Parses and validates a job; see the module documentation for the grammar.
pub fn parse_job(text: &str) -> Result<JobFile> {
    let entries = lex(text)?;
    let get = |key: &str| entries.iter().find(|e| e.key == key);

    let kind_entry = get("kind").ok_or_else(|| Error::validation("kind", "missing"))?;
    let kind_chunk = single(kind_entry)?;
    let kind = JobKind::ALL
        .into_iter()
        .find(|k| k.name() == kind_chunk.text)
        .ok_or_else(|| Error::validation("kind", format!("unknown kind `{}`", kind_chunk.text)))?;
    for key in kind.required() {
        if get(key).is_none() {
            return Err(Error::validation(*key, format!("required by kind `{}`", kind.name())));
        }
    }
    for e in &entries {
        let k = e.key.as_str();
        if !matches!(k, "kind" | "backend") && !kind.required().contains(&k) && !kind.optional().contains(&k) {
            return Err(Error::validation(k, format!("not used by kind `{}` (line {})", kind.name(), e.at.line)));
        }
    }

    let backend = match get("backend") {
        None => Backend::Exact,
        Some(e) => match single(e)?.text.as_str() {
            "exact" => Backend::Exact,
            "float" => Backend::Float,
            other => return Err(Error::validation("backend", format!("unknown backend `{other}`"))),
        },
    };
    let truncation = get("N").map(|e| integer_at(single(e)?, "N", 2..=MAX_TRUNCATION)).transpose()?;
    let n = get("n").map(|e| integer_at(single(e)?, "n", 1..=MAX_QUATERNIONIC_DIM)).transpose()?;
    let i = get("I").map(|e| structure_at(single(e)?, "I")).transpose()?;
    let j = get("J").map(|e| structure_at(single(e)?, "J")).transpose()?;

    let mut vars: Vec<String> = Vec::new();
    if let Some(e) = get("vars") {
        for chunk in &e.chunks {
            for piece in chunk.split(',') {
                let name = piece.text;
                if !is_identifier(&name) || name == "i" {
                    return Err(Error::validation("vars", format!("`{name}` is not a valid variable name")));
                }
                if vars.contains(&name) {
                    return Err(Error::validation("vars", format!("`{name}` declared twice")));
                }
                vars.push(name);
            }
        }
        if vars.is_empty() {
            return Err(Error::validation("vars", "no variables declared"));
        }
    }
    let ring = expression_ring(&vars);

    let mut relations = Vec::new();
    if let Some(e) = get("relations") {
        for piece in e.chunks.iter().flat_map(|c| c.split(';')) {
            let field = format!("relations[{}]", relations.len());
            let g = expr_at(&piece, &ring, &field)?;
            if !g.constant_term().is_zero() {
                return Err(Error::validation(field, "relation must vanish at the origin"));
            }
            relations.push(g);
        }
    }
    let map = get("map").map(|e| map_at(e, &vars, &ring)).transpose()?;
    let conjugate = get("conjugate").map(|e| map_at(e, &vars, &ring)).transpose()?;
    let lambda = get("lambda").map(|e| constant_at(single(e)?, "lambda")).transpose()?;
    let r = get("r").map(|e| expr_at(single(e)?, &ring, "r")).transpose()?;

    let mut planes = Vec::new();
    if let Some(e) = get("planes") {
        for chunk in &e.chunks {
            planes.push(plane_at(chunk, &format!("planes[{}]", planes.len()))?);
        }
        if planes.is_empty() {
            return Err(Error::validation("planes", "no planes given"));
        }
    }

    Ok(JobFile { kind, backend, truncation, n, i, j, vars, relations, map, conjugate, lambda, r, planes })
}
