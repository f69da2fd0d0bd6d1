//! The job file format.
//!
//! ```text
//! [field]
//! p = 101
//!
//! [quiver]
//! vertices = 1 2 3
//! a: 1 -> 2
//! b: 2 -> 3
//!
//! [ideal]
//! b a
//!
//! [command]
//! ass
//!
//! [module]
//! dims = 1 1 0
//! a = 1
//! ```
//!
//! `[complex]` replaces `[quiver]`/`[ideal]` with `n = ..` and
//! `shape = interval m | window lo hi | cyclic k`. `[coefficient]` takes the
//! same lines as `[quiver]` plus `relation = <word>` lines. An ideal line may
//! be `rad k` for all paths of length `k`. Words are composites written right
//! to left, so `b a` means `a` then `b`.

use std::collections::BTreeMap;

use arknit_core::complexes::NComplexSpec;
use arknit_core::quiver::{BoundQuiver, MonomialIdeal, Quiver};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Prime(u64),
    Rationals,
}

impl FieldChoice {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Some(FieldChoice::Rationals);
        }
        s.parse().ok().map(FieldChoice::Prime)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    Word(Vec<String>),
    Rad(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverDesc {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    pub relations: Vec<(usize, Relation)>,
    pub line: usize,
}

impl QuiverDesc {
    fn new(line: usize) -> Self {
        QuiverDesc {
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            line,
        }
    }

    pub fn build(&self) -> Result<BoundQuiver, CliError> {
        let mut vertices = self.vertices.clone();
        for (_, s, t) in &self.arrows {
            for v in [s, t] {
                if !vertices.contains(v) {
                    vertices.push(v.clone());
                }
            }
        }
        let at = |line: usize| move |e| CliError::Invalid { line, source: e };
        let q = Quiver::new(&vertices, &self.arrows).map_err(at(self.line))?;
        let mut gens = Vec::new();
        for (line, rel) in &self.relations {
            match rel {
                Relation::Word(w) => {
                    let g = MonomialIdeal::from_words(&q, &[w.clone()]).map_err(at(*line))?;
                    gens.extend(g.generators().iter().cloned());
                }
                Relation::Rad(k) => {
                    let g = MonomialIdeal::all_paths_of_length(&q, *k).map_err(at(*line))?;
                    gens.extend(g.generators().iter().cloned());
                }
            }
        }
        let line = self.relations.first().map_or(self.line, |r| r.0);
        let ideal = MonomialIdeal::new(&q, gens).map_err(at(line))?;
        BoundQuiver::new(q, ideal).map_err(at(line))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Quiver(QuiverDesc),
    Complex(NComplexSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Info,
    Tensor,
    ArQuiver,
    Ass,
    Verify,
    Approximate,
    Roundtrip,
}

impl Command {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "info" => Command::Info,
            "tensor" => Command::Tensor,
            "ar-quiver" => Command::ArQuiver,
            "ass" => Command::Ass,
            "verify" => Command::Verify,
            "approximate" => Command::Approximate,
            "roundtrip" => Command::Roundtrip,
            _ => return None,
        })
    }

    pub fn needs_target(self) -> bool {
        matches!(self, Command::Ass | Command::Approximate)
    }
}

/// A module named by its position in the AR quiver, its dimension vector, or
/// explicit arrow matrices (rows separated by `;`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Index(usize),
    Dims(Vec<usize>),
    Matrices {
        dims: Vec<usize>,
        maps: Vec<(String, Vec<Vec<String>>, usize)>,
        line: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub field: FieldChoice,
    pub base: Base,
    pub coefficient: Option<QuiverDesc>,
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub target: Option<Target>,
    /// Extra modules given as further `[module]` sections.
    pub family: Vec<Target>,
}

fn perr(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_arrow(line: usize, s: &str) -> Result<(String, String, String), CliError> {
    let (name, rest) = s
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `name: src -> tgt`"))?;
    let (src, tgt) = rest
        .split_once("->")
        .ok_or_else(|| perr(line, "expected `->`"))?;
    let (name, src, tgt) = (name.trim(), src.trim(), tgt.trim());
    if name.is_empty() || src.is_empty() || tgt.is_empty() {
        return Err(perr(line, "empty name in arrow"));
    }
    Ok((name.into(), src.into(), tgt.into()))
}

fn parse_relation(line: usize, s: &str) -> Result<Relation, CliError> {
    let words: Vec<String> = s.split_whitespace().map(String::from).collect();
    match words.as_slice() {
        [] => Err(perr(line, "empty relation")),
        [r, k] if r == "rad" => k
            .parse()
            .map(Relation::Rad)
            .map_err(|_| perr(line, format!("bad radical power `{k}`"))),
        _ => Ok(Relation::Word(words)),
    }
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>, CliError> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| perr(line, format!("expected a number, found `{t}`")))
        })
        .collect()
}

fn parse_shape(line: usize, n: usize, s: &str) -> Result<NComplexSpec, CliError> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let num = |t: &str| -> Result<i64, CliError> {
        t.parse()
            .map_err(|_| perr(line, format!("expected an integer, found `{t}`")))
    };
    let spec = match words.as_slice() {
        ["interval", m] => NComplexSpec::interval(n, num(m)? as usize),
        ["window", lo, hi] => NComplexSpec::window(n, num(lo)?, num(hi)?),
        ["cyclic", k] => NComplexSpec::cyclic(num(k)? as usize),
        _ => return Err(perr(line, format!("unknown shape `{s}`"))),
    };
    spec.map_err(|e| CliError::Invalid { line, source: e })
}

#[derive(Default)]
struct ModuleBuf {
    index: Option<usize>,
    dims: Option<Vec<usize>>,
    maps: Vec<(String, Vec<Vec<String>>, usize)>,
    line: usize,
}

impl ModuleBuf {
    fn finish(self) -> Result<Target, CliError> {
        match (self.index, self.dims) {
            (Some(i), None) if self.maps.is_empty() => Ok(Target::Index(i)),
            (None, Some(d)) if self.maps.is_empty() => Ok(Target::Dims(d)),
            (None, Some(dims)) => Ok(Target::Matrices {
                dims,
                maps: self.maps,
                line: self.line,
            }),
            _ => Err(perr(
                self.line,
                "a module needs exactly one of `index` or `dims`",
            )),
        }
    }
}

/// Parses a job file. Mathematical validation happens in [`crate::load_spec`].
pub fn parse(text: &str) -> Result<JobSpec, CliError> {
    let mut section = String::new();
    let mut field = None;
    let mut quiver: Option<QuiverDesc> = None;
    let mut ideal: Vec<(usize, Relation)> = Vec::new();
    let mut coefficient: Option<QuiverDesc> = None;
    let mut complex_n: Option<(usize, usize)> = None;
    let mut complex_shape: Option<(usize, String)> = None;
    let mut command: Option<Command> = None;
    let mut params = BTreeMap::new();
    let mut modules: Vec<ModuleBuf> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            section = name.trim().to_string();
            match section.as_str() {
                "quiver" => {
                    if quiver.is_some() {
                        return Err(perr(line, "duplicate [quiver] section"));
                    }
                    quiver = Some(QuiverDesc::new(line));
                }
                "coefficient" => {
                    if coefficient.is_some() {
                        return Err(perr(line, "duplicate [coefficient] section"));
                    }
                    coefficient = Some(QuiverDesc::new(line));
                }
                "module" => modules.push(ModuleBuf {
                    line,
                    ..Default::default()
                }),
                "field" | "ideal" | "complex" | "command" => {}
                other => return Err(perr(line, format!("unknown section [{other}]"))),
            }
            continue;
        }
        let kv = s.split_once('=').map(|(k, v)| (k.trim(), v.trim()));
        match section.as_str() {
            "" => return Err(perr(line, "content before the first section")),
            "field" => {
                let v = kv.map_or(s, |(_, v)| v);
                field = Some(
                    FieldChoice::parse(v).ok_or_else(|| perr(line, format!("bad field `{v}`")))?,
                );
            }
            "quiver" | "coefficient" => {
                let desc = if section == "quiver" {
                    quiver.as_mut()
                } else {
                    coefficient.as_mut()
                }
                .expect("section opened");
                match kv {
                    Some(("vertices", v)) => {
                        desc.vertices.extend(v.split_whitespace().map(String::from))
                    }
                    Some(("relation", v)) => desc.relations.push((line, parse_relation(line, v)?)),
                    _ => desc.arrows.push(parse_arrow(line, s)?),
                }
            }
            "ideal" => ideal.push((line, parse_relation(line, s)?)),
            "complex" => match kv {
                Some(("n", v)) => {
                    let n = v.parse().map_err(|_| perr(line, format!("bad n `{v}`")))?;
                    complex_n = Some((line, n));
                }
                Some(("shape", v)) => complex_shape = Some((line, v.to_string())),
                _ => return Err(perr(line, "expected `n = ..` or `shape = ..`")),
            },
            "command" => match kv {
                Some((k, v)) => {
                    params.insert(k.to_string(), v.to_string());
                }
                None => {
                    if command.is_some() {
                        return Err(perr(line, "more than one command"));
                    }
                    command = Some(
                        Command::parse(s)
                            .ok_or_else(|| perr(line, format!("unknown command `{s}`")))?,
                    );
                }
            },
            "module" => {
                let m = modules.last_mut().expect("section opened");
                let (k, v) = kv.ok_or_else(|| perr(line, "expected `key = value`"))?;
                match k {
                    "index" => {
                        m.index = Some(
                            v.parse()
                                .map_err(|_| perr(line, format!("bad index `{v}`")))?,
                        )
                    }
                    "dims" => m.dims = Some(parse_usizes(line, v)?),
                    arrow => {
                        let rows = v
                            .split(';')
                            .map(|r| r.split_whitespace().map(String::from).collect::<Vec<_>>())
                            .filter(|r| !r.is_empty())
                            .collect();
                        m.maps.push((arrow.to_string(), rows, line));
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    let command = command.ok_or_else(|| perr(text.lines().count().max(1), "missing [command]"))?;
    let base = match (quiver, complex_shape) {
        (Some(mut q), None) => {
            q.relations.extend(ideal);
            Base::Quiver(q)
        }
        (None, Some((line, shape))) => {
            if !ideal.is_empty() {
                return Err(perr(ideal[0].0, "[ideal] does not apply to a complex"));
            }
            let n = complex_n.map_or(2, |(_, n)| n);
            Base::Complex(parse_shape(line, n, &shape)?)
        }
        (Some(q), Some(_)) => {
            return Err(perr(q.line, "give either [quiver] or [complex], not both"))
        }
        (None, None) => return Err(perr(1, "missing [quiver] or [complex]")),
    };
    let mut modules = modules.into_iter().map(ModuleBuf::finish);
    let target = modules.next().transpose()?;
    let family = modules.collect::<Result<Vec<_>, _>>()?;
    Ok(JobSpec {
        field: field.unwrap_or(FieldChoice::Prime(101)),
        base,
        coefficient,
        command,
        params,
        target,
        family,
    })
}

/// Parses a family file: a sequence of `[module]` sections.
pub fn parse_family(text: &str) -> Result<Vec<Target>, CliError> {
    let wrapped = format!("[quiver]\nv: x -> y\n[command]\ninfo\n{text}");
    let offset = 4;
    match parse(&wrapped) {
        Ok(j) => Ok(j
            .target
            .into_iter()
            .chain(j.family)
            .map(|t| match t {
                Target::Matrices { dims, maps, line } => Target::Matrices {
                    dims,
                    maps: maps
                        .into_iter()
                        .map(|(a, m, l)| (a, m, l - offset))
                        .collect(),
                    line: line - offset,
                },
                other => other,
            })
            .collect()),
        Err(CliError::Parse { line, msg }) => Err(perr(line.saturating_sub(offset), msg)),
        Err(e) => Err(e),
    }
}
