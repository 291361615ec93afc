//! Group-spec documents: JSON objects `{"kind": ..., ...}` realized as
//! [`GroupTable`]s.
//!
//! ```json
//! {"kind": "permutation", "generators": ["(0 1)", [1, 2, 0]]}
//! {"kind": "presentation", "text": "a, b | a^2, b^2, (a b)^2"}
//! {"kind": "sz", "q": 2, "n": 3, "e": "traceless"}
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constructions::{
    bilinear_ext, jm_spec, parse_presentation_with, sz_group, todd_coxeter_with_budget, BilinearExtSpec, Convention, ESubgroup,
    JmPattern, SzGroupSpec, DEFAULT_COSET_BUDGET,
};
use crate::error::{Error, Result};
use crate::group::{GroupTable, ORDER_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Permutation {
    /// Cycle notation, e.g. `"(0 1 2)(3 4)"`; `"()"` is the identity.
    Cycles(String),
    /// Images of `0, 1, ...`.
    Images(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    CayleyTable {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Permutation {
        #[serde(default)]
        degree: Option<usize>,
        generators: Vec<Permutation>,
    },
    /// Exactly one of `text` and `file` (resolved against the document).
    Presentation {
        #[serde(default)]
        text: Option<String>,
        #[serde(default)]
        file: Option<String>,
        #[serde(default)]
        convention: Convention,
        #[serde(default)]
        budget: Option<usize>,
    },
    Sz {
        q: u64,
        n: usize,
        e: ESubgroup,
    },
    BilinearExt(BilinearExtSpec),
    Jm {
        p: u64,
        pattern: JmPattern,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub spec: GroupSpec,
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Parses a document; syntax and shape errors carry a byte offset.
pub fn parse_document(text: &str) -> Result<GroupSpecDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse { pos: offset_of(text, e.line(), e.column()), msg: e.to_string() })
}

/// A parsed document remembers its directory so relative `file` references
/// resolve.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub document: GroupSpecDocument,
    pub base: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
    Ok(LoadedSpec { document: parse_document(&text)?, base: path.parent().map(Path::to_path_buf) })
}

/// Parses cycle notation on points `0..`.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut num = String::new();
    let flush = |num: &mut String, cur: &mut Option<Vec<usize>>, pos: usize| -> Result<()> {
        if !num.is_empty() {
            let v = num.parse().map_err(|_| Error::Parse { pos, msg: format!("bad point {num}") })?;
            cur.as_mut().ok_or(Error::Parse { pos, msg: "point outside a cycle".into() })?.push(v);
            num.clear();
        }
        Ok(())
    };
    for (pos, ch) in text.char_indices() {
        match ch {
            '(' if current.is_none() => current = Some(Vec::new()),
            ')' => {
                flush(&mut num, &mut current, pos)?;
                cycles.push(current.take().ok_or(Error::Parse { pos, msg: "unbalanced ')'".into() })?);
            }
            '0'..='9' => num.push(ch),
            ' ' | ',' | '\t' => flush(&mut num, &mut current, pos)?,
            _ => return Err(Error::Parse { pos, msg: format!("unexpected {ch:?} in cycle notation") }),
        }
    }
    if current.is_some() || !num.is_empty() {
        return Err(Error::Parse { pos: text.len(), msg: "unterminated cycle".into() });
    }
    Ok(cycles)
}

fn to_images(p: &Permutation, degree: usize) -> Result<Vec<usize>> {
    match p {
        Permutation::Images(v) => {
            let mut img = v.clone();
            img.extend(v.len()..degree);
            Ok(img)
        }
        Permutation::Cycles(s) => {
            let mut img: Vec<usize> = (0..degree).collect();
            let mut seen = vec![false; degree];
            for c in parse_cycles(s)? {
                for (i, &x) in c.iter().enumerate() {
                    if std::mem::replace(&mut seen[x], true) {
                        return Err(Error::Spec(format!("point {x} repeated in {s}")));
                    }
                    img[x] = c[(i + 1) % c.len()];
                }
            }
            Ok(img)
        }
    }
}

fn max_point(p: &Permutation) -> Result<usize> {
    Ok(match p {
        Permutation::Images(v) => v.len(),
        Permutation::Cycles(s) => parse_cycles(s)?.iter().flatten().map(|&x| x + 1).max().unwrap_or(0),
    })
}

/// Closes permutation generators; `x * y` applies `x` first.
pub fn permutation_group(degree: Option<usize>, generators: &[Permutation]) -> Result<GroupTable> {
    let mut deg = degree.unwrap_or(0);
    for p in generators {
        deg = deg.max(max_point(p)?);
    }
    if let Some(d) = degree {
        if d < deg {
            return Err(Error::Spec(format!("degree {d} is smaller than a generator's support")));
        }
    }
    let deg = deg.max(1);
    let gens = generators.iter().map(|p| to_images(p, deg)).collect::<Result<Vec<_>>>()?;
    for g in &gens {
        let mut sorted = g.clone();
        sorted.sort_unstable();
        if sorted != (0..deg).collect::<Vec<_>>() {
            return Err(Error::Spec(format!("{g:?} is not a permutation of 0..{deg}")));
        }
    }
    let id: Vec<usize> = (0..deg).collect();
    let (g, _) = GroupTable::from_generators(
        &gens,
        id,
        |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&i| b[i]).collect(),
        |p| format!("{p:?}").replace(' ', ""),
        ORDER_CAP,
    )?;
    Ok(g)
}

impl LoadedSpec {
    /// `budget` overrides a presentation's coset budget.
    pub fn realize(&self, budget: Option<usize>) -> Result<GroupTable> {
        realize_with(&self.document.spec, self.base.as_deref(), budget)
    }
}

pub fn realize(spec: &GroupSpec) -> Result<GroupTable> {
    realize_with(spec, None, None)
}

pub fn realize_with(spec: &GroupSpec, base: Option<&Path>, budget: Option<usize>) -> Result<GroupTable> {
    match spec {
        GroupSpec::CayleyTable { table, labels } => GroupTable::from_table(table.clone(), labels.clone(), None),
        GroupSpec::Permutation { degree, generators } => permutation_group(*degree, generators),
        GroupSpec::Presentation { text, file, convention, budget: own } => {
            let text = match (text, file) {
                (Some(t), None) => t.clone(),
                (None, Some(f)) => {
                    let path = base.map_or_else(|| PathBuf::from(f), |b| b.join(f));
                    std::fs::read_to_string(&path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?
                }
                _ => return Err(Error::Spec("presentation needs exactly one of text and file".into())),
            };
            let pres = parse_presentation_with(&text, *convention)?;
            todd_coxeter_with_budget(&pres, budget.or(*own).unwrap_or(DEFAULT_COSET_BUDGET))
        }
        GroupSpec::Sz { q, n, e } => Ok(sz_group(&SzGroupSpec { q: *q, n: *n, e: e.clone() })?.table().clone()),
        GroupSpec::BilinearExt(b) => bilinear_ext(b),
        GroupSpec::Jm { p, pattern } => bilinear_ext(&jm_spec(*p, *pattern)?),
    }
}
