//! Quivers, paths and monomial ideals.
//!
//! Paths store their arrows in the order they are traversed; printed, they
//! read right to left like composition (`b a` is `a` followed by `b`).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_ADMISSIBILITY_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, usize>,
    aindex: HashMap<String, usize>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut vindex = HashMap::new();
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut aindex = HashMap::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            let id = id.as_ref().to_string();
            let src = *vindex
                .get(s.as_ref())
                .ok_or_else(|| Error::UnknownVertex(s.as_ref().to_string()))?;
            let tgt = *vindex
                .get(t.as_ref())
                .ok_or_else(|| Error::UnknownVertex(t.as_ref().to_string()))?;
            if vindex.contains_key(&id) || aindex.insert(id.clone(), out.len()).is_some() {
                return Err(Error::DuplicateId(id));
            }
            out.push(Arrow { id, src, tgt });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
            vindex,
            aindex,
        })
    }

    /// `1 -> 2 -> ... -> m` with arrows `a_i: i -> i+1`.
    pub fn linear(m: usize) -> Self {
        let vs: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = (1..m)
            .map(|i| (format!("a_{i}"), i.to_string(), (i + 1).to_string()))
            .collect();
        Quiver::new(&vs, &arrows).expect("linear quiver is well formed")
    }

    /// Vertices `0..n-1` with arrows `a_i: i -> i+1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        let vs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = (0..n)
            .map(|i| (format!("a_{i}"), i.to_string(), ((i + 1) % n).to_string()))
            .collect();
        Quiver::new(&vs, &arrows).expect("cyclic quiver is well formed")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vindex
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }
    pub fn arrow(&self, id: &str) -> Result<usize> {
        self.aindex
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    /// Arrows leaving `v`, in declaration order.
    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].src == v)
    }

    pub fn opposite(&self) -> Quiver {
        let arrows: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .map(|a| {
                (
                    op_name(&a.id),
                    self.vertices[a.tgt].clone(),
                    self.vertices[a.src].clone(),
                )
            })
            .collect();
        Quiver::new(&self.vertices, &arrows).expect("opposite of a valid quiver")
    }
}

/// Toggles a trailing `^op`.
pub fn op_name(id: &str) -> String {
    match id.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{id}^op"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    /// Traversal order: `arrows[0]` is applied first.
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        let ar = &q.arrows[a];
        Path {
            source: ar.src,
            target: ar.tgt,
            arrows: vec![a],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Builds a path from arrow ids written right to left (`["b", "a"]`).
    pub fn from_word<S: AsRef<str>>(q: &Quiver, word: &[S]) -> Result<Self> {
        let mut arrows = Vec::with_capacity(word.len());
        for id in word.iter().rev() {
            arrows.push(q.arrow(id.as_ref())?);
        }
        let Some(&first) = arrows.first() else {
            return Err(Error::NotComposable("empty word".into()));
        };
        for w in arrows.windows(2) {
            if q.arrows[w[0]].tgt != q.arrows[w[1]].src {
                return Err(Error::NotComposable(format!(
                    "{} then {}",
                    q.arrows[w[0]].id, q.arrows[w[1]].id
                )));
            }
        }
        Ok(Path {
            source: q.arrows[first].src,
            target: q.arrows[*arrows.last().expect("nonempty")].tgt,
            arrows,
        })
    }

    /// `next ∘ self`, i.e. traverse `self` first.
    pub fn then(&self, next: &Path) -> Option<Path> {
        if self.target != next.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Some(Path {
            source: self.source,
            target: next.target,
            arrows,
        })
    }

    pub fn contains(&self, sub: &Path) -> bool {
        if sub.arrows.is_empty() {
            return false;
        }
        self.arrows
            .windows(sub.len())
            .any(|w| w == sub.arrows.as_slice())
    }

    fn ends_with(&self, sub: &Path) -> bool {
        self.arrows.ends_with(&sub.arrows)
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("1_{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .rev()
                .map(|&a| q.arrows[a].id.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Canonical order: length, then arrow ids in traversal order.
    pub fn canonical_cmp(&self, other: &Path, q: &Quiver) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.arrows.iter().map(|&i| q.arrows[i].id.as_str());
            let b = other.arrows.iter().map(|&i| q.arrows[i].id.as_str());
            a.cmp(b)
        })
    }

    /// The same path read in the opposite quiver.
    pub fn opposite(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<Path>,
}

impl MonomialIdeal {
    pub fn empty() -> Self {
        MonomialIdeal {
            generators: Vec::new(),
        }
    }

    pub fn new(q: &Quiver, generators: Vec<Path>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in generators {
            if g.len() < 2 {
                return Err(Error::GeneratorTooShort(g.display(q)));
            }
            if seen.insert(g.arrows.clone()) {
                out.push(g);
            }
        }
        out.sort_by(|a, b| a.canonical_cmp(b, q));
        Ok(MonomialIdeal { generators: out })
    }

    pub fn from_words<S: AsRef<str>>(q: &Quiver, words: &[Vec<S>]) -> Result<Self> {
        let paths = words
            .iter()
            .map(|w| Path::from_word(q, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, paths)
    }

    /// All paths of length exactly `n`.
    pub fn all_paths_of_length(q: &Quiver, n: usize) -> Result<Self> {
        let mut layer: Vec<Path> = (0..q.arrows.len()).map(|a| Path::arrow(q, a)).collect();
        for _ in 1..n {
            layer = layer
                .iter()
                .flat_map(|p| {
                    q.out_arrows(p.target)
                        .map(move |a| p.then(&Path::arrow(q, a)).expect("composable"))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        Self::new(q, layer)
    }

    pub fn generators(&self) -> &[Path] {
        &self.generators
    }

    pub fn kills(&self, p: &Path) -> bool {
        self.generators.iter().any(|g| p.contains(g))
    }

    fn kills_suffix(&self, p: &Path) -> bool {
        self.generators.iter().any(|g| p.ends_with(g))
    }

    fn max_len(&self) -> usize {
        self.generators
            .iter()
            .map(Path::len)
            .max()
            .unwrap_or(2)
            .max(2)
    }
}

/// Surviving paths from each vertex, grouped by length, or why there are
/// infinitely many.
fn surviving_from(
    q: &Quiver,
    ideal: &MonomialIdeal,
    v: usize,
    cap: usize,
) -> std::result::Result<Vec<Path>, Option<usize>> {
    let window = ideal.max_len() - 1;
    let mut all = vec![Path::trivial(v)];
    let mut frontier = vec![Path::trivial(v)];
    let mut len = 0;
    while !frontier.is_empty() {
        if len >= cap {
            return Err(Some(cap));
        }
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.out_arrows(p.target) {
                let ext = p.then(&Path::arrow(q, a)).expect("composable");
                if ideal.kills_suffix(&ext) {
                    continue;
                }
                if has_repeated_window(&ext, window) {
                    return Err(None);
                }
                next.push(ext);
            }
        }
        len += 1;
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// A repeated state of the suffix automaton means the path can be pumped.
fn has_repeated_window(p: &Path, window: usize) -> bool {
    if p.len() <= window {
        return false;
    }
    let mut seen = HashSet::new();
    p.arrows.windows(window).any(|w| !seen.insert(w))
}

/// Minimal bounds `l_v`: every path of length `>= l_v` starting or ending at
/// `v` lies in the ideal. `Ok(None)` when no such bounds exist.
pub fn is_admissible(q: &Quiver, ideal: &MonomialIdeal, cap: usize) -> Result<Option<Vec<usize>>> {
    let mut longest = vec![0usize; q.num_vertices()];
    for v in 0..q.num_vertices() {
        match surviving_from(q, ideal, v, cap) {
            Ok(paths) => {
                for p in paths {
                    longest[p.source] = longest[p.source].max(p.len());
                    longest[p.target] = longest[p.target].max(p.len());
                }
            }
            Err(None) => return Ok(None),
            Err(Some(cap)) => return Err(Error::AdmissibilityCapExceeded { cap }),
        }
    }
    Ok(Some(longest.into_iter().map(|l| l + 1).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuiver {
    quiver: Quiver,
    ideal: MonomialIdeal,
    bounds: Vec<usize>,
    /// Surviving paths by source vertex, canonical order.
    paths_from: Vec<Vec<Path>>,
}

impl BoundQuiver {
    pub fn new(quiver: Quiver, ideal: MonomialIdeal) -> Result<Self> {
        Self::with_cap(quiver, ideal, DEFAULT_ADMISSIBILITY_CAP)
    }

    pub fn with_cap(quiver: Quiver, ideal: MonomialIdeal, cap: usize) -> Result<Self> {
        let bounds = is_admissible(&quiver, &ideal, cap)?.ok_or_else(|| {
            Error::NotAdmissible("paths of unbounded length avoid the ideal".into())
        })?;
        let paths_from = (0..quiver.num_vertices())
            .map(|v| {
                let mut ps = surviving_from(&quiver, &ideal, v, cap).expect("admissible");
                ps.sort_by(|a, b| a.canonical_cmp(b, &quiver));
                ps
            })
            .collect();
        Ok(BoundQuiver {
            quiver,
            ideal,
            bounds,
            paths_from,
        })
    }

    /// The path algebra of `Q` with no relations; requires `Q` acyclic.
    pub fn free(quiver: Quiver) -> Result<Self> {
        Self::new(quiver, MonomialIdeal::empty())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }
    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// Surviving paths with source `v`, canonical order.
    pub fn paths_from(&self, v: usize) -> &[Path] {
        &self.paths_from[v]
    }

    /// Surviving paths `v -> w`, canonical order.
    pub fn paths(&self, v: usize, w: usize) -> Vec<Path> {
        self.paths_from[v]
            .iter()
            .filter(|p| p.target == w)
            .cloned()
            .collect()
    }

    pub fn enumerate_paths(&self, v: &str, w: &str) -> Result<Vec<Path>> {
        let (v, w) = (self.quiver.vertex(v)?, self.quiver.vertex(w)?);
        Ok(self.paths(v, w))
    }

    /// `p` survives the ideal.
    pub fn survives(&self, p: &Path) -> bool {
        !self.ideal.kills(p)
    }

    pub fn opposite(&self) -> BoundQuiver {
        let qop = self.quiver.opposite();
        let gens: Vec<Path> = self.ideal.generators.iter().map(Path::opposite).collect();
        let ideal = MonomialIdeal::new(&qop, gens).expect("lengths preserved");
        BoundQuiver::new(qop, ideal).expect("opposite of an admissible ideal is admissible")
    }

    pub fn left_path_space(&self, v: usize) -> LeftPathSpace {
        let paths = self.paths_from[v].clone();
        let index: HashMap<Vec<usize>, usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.arrows.clone(), i))
            .collect();
        let names: Vec<String> = paths.iter().map(|p| p.display(&self.quiver)).collect();
        let mut arrows = Vec::new();
        let mut steps = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            for a in self.quiver.out_arrows(p.target) {
                let ext = p.then(&Path::arrow(&self.quiver, a)).expect("composable");
                if let Some(&j) = index.get(&ext.arrows) {
                    arrows.push((
                        format!("({},{})", names[i], names[j]),
                        names[i].clone(),
                        names[j].clone(),
                    ));
                    steps.push(PathStep {
                        from: i,
                        to: j,
                        arrow: a,
                    });
                }
            }
        }
        let quiver = Quiver::new(&names, &arrows).expect("path names are distinct");
        LeftPathSpace {
            vertex: v,
            quiver,
            paths,
            steps,
        }
    }
}

/// Arrow `(p, ap)` of the left path space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub from: usize,
    pub to: usize,
    pub arrow: usize,
}

/// The left path space at a vertex: a tree whose vertices are the surviving
/// paths starting there.
#[derive(Debug, Clone)]
pub struct LeftPathSpace {
    pub vertex: usize,
    pub quiver: Quiver,
    pub paths: Vec<Path>,
    /// Parallel to `quiver.arrows()`.
    pub steps: Vec<PathStep>,
}

impl fmt::Display for BoundQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.quiver;
        write!(f, "vertices {{{}}}", q.vertices.join(", "))?;
        for a in &q.arrows {
            write!(
                f,
                "; {}: {} -> {}",
                a.id, q.vertices[a.src], q.vertices[a.tgt]
            )?;
        }
        if !self.ideal.generators.is_empty() {
            let gens: Vec<String> = self.ideal.generators.iter().map(|g| g.display(q)).collect();
            write!(f, "; relations {}", gens.join(", "))?;
        }
        Ok(())
    }
}
