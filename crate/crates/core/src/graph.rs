//! Finite approximating graphs, their subdivisions and the bonding maps
//! between consecutive levels.
//!
//! A system holds levels `1..=N`. Level `n` is a finite connected simple
//! graph with a subdivision factor `d_n >= 2` and a basepoint. The bonding
//! map of level `n` sends every vertex of level `n + 1` to a point of the
//! subdivided level-`n` graph (an original vertex, or an interior point of
//! an edge) and must carry every edge of level `n + 1` onto a single
//! subdivided edge. Every subdivided edge of level `n` must be covered and
//! the basepoints must correspond. All of this is checked on construction;
//! a fully built [`InverseSystem`] is immutable and can be shared freely.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result, Violation};

pub type VertexId = u32;
pub type EdgeId = u32;

/// A point of the subdivided graph of some level: either one of the level's
/// own vertices or the `index`-th interior subdivision point of an edge,
/// counted from the canonical (name-lexicographic) first endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubdividedVertex {
    Original(VertexId),
    Interior { edge: EdgeId, index: u32 },
}

impl SubdividedVertex {
    pub fn is_original(&self) -> bool {
        matches!(self, SubdividedVertex::Original(_))
    }

    pub fn as_original(&self) -> Option<VertexId> {
        match self {
            SubdividedVertex::Original(v) => Some(*v),
            SubdividedVertex::Interior { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphLevel {
    index: u32,
    names: Vec<String>,
    by_name: HashMap<String, VertexId>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    edge_ids: HashMap<(VertexId, VertexId), EdgeId>,
    subdiv: u32,
    basepoint: VertexId,
}

impl GraphLevel {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn subdiv(&self) -> u32 {
        self.subdiv
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.names.len() as VertexId
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e as usize]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_ids.get(&self.orient(u, v)).copied()
    }

    /// Canonical orientation: endpoints ordered lexicographically by name.
    fn orient(&self, u: VertexId, v: VertexId) -> (VertexId, VertexId) {
        if self.names[u as usize] <= self.names[v as usize] {
            (u, v)
        } else {
            (v, u)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BondingMap {
    /// Image of each vertex of the source level (level `target + 1`),
    /// expressed in the subdivided target level.
    images: Vec<SubdividedVertex>,
}

impl BondingMap {
    pub fn image(&self, v: VertexId) -> SubdividedVertex {
        self.images[v as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSystem {
    name: String,
    levels: Vec<GraphLevel>,
    maps: Vec<BondingMap>,
}

/// Raw, not-yet-validated description of one level. Produced by the parser
/// and by the built-in space generators.
#[derive(Debug, Clone)]
pub struct LevelSpec {
    pub index: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub subdiv: u32,
    pub basepoint: String,
}

/// Raw image of one vertex under a bonding map.
#[derive(Debug, Clone)]
pub enum ImageSpec {
    Original(String),
    Interior {
        from: String,
        to: String,
        index: u32,
    },
}

#[derive(Debug, Clone)]
pub struct MapSpec {
    /// Target level `n`; the map sends vertices of level `n + 1` into the
    /// subdivided level `n`.
    pub target: u32,
    pub images: Vec<(String, ImageSpec)>,
}

impl InverseSystem {
    /// Assembles and fully validates a system from raw level and map
    /// descriptions. Every violation found is reported; nothing is checked
    /// lazily afterwards.
    pub fn assemble(name: &str, levels: Vec<LevelSpec>, maps: Vec<MapSpec>) -> Result<Self> {
        let mut violations = Vec::new();

        let mut specs = levels;
        specs.sort_by_key(|s| s.index);
        for (i, spec) in specs.iter().enumerate() {
            if spec.index != i as u32 + 1 {
                violations.push(Violation {
                    level: spec.index,
                    message: format!(
                        "level indices must be consecutive starting at 1, found {} in position {}",
                        spec.index,
                        i + 1
                    ),
                });
            }
        }
        if specs.len() < 2 {
            violations.push(Violation {
                level: specs.len() as u32,
                message: "a system needs depth at least 2".to_string(),
            });
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }

        let mut built = Vec::with_capacity(specs.len());
        for spec in &specs {
            match build_level(spec, &mut violations) {
                Some(level) => built.push(level),
                None => return Err(Error::Invalid(violations)),
            }
        }

        let mut map_specs = maps;
        map_specs.sort_by_key(|m| m.target);
        let expected: Vec<u32> = (1..specs.len() as u32).collect();
        let found: Vec<u32> = map_specs.iter().map(|m| m.target).collect();
        if found != expected {
            violations.push(Violation {
                level: 0,
                message: format!("bonding maps must target levels {expected:?}, found {found:?}"),
            });
            return Err(Error::Invalid(violations));
        }

        let mut built_maps = Vec::with_capacity(map_specs.len());
        for spec in &map_specs {
            let target = &built[spec.target as usize - 1];
            let source = &built[spec.target as usize];
            if let Some(map) = build_map(spec, source, target, &mut violations) {
                built_maps.push(map);
            }
        }
        if built_maps.len() < map_specs.len() {
            // Some map is unusable; report what was found so far.
            return Err(Error::Invalid(violations));
        }

        let system = InverseSystem {
            name: name.to_string(),
            levels: built,
            maps: built_maps,
        };
        system.validate_maps(&mut violations);
        if violations.is_empty() {
            Ok(system)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of levels `N`.
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, n: u32) -> &GraphLevel {
        &self.levels[n as usize - 1]
    }

    pub fn try_level(&self, n: u32) -> Result<&GraphLevel> {
        if n == 0 || n > self.depth() {
            Err(Error::UnknownLevel {
                level: n,
                depth: self.depth(),
            })
        } else {
            Ok(self.level(n))
        }
    }

    /// Bonding map with target level `n` (source level `n + 1`).
    pub fn map_to(&self, n: u32) -> &BondingMap {
        &self.maps[n as usize - 1]
    }

    /// Image of a vertex of level `from` in the subdivided level `from - 1`.
    pub fn image(&self, from: u32, v: VertexId) -> SubdividedVertex {
        self.map_to(from - 1).image(v)
    }

    /// Iterated image of a level-`k` vertex at level `n < k`, when it stays
    /// on original vertices the whole way down; `None` as soon as it lands
    /// in the interior of an edge.
    pub fn composed_original_image(&self, k: u32, v: VertexId, n: u32) -> Option<VertexId> {
        let mut current = v;
        for from in (n + 1..=k).rev() {
            match self.image(from, current) {
                SubdividedVertex::Original(w) => current = w,
                SubdividedVertex::Interior { .. } => return None,
            }
        }
        Some(current)
    }

    /// All neighbors of `v` in the level-`n` graph.
    pub fn star_neighbors(&self, n: u32, v: VertexId) -> Result<Vec<VertexId>> {
        let level = self.try_level(n)?;
        if v as usize >= level.vertex_count() {
            return Err(Error::UnknownVertex {
                level: n,
                name: format!("#{v}"),
            });
        }
        Ok(level.neighbors(v).to_vec())
    }

    pub fn star_neighbors_by_name(&self, n: u32, name: &str) -> Result<Vec<String>> {
        let level = self.try_level(n)?;
        let v = level.vertex(name).ok_or_else(|| Error::UnknownVertex {
            level: n,
            name: name.to_string(),
        })?;
        Ok(level
            .neighbors(v)
            .iter()
            .map(|&u| level.name(u).to_string())
            .collect())
    }

    fn validate_maps(&self, violations: &mut Vec<Violation>) {
        for n in 1..self.depth() {
            let target = self.level(n);
            let source = self.level(n + 1);
            let map = self.map_to(n);
            let d = target.subdiv;

            // covered[e][i] records that the subdivided segment (e, i) is the
            // image of some source edge.
            let mut covered = vec![vec![false; d as usize]; target.edge_count()];

            for &(a, b) in &source.edges {
                match segment_of(target, map.image(a), map.image(b), d) {
                    Some((e, seg)) => covered[e as usize][seg as usize] = true,
                    None => violations.push(Violation {
                        level: n + 1,
                        message: format!(
                            "edge {{{},{}}} does not map onto a single subdivided edge of level {}",
                            source.name(a),
                            source.name(b),
                            n
                        ),
                    }),
                }
            }

            for (e, segs) in covered.iter().enumerate() {
                for (i, seen) in segs.iter().enumerate() {
                    if !seen {
                        let (u, v) = target.edge(e as EdgeId);
                        violations.push(Violation {
                            level: n,
                            message: format!(
                                "subdivided segment {} of edge {{{},{}}} is not covered by any \
                                 edge of level {}",
                                i,
                                target.name(u),
                                target.name(v),
                                n + 1
                            ),
                        });
                    }
                }
            }

            let base_image = map.image(source.basepoint);
            if base_image != SubdividedVertex::Original(target.basepoint) {
                violations.push(Violation {
                    level: n + 1,
                    message: format!(
                        "basepoint `{}` must map to the level-{} basepoint `{}`",
                        source.name(source.basepoint),
                        n,
                        target.name(target.basepoint)
                    ),
                });
            }
        }
    }

    /// Writes the system back in the line-oriented definition format.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system {}", self.name);
        for level in &self.levels {
            let _ = writeln!(out, "level {}", level.index);
            let _ = writeln!(out, "vertices {}", level.names.join(" "));
            let rendered: Vec<String> = level
                .edges
                .iter()
                .map(|&(u, v)| format!("{}-{}", level.name(u), level.name(v)))
                .collect();
            let _ = writeln!(out, "edges {}", rendered.join(" "));
            let _ = writeln!(out, "subdiv {}", level.subdiv);
            let _ = writeln!(out, "basepoint {}", level.name(level.basepoint));
        }
        for (i, map) in self.maps.iter().enumerate() {
            let target = &self.levels[i];
            let source = &self.levels[i + 1];
            let _ = writeln!(out, "map {}", target.index);
            for v in source.vertices() {
                match map.image(v) {
                    SubdividedVertex::Original(w) => {
                        let _ = writeln!(out, "{} -> {}", source.name(v), target.name(w));
                    }
                    SubdividedVertex::Interior { edge, index } => {
                        let (u, w) = target.edge(edge);
                        let _ = writeln!(
                            out,
                            "{} -> {}-{}:{}",
                            source.name(v),
                            target.name(u),
                            target.name(w),
                            index
                        );
                    }
                }
            }
        }
        out
    }

    /// Parses and validates a system-definition document.
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text)
    }
}

fn build_level(spec: &LevelSpec, violations: &mut Vec<Violation>) -> Option<GraphLevel> {
    let n = spec.index;
    let mut names = Vec::new();
    let mut by_name = HashMap::new();
    for name in &spec.vertices {
        if by_name.contains_key(name) {
            violations.push(Violation {
                level: n,
                message: format!("vertex `{name}` declared twice"),
            });
            continue;
        }
        by_name.insert(name.clone(), names.len() as VertexId);
        names.push(name.clone());
    }
    if names.is_empty() {
        violations.push(Violation {
            level: n,
            message: "level has no vertices".to_string(),
        });
        return None;
    }

    let mut adjacency = vec![Vec::new(); names.len()];
    let mut edges = Vec::new();
    let mut edge_ids = HashMap::new();
    for (a, b) in &spec.edges {
        let (Some(&u), Some(&v)) = (by_name.get(a), by_name.get(b)) else {
            violations.push(Violation {
                level: n,
                message: format!("edge {{{a},{b}}} references an undeclared vertex"),
            });
            continue;
        };
        if u == v {
            violations.push(Violation {
                level: n,
                message: format!("looping edge at `{a}`"),
            });
            continue;
        }
        let key = if names[u as usize] <= names[v as usize] {
            (u, v)
        } else {
            (v, u)
        };
        if edge_ids.contains_key(&key) {
            violations.push(Violation {
                level: n,
                message: format!("edge {{{a},{b}}} declared twice"),
            });
            continue;
        }
        edge_ids.insert(key, edges.len() as EdgeId);
        edges.push(key);
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    if spec.subdiv < 2 {
        violations.push(Violation {
            level: n,
            message: format!(
                "subdivision factor must be at least 2, found {}",
                spec.subdiv
            ),
        });
    }

    let basepoint = match by_name.get(&spec.basepoint) {
        Some(&v) => v,
        None => {
            violations.push(Violation {
                level: n,
                message: format!(
                    "basepoint `{}` is not a vertex of the level",
                    spec.basepoint
                ),
            });
            0
        }
    };

    // Connectivity by breadth-first search from vertex 0.
    let mut seen = vec![false; names.len()];
    let mut queue = VecDeque::from([0 as VertexId]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &adjacency[v as usize] {
            if !seen[u as usize] {
                seen[u as usize] = true;
                queue.push_back(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        violations.push(Violation {
            level: n,
            message: "graph is not connected".to_string(),
        });
    }

    Some(GraphLevel {
        index: n,
        names,
        by_name,
        adjacency,
        edges,
        edge_ids,
        subdiv: spec.subdiv,
        basepoint,
    })
}

fn build_map(
    spec: &MapSpec,
    source: &GraphLevel,
    target: &GraphLevel,
    violations: &mut Vec<Violation>,
) -> Option<BondingMap> {
    let n = spec.target;
    let mut images: Vec<Option<SubdividedVertex>> = vec![None; source.vertex_count()];
    for (name, image) in &spec.images {
        let Some(v) = source.vertex(name) else {
            violations.push(Violation {
                level: n + 1,
                message: format!("map assigns an image to unknown vertex `{name}`"),
            });
            continue;
        };
        if images[v as usize].is_some() {
            violations.push(Violation {
                level: n + 1,
                message: format!("vertex `{name}` has two images"),
            });
            continue;
        }
        let resolved = match image {
            ImageSpec::Original(w) => match target.vertex(w) {
                Some(w) => SubdividedVertex::Original(w),
                None => {
                    violations.push(Violation {
                        level: n,
                        message: format!("image `{w}` is not a vertex of level {n}"),
                    });
                    continue;
                }
            },
            ImageSpec::Interior { from, to, index } => {
                let (Some(u), Some(w)) = (target.vertex(from), target.vertex(to)) else {
                    violations.push(Violation {
                        level: n,
                        message: format!("interior point on unknown edge {{{from},{to}}}"),
                    });
                    continue;
                };
                let Some(edge) = target.edge_between(u, w) else {
                    violations.push(Violation {
                        level: n,
                        message: format!("interior point on non-edge {{{from},{to}}}"),
                    });
                    continue;
                };
                if *index == 0 || *index >= target.subdiv {
                    violations.push(Violation {
                        level: n,
                        message: format!(
                            "interior index {} out of range 1..={} on edge {{{from},{to}}}",
                            index,
                            target.subdiv - 1
                        ),
                    });
                    continue;
                }
                // Normalize: indices are stored from the canonical first
                // endpoint, so reverse-oriented input is flipped.
                let (canon_u, _) = target.edge(edge);
                let index = if canon_u == u {
                    *index
                } else {
                    target.subdiv - *index
                };
                SubdividedVertex::Interior { edge, index }
            }
        };
        images[v as usize] = Some(resolved);
    }

    let mut complete = Vec::with_capacity(images.len());
    for (v, image) in images.into_iter().enumerate() {
        match image {
            Some(img) => complete.push(img),
            None => {
                violations.push(Violation {
                    level: n + 1,
                    message: format!("vertex `{}` has no image", source.name(v as VertexId)),
                });
                return None;
            }
        }
    }
    Some(BondingMap { images: complete })
}

/// Position of a subdivided point along a canonical edge: endpoint `u` of the
/// canonical pair `(u, v)` sits at 0, interior index `i` at `i`, and `v` at
/// `d`. Two images span a subdivided segment exactly when they live on the
/// same edge at distance one; the segment index is the smaller position.
fn segment_of(
    target: &GraphLevel,
    a: SubdividedVertex,
    b: SubdividedVertex,
    d: u32,
) -> Option<(EdgeId, u32)> {
    let positions = |orig: VertexId, e: EdgeId| -> Option<u32> {
        let (u, v) = target.edge(e);
        if orig == u {
            Some(0)
        } else if orig == v {
            Some(d)
        } else {
            None
        }
    };
    let (edge, pa, pb) = match (a, b) {
        (SubdividedVertex::Original(_), SubdividedVertex::Original(_)) => return None,
        (SubdividedVertex::Original(u), SubdividedVertex::Interior { edge, index }) => {
            (edge, positions(u, edge)?, index)
        }
        (SubdividedVertex::Interior { edge, index }, SubdividedVertex::Original(u)) => {
            (edge, index, positions(u, edge)?)
        }
        (
            SubdividedVertex::Interior {
                edge: e1,
                index: i1,
            },
            SubdividedVertex::Interior {
                edge: e2,
                index: i2,
            },
        ) => {
            if e1 != e2 {
                return None;
            }
            (e1, i1, i2)
        }
    };
    if pa.abs_diff(pb) != 1 {
        return None;
    }
    Some((edge, pa.min(pb)))
}

fn valid_identifier(token: &str) -> bool {
    !token.is_empty()
        && token
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

fn parse_document(text: &str) -> Result<InverseSystem> {
    enum Section {
        None,
        Level(usize),
        Map(usize),
    }

    let mut name = None;
    let mut levels: Vec<LevelSpec> = Vec::new();
    let mut maps: Vec<MapSpec> = Vec::new();
    let mut section = Section::None;

    let err = |line: usize, message: String| Error::Parse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        match head {
            "system" => {
                let value = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "expected `system <name>`".to_string()))?;
                name = Some(value.to_string());
            }
            "level" => {
                let n: u32 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line_no, "expected `level <n>`".to_string()))?;
                levels.push(LevelSpec {
                    index: n,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                    subdiv: 0,
                    basepoint: String::new(),
                });
                section = Section::Level(levels.len() - 1);
            }
            "vertices" => {
                let Section::Level(i) = section else {
                    return Err(err(line_no, "`vertices` outside a level block".to_string()));
                };
                for token in tokens {
                    if !valid_identifier(token) {
                        return Err(err(line_no, format!("invalid vertex id `{token}`")));
                    }
                    levels[i].vertices.push(token.to_string());
                }
            }
            "edges" => {
                let Section::Level(i) = section else {
                    return Err(err(line_no, "`edges` outside a level block".to_string()));
                };
                for token in tokens {
                    let Some((a, b)) = token.split_once('-') else {
                        return Err(err(
                            line_no,
                            format!("expected `<id>-<id>`, found `{token}`"),
                        ));
                    };
                    levels[i].edges.push((a.to_string(), b.to_string()));
                }
            }
            "subdiv" => {
                let Section::Level(i) = section else {
                    return Err(err(line_no, "`subdiv` outside a level block".to_string()));
                };
                levels[i].subdiv = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line_no, "expected `subdiv <d>`".to_string()))?;
            }
            "basepoint" => {
                let Section::Level(i) = section else {
                    return Err(err(
                        line_no,
                        "`basepoint` outside a level block".to_string(),
                    ));
                };
                levels[i].basepoint = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "expected `basepoint <id>`".to_string()))?
                    .to_string();
            }
            "map" => {
                let n: u32 = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line_no, "expected `map <n>`".to_string()))?;
                maps.push(MapSpec {
                    target: n,
                    images: Vec::new(),
                });
                section = Section::Map(maps.len() - 1);
            }
            _ => {
                let Section::Map(i) = section else {
                    return Err(err(line_no, format!("unexpected directive `{head}`")));
                };
                // Inside a map block lines read `<id> -> <image>`.
                let arrow = tokens.next();
                let image = tokens.next();
                if arrow != Some("->") || image.is_none() {
                    return Err(err(line_no, "expected `<id> -> <image>`".to_string()));
                }
                let image = image.unwrap();
                let spec = if let Some((pair, index)) = image.split_once(':') {
                    let Some((u, v)) = pair.split_once('-') else {
                        return Err(err(
                            line_no,
                            format!("expected `<u>-<v>:<i>`, found `{image}`"),
                        ));
                    };
                    let index: u32 = index
                        .parse()
                        .map_err(|_| err(line_no, format!("bad interior index in `{image}`")))?;
                    ImageSpec::Interior {
                        from: u.to_string(),
                        to: v.to_string(),
                        index,
                    }
                } else {
                    ImageSpec::Original(image.to_string())
                };
                maps[i].images.push((head.to_string(), spec));
            }
        }
    }

    let name = name.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `system <name>` header".to_string(),
    })?;
    InverseSystem::assemble(&name, levels, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_interval() -> String {
        // Level 1: a-b, halved; level 2: a'-m-b' with m over the midpoint.
        "
system tiny
level 1
vertices a b
edges a-b
subdiv 2
basepoint a
level 2
vertices a2 m b2
edges a2-m m-b2
subdiv 2
basepoint a2
map 1
a2 -> a
m -> a-b:1
b2 -> b
"
        .to_string()
    }

    #[test]
    fn parses_and_validates() {
        let sys = InverseSystem::parse(&tiny_interval()).unwrap();
        assert_eq!(sys.depth(), 2);
        assert_eq!(sys.level(1).vertex_count(), 2);
        assert_eq!(sys.level(2).edge_count(), 2);
        let a = sys.level(1).vertex("a").unwrap();
        let b = sys.level(1).vertex("b").unwrap();
        assert!(sys.level(1).adjacent(a, b));
    }

    #[test]
    fn serialize_round_trip() {
        let sys = InverseSystem::parse(&tiny_interval()).unwrap();
        let reparsed = InverseSystem::parse(&sys.serialize()).unwrap();
        assert_eq!(sys, reparsed);
    }

    #[test]
    fn interior_index_is_normalized() {
        // Same system with the midpoint written from the other endpoint.
        let text = tiny_interval().replace("m -> a-b:1", "m -> b-a:1");
        let sys = InverseSystem::parse(&text).unwrap();
        let m = sys.level(2).vertex("m").unwrap();
        match sys.image(2, m) {
            SubdividedVertex::Interior { index, .. } => assert_eq!(index, 1),
            other => panic!("expected interior image, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_simplicial_edge() {
        // b2 moved onto the midpoint, where m already sits: the edge m-b2
        // collapses to a point instead of spanning a segment.
        let text = tiny_interval().replace("b2 -> b", "b2 -> a-b:1");
        let err = InverseSystem::parse(&text).unwrap_err();
        let Error::Invalid(violations) = err else {
            panic!("expected validation failure");
        };
        assert!(violations.iter().any(|v| v
            .message
            .contains("does not map onto a single subdivided edge")));
    }

    #[test]
    fn rejects_basepoint_incoherence() {
        let text = tiny_interval().replace("basepoint a2", "basepoint b2");
        let err = InverseSystem::parse(&text).unwrap_err();
        let Error::Invalid(violations) = err else {
            panic!("expected validation failure");
        };
        assert!(violations.iter().any(|v| v.message.contains("basepoint")));
    }

    #[test]
    fn rejects_uncovered_segment() {
        // Dropping the m-b2 edge leaves the b-side half of a-b uncovered and
        // disconnects b2; both must be reported.
        let text = tiny_interval().replace("edges a2-m m-b2", "edges a2-m");
        let err = InverseSystem::parse(&text).unwrap_err();
        let Error::Invalid(violations) = err else {
            panic!("expected validation failure");
        };
        assert!(violations.iter().any(|v| v.message.contains("not covered")));
        assert!(violations
            .iter()
            .any(|v| v.message.contains("not connected")));
    }

    #[test]
    fn star_neighbors_reports_unknown_vertex() {
        let sys = InverseSystem::parse(&tiny_interval()).unwrap();
        assert!(matches!(
            sys.star_neighbors_by_name(1, "zz"),
            Err(Error::UnknownVertex { .. })
        ));
        assert_eq!(sys.star_neighbors_by_name(1, "a").unwrap(), vec!["b"]);
    }
}
