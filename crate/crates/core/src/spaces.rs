//! Built-in inverse systems.
//!
//! Each generator produces a fully validated [`InverseSystem`]; the
//! construction goes through the same assembler as file loading, so a
//! generator bug surfaces as a validation error rather than a corrupt
//! system. All generators are deterministic.

use crate::error::{Error, Result};
use crate::graph::{ImageSpec, InverseSystem, LevelSpec, MapSpec, VertexId};
use crate::word::Word;

/// Resolves a CLI-facing space name.
pub fn by_name(name: &str, depth: u32, subdiv: u32) -> Result<InverseSystem> {
    match name {
        "interval" => interval(depth, subdiv),
        "hawaiian" => hawaiian(depth),
        "ladder" => ladder(depth),
        "fig2" | "figure2" => figure2_fixture(),
        other => Err(Error::Precondition(format!(
            "unknown built-in space `{other}` (expected interval, hawaiian, ladder or fig2)"
        ))),
    }
}

/// The unit interval as a tower of path graphs: level `n` is a path with
/// `d^(n-1)` edges and the bonding maps are the subdivision identifications.
/// The basepoint is the left endpoint.
pub fn interval(depth: u32, subdiv: u32) -> Result<InverseSystem> {
    if depth < 2 {
        return Err(Error::Precondition("interval needs depth >= 2".to_string()));
    }
    if subdiv < 2 {
        return Err(Error::Precondition(
            "interval needs a subdivision factor >= 2".to_string(),
        ));
    }
    let mut levels = Vec::new();
    let mut maps = Vec::new();
    let mut segments: u64 = 1;
    for n in 1..=depth {
        let vertices: Vec<String> = (0..=segments).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = (0..segments)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        levels.push(LevelSpec {
            index: n,
            vertices,
            edges,
            subdiv,
            basepoint: "v0".to_string(),
        });
        if n < depth {
            let next_segments = segments * u64::from(subdiv);
            let mut images = Vec::new();
            for i in 0..=next_segments {
                let q = i / u64::from(subdiv);
                let r = (i % u64::from(subdiv)) as u32;
                let spec = if r == 0 {
                    ImageSpec::Original(format!("v{q}"))
                } else {
                    ImageSpec::Interior {
                        from: format!("v{q}"),
                        to: format!("v{}", q + 1),
                        index: r,
                    }
                };
                images.push((format!("v{i}"), spec));
            }
            maps.push(MapSpec { target: n, images });
            segments = next_segments;
        }
    }
    InverseSystem::assemble("interval", levels, maps)
}

/// Cycle length of petal `j` at level `n` (`1 <= j <= n`): petals are born
/// as 4-cycles and double with each level.
fn petal_len(n: u32, j: u32) -> u64 {
    1u64 << (n - j + 2)
}

/// A shrinking wedge of circles: level `n` carries `n` petal cycles sharing
/// the basepoint `o`. Every petal doubles from one level to the next and
/// maps around its subdivided predecessor; the newborn petal folds onto the
/// first edge of petal 1, out to its far endpoint and back.
pub fn hawaiian(depth: u32) -> Result<InverseSystem> {
    if depth < 2 {
        return Err(Error::Precondition("hawaiian needs depth >= 2".to_string()));
    }
    let petal_vertex = |j: u32, i: u64| -> String {
        if i == 0 {
            "o".to_string()
        } else {
            format!("p{j}_{i}")
        }
    };
    let mut levels = Vec::new();
    let mut maps = Vec::new();
    for n in 1..=depth {
        let mut vertices = vec!["o".to_string()];
        let mut edges = Vec::new();
        for j in 1..=n {
            let len = petal_len(n, j);
            for i in 1..len {
                vertices.push(petal_vertex(j, i));
            }
            for i in 0..len {
                edges.push((petal_vertex(j, i), petal_vertex(j, (i + 1) % len)));
            }
        }
        levels.push(LevelSpec {
            index: n,
            vertices,
            edges,
            subdiv: 2,
            basepoint: "o".to_string(),
        });
        if n < depth {
            let mut images = vec![("o".to_string(), ImageSpec::Original("o".to_string()))];
            for j in 1..=n {
                let len = petal_len(n, j);
                for i in 1..2 * len {
                    let spec = if i % 2 == 0 {
                        ImageSpec::Original(petal_vertex(j, i / 2))
                    } else {
                        // The position above the basepoint wraps around.
                        ImageSpec::Interior {
                            from: petal_vertex(j, (i - 1) / 2),
                            to: petal_vertex(j, i.div_ceil(2) % len),
                            index: 1,
                        }
                    };
                    images.push((petal_vertex(j, i), spec));
                }
            }
            // Newborn petal: a 4-cycle folded over the edge {o, p1_1}.
            let fold = |index: u32| ImageSpec::Interior {
                from: "o".to_string(),
                to: "p1_1".to_string(),
                index,
            };
            images.push((petal_vertex(n + 1, 1), fold(1)));
            images.push((
                petal_vertex(n + 1, 2),
                ImageSpec::Original("p1_1".to_string()),
            ));
            images.push((petal_vertex(n + 1, 3), fold(1)));
            maps.push(MapSpec { target: n, images });
        }
    }
    InverseSystem::assemble("hawaiian", levels, maps)
}

/// The returning word tracing petal `j` once around at level `n`.
pub fn hawaiian_petal_loop(sys: &InverseSystem, n: u32, j: u32) -> Result<Word> {
    let level = sys.try_level(n)?;
    if j == 0 || j > n {
        return Err(Error::Precondition(format!(
            "level {n} has petals 1..={n}, asked for {j}"
        )));
    }
    let len = petal_len(n, j);
    let mut letters = Vec::with_capacity(len as usize + 1);
    let fetch = |name: String| {
        level
            .vertex(&name)
            .ok_or(Error::UnknownVertex { level: n, name })
    };
    letters.push(fetch("o".to_string())?);
    for i in 1..len {
        letters.push(fetch(format!("p{j}_{i}"))?);
    }
    letters.push(fetch("o".to_string())?);
    Word::checked(sys, n, letters, None)
}

/// Rail height of the ladder at level `n`.
fn rail_height(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// Length (in edges) of rung `j` at level `n`.
fn rung_len(n: u32, j: u32) -> u64 {
    1u64 << (n - j + 1)
}

/// Height at which rung `j` joins the rails at level `n`.
fn rung_pos(n: u32, j: u32) -> u64 {
    (1u64 << n) - (1u64 << (n - j + 1))
}

/// A compactified infinite ladder. Level `n` has two rails of height
/// `2^n - 1` from the ends `a` and `c` up to a shared junction `m`, a single
/// edge from `m` to the limit vertex `t`, and `n` rungs between the rails at
/// heights accumulating below the junction. Rails and rungs double with each
/// level; the junction slides into the old top edge and the newborn rung
/// folds over it, so the top region of any fixed level is eventually
/// traversed only through interior points.
pub fn ladder(depth: u32) -> Result<InverseSystem> {
    if depth < 2 {
        return Err(Error::Precondition("ladder needs depth >= 2".to_string()));
    }
    let rail = |side: char, n: u32, pos: u64| -> String {
        let h = rail_height(n);
        if pos == h {
            "m".to_string()
        } else if pos == 0 {
            if side == 'p' {
                "a".to_string()
            } else {
                "c".to_string()
            }
        } else {
            format!("{side}{pos}")
        }
    };
    let rung = |n: u32, j: u32, s: u64| -> String {
        let len = rung_len(n, j);
        if s == 0 {
            rail('p', n, rung_pos(n, j))
        } else if s == len {
            rail('q', n, rung_pos(n, j))
        } else {
            format!("r{j}_{s}")
        }
    };

    let mut levels = Vec::new();
    let mut maps = Vec::new();
    for n in 1..=depth {
        let h = rail_height(n);
        let mut vertices = vec![
            "a".to_string(),
            "c".to_string(),
            "m".to_string(),
            "t".to_string(),
        ];
        let mut edges = vec![("m".to_string(), "t".to_string())];
        for side in ['p', 'q'] {
            for pos in 1..h {
                vertices.push(rail(side, n, pos));
            }
            for pos in 0..h {
                edges.push((rail(side, n, pos), rail(side, n, pos + 1)));
            }
        }
        for j in 1..=n {
            let len = rung_len(n, j);
            for s in 1..len {
                vertices.push(rung(n, j, s));
            }
            for s in 0..len {
                edges.push((rung(n, j, s), rung(n, j, s + 1)));
            }
        }
        levels.push(LevelSpec {
            index: n,
            vertices,
            edges,
            subdiv: 2,
            basepoint: "a".to_string(),
        });

        if n < depth {
            let mut images = Vec::new();
            let top_interior = || ImageSpec::Interior {
                from: "m".to_string(),
                to: "t".to_string(),
                index: 1,
            };
            // Rails: position i of level n + 1 lies at position i of the
            // subdivided rail; the new junction (odd top position) lands on
            // the midpoint of the old top edge.
            for side in ['p', 'q'] {
                for i in 0..=rail_height(n + 1) {
                    let name = rail(side, n + 1, i);
                    if side == 'q' && name == "m" {
                        continue;
                    }
                    let spec = if i == rail_height(n + 1) {
                        top_interior()
                    } else if i % 2 == 0 {
                        ImageSpec::Original(rail(side, n, i / 2))
                    } else {
                        ImageSpec::Interior {
                            from: rail(side, n, (i - 1) / 2),
                            to: rail(side, n, i.div_ceil(2)),
                            index: 1,
                        }
                    };
                    images.push((name, spec));
                }
            }
            images.push(("t".to_string(), ImageSpec::Original("t".to_string())));
            for j in 1..=n {
                for s in 1..rung_len(n + 1, j) {
                    let spec = if s % 2 == 0 {
                        ImageSpec::Original(rung(n, j, s / 2))
                    } else {
                        ImageSpec::Interior {
                            from: rung(n, j, (s - 1) / 2),
                            to: rung(n, j, s.div_ceil(2)),
                            index: 1,
                        }
                    };
                    images.push((rung(n + 1, j, s), spec));
                }
            }
            // Newborn rung: both edges fold over the lower half of the old
            // top edge.
            images.push((rung(n + 1, n + 1, 1), top_interior()));
            maps.push(MapSpec { target: n, images });
        }
    }
    InverseSystem::assemble("ladder", levels, maps)
}

/// The walk along the arc from `a` over the limit vertex to `c` at level
/// `n`: up the first rail, through the top vertex, down the second rail.
pub fn ladder_arc_walk(sys: &InverseSystem, n: u32) -> Result<Vec<VertexId>> {
    let level = sys.try_level(n)?;
    let fetch = |name: String| {
        level
            .vertex(&name)
            .ok_or(Error::UnknownVertex { level: n, name })
    };
    let h = rail_height(n);
    let mut walk = vec![fetch("a".to_string())?];
    for pos in 1..h {
        walk.push(fetch(format!("p{pos}"))?);
    }
    walk.push(fetch("m".to_string())?);
    walk.push(fetch("t".to_string())?);
    walk.push(fetch("m".to_string())?);
    for pos in (1..h).rev() {
        walk.push(fetch(format!("q{pos}"))?);
    }
    walk.push(fetch("c".to_string())?);
    Ok(walk)
}

/// A fixed two-level system with a path `A - B - C` below (subdivided in
/// thirds) and a 14-vertex graph above whose projections exercise every
/// branch of the word projection: deleted letters, compression, slashed
/// endings, and a vertex (`C`) whose preimage splits into two essentially
/// different classes.
pub fn figure2_fixture() -> Result<InverseSystem> {
    let level1 = LevelSpec {
        index: 1,
        vertices: ["A", "B", "C"].iter().map(|s| s.to_string()).collect(),
        edges: vec![
            ("A".to_string(), "B".to_string()),
            ("B".to_string(), "C".to_string()),
        ],
        subdiv: 3,
        basepoint: "A".to_string(),
    };
    let vertices2 = [
        "D", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N", "O", "P", "U", "W", "Z", "S1", "S2",
        "S3",
    ];
    let edges2 = [
        ("D", "E"),
        ("E", "G"),
        ("G", "H"),
        ("H", "K"),
        ("K", "L"),
        ("L", "N"),
        ("N", "P"),
        ("P", "O"),
        ("O", "M"),
        ("M", "J"),
        ("J", "I"),
        ("I", "G"),
        ("G", "F"),
        ("U", "Z"),
        ("Z", "W"),
        ("U", "S1"),
        ("S1", "S2"),
        ("S2", "S3"),
        ("S3", "K"),
    ];
    let level2 = LevelSpec {
        index: 2,
        vertices: vertices2.iter().map(|s| s.to_string()).collect(),
        edges: edges2
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        subdiv: 2,
        basepoint: "D".to_string(),
    };
    let orig = |v: &str| ImageSpec::Original(v.to_string());
    let interior = |a: &str, b: &str, i: u32| ImageSpec::Interior {
        from: a.to_string(),
        to: b.to_string(),
        index: i,
    };
    let images = vec![
        ("D", orig("A")),
        ("E", interior("A", "B", 1)),
        ("F", interior("A", "B", 1)),
        ("G", interior("A", "B", 2)),
        ("H", orig("B")),
        ("I", orig("B")),
        ("J", interior("B", "C", 1)),
        ("K", interior("B", "C", 1)),
        ("L", interior("B", "C", 2)),
        ("M", interior("B", "C", 2)),
        ("N", orig("C")),
        ("O", orig("C")),
        ("P", interior("B", "C", 2)),
        ("U", orig("C")),
        ("W", orig("C")),
        ("Z", interior("B", "C", 2)),
        ("S1", interior("B", "C", 2)),
        ("S2", interior("B", "C", 1)),
        ("S3", orig("B")),
    ];
    let map = MapSpec {
        target: 1,
        images: images
            .into_iter()
            .map(|(v, s)| (v.to_string(), s))
            .collect(),
    };
    InverseSystem::assemble("fig2", vec![level1, level2], vec![map])
}

/// The plain word walking the whole interval path at level `n`.
pub fn interval_full_path(sys: &InverseSystem, n: u32) -> Result<Word> {
    let level = sys.try_level(n)?;
    let letters: Vec<VertexId> = level.vertices().collect();
    // Interval vertices are declared in path order, so this is the path.
    Word::checked(sys, n, letters, None)
}
