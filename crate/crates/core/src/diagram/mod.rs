//! Link diagrams as rotation systems on closed orientable surfaces.
//!
//! A crossing has four slots numbered counterclockwise, starting at the
//! incoming end of the under-strand: slots 0 and 2 carry the under-strand,
//! slots 1 and 3 the over-strand. Slot `k` of crossing `c` has the global
//! index `4 * c + k`. Quadrant `k` of a crossing is the corner between slot
//! `k` and slot `k + 1`.

mod build;
mod classify;
mod parse;
mod rewrite;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{PlaneGraph, PlaneGraphError};
pub use classify::DiagramFlags;
pub use parse::{ParseError, ParseErrorKind};
pub use rewrite::{RewriteOutcome, RewriteStep};
pub use state::{ArcStep, Smoothing, State, StateCircle, StateResolution};

/// Errors raised by diagram queries that need more than a valid diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("faces are not 2-colorable (odd cycle through face {face})")]
    NotColorable { face: usize },
    #[error("diagram is split ({pieces} connected pieces)")]
    Split { pieces: usize },
    #[error("state has {given} labels but the diagram has {expected} crossings")]
    StateLength { given: usize, expected: usize },
    #[error("state string {0:?} is not `allA`, `allB`, or a word in A/B")]
    BadStateString(String),
    #[error("operation requires a genus 0 diagram (genus is {0})")]
    NotPlanar(u32),
    #[error("state rewriting failed: {0}")]
    RewriteFailed(String),
}

/// The two checkerboard colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
        }
    }
}

impl std::str::FromStr for Color {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "black" | "b" | "B" => Ok(Color::Black),
            "white" | "w" | "W" => Ok(Color::White),
            other => Err(format!("unknown color {other:?} (expected black or white)")),
        }
    }
}

/// A quadrant at a crossing: the corner between slot `quadrant` and slot `quadrant + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub crossing: usize,
    pub quadrant: u8,
}

impl Corner {
    pub fn index(self) -> usize {
        4 * self.crossing + self.quadrant as usize
    }
}

/// A face of the diagram as the cyclic list of crossing corners on its boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub corners: Vec<Corner>,
}

/// A validated link diagram with traced faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    labels: Vec<[u32; 4]>,
    partner: Vec<usize>,
    slot_edge: Vec<usize>,
    edges: Vec<[usize; 2]>,
    edge_labels: Vec<u32>,
    faces: Vec<Face>,
    corner_face: Vec<usize>,
    /// For every slot, whether the link orientation enters the crossing there.
    incoming: Vec<bool>,
    genus: u32,
    components: usize,
    pieces: usize,
    crossingless: bool,
}

/// Orientation-consistency or pairing failures found while building a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("edge label {0} is used by more than two slots")]
    SlotUsedTwice(u32),
    #[error("edge label {0} is used by only one slot")]
    UnmatchedSlot(u32),
    #[error("edge label 0 is not allowed; labels are positive")]
    ZeroLabel,
    #[error("under-strand orientation is inconsistent along edge {0}")]
    InconsistentOrientation(u32),
    #[error("Euler characteristic {euler} of a connected piece gives no valid genus")]
    BadGenus { euler: i64 },
    #[error("declared genus {declared} but the rotation system has genus {computed}")]
    GenusMismatch { declared: u32, computed: u32 },
}

impl LinkDiagram {
    /// The crossingless round unknot.
    pub fn unknot() -> LinkDiagram {
        LinkDiagram {
            labels: Vec::new(),
            partner: Vec::new(),
            slot_edge: Vec::new(),
            edges: Vec::new(),
            edge_labels: Vec::new(),
            faces: vec![
                Face {
                    corners: Vec::new(),
                },
                Face {
                    corners: Vec::new(),
                },
            ],
            corner_face: Vec::new(),
            incoming: Vec::new(),
            genus: 0,
            components: 1,
            pieces: 1,
            crossingless: true,
        }
    }

    /// Builds a diagram from PD crossings `[a, b, c, d]`.
    pub fn from_pd(
        crossings: &[[u32; 4]],
        declared_genus: Option<u32>,
    ) -> Result<LinkDiagram, BuildError> {
        let n = crossings.len();
        let mut first: std::collections::BTreeMap<u32, Vec<usize>> =
            std::collections::BTreeMap::new();
        for (c, row) in crossings.iter().enumerate() {
            for (k, &lab) in row.iter().enumerate() {
                if lab == 0 {
                    return Err(BuildError::ZeroLabel);
                }
                let slots = first.entry(lab).or_default();
                slots.push(4 * c + k);
                if slots.len() > 2 {
                    return Err(BuildError::SlotUsedTwice(lab));
                }
            }
        }
        let mut partner = vec![usize::MAX; 4 * n];
        let mut slot_edge = vec![usize::MAX; 4 * n];
        let mut edges = Vec::with_capacity(2 * n);
        let mut edge_labels = Vec::with_capacity(2 * n);
        for (&lab, slots) in &first {
            if slots.len() != 2 {
                return Err(BuildError::UnmatchedSlot(lab));
            }
            let (a, b) = (slots[0], slots[1]);
            partner[a] = b;
            partner[b] = a;
            slot_edge[a] = edges.len();
            slot_edge[b] = edges.len();
            edges.push([a, b]);
            edge_labels.push(lab);
        }

        let (faces, corner_face) = trace_faces_raw(n, &partner);
        let pieces_of = piece_labels(n, &partner);
        let pieces = pieces_of.iter().copied().max().map_or(0, |m| m + 1);

        let mut genus_total = 0u32;
        for p in 0..pieces {
            let v = pieces_of.iter().filter(|&&q| q == p).count() as i64;
            let e = 2 * v;
            let f = faces
                .iter()
                .filter(|face| pieces_of[face.corners[0].crossing] == p)
                .count() as i64;
            let euler = v - e + f;
            if euler > 2 || euler % 2 != 0 {
                return Err(BuildError::BadGenus { euler });
            }
            genus_total += ((2 - euler) / 2) as u32;
        }
        if let Some(g) = declared_genus {
            if g != genus_total {
                return Err(BuildError::GenusMismatch {
                    declared: g,
                    computed: genus_total,
                });
            }
        }

        let (incoming, components) = orient(n, &partner, crossings, &slot_edge, &edge_labels)?;

        Ok(LinkDiagram {
            labels: crossings.to_vec(),
            partner,
            slot_edge,
            edges,
            edge_labels,
            faces,
            corner_face,
            incoming,
            genus: genus_total,
            components,
            pieces,
            crossingless: false,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges; the crossingless unknot counts as one closed edge.
    pub fn edge_count(&self) -> usize {
        if self.crossingless {
            1
        } else {
            self.edges.len()
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Connected pieces of the underlying 4-valent graph.
    pub fn piece_count(&self) -> usize {
        self.pieces
    }

    pub fn is_crossingless(&self) -> bool {
        self.crossingless
    }

    pub fn is_connected(&self) -> bool {
        self.pieces <= 1
    }

    /// Euler characteristic V - E + F of the traced map (the unknot counts as a circle: 0 - 0 + 2).
    pub fn euler_characteristic(&self) -> i64 {
        if self.crossingless {
            return 2;
        }
        self.crossing_count() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// PD labels of crossing `c`.
    pub fn crossing_labels(&self, c: usize) -> [u32; 4] {
        self.labels[c]
    }

    pub fn pd_code(&self) -> &[[u32; 4]] {
        &self.labels
    }

    /// The slot joined to `slot` by an edge.
    pub fn partner(&self, slot: usize) -> usize {
        self.partner[slot]
    }

    pub fn slot_edge(&self, slot: usize) -> usize {
        self.slot_edge[slot]
    }

    /// The two slots of edge `e`.
    pub fn edge_slots(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edge_label(&self, e: usize) -> u32 {
        self.edge_labels[e]
    }

    /// Face containing quadrant `quadrant` of crossing `crossing`.
    pub fn corner_face(&self, crossing: usize, quadrant: usize) -> usize {
        self.corner_face[4 * crossing + (quadrant % 4)]
    }

    /// Faces on the two sides of edge `e`, read at its first slot: the face
    /// clockwise of the slot, then the face counterclockwise of it.
    pub fn edge_sides(&self, e: usize) -> (usize, usize) {
        let s = self.edges[e][0];
        let (c, k) = (s / 4, s % 4);
        (self.corner_face(c, (k + 3) % 4), self.corner_face(c, k))
    }

    /// Whether the link orientation enters crossing `slot / 4` at `slot`.
    pub fn is_incoming(&self, slot: usize) -> bool {
        self.incoming[slot]
    }

    /// Crossing sign under the stored orientation: +1 when the over-strand
    /// passes from right to left over the under-strand (right-handed).
    pub fn crossing_sign(&self, c: usize) -> i32 {
        // Under-strand runs 0 -> 2. Over-strand enters at slot 3 or slot 1.
        if self.incoming[4 * c + 3] {
            1
        } else {
            -1
        }
    }

    /// Proper 2-coloring of the faces with face 0 (and the first face of every
    /// further piece) white.
    pub fn checkerboard_coloring(&self) -> Result<CheckerboardColoring, DiagramError> {
        let f = self.faces.len();
        let mut colors: Vec<Option<Color>> = vec![None; f];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); f];
        if self.crossingless {
            adj[0].push(1);
            adj[1].push(0);
        }
        for e in 0..self.edges.len() {
            let (a, b) = self.edge_sides(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        for start in 0..f {
            if colors[start].is_some() {
                continue;
            }
            colors[start] = Some(Color::White);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colors[u].unwrap();
                for &v in &adj[u] {
                    match colors[v] {
                        None => {
                            colors[v] = Some(cu.opposite());
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return Err(DiagramError::NotColorable { face: v }),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(CheckerboardColoring {
            colors: colors.into_iter().map(|c| c.unwrap()).collect(),
        })
    }

    /// Serializes to the PD text grammar.
    pub fn to_pd_text(&self) -> String {
        if self.crossingless {
            return "U\n".to_string();
        }
        let mut out = String::new();
        if self.genus > 0 {
            out.push_str(&format!("genus {}\n", self.genus));
        }
        for row in &self.labels {
            out.push_str(&format!("X {} {} {} {}\n", row[0], row[1], row[2], row[3]));
        }
        out
    }

    /// Serializes to the JSON mirror schema.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "crossings": self.labels,
            "genus": self.genus,
            "unknot": self.crossingless,
        })
    }

    /// Crossings visited along each link component, as (crossing, slot) pairs
    /// in orientation order; used by orientation-aware constructions.
    pub fn component_slots(&self) -> Vec<Vec<usize>> {
        let n = self.crossing_count();
        let mut seen = vec![false; 4 * n];
        let mut out = Vec::new();
        for start in 0..4 * n {
            if seen[start] || !self.incoming[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut s = start;
            loop {
                seen[s] = true;
                let out_slot = 4 * (s / 4) + (s % 4 + 2) % 4;
                seen[out_slot] = true;
                comp.push(s);
                s = self.partner[out_slot];
                if s == start {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }
}

/// Color per face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerboardColoring {
    pub colors: Vec<Color>,
}

impl CheckerboardColoring {
    pub fn color(&self, face: usize) -> Color {
        self.colors[face]
    }

    pub fn count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// Faces of the given color in increasing index order.
    pub fn faces_of(&self, color: Color) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&f| self.colors[f] == color)
            .collect()
    }

    /// Whether adjacent faces differ along every edge of `d`.
    pub fn is_proper_for(&self, d: &LinkDiagram) -> bool {
        if d.is_crossingless() {
            return self.colors.len() == 2 && self.colors[0] != self.colors[1];
        }
        (0..d.edges.len()).all(|e| {
            let (a, b) = d.edge_sides(e);
            self.colors[a] != self.colors[b]
        })
    }
}

/// Builds a diagram from a bare slot pairing on `partner.len() / 4` crossings
/// whose under-strands occupy slots 0 and 2. Components are oriented starting
/// from slot 0 of their lowest crossing, crossings are turned by half a turn
/// where needed so slot 0 is incoming, and edges are labeled in traversal order.
/// Half turns keep both smoothings and all quadrant colors fixed.
pub(crate) fn assemble(partner: &[usize]) -> Result<LinkDiagram, BuildError> {
    let n = partner.len() / 4;
    let mut rot = vec![0usize; n];
    let mut label = vec![0u32; 4 * n];
    let mut visited = vec![false; 4 * n];
    let mut next_label = 1u32;
    let through = |s: usize| 4 * (s / 4) + (s % 4 + 2) % 4;
    let seeds = (0..n).map(|c| 4 * c).chain((0..n).map(|c| 4 * c + 1));
    for seed in seeds {
        if visited[seed] {
            continue;
        }
        let mut s = seed;
        loop {
            let t = through(s);
            visited[s] = true;
            visited[t] = true;
            if s % 2 == 0 {
                rot[s / 4] = s % 4;
            }
            let arrive = partner[t];
            label[t] = next_label;
            label[arrive] = next_label;
            next_label += 1;
            s = arrive;
            if s == seed {
                break;
            }
        }
    }
    let pd: Vec<[u32; 4]> = (0..n)
        .map(|c| {
            let r = rot[c];
            [0, 1, 2, 3].map(|k| label[4 * c + (k + r) % 4])
        })
        .collect();
    LinkDiagram::from_pd(&pd, None)
}

/// Traces faces of the map whose darts are the slots, with rotation `k -> k + 1`
/// at each crossing and the edge involution `partner`.
fn trace_faces_raw(n: usize, partner: &[usize]) -> (Vec<Face>, Vec<usize>) {
    let mut corner_face = vec![usize::MAX; 4 * n];
    let mut faces = Vec::new();
    for start in 0..4 * n {
        if corner_face[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut corners = Vec::new();
        let mut cur = start;
        loop {
            corner_face[cur] = id;
            corners.push(Corner {
                crossing: cur / 4,
                quadrant: (cur % 4) as u8,
            });
            let leave = 4 * (cur / 4) + (cur % 4 + 1) % 4;
            cur = partner[leave];
            if cur == start {
                break;
            }
        }
        faces.push(Face { corners });
    }
    (faces, corner_face)
}

/// Connected pieces of the crossing graph, numbered by smallest crossing.
fn piece_labels(n: usize, partner: &[usize]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(c) = stack.pop() {
            for k in 0..4 {
                let d = partner[4 * c + k] / 4;
                if label[d] == usize::MAX {
                    label[d] = next;
                    stack.push(d);
                }
            }
        }
        next += 1;
    }
    label
}

/// Orients every component. Under-strands run from slot 0 to slot 2; a
/// component that never passes under is oriented so that labels increase
/// across its first over-crossing when possible.
fn orient(
    n: usize,
    partner: &[usize],
    labels: &[[u32; 4]],
    slot_edge: &[usize],
    edge_labels: &[u32],
) -> Result<(Vec<bool>, usize), BuildError> {
    let mut incoming = vec![false; 4 * n];
    let mut done = vec![false; 4 * n];
    let mut components = 0;
    let through = |s: usize| 4 * (s / 4) + (s % 4 + 2) % 4;
    // Components containing an under-passage first, seeded at slot 0.
    let mut seeds: Vec<usize> = (0..n).map(|c| 4 * c).collect();
    // Pure over-strand components, seeded afterwards.
    seeds.extend((0..n).map(|c| {
        let (b, d) = (labels[c][1], labels[c][3]);
        if d == b + 1 || (b > d + 1 && d == 1) {
            4 * c + 1
        } else {
            4 * c + 3
        }
    }));
    for seed in seeds {
        if done[seed] {
            continue;
        }
        components += 1;
        let mut s = seed;
        loop {
            let t = through(s);
            if done[s] || done[t] {
                return Err(BuildError::InconsistentOrientation(
                    edge_labels[slot_edge[s]],
                ));
            }
            done[s] = true;
            done[t] = true;
            incoming[s] = true;
            if s % 4 == 2 {
                return Err(BuildError::InconsistentOrientation(
                    edge_labels[slot_edge[s]],
                ));
            }
            s = partner[t];
            if s == seed {
                break;
            }
        }
    }
    Ok((incoming, components))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::from_pd(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None).unwrap()
    }

    #[test]
    fn trefoil_counts() {
        let d = trefoil();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.face_count(), 5);
        assert_eq!(d.genus(), 0);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn kink_counts() {
        let d = LinkDiagram::from_pd(&[[1, 1, 2, 2]], None).unwrap();
        assert_eq!((d.edge_count(), d.face_count(), d.genus()), (2, 3, 0));
    }

    #[test]
    fn unknot_has_two_faces() {
        let d = LinkDiagram::unknot();
        assert_eq!(d.face_count(), 2);
        assert_eq!(d.euler_characteristic(), 2);
        let col = d.checkerboard_coloring().unwrap();
        assert!(col.is_proper_for(&d));
    }

    #[test]
    fn trefoil_coloring_counts() {
        let d = trefoil();
        let col = d.checkerboard_coloring().unwrap();
        assert_eq!(col.color(0), Color::White);
        assert_eq!(col.count(Color::Black), 2);
        assert_eq!(col.count(Color::White), 3);
        assert!(col.is_proper_for(&d));
    }

    #[test]
    fn every_side_of_every_edge_is_in_one_face() {
        let d = trefoil();
        let total: usize = d.faces().iter().map(|f| f.corners.len()).sum();
        assert_eq!(total, 4 * d.crossing_count());
    }

    #[test]
    fn pairing_errors() {
        assert_eq!(
            LinkDiagram::from_pd(&[[1, 1, 1, 2]], None).unwrap_err(),
            BuildError::SlotUsedTwice(1)
        );
        assert_eq!(
            LinkDiagram::from_pd(&[[1, 1, 2, 3]], None).unwrap_err(),
            BuildError::UnmatchedSlot(2)
        );
    }

    #[test]
    fn genus_one_single_crossing_is_not_colorable() {
        // Slots 0-2 and 1-3 paired: one crossing on the torus, one face.
        let d = LinkDiagram::from_pd(&[[1, 2, 1, 2]], None);
        // Slot 0 meets slot 2 of the same crossing: the under-strand closes on
        // itself, so the orientation is still consistent (0 -> 2 -> 0).
        let d = d.unwrap();
        assert_eq!(d.genus(), 1);
        assert_eq!(d.face_count(), 1);
        assert!(matches!(
            d.checkerboard_coloring(),
            Err(DiagramError::NotColorable { .. })
        ));
    }
}
