//! Height-bounded search for caps of a checkerboard surface.
//!
//! The surface `F` is one checkerboard color and the opposite color, with the
//! crossing-band halves, is its flat cap system `W`. Together they cut the
//! complement into two balls, above and below the projection sphere. On the
//! boundary sphere of a ball the faces of the diagram are glued along copies
//! of the vertical arcs `F ∩ W`, one at each crossing. The upper ball sees the
//! vertical arc at both under-strand slots of a crossing, the lower ball at
//! both over-strand slots. A port at slot `s` therefore joins the two faces
//! flanking the edge at `s`, on the side fixed by the parity of `s`.
//!
//! A disk `X` with boundary on `F` in minimal position is cut by `W` into
//! subdisks, each in one ball. The boundary of a subdisk alternates between
//! cap chords (arcs of `X ∩ W` in a cap face) and surface chords (arcs of
//! `∂X` in a surface face), passing through a port at every switch. When
//! touches of `L` are allowed, each edge of the diagram also carries a touch
//! port on both sides, where `∂X` wraps around `L`.

mod assemble;
mod enumerate;
mod weave;

pub use assemble::{
    boundary_word, fake_cap_filters, find_bounded_height_caps, reduce_word, AssemblyNode,
    CapAssembly, CapSearchError, CapSearchOutcome, CapSearchReport, CapVerdict, FakeCandidate,
    FakeDiagnostics, Letter, NoneReason, WordReport,
};
pub use enumerate::{enumerate_subdisks, Strata, StratumSummary, SubdiskType};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Color, Corner, DiagramError, LinkDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Side::Above => 0,
            Side::Below => 1,
        }
    }

    pub const BOTH: [Side; 2] = [Side::Above, Side::Below];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Embedded boundary: chords never cross inside any face.
    Geometric,
    /// Embedded boundary that may wrap around the link at touch ports.
    Boundary,
    /// Embedded interior only: surface chords may cross.
    Algebraic,
}

impl SearchMode {
    pub fn default_touches(self) -> usize {
        match self {
            SearchMode::Boundary => 1,
            _ => 0,
        }
    }

    /// Whether surface chords (pieces of `∂X`) must avoid each other.
    pub fn embedded_boundary(self) -> bool {
        !matches!(self, SearchMode::Algebraic)
    }
}

impl std::str::FromStr for SearchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geometric" => Ok(SearchMode::Geometric),
            "boundary" => Ok(SearchMode::Boundary),
            "algebraic" => Ok(SearchMode::Algebraic),
            other => Err(format!(
                "unknown mode {other:?}; expected geometric, boundary or algebraic"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_height: u32,
    pub mode: SearchMode,
    /// Largest number of link touches allowed in one subdisk or assembly.
    pub max_touches: usize,
    /// Largest number of cap chords on one subdisk.
    pub max_chords: usize,
    /// Search nodes allowed before giving up with an undecided answer.
    pub node_budget: u64,
    /// Largest number of caps reported.
    pub max_caps: usize,
}

impl SearchConfig {
    pub fn new(max_height: u32, mode: SearchMode) -> SearchConfig {
        SearchConfig {
            max_height,
            mode,
            max_touches: mode.default_touches(),
            max_chords: 6,
            node_budget: 50_000_000,
            max_caps: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("the diagram has no crossings, so the surface is a disk")]
    Crossingless,
}

/// A place on a face boundary where a chord can end: a crossing corner (at
/// the vertical arc there) or a touch of the link along an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spot {
    Corner(Corner),
    Edge(usize),
}

/// One item of a disk's boundary in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryItem {
    VerticalArc { crossing: usize, quadrant: u8 },
    LinkArc { edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCell {
    pub face: usize,
    pub boundary: Vec<BoundaryItem>,
}

/// The vertical arc at a crossing with its four corners. `surface` and `cap`
/// list the quadrants of each color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalArc {
    pub crossing: usize,
    pub surface_quadrants: [u8; 2],
    pub cap_quadrants: [u8; 2],
    pub under_slots: [usize; 2],
    pub over_slots: [usize; 2],
}

/// The cells of the surface and its flat cap system.
#[derive(Debug, Clone, Serialize)]
pub struct FlatCapDecomposition {
    pub surface_color: Color,
    pub surface_disks: Vec<DiskCell>,
    pub cap_disks: Vec<DiskCell>,
    pub vertical_arcs: Vec<VerticalArc>,
    pub corner_count: usize,
    #[serde(skip)]
    pub(crate) diagram: LinkDiagram,
    #[serde(skip)]
    face_color: Vec<Color>,
    /// Position of every corner in its face's cyclic boundary.
    #[serde(skip)]
    corner_pos: Vec<usize>,
    /// For every edge, its position in each of the two faces it bounds.
    #[serde(skip)]
    edge_pos: Vec<[(usize, usize); 2]>,
}

/// Spot ids: corner `4c + q`, or `4n + e` for an edge.
pub(crate) type SpotId = u32;

impl FlatCapDecomposition {
    pub fn build(
        d: &LinkDiagram,
        color: Color,
    ) -> Result<FlatCapDecomposition, DecompositionError> {
        if !d.is_connected() {
            return Err(DiagramError::Split {
                pieces: d.piece_count(),
            }
            .into());
        }
        if d.is_crossingless() {
            return Err(DecompositionError::Crossingless);
        }
        let coloring = d.checkerboard_coloring()?;
        let n = d.crossing_count();
        let mut corner_pos = vec![0; 4 * n];
        let mut edge_pos = vec![[(usize::MAX, 0); 2]; d.edge_count()];
        let mut surface_disks = Vec::new();
        let mut cap_disks = Vec::new();
        for (fi, face) in d.faces().iter().enumerate() {
            let mut boundary = Vec::with_capacity(2 * face.corners.len());
            for (i, c) in face.corners.iter().enumerate() {
                corner_pos[c.index()] = 2 * i;
                // The face leaves corner (c, q) along the edge at slot q + 1.
                let e = d.slot_edge(4 * c.crossing + (c.quadrant as usize + 1) % 4);
                let slot = if edge_pos[e][0].0 == usize::MAX { 0 } else { 1 };
                edge_pos[e][slot] = (fi, 2 * i + 1);
                boundary.push(BoundaryItem::VerticalArc {
                    crossing: c.crossing,
                    quadrant: c.quadrant,
                });
                boundary.push(BoundaryItem::LinkArc { edge: e });
            }
            let cell = DiskCell { face: fi, boundary };
            if coloring.color(fi) == color {
                surface_disks.push(cell);
            } else {
                cap_disks.push(cell);
            }
        }
        let vertical_arcs = (0..n)
            .map(|c| {
                let surface: Vec<u8> = (0..4u8)
                    .filter(|&q| coloring.color(d.corner_face(c, q as usize)) == color)
                    .collect();
                let cap: Vec<u8> = (0..4u8)
                    .filter(|&q| coloring.color(d.corner_face(c, q as usize)) != color)
                    .collect();
                VerticalArc {
                    crossing: c,
                    surface_quadrants: [surface[0], surface[1]],
                    cap_quadrants: [cap[0], cap[1]],
                    under_slots: [4 * c, 4 * c + 2],
                    over_slots: [4 * c + 1, 4 * c + 3],
                }
            })
            .collect();
        Ok(FlatCapDecomposition {
            surface_color: color,
            surface_disks,
            cap_disks,
            vertical_arcs,
            corner_count: 4 * n,
            diagram: d.clone(),
            face_color: coloring.colors.clone(),
            corner_pos,
            edge_pos,
        })
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn is_surface_face(&self, f: usize) -> bool {
        self.face_color[f] == self.surface_color
    }

    pub(crate) fn spot_count(&self) -> usize {
        4 * self.crossing_count() + self.diagram.edge_count()
    }

    pub(crate) fn spot(&self, id: SpotId) -> Spot {
        let id = id as usize;
        let n4 = 4 * self.crossing_count();
        if id < n4 {
            Spot::Corner(Corner {
                crossing: id / 4,
                quadrant: (id % 4) as u8,
            })
        } else {
            Spot::Edge(id - n4)
        }
    }

    pub(crate) fn is_touch(&self, id: SpotId) -> bool {
        id as usize >= 4 * self.crossing_count()
    }

    /// Crossing of a corner spot.
    pub(crate) fn spot_crossing(&self, id: SpotId) -> Option<usize> {
        (!self.is_touch(id)).then_some(id as usize / 4)
    }

    /// Faces a spot lies on: one for a corner, two for an edge.
    pub(crate) fn spot_faces(&self, id: SpotId) -> [usize; 2] {
        match self.spot(id) {
            Spot::Corner(c) => {
                let f = self.diagram.corner_face(c.crossing, c.quadrant as usize);
                [f, f]
            }
            Spot::Edge(e) => [self.edge_pos[e][0].0, self.edge_pos[e][1].0],
        }
    }

    /// The face of the given kind a spot lies on.
    pub(crate) fn spot_face(&self, id: SpotId, surface: bool) -> usize {
        let [a, b] = self.spot_faces(id);
        if self.is_surface_face(a) == surface {
            a
        } else {
            debug_assert_eq!(self.is_surface_face(b), surface);
            b
        }
    }

    /// Position of a spot along the boundary of face `f`.
    pub(crate) fn spot_pos(&self, id: SpotId, f: usize) -> usize {
        match self.spot(id) {
            Spot::Corner(c) => self.corner_pos[c.index()],
            Spot::Edge(e) => {
                let [a, b] = self.edge_pos[e];
                if a.0 == f {
                    a.1
                } else {
                    b.1
                }
            }
        }
    }

    /// Where a cap-side spot exits onto the surface through the port on
    /// `side`. Corners pair across the slot of the side's parity.
    pub(crate) fn port(&self, side: Side, id: SpotId) -> SpotId {
        if self.is_touch(id) {
            return id;
        }
        let c = id / 4;
        let q = id % 4;
        let partner = match side {
            // under-strand slots 0 and 2 join quadrants 3|0 and 1|2
            Side::Above => 3 - q,
            // over-strand slots 1 and 3 join quadrants 0|1 and 2|3
            Side::Below => q ^ 1,
        };
        4 * c + partner
    }

    /// Whether a chord may join spots `a` and `b` of face `f`.
    pub(crate) fn chord_ok(&self, a: SpotId, b: SpotId) -> bool {
        if a == b {
            return false;
        }
        match (self.spot_crossing(a), self.spot_crossing(b)) {
            (Some(x), Some(y)) => x != y,
            (Some(x), None) => !self.edge_touches(b, x),
            (None, Some(y)) => !self.edge_touches(a, y),
            (None, None) => true,
        }
    }

    /// A touch on an edge ending at crossing `c` is parallel into `c`'s ball.
    fn edge_touches(&self, edge_spot: SpotId, c: usize) -> bool {
        let e = edge_spot as usize - 4 * self.crossing_count();
        self.diagram.edge_slots(e).iter().any(|&s| s / 4 == c)
    }

    /// Cap spots of every cap face, corners first then edges, in id order.
    pub(crate) fn cap_face_spots(&self, touches: bool) -> Vec<Vec<SpotId>> {
        self.face_spots(false, touches)
    }

    pub(crate) fn surface_face_spots(&self, touches: bool) -> Vec<Vec<SpotId>> {
        self.face_spots(true, touches)
    }

    fn face_spots(&self, surface: bool, touches: bool) -> Vec<Vec<SpotId>> {
        let mut out = vec![Vec::new(); self.diagram.face_count()];
        let limit = if touches {
            self.spot_count()
        } else {
            4 * self.crossing_count()
        };
        for id in 0..limit as SpotId {
            if let Some(&f) = self
                .spot_faces(id)
                .iter()
                .find(|&&f| self.is_surface_face(f) == surface)
            {
                out[f].push(id);
            }
        }
        out
    }

    /// The end of a chord of face `f` at spot `id`, carrying `point`. Corner
    /// points are ordered along the crossing's vertical arc, touch points
    /// along the edge, so all faces at one crossing share an order.
    pub(crate) fn weave_end(&self, id: SpotId, f: usize, point: usize) -> weave::End {
        let base = self.spot_pos(id, f);
        match self.spot(id) {
            Spot::Corner(c) => weave::End {
                base,
                container: c.crossing,
                point,
                flip: c.quadrant % 2 == 1,
            },
            Spot::Edge(e) => {
                // the face runs along the edge from the slot it leaves by
                let corner = self.diagram.faces()[f].corners[(base - 1) / 2];
                let leave = 4 * corner.crossing + (corner.quadrant as usize + 1) % 4;
                let flip = self.diagram.edge_slots(e)[0] != leave;
                weave::End {
                    base,
                    container: self.crossing_count() + e,
                    point,
                    flip,
                }
            }
        }
    }

    /// Whether chords `(a, b)` and `(c, d)` of face `f` cross.
    pub(crate) fn chords_cross(
        &self,
        f: usize,
        a: SpotId,
        b: SpotId,
        c: SpotId,
        d: SpotId,
    ) -> bool {
        let (pa, pb, pc, pd) = (
            self.spot_pos(a, f),
            self.spot_pos(b, f),
            self.spot_pos(c, f),
            self.spot_pos(d, f),
        );
        if pa == pc || pa == pd || pb == pc || pb == pd {
            return false;
        }
        let inside = |x: usize| {
            let (lo, hi) = (pa.min(pb), pa.max(pb));
            x > lo && x < hi
        };
        inside(pc) != inside(pd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{PlaneGraph, Smoothing};

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap()
    }

    #[test]
    fn trefoil_cells() {
        let dec = FlatCapDecomposition::build(&trefoil(), Color::Black).unwrap();
        assert_eq!(dec.surface_disks.len(), 2);
        assert_eq!(dec.cap_disks.len(), 3);
        assert_eq!(dec.vertical_arcs.len(), 3);
        assert_eq!(dec.corner_count, 12);
    }

    #[test]
    fn kink_repeats_a_face_at_its_crossing() {
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        let dec = FlatCapDecomposition::build(&d, Color::Black).unwrap();
        let v = &dec.vertical_arcs[0];
        let faces = |qs: [u8; 2]| qs.map(|q| d.corner_face(0, q as usize));
        let s = faces(v.surface_quadrants);
        let c = faces(v.cap_quadrants);
        assert!(s[0] == s[1] || c[0] == c[1]);
    }

    #[test]
    fn figure_eight_counts() {
        let d = LinkDiagram::parse("X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8").unwrap();
        for color in [Color::Black, Color::White] {
            let dec = FlatCapDecomposition::build(&d, color).unwrap();
            assert_eq!(dec.vertical_arcs.len(), 4);
            assert_eq!(dec.corner_count, 16);
        }
    }

    #[test]
    fn ports_join_opposite_colors_across_an_edge() {
        let d = PlaneGraph::k4(Smoothing::A).to_diagram().unwrap();
        let dec = FlatCapDecomposition::build(&d, Color::Black).unwrap();
        for side in Side::BOTH {
            for id in 0..dec.corner_count as SpotId {
                let p = dec.port(side, id);
                assert_eq!(dec.port(side, p), id);
                let (fa, fb) = (dec.spot_faces(id)[0], dec.spot_faces(p)[0]);
                assert_ne!(dec.is_surface_face(fa), dec.is_surface_face(fb));
                // the two corners flank one edge at the shared slot
                let (c, qa, qb) = (id as usize / 4, id as usize % 4, p as usize % 4);
                let slot = if (qa + 1) % 4 == qb { qb } else { qa };
                let parity = if side == Side::Above { 0 } else { 1 };
                assert_eq!(slot % 2, parity, "crossing {c}");
            }
        }
    }

    #[test]
    fn every_vertical_arc_has_two_corners_of_each_color() {
        let d = trefoil();
        let dec = FlatCapDecomposition::build(&d, Color::White).unwrap();
        let coloring = d.checkerboard_coloring().unwrap();
        for v in &dec.vertical_arcs {
            for q in v.surface_quadrants {
                assert_eq!(
                    coloring.color(d.corner_face(v.crossing, q as usize)),
                    Color::White
                );
            }
            for q in v.cap_quadrants {
                assert_eq!(
                    coloring.color(d.corner_face(v.crossing, q as usize)),
                    Color::Black
                );
            }
        }
    }
}
