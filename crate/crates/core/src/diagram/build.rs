//! Diagrams from signed embedded graphs.
//!
//! Every edge of an embedded graph becomes a crossing of its medial diagram,
//! with the graph's vertices as the faces of one colour. The edge sign is the
//! smoothing the checkerboard state of that colour uses at the crossing, so
//! an alternating diagram comes from a graph whose edges all carry one sign.
//! Which colour the vertices get depends on the face-0 convention; ask
//! [`PlaneGraph::vertex_color`].

use rand::Rng;
use thiserror::Error;

use super::{Color, DiagramError, LinkDiagram, Smoothing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneGraphError {
    #[error("dart {dart} is listed at vertex {found} but belongs to vertex {expected}")]
    WrongVertex {
        dart: usize,
        found: usize,
        expected: usize,
    },
    #[error("dart {0} is missing from the rotation system or listed twice")]
    DartCount(usize),
    #[error("vertex {0} is out of range")]
    VertexRange(usize),
    #[error("the graph has no vertices")]
    Empty,
    #[error("a graph with several vertices and no edges has no connected diagram")]
    Disconnected,
    #[error("medial diagram failed to build: {0}")]
    Build(#[from] super::BuildError),
}

/// An embedded multigraph with signed edges. Edge `e` runs from `ends[e].0`
/// to `ends[e].1`; its darts are `2e` at the tail and `2e + 1` at the head.
/// `rotation[v]` lists the darts at `v` counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    ends: Vec<(usize, usize)>,
    signs: Vec<Smoothing>,
    rotation: Vec<Vec<usize>>,
}

impl PlaneGraph {
    pub fn from_rotation(
        ends: Vec<(usize, usize)>,
        signs: Vec<Smoothing>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<PlaneGraph, PlaneGraphError> {
        assert_eq!(ends.len(), signs.len(), "one sign per edge");
        if rotation.is_empty() {
            return Err(PlaneGraphError::Empty);
        }
        let nv = rotation.len();
        let mut seen = vec![0u8; 2 * ends.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for &d in rot {
                if d >= seen.len() {
                    return Err(PlaneGraphError::DartCount(d));
                }
                let (a, b) = ends[d / 2];
                if a >= nv || b >= nv {
                    return Err(PlaneGraphError::VertexRange(a.max(b)));
                }
                let owner = if d % 2 == 0 { a } else { b };
                if owner != v {
                    return Err(PlaneGraphError::WrongVertex {
                        dart: d,
                        found: v,
                        expected: owner,
                    });
                }
                seen[d] += 1;
            }
        }
        if let Some(d) = seen.iter().position(|&x| x != 1) {
            return Err(PlaneGraphError::DartCount(d));
        }
        Ok(PlaneGraph {
            ends,
            signs,
            rotation,
        })
    }

    /// An `n`-cycle; `n = 1` is a single loop.
    pub fn cycle(n: usize, sign: Smoothing) -> PlaneGraph {
        assert!(n >= 1);
        let ends = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let rotation = (0..n)
            .map(|i| vec![2 * i, 2 * ((i + n - 1) % n) + 1])
            .collect();
        PlaneGraph::from_rotation(ends, vec![sign; n], rotation).expect("cycle is well formed")
    }

    /// Two poles joined by internally disjoint paths, one per entry. Path `i`
    /// has one edge per listed sign.
    pub fn theta(paths: &[Vec<Smoothing>]) -> PlaneGraph {
        assert!(paths.iter().all(|p| !p.is_empty()));
        let mut ends = Vec::new();
        let mut signs = Vec::new();
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
        let mut at_pole1 = Vec::new();
        for path in paths {
            let mut prev = 0usize;
            for (j, &s) in path.iter().enumerate() {
                let last = j + 1 == path.len();
                let next = if last {
                    1
                } else {
                    rotation.push(Vec::new());
                    rotation.len() - 1
                };
                let e = ends.len();
                ends.push((prev, next));
                signs.push(s);
                rotation[prev].push(2 * e);
                if last {
                    at_pole1.push(2 * e + 1);
                } else {
                    rotation[next].push(2 * e + 1);
                }
                prev = next;
            }
        }
        at_pole1.reverse();
        rotation[1] = at_pole1;
        PlaneGraph::from_rotation(ends, signs, rotation).expect("theta is well formed")
    }

    /// The complete graph on four vertices, one centre and an outer triangle.
    /// Edges: 01, 02, 03, 12, 23, 31.
    pub fn k4(sign: Smoothing) -> PlaneGraph {
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)];
        let rotation = vec![vec![0, 2, 4], vec![6, 1, 11], vec![8, 3, 7], vec![10, 5, 9]];
        PlaneGraph::from_rotation(ends, vec![sign; 6], rotation).expect("K4 is well formed")
    }

    /// Joins a new `n`-cycle at vertex `v`, drawn in the corner just after
    /// position `corner` of `v`'s rotation. Every new edge carries `sign`.
    /// On the medial diagram this plumbs an annulus with `n` half twists onto
    /// the disk at `v`.
    pub fn attach_cycle(&mut self, v: usize, corner: usize, n: usize, sign: Smoothing) {
        assert!(n >= 2 && v < self.rotation.len());
        let first_vertex = self.rotation.len();
        let first_edge = self.ends.len();
        for i in 0..n {
            let a = if i == 0 { v } else { first_vertex + i - 1 };
            let b = if i + 1 == n { v } else { first_vertex + i };
            self.ends.push((a, b));
            self.signs.push(sign);
        }
        for i in 1..n {
            self.rotation.push(vec![2 * (first_edge + i - 1) + 1, 2 * (first_edge + i)]);
        }
        let at = (corner + 1).min(self.rotation[v].len());
        let last = first_edge + n - 1;
        self.rotation[v].splice(at..at, [2 * first_edge, 2 * last + 1]);
    }

    /// Darts counterclockwise around `v`.
    pub fn rotation_at(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn sign(&self, e: usize) -> Smoothing {
        self.signs[e]
    }

    pub fn set_sign(&mut self, e: usize, s: Smoothing) {
        self.signs[e] = s;
    }

    fn dart_vertex(&self, d: usize) -> usize {
        let (a, b) = self.ends[d / 2];
        if d.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    fn position(&self, d: usize) -> (usize, usize) {
        let v = self.dart_vertex(d);
        (
            v,
            self.rotation[v]
                .iter()
                .position(|&x| x == d)
                .expect("dart in rotation"),
        )
    }

    fn next(&self, d: usize) -> usize {
        let (v, i) = self.position(d);
        let r = &self.rotation[v];
        r[(i + 1) % r.len()]
    }

    fn prev(&self, d: usize) -> usize {
        let (v, i) = self.position(d);
        let r = &self.rotation[v];
        r[(i + r.len() - 1) % r.len()]
    }

    /// Faces as cyclic lists of darts; each dart is followed by the dart leaving
    /// its far end next counterclockwise.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let nd = 2 * self.ends.len();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for s in 0..nd {
            if seen[s] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next(d ^ 1);
            }
            out.push(face);
        }
        out
    }

    /// Genus of the embedding, assuming a connected graph.
    pub fn genus(&self) -> i64 {
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + self.faces().len() as i64;
        (2 - chi) / 2
    }

    /// Replaces edge `e` by two edges in series through a new vertex; the new
    /// edge takes the head half and copies the sign. Returns the new edge.
    pub fn subdivide(&mut self, e: usize) -> usize {
        let (_, v) = self.ends[e];
        let x = self.rotation.len();
        let f = self.ends.len();
        let (hv, hi) = self.position(2 * e + 1);
        debug_assert_eq!(hv, v);
        self.ends[e].1 = x;
        self.ends.push((x, v));
        self.signs.push(self.signs[e]);
        self.rotation[v][hi] = 2 * f + 1;
        self.rotation.push(vec![2 * e + 1, 2 * f]);
        f
    }

    /// Adds an edge from the corner after dart `da` to the corner after dart
    /// `db`. When both corners lie on one face the face is split in two.
    pub fn add_chord(&mut self, da: usize, db: usize, sign: Smoothing) -> usize {
        let u = self.dart_vertex(da);
        let v = self.dart_vertex(db);
        let e = self.ends.len();
        self.ends.push((u, v));
        self.signs.push(sign);
        let (_, ia) = self.position(da);
        self.rotation[u].insert(ia + 1, 2 * e);
        let (_, ib) = self.position(db);
        self.rotation[v].insert(ib + 1, 2 * e + 1);
        e
    }

    /// A random 2-connected loopless plane graph with `edges` edges, grown
    /// from a digon by subdividing edges and splitting faces with chords.
    pub fn random_two_connected<R: Rng + ?Sized>(
        rng: &mut R,
        edges: usize,
        sign: Smoothing,
    ) -> PlaneGraph {
        let mut g = PlaneGraph::cycle(2, sign);
        while g.edge_count() < edges {
            let faces = g.faces();
            let splittable: Vec<&Vec<usize>> = faces.iter().filter(|f| f.len() >= 3).collect();
            if splittable.is_empty() || rng.random_bool(0.35) {
                let e = rng.random_range(0..g.edge_count());
                g.subdivide(e);
                continue;
            }
            let face = splittable[rng.random_range(0..splittable.len())];
            // The corner after dart face[i]^1 sits at the head of face[i].
            let corners: Vec<usize> = face.iter().map(|&d| d ^ 1).collect();
            let i = rng.random_range(0..corners.len());
            let choices: Vec<usize> = (0..corners.len())
                .filter(|&j| j != i && g.dart_vertex(corners[j]) != g.dart_vertex(corners[i]))
                .collect();
            if choices.is_empty() {
                let e = rng.random_range(0..g.edge_count());
                g.subdivide(e);
                continue;
            }
            let j = choices[rng.random_range(0..choices.len())];
            g.add_chord(corners[i], corners[j], sign);
        }
        g
    }

    /// The colour of the faces of `self.to_diagram()` that stand for vertices.
    pub fn vertex_color(&self, d: &LinkDiagram) -> Result<Color, DiagramError> {
        if self.ends.is_empty() {
            return Ok(Color::Black);
        }
        // The tail of edge 0 faces the quadrant between the NW and SW ends.
        let q = match self.signs[0] {
            Smoothing::A => 1,
            Smoothing::B => 0,
        };
        Ok(d.checkerboard_coloring()?.color(d.corner_face(0, q)))
    }

    /// The medial link diagram. Crossing `e` sits on edge `e`.
    pub fn to_diagram(&self) -> Result<LinkDiagram, PlaneGraphError> {
        let ne = self.ends.len();
        if ne == 0 {
            return if self.vertex_count() == 1 {
                Ok(LinkDiagram::unknot())
            } else {
                Err(PlaneGraphError::Disconnected)
            };
        }
        // A corner is named by the dart that starts it; corner ids double as
        // medial edge ids. Compass ends: NE, NW, SW, SE with the edge drawn
        // west to east.
        let compass = |e: usize| -> [usize; 4] {
            let (t, h) = (2 * e, 2 * e + 1);
            [self.prev(h), t, self.prev(t), h]
        };
        let mut slots: Vec<[usize; 4]> = Vec::with_capacity(ne);
        for e in 0..ne {
            let [ne_c, nw, sw, se] = compass(e);
            slots.push(match self.signs[e] {
                Smoothing::A => [ne_c, nw, sw, se],
                Smoothing::B => [nw, sw, se, ne_c],
            });
        }
        // Pair slot ends that share a corner.
        let mut owner: Vec<Vec<usize>> = vec![Vec::new(); 2 * ne];
        for (c, row) in slots.iter().enumerate() {
            for (k, &corner) in row.iter().enumerate() {
                owner[corner].push(4 * c + k);
            }
        }
        let mut partner = vec![usize::MAX; 4 * ne];
        for ends in &owner {
            debug_assert_eq!(ends.len(), 2);
            partner[ends[0]] = ends[1];
            partner[ends[1]] = ends[0];
        }
        Ok(super::assemble(&partner)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn triangle_gives_trefoil() {
        let d = PlaneGraph::cycle(3, Smoothing::A).to_diagram().unwrap();
        assert_eq!((d.crossing_count(), d.face_count(), d.genus()), (3, 5, 0));
        assert_eq!(d.component_count(), 1);
        assert!(d.is_alternating());
    }

    #[test]
    fn digon_gives_hopf() {
        let d = PlaneGraph::cycle(2, Smoothing::A).to_diagram().unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (2, 2));
    }

    #[test]
    fn k4_is_planar_and_gives_three_components() {
        let g = PlaneGraph::k4(Smoothing::A);
        assert_eq!(g.genus(), 0);
        let d = g.to_diagram().unwrap();
        assert_eq!(
            (d.crossing_count(), d.component_count(), d.face_count()),
            (6, 3, 8)
        );
    }

    #[test]
    fn theta_is_planar() {
        let g = PlaneGraph::theta(&[
            vec![Smoothing::A; 2],
            vec![Smoothing::A; 3],
            vec![Smoothing::B],
        ]);
        assert_eq!(g.genus(), 0);
        let d = g.to_diagram().unwrap();
        assert_eq!(d.crossing_count(), 6);
        assert!(!d.is_alternating());
    }

    #[test]
    fn vertex_color_counts_vertices() {
        let s = [Smoothing::A, Smoothing::B];
        let graphs = [
            PlaneGraph::k4(Smoothing::A),
            PlaneGraph::k4(Smoothing::B),
            PlaneGraph::theta(&[vec![s[1]; 2], vec![s[0]; 2], vec![s[1]; 2]]),
            PlaneGraph::theta(&[vec![s[0]; 3], vec![s[1]; 1]]),
            PlaneGraph::cycle(5, Smoothing::B),
        ];
        for g in graphs {
            let d = g.to_diagram().unwrap();
            let col = d.checkerboard_coloring().unwrap();
            let vc = g.vertex_color(&d).unwrap();
            assert_eq!(col.count(vc), g.vertex_count());
            // the Tait graph of the vertex colour has the graph's degrees
            let t = crate::graphs::tait_graph(&d, vc).unwrap();
            let mut a: Vec<usize> = t.adjacency().iter().map(|x| x.len()).collect();
            let mut b: Vec<usize> = g.rotation.iter().map(|x| x.len()).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            let labels: Vec<Smoothing> = t.edges().iter().map(|e| e.label).collect();
            assert_eq!(labels, g.signs);
        }
    }

    #[test]
    fn random_graphs_are_planar_and_reduced() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..20 {
            let g = PlaneGraph::random_two_connected(&mut rng, n, Smoothing::A);
            assert_eq!(g.genus(), 0);
            let d = g.to_diagram().unwrap();
            let f = d.classify();
            assert!(f.alternating && f.reduced && f.diagram_prime, "n={n}");
        }
    }
}
