//! Tait graphs, state graphs, blocks and girth.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Color, DiagramError, LinkDiagram, Smoothing, State};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub label: Smoothing,
    /// Crossing of the source diagram.
    pub crossing: usize,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A multigraph with A/B-labeled edges; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledMultigraph {
    vertex_count: usize,
    edges: Vec<GraphEdge>,
    /// Face (Tait graph) or state circle (state graph) behind each vertex.
    pub vertex_source: Vec<usize>,
}

/// Blocks as sorted edge lists, ordered by smallest edge, plus cut vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
}

/// Shortest cycle length with a witness cycle given as edge ids in order.
/// A forest has no cycle and infinite girth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Girth {
    pub length: Option<usize>,
    pub cycle: Vec<usize>,
}

impl LabeledMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<GraphEdge>) -> LabeledMultigraph {
        assert!(edges
            .iter()
            .all(|e| e.u < vertex_count && e.v < vertex_count));
        LabeledMultigraph {
            vertex_count,
            edges,
            vertex_source: (0..vertex_count).collect(),
        }
    }

    /// Convenience constructor; crossing ids are the edge positions.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(usize, usize, Smoothing)],
    ) -> LabeledMultigraph {
        LabeledMultigraph::new(
            vertex_count,
            edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v, label))| GraphEdge {
                    u,
                    v,
                    label,
                    crossing: i,
                })
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> GraphEdge {
        self.edges[e]
    }

    /// Incident (edge, neighbor) pairs per vertex; a loop appears twice.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((i, e.v));
            adj[e.v].push((i, e.u));
        }
        adj
    }

    /// Component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut k = 0;
        for s in 0..self.vertex_count {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = k;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(_, w) in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = k;
                        stack.push(w);
                    }
                }
            }
            k += 1;
        }
        (comp, k)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// First Betti number: edges minus vertices plus components.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + self.components().1 - self.vertex_count
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].is_loop())
            .collect()
    }

    pub fn is_adequate(&self) -> bool {
        self.edges.iter().all(|e| !e.is_loop())
    }

    /// Every block carries a single label.
    pub fn is_homogeneous(&self) -> bool {
        self.blocks().blocks.iter().all(|b| {
            b.iter()
                .all(|&e| self.edges[e].label == self.edges[b[0]].label)
        })
    }

    /// Block decomposition of a connected graph.
    pub fn cut_components(&self) -> Result<CutDecomposition, GraphError> {
        let (_, k) = self.components();
        if k > 1 {
            return Err(GraphError::Disconnected(k));
        }
        Ok(self.blocks())
    }

    /// Blocks of every component; loops form their own blocks.
    pub fn blocks(&self) -> CutDecomposition {
        let n = self.vertex_count;
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut time = 0;
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                blocks.push(vec![i]);
            }
        }
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // frames: (vertex, edge used to enter, next adjacency index)
            let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (u, via, ref mut idx)) = frames.last_mut() {
                if *idx < adj[u].len() {
                    let (e, w) = adj[u][*idx];
                    *idx += 1;
                    if e == via || self.edges[e].is_loop() {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        frames.push((w, e, 0));
                    } else if disc[w] < disc[u] {
                        edge_stack.push(e);
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(p, _, _)) = frames.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] >= disc[p] {
                            if p != root {
                                is_cut[p] = true;
                            }
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == via {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        // A vertex carrying a loop and another block also separates blocks.
        let mut blocks_at = vec![0usize; n];
        for b in &blocks {
            let mut vs: Vec<usize> = b
                .iter()
                .flat_map(|&e| [self.edges[e].u, self.edges[e].v])
                .collect();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                blocks_at[v] += 1;
            }
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let cut_vertices = (0..n).filter(|&v| is_cut[v] || blocks_at[v] > 1).collect();
        CutDecomposition {
            blocks,
            cut_vertices,
        }
    }

    /// Shortest cycle. Loops give 1, parallel edges 2; otherwise a breadth-first
    /// search from every vertex closes cycles through non-tree edges.
    pub fn girth(&self) -> Girth {
        if let Some(&e) = self.loops().first() {
            return Girth {
                length: Some(1),
                cycle: vec![e],
            };
        }
        let mut seen = std::collections::HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let key = (e.u.min(e.v), e.u.max(e.v));
            if let Some(&j) = seen.get(&key) {
                return Girth {
                    length: Some(2),
                    cycle: vec![j, i],
                };
            }
            seen.insert(key, i);
        }
        let adj = self.adjacency();
        let best = par::map_range(self.vertex_count, |s| self.shortest_cycle_through(s, &adj));
        match best.into_iter().flatten().min_by_key(|c| c.len()) {
            Some(cycle) => Girth {
                length: Some(cycle.len()),
                cycle,
            },
            None => Girth {
                length: None,
                cycle: Vec::new(),
            },
        }
    }

    /// Shortest simple cycle closed at a non-tree edge of the search tree from
    /// `s` whose two tree paths meet only at `s`.
    fn shortest_cycle_through(&self, s: usize, adj: &[Vec<(usize, usize)>]) -> Option<Vec<usize>> {
        let n = self.vertex_count;
        let mut dist = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut branch = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        let mut best: Option<(usize, usize)> = None;
        while let Some(u) = queue.pop_front() {
            if let Some((len, _)) = best {
                if 2 * dist[u] >= len {
                    break;
                }
            }
            for &(e, w) in &adj[u] {
                if e == parent_edge[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e;
                    branch[w] = if u == s { w } else { branch[u] };
                    queue.push_back(w);
                } else if branch[w] != branch[u] || (u == s) != (w == s) {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, _)| len < b) {
                        best = Some((len, e));
                    }
                }
            }
        }
        let (_, e) = best?;
        let walk_up = |mut x: usize| {
            let mut path = Vec::new();
            while x != s {
                let pe = parent_edge[x];
                path.push(pe);
                x = self.edges[pe].other(x);
            }
            path
        };
        let (u, w) = (self.edges[e].u, self.edges[e].v);
        let mut cycle: Vec<usize> = walk_up(u).into_iter().rev().collect();
        cycle.push(e);
        cycle.extend(walk_up(w));
        Some(cycle)
    }

    /// Whether `cycle` lists the edges of a simple closed cycle in order.
    pub fn is_simple_cycle(&self, cycle: &[usize]) -> bool {
        if cycle.is_empty() {
            return false;
        }
        if cycle.len() == 1 {
            return self.edges[cycle[0]].is_loop();
        }
        let mut distinct = cycle.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != cycle.len() {
            return false;
        }
        // find a start vertex consistent with the order
        let first = self.edges[cycle[0]];
        'start: for start in [first.u, first.v] {
            let mut visited = vec![start];
            let mut at = start;
            for &e in cycle {
                let ed = self.edges[e];
                if ed.u != at && ed.v != at {
                    continue 'start;
                }
                at = ed.other(at);
                visited.push(at);
            }
            if at != start {
                continue;
            }
            visited.pop();
            let mut vs = visited.clone();
            vs.sort_unstable();
            vs.dedup();
            if vs.len() == visited.len() {
                return true;
            }
        }
        false
    }

    /// Edges of the spanning forest found by depth-first search, and the
    /// fundamental cycle of every other edge.
    pub fn fundamental_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let adj = self.adjacency();
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; self.edges.len()];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &(e, w) in &adj[u] {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent_edge[w] = e;
                        in_tree[e] = true;
                        stack.push(w);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            let (mut a, mut b) = (e.u, e.v);
            let mut left = Vec::new();
            let mut right = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let pe = parent_edge[a];
                    left.push(pe);
                    a = self.edges[pe].other(a);
                } else {
                    let pe = parent_edge[b];
                    right.push(pe);
                    b = self.edges[pe].other(b);
                }
            }
            let mut cyc = vec![i];
            cyc.extend(right.iter().copied());
            cyc.extend(left.iter().rev().copied());
            out.push(cyc);
        }
        out
    }

    /// Subgraph on the given edges, keeping every vertex.
    pub fn edge_subgraph(&self, edges: &[usize]) -> LabeledMultigraph {
        LabeledMultigraph {
            vertex_count: self.vertex_count,
            edges: edges.iter().map(|&e| self.edges[e]).collect(),
            vertex_source: self.vertex_source.clone(),
        }
    }

    /// Subgraph on the given edges with only their endpoints, renumbered in
    /// increasing order. Returns the graph and the old index of each vertex.
    pub fn induced_on_edges(&self, edges: &[usize]) -> (LabeledMultigraph, Vec<usize>) {
        let mut vs: Vec<usize> = edges
            .iter()
            .flat_map(|&e| [self.edges[e].u, self.edges[e].v])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        let index = |x: usize| vs.binary_search(&x).expect("endpoint kept");
        let es = edges
            .iter()
            .map(|&e| {
                let ed = self.edges[e];
                GraphEdge {
                    u: index(ed.u),
                    v: index(ed.v),
                    ..ed
                }
            })
            .collect();
        let g = LabeledMultigraph {
            vertex_count: vs.len(),
            edges: es,
            vertex_source: vs.iter().map(|&v| self.vertex_source[v]).collect(),
        };
        (g, vs)
    }
}

/// Tait graph of one color: a vertex per face of that color and an edge per
/// crossing joining its two faces of that color. The label is the smoothing
/// that cuts off those faces, so the Tait graph is the state graph of the
/// checkerboard state.
pub fn tait_graph(d: &LinkDiagram, color: Color) -> Result<LabeledMultigraph, GraphError> {
    if !d.is_connected() {
        return Err(DiagramError::Split {
            pieces: d.piece_count(),
        }
        .into());
    }
    let coloring = d.checkerboard_coloring()?;
    let faces = coloring.faces_of(color);
    let index = |f: usize| faces.binary_search(&f).expect("face of the color");
    let edges = (0..d.crossing_count())
        .map(|c| {
            let label = if coloring.color(d.corner_face(c, 1)) == color {
                Smoothing::A
            } else {
                Smoothing::B
            };
            let [q0, q1] = label.cut_quadrants();
            GraphEdge {
                u: index(d.corner_face(c, q0)),
                v: index(d.corner_face(c, q1)),
                label,
                crossing: c,
            }
        })
        .collect();
    let mut g = LabeledMultigraph::new(faces.len(), edges);
    g.vertex_source = faces;
    Ok(g)
}

/// State graph: a vertex per state circle and a labeled edge per crossing.
pub fn state_graph(d: &LinkDiagram, state: &State) -> Result<LabeledMultigraph, GraphError> {
    let res = d.resolve_state(state)?;
    let edges = (0..d.crossing_count())
        .map(|c| {
            let (u, v) = res.crossing_circles(c);
            GraphEdge {
                u,
                v,
                label: state.0[c],
                crossing: c,
            }
        })
        .collect();
    Ok(LabeledMultigraph::new(res.circle_count(), edges))
}

/// Whether two graphs are isomorphic as labeled multigraphs, by backtracking
/// over vertex bijections. Meant for small test graphs.
pub fn isomorphic(a: &LabeledMultigraph, b: &LabeledMultigraph) -> bool {
    if a.vertex_count != b.vertex_count || a.edges.len() != b.edges.len() {
        return false;
    }
    let n = a.vertex_count;
    let count = |g: &LabeledMultigraph| {
        let mut m = std::collections::HashMap::new();
        for e in &g.edges {
            *m.entry((e.u.min(e.v), e.u.max(e.v), e.label))
                .or_insert(0usize) += 1;
        }
        m
    };
    let (ca, cb) = (count(a), count(b));
    let deg = |g: &LabeledMultigraph| {
        let mut d = vec![0usize; g.vertex_count];
        for e in &g.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    };
    let (da, db) = (deg(a), deg(b));
    fn extend(
        i: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        check: &dyn Fn(&[usize]) -> bool,
        da: &[usize],
        db: &[usize],
    ) -> bool {
        if i == n {
            return check(map);
        }
        for j in 0..n {
            if used[j] || da[i] != db[j] {
                continue;
            }
            used[j] = true;
            map.push(j);
            if extend(i + 1, n, map, used, check, da, db) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    let check = |map: &[usize]| {
        ca.iter().all(|(&(u, v, l), &k)| {
            let (x, y) = (map[u].min(map[v]), map[u].max(map[v]));
            cb.get(&(x, y, l)) == Some(&k)
        })
    };
    extend(0, n, &mut Vec::new(), &mut vec![false; n], &check, &da, &db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Smoothing::{A, B};

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap()
    }

    #[test]
    fn trefoil_tait_graphs() {
        let d = trefoil();
        let black = tait_graph(&d, Color::Black).unwrap();
        let white = tait_graph(&d, Color::White).unwrap();
        assert_eq!((black.vertex_count(), black.edge_count()), (2, 3));
        assert_eq!((white.vertex_count(), white.edge_count()), (3, 3));
        assert_eq!(black.girth().length, Some(2));
        assert_eq!(white.girth().length, Some(3));
    }

    #[test]
    fn trefoil_state_graphs() {
        let d = trefoil();
        let a = state_graph(&d, &State::all(A, 3)).unwrap();
        let b = state_graph(&d, &State::all(B, 3)).unwrap();
        assert_eq!((a.vertex_count(), b.vertex_count()), (2, 3));
        assert!(isomorphic(&a, &tait_graph(&d, Color::Black).unwrap()));
        assert!(isomorphic(&b, &tait_graph(&d, Color::White).unwrap()));
    }

    #[test]
    fn kink_tait_graph_has_a_loop() {
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        let loops: usize = [Color::Black, Color::White]
            .iter()
            .map(|&c| tait_graph(&d, c).unwrap().loops().len())
            .sum();
        assert_eq!(loops, 1);
        let g = tait_graph(&d, Color::Black).unwrap();
        let h = tait_graph(&d, Color::White).unwrap();
        assert!(g.girth().length == Some(1) || h.girth().length == Some(1));
    }

    #[test]
    fn adequacy_and_homogeneity() {
        let theta = LabeledMultigraph::from_edges(2, &[(0, 1, A), (0, 1, A), (0, 1, A)]);
        assert!(theta.is_adequate());
        assert!(!LabeledMultigraph::from_edges(1, &[(0, 0, A)]).is_adequate());
        let bowtie = LabeledMultigraph::from_edges(
            5,
            &[
                (0, 1, A),
                (1, 2, A),
                (2, 0, A),
                (0, 3, B),
                (3, 4, B),
                (4, 0, B),
            ],
        );
        assert!(bowtie.is_homogeneous());
        let mixed = LabeledMultigraph::from_edges(3, &[(0, 1, A), (1, 2, B), (2, 0, A)]);
        assert!(!mixed.is_homogeneous());
    }

    #[test]
    fn blocks() {
        let bowtie = LabeledMultigraph::from_edges(
            5,
            &[
                (0, 1, A),
                (1, 2, A),
                (2, 0, A),
                (0, 3, B),
                (3, 4, B),
                (4, 0, B),
            ],
        );
        let cd = bowtie.cut_components().unwrap();
        assert_eq!(cd.blocks, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(cd.cut_vertices, vec![0]);
        let theta = LabeledMultigraph::from_edges(2, &[(0, 1, A), (0, 1, A), (0, 1, A)]);
        assert_eq!(theta.cut_components().unwrap().blocks.len(), 1);
        let path = LabeledMultigraph::from_edges(4, &[(0, 1, A), (1, 2, A), (2, 3, A)]);
        let cd = path.cut_components().unwrap();
        assert_eq!((cd.blocks.len(), cd.cut_vertices.clone()), (3, vec![1, 2]));
        let split = LabeledMultigraph::from_edges(4, &[(0, 1, A), (2, 3, A)]);
        assert!(split.cut_components().is_err());
    }

    #[test]
    fn loop_is_its_own_block() {
        let g = LabeledMultigraph::from_edges(2, &[(0, 1, A), (0, 1, A), (1, 1, B)]);
        let cd = g.cut_components().unwrap();
        assert_eq!(cd.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(cd.cut_vertices, vec![1]);
    }

    #[test]
    fn girth_cases() {
        assert_eq!(
            LabeledMultigraph::from_edges(1, &[(0, 0, A)])
                .girth()
                .length,
            Some(1)
        );
        let tri = LabeledMultigraph::from_edges(3, &[(0, 1, A), (1, 2, A), (2, 0, A)]);
        let g = tri.girth();
        assert_eq!(g.length, Some(3));
        assert!(tri.is_simple_cycle(&g.cycle));
        let path = LabeledMultigraph::from_edges(3, &[(0, 1, A), (1, 2, A)]);
        assert_eq!(path.girth().length, None);
        // cube graph: girth 4
        let cube: Vec<(usize, usize, Smoothing)> = (0..8usize)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
            .filter(|(u, v)| u < v)
            .map(|(u, v)| (u, v, A))
            .collect();
        let cube = LabeledMultigraph::from_edges(8, &cube);
        let g = cube.girth();
        assert_eq!(g.length, Some(4));
        assert!(cube.is_simple_cycle(&g.cycle));
    }

    #[test]
    fn betti_and_fundamental_cycles() {
        let theta = LabeledMultigraph::from_edges(2, &[(0, 1, A), (0, 1, A), (0, 1, A)]);
        assert_eq!(theta.betti_number(), 2);
        let cyc = theta.fundamental_cycles();
        assert_eq!(cyc.len(), 2);
        assert!(cyc.iter().all(|c| theta.is_simple_cycle(c)));
    }
}
