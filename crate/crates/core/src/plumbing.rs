//! Plumbing decompositions of state and checkerboard surfaces.
//!
//! A state surface splits along each state disk whose circle is a cut vertex
//! of the state graph, so its plumbing factors are the blocks. A checkerboard
//! surface of a reduced alternating diagram also splits along caps that run
//! beside a cycle of its Tait graph and pass once through the opposite
//! surface; repeating that gives a hierarchy whose leaves are annuli and
//! Mobius bands.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Color, DiagramError, LinkDiagram, State};
use crate::graphs::{state_graph, tait_graph, GraphError, Girth, LabeledMultigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("the diagram must be {0}")]
    Hypotheses(String),
    #[error("a tree needs at least two edges, got {0}")]
    TooFewEdges(usize),
    #[error("edge list is not a tree: {0}")]
    NotATree(String),
}

/// One block of a state graph and the state surface it spans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFactor {
    /// Crossings of the block, sorted.
    pub crossings: Vec<usize>,
    /// State circles the block touches, sorted.
    pub circles: Vec<usize>,
    pub girth: Girth,
    pub adequate: bool,
    pub homogeneous: bool,
    pub betti: usize,
    pub euler_characteristic: i64,
}

/// Two blocks plumbed along the state disk of a shared cut vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutGluing {
    pub circle: usize,
    pub blocks: (usize, usize),
}

/// Untwisted plumbing decomposition: nodes are blocks, edges cut vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingTree {
    pub nodes: Vec<BlockFactor>,
    pub edges: Vec<CutGluing>,
}

impl PlumbingTree {
    /// Each plumbing along a disk lowers the Euler characteristic sum by one.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes
            .iter()
            .map(|n| n.euler_characteristic)
            .sum::<i64>()
            - self.edges.len() as i64
    }

    pub fn betti(&self) -> usize {
        self.nodes.iter().map(|n| n.betti).sum()
    }

    /// Shortest cycle over all blocks.
    pub fn girth(&self) -> Option<usize> {
        self.nodes.iter().filter_map(|n| n.girth.length).min()
    }

    /// Whether the edges join the nodes into a tree.
    pub fn is_tree(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.blocks.0), find(&mut parent, e.blocks.1));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

/// Splits a state surface into the state surfaces of its state graph's blocks.
pub fn deplumb_state(d: &LinkDiagram, state: &State) -> Result<PlumbingTree, PlumbingError> {
    let g = state_graph(d, state)?;
    let cut = g.cut_components()?;
    let nodes: Vec<BlockFactor> = cut
        .blocks
        .iter()
        .map(|edges| {
            let (h, circles) = g.induced_on_edges(edges);
            BlockFactor {
                crossings: edges.iter().map(|&e| g.edge(e).crossing).collect(),
                circles,
                girth: h.girth(),
                adequate: h.is_adequate(),
                homogeneous: h.is_homogeneous(),
                betti: h.betti_number(),
                euler_characteristic: h.vertex_count() as i64 - h.edge_count() as i64,
            }
        })
        .collect();
    let mut edges = Vec::new();
    for &v in &cut.cut_vertices {
        let holders: Vec<usize> = (0..nodes.len())
            .filter(|&i| nodes[i].circles.binary_search(&v).is_ok())
            .collect();
        for &b in &holders[1..] {
            edges.push(CutGluing {
                circle: v,
                blocks: (holders[0], b),
            });
        }
    }
    Ok(PlumbingTree { nodes, edges })
}

/// A cap beside a Tait cycle. It runs along the cycle on the surface, passes
/// each band but one, and crosses the opposite surface once in the white
/// region at the band it skips. Cutting there splits the surface into the
/// cycle with one side's bands, and the cycle minus the skipped band with the
/// other side's bands; the two share the chain of disks and bands along the
/// cycle, which is a disk.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistedCapDatum {
    /// Crossings of the cycle in cyclic order.
    pub cycle: Vec<usize>,
    /// Surface-color faces along the cycle; `regions[i]` lies between
    /// `cycle[i]` and `cycle[i + 1]`.
    pub regions: Vec<usize>,
    /// The band the cap does not follow.
    pub skipped: usize,
    /// The one opposite-color face the cap crosses.
    pub white_region: usize,
    pub complexity: usize,
    pub defect: usize,
    pub diameter: usize,
    /// (pinch points, link points) on each component of the shared disk
    /// minus its pinch points.
    pub components: Vec<(usize, usize)>,
    /// Crossings of the factor missing the skipped band, then of the other.
    pub factors: [Vec<usize>; 2],
}

impl TwistedCapDatum {
    pub fn half_complexity(&self) -> usize {
        self.complexity / 2
    }
}

/// Face adjacency of one checkerboard surface: its Tait graph and, for each
/// crossing, the two opposite-color faces meeting there.
#[derive(Debug, Clone)]
pub struct TaitContext {
    pub color: Color,
    pub graph: LabeledMultigraph,
    pub white: Vec<(usize, usize)>,
    pub face_count: usize,
}

impl TaitContext {
    /// Requires a connected reduced alternating diagram on the sphere.
    pub fn new(d: &LinkDiagram, color: Color) -> Result<TaitContext, PlumbingError> {
        let flags = d.classify();
        if !(flags.connected && flags.reduced && flags.alternating && d.genus() == 0) {
            return Err(PlumbingError::Hypotheses(
                "connected, reduced, alternating and planar".into(),
            ));
        }
        let graph = tait_graph(d, color)?;
        let coloring = d.checkerboard_coloring()?;
        let white = (0..d.crossing_count())
            .map(|c| {
                let label = graph.edge(c).label;
                let [q0, q1] = label.channel_quadrants();
                let (a, b) = (d.corner_face(c, q0), d.corner_face(c, q1));
                debug_assert!(coloring.color(a) != color && coloring.color(b) != color);
                (a.min(b), a.max(b))
            })
            .collect();
        Ok(TaitContext {
            color,
            graph,
            white,
            face_count: d.face_count(),
        })
    }

    /// Subgraph spanned by the given crossings and its first Betti number.
    fn betti(&self, crossings: &[usize]) -> usize {
        if crossings.is_empty() {
            return 0;
        }
        self.graph.induced_on_edges(crossings).0.betti_number()
    }

    /// Sides of a cycle: faces are joined across every crossing off it.
    fn side_classes(&self, cycle: &[usize]) -> Vec<usize> {
        let on: BTreeSet<usize> = cycle.iter().copied().collect();
        let mut parent: Vec<usize> = (0..self.face_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (c, &(a, b)) in self.white.iter().enumerate() {
            if !on.contains(&c) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..self.face_count).map(|f| find(&mut parent, f)).collect()
    }

    /// Every cap beside a cycle of `crossings` of length at most `max_len`.
    pub fn caps(&self, crossings: &[usize], max_len: usize) -> Vec<TwistedCapDatum> {
        let (h, _) = self.graph.induced_on_edges(crossings);
        let mut out = Vec::new();
        for len in 2..=max_len {
            for local in simple_cycles(&h, len) {
                let cycle: Vec<usize> = local.iter().map(|&e| crossings[e]).collect();
                out.extend(self.caps_beside(crossings, &cycle));
            }
        }
        out.sort();
        out
    }

    /// Caps of least complexity among cycles of `crossings`, or none when
    /// no cycle admits a nontrivial split.
    pub fn minimal_caps(&self, crossings: &[usize]) -> Vec<TwistedCapDatum> {
        let (h, _) = self.graph.induced_on_edges(crossings);
        if h.betti_number() < 2 {
            return Vec::new();
        }
        let start = h.girth().length.unwrap_or(usize::MAX);
        for len in start..=h.edge_count() {
            let mut found: Vec<TwistedCapDatum> = simple_cycles(&h, len)
                .into_iter()
                .flat_map(|local| {
                    let cycle: Vec<usize> = local.iter().map(|&e| crossings[e]).collect();
                    self.caps_beside(crossings, &cycle)
                })
                .collect();
            if !found.is_empty() {
                found.sort();
                return found;
            }
        }
        Vec::new()
    }

    fn caps_beside(&self, crossings: &[usize], cycle: &[usize]) -> Vec<TwistedCapDatum> {
        let class = self.side_classes(cycle);
        let regions = cycle_regions(&self.graph, cycle);
        let mut out = Vec::new();
        for &skipped in cycle {
            let (wa, wb) = self.white[skipped];
            for (w, other) in [(wa, wb), (wb, wa)] {
                let side = class[w];
                if class[other] == side {
                    continue;
                }
                let mut missing: Vec<usize> = Vec::new();
                let mut full: Vec<usize> = Vec::new();
                for &c in crossings {
                    if cycle.contains(&c) {
                        full.push(c);
                        if c != skipped {
                            missing.push(c);
                        }
                    } else if class[self.white[c].0] == side {
                        missing.push(c);
                    } else {
                        full.push(c);
                    }
                }
                if self.betti(&missing) == 0 || self.betti(&full) == 0 {
                    continue;
                }
                let complexity = 2 * (cycle.len() - 1);
                out.push(TwistedCapDatum {
                    cycle: cycle.to_vec(),
                    regions: regions.clone(),
                    skipped,
                    white_region: w,
                    complexity,
                    defect: 0,
                    diameter: 0,
                    components: vec![(0, complexity)],
                    factors: [missing, full],
                });
            }
        }
        out
    }

    /// Rules a cap datum must meet inside the surface on `crossings`; empty
    /// when it is valid.
    pub fn check_cap(&self, crossings: &[usize], cap: &TwistedCapDatum) -> Vec<String> {
        let mut bad = Vec::new();
        let index: BTreeMap<usize, usize> =
            crossings.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let local: Option<Vec<usize>> = cap.cycle.iter().map(|c| index.get(c).copied()).collect();
        let (h, _) = self.graph.induced_on_edges(crossings);
        match local {
            Some(l) if l.len() >= 2 && h.is_simple_cycle(&l) => {}
            _ => bad.push("cycle is not a simple cycle of length two or more".into()),
        }
        if !cap.cycle.contains(&cap.skipped) {
            bad.push("skipped band is off the cycle".into());
        }
        if cap.complexity != 2 * cap.cycle.len().saturating_sub(1) {
            bad.push("complexity is not twice the followed bands".into());
        }
        let (wa, wb) = self.white.get(cap.skipped).copied().unwrap_or((usize::MAX, usize::MAX));
        if cap.white_region != wa && cap.white_region != wb {
            bad.push("white region is not at the skipped band".into());
        } else {
            // one crossing of the opposite surface, on the side that lost the band
            let class = self.side_classes(&cap.cycle);
            let side = class[cap.white_region];
            let off_side = cap.factors[0]
                .iter()
                .filter(|c| !cap.cycle.contains(c))
                .all(|&c| class[self.white[c].0] == side);
            if !off_side {
                bad.push("first factor has bands from both sides".into());
            }
        }
        let f0: BTreeSet<usize> = cap.factors[0].iter().copied().collect();
        let f1: BTreeSet<usize> = cap.factors[1].iter().copied().collect();
        let all: BTreeSet<usize> = crossings.iter().copied().collect();
        let chain: BTreeSet<usize> = cap
            .cycle
            .iter()
            .copied()
            .filter(|&c| c != cap.skipped)
            .collect();
        if f0.union(&f1).copied().collect::<BTreeSet<_>>() != all {
            bad.push("factors do not cover the surface".into());
        }
        if f0.intersection(&f1).copied().collect::<BTreeSet<_>>() != chain {
            bad.push("factors do not meet in the chain along the cycle".into());
        }
        if self.betti(&cap.factors[0]) == 0 || self.betti(&cap.factors[1]) == 0 {
            bad.push("a factor is a disk, so the cap is fake".into());
        }
        let v = validate_twisted_plumbing(cap.defect, cap.diameter, cap.complexity, &cap.components);
        bad.extend(v.violations);
        bad
    }
}

/// Surface-color faces met along a cycle given by crossings in order.
fn cycle_regions(g: &LabeledMultigraph, cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let a = g.edge(cycle[i]);
            let b = g.edge(cycle[(i + 1) % n]);
            let v = if a.u == b.u || a.u == b.v { a.u } else { a.v };
            g.vertex_source[v]
        })
        .collect()
}

/// Simple cycles with exactly `len` edges, each once, as edge lists in
/// order, sorted by their edge sets.
pub fn simple_cycles(g: &LabeledMultigraph, len: usize) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut found: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut path_edges = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    fn walk(
        start: usize,
        at: usize,
        len: usize,
        adj: &[Vec<(usize, usize)>],
        path_edges: &mut Vec<usize>,
        on_path: &mut [bool],
        found: &mut BTreeMap<Vec<usize>, Vec<usize>>,
    ) {
        for &(e, w) in &adj[at] {
            if path_edges.contains(&e) || w == at {
                continue;
            }
            if w == start && path_edges.len() + 1 == len && len >= 2 {
                path_edges.push(e);
                let mut key = path_edges.clone();
                key.sort_unstable();
                found.entry(key).or_insert_with(|| path_edges.clone());
                path_edges.pop();
                continue;
            }
            if w <= start || on_path[w] || path_edges.len() + 1 >= len {
                continue;
            }
            on_path[w] = true;
            path_edges.push(e);
            walk(start, w, len, adj, path_edges, on_path, found);
            path_edges.pop();
            on_path[w] = false;
        }
    }
    for s in 0..g.vertex_count() {
        on_path[s] = true;
        walk(s, s, len, &adj, &mut path_edges, &mut on_path, &mut found);
        on_path[s] = false;
    }
    found.into_values().collect()
}

/// All caps beside Tait cycles whose complexity is at most `2 * max_r`.
pub fn find_diagrammatic_twisted_caps(
    d: &LinkDiagram,
    color: Color,
    max_r: usize,
) -> Result<Vec<TwistedCapDatum>, PlumbingError> {
    let ctx = TaitContext::new(d, color)?;
    let all: Vec<usize> = (0..d.crossing_count()).collect();
    Ok(ctx.caps(&all, max_r + 1))
}

/// A subsurface in a hierarchical twisted deplumbing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyNode {
    pub crossings: Vec<usize>,
    pub betti: usize,
    pub euler_characteristic: i64,
    /// Least cap complexity found, `None` when no cap exists.
    pub least_complexity: Option<usize>,
    pub split: Option<HierarchySplit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchySplit {
    pub cap: TwistedCapDatum,
    pub children: [usize; 2],
}

/// Repeated splitting along least-complexity caps. Node 0 is the surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedHierarchy {
    pub color: Color,
    /// Splits happen while the least complexity is below this; `None`
    /// splits until every leaf is an annulus or Mobius band.
    pub threshold: Option<usize>,
    pub nodes: Vec<HierarchyNode>,
}

impl TwistedHierarchy {
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].split.is_none())
            .collect()
    }

    /// Complexities of the splits in the order they were made.
    pub fn complexities(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| n.split.as_ref().map(|s| s.cap.complexity))
            .collect()
    }

    /// Each split shares one disk, so the Euler characteristics of the two
    /// children add to one more than the parent's.
    pub fn reassembles(&self) -> bool {
        self.nodes.iter().all(|n| match &n.split {
            None => true,
            Some(s) => {
                let [a, b] = s.children;
                let (a, b) = (&self.nodes[a], &self.nodes[b]);
                a.euler_characteristic + b.euler_characteristic - 1 == n.euler_characteristic
                    && a.betti + b.betti == n.betti
            }
        })
    }
}

/// Splits along a least-complexity cap, smallest datum first, while the
/// complexity is below `threshold` (every time when it is `None`).
pub fn hierarchical_twisted_deplumb(
    d: &LinkDiagram,
    color: Color,
    threshold: Option<usize>,
) -> Result<TwistedHierarchy, PlumbingError> {
    let ctx = TaitContext::new(d, color)?;
    let mut nodes = Vec::new();
    let mut queue = vec![(0..d.crossing_count()).collect::<Vec<usize>>()];
    // breadth first, so node order follows split depth
    let mut next = 0;
    nodes.push(hierarchy_node(&ctx, queue[0].clone()));
    while next < nodes.len() {
        let caps = ctx.minimal_caps(&nodes[next].crossings);
        if let Some(cap) = caps.into_iter().next() {
            if threshold.is_none_or(|t| cap.complexity < t) {
                let first = nodes.len();
                for f in &cap.factors {
                    nodes.push(hierarchy_node(&ctx, f.clone()));
                    queue.push(f.clone());
                }
                nodes[next].split = Some(HierarchySplit {
                    cap,
                    children: [first, first + 1],
                });
            }
        }
        next += 1;
    }
    Ok(TwistedHierarchy {
        color,
        threshold,
        nodes,
    })
}

fn hierarchy_node(ctx: &TaitContext, crossings: Vec<usize>) -> HierarchyNode {
    let (h, _) = ctx.graph.induced_on_edges(&crossings);
    let least = ctx.minimal_caps(&crossings).first().map(|c| c.complexity);
    HierarchyNode {
        betti: h.betti_number(),
        euler_characteristic: h.vertex_count() as i64 - h.edge_count() as i64,
        least_complexity: least,
        crossings,
        split: None,
    }
}

/// Outcome of the numeric checks on a twisted plumbing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingValidation {
    pub defect: usize,
    pub diameter: usize,
    pub boundary_l: usize,
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Checks a twisted plumbing with `m` pinch points, pinch tree diameter `d`
/// and `boundary_l` link points on the shared disk's boundary. Components
/// are (pinch points, link points) for each piece of the disk minus its
/// pinch points; an empty list skips the per-component rules.
pub fn validate_twisted_plumbing(
    m: usize,
    d: usize,
    boundary_l: usize,
    components: &[(usize, usize)],
) -> PlumbingValidation {
    let mut violations = Vec::new();
    if d > m {
        violations.push(format!("diameter {d} exceeds defect {m}"));
    }
    if m >= 1 && boundary_l < 2 * m + 4 {
        violations.push(format!(
            "defect {m} needs at least {} link points, got {boundary_l}",
            2 * m + 4
        ));
    }
    if m >= 1 && boundary_l < 2 * d + 4 {
        violations.push(format!(
            "diameter {d} needs at least {} link points, got {boundary_l}",
            2 * d + 4
        ));
    }
    if !components.is_empty() {
        // the pinch tree has one vertex per component and one edge per pinch
        let pinches: usize = components.iter().map(|c| c.0).sum();
        let points: usize = components.iter().map(|c| c.1).sum();
        if components.len() != m + 1 || pinches != 2 * m {
            violations.push(format!(
                "{} components with {pinches} pinch ends do not form a tree with {m} edges",
                components.len()
            ));
        }
        if points != boundary_l {
            violations.push(format!(
                "components carry {points} link points, not {boundary_l}"
            ));
        }
    }
    for (i, &(p, l)) in components.iter().enumerate() {
        if p % 2 != l % 2 {
            violations.push(format!(
                "component {i} has {p} pinch points but {l} link points, of different parity"
            ));
        }
        if p == 1 && l < 3 {
            violations.push(format!(
                "component {i} has one pinch point and needs at least 3 link points, got {l}"
            ));
        }
        if p == 2 && l < 2 {
            violations.push(format!(
                "component {i} has two pinch points and needs at least 2 link points, got {l}"
            ));
        }
    }
    PlumbingValidation {
        defect: m,
        diameter: d,
        boundary_l,
        pass: violations.is_empty(),
        violations,
    }
}

/// Both sides of the degree count bound on a pinch tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCount {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// For a tree with `n_k` vertices of degree `k`, compares
/// `3 n_1 + 2 n_2 + n_3 + n_5 + n_7 + ...` with `2 |E| + 4`.
pub fn tree_count_inequality(edges: &[(usize, usize)]) -> Result<TreeCount, PlumbingError> {
    if edges.len() < 2 {
        return Err(PlumbingError::TooFewEdges(edges.len()));
    }
    let n = edges.len() + 1;
    let mut degree = vec![0usize; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(PlumbingError::NotATree(format!(
                "vertex {} out of range for {} edges",
                a.max(b),
                edges.len()
            )));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(PlumbingError::NotATree(format!("edge ({a}, {b}) closes a cycle")));
        }
        parent[ra] = rb;
        degree[a] += 1;
        degree[b] += 1;
    }
    let lhs = degree
        .iter()
        .map(|&k| match k {
            1 => 3,
            2 => 2,
            k if k % 2 == 1 => 1,
            _ => 0,
        })
        .sum();
    let rhs = 2 * edges.len() + 4;
    Ok(TreeCount {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// A uniformly random labeled tree with `edges` edges, from a random Prufer
/// sequence.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, edges: usize) -> Vec<(usize, usize)> {
    let n = edges + 1;
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &code {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut out = Vec::with_capacity(edges);
    for &x in &code {
        let leaf = leaves.pop_first().expect("a leaf remains");
        out.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    out.push((last[0], last[1]));
    out
}

/// How two factors are glued, for the lower bound on the essence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Gluing {
    /// Plumbing along a disk.
    Untwisted,
    /// Twisted plumbing along a cap of this complexity; `least` says the
    /// complexity equals the contractible essence of the glued surface.
    Twisted { complexity: usize, least: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PlumbBoundError {
    #[error("no factors")]
    Empty,
    #[error("factor {index} has essence bound {bound} < 2, so it may not be pi1-essential")]
    InessentialFactor { index: usize, bound: usize },
    #[error("twisted gluing {index} has complexity {complexity} above the factor bound {bound}")]
    ComplexityTooLarge {
        index: usize,
        complexity: usize,
        bound: usize,
    },
    #[error("twisted gluing {index} is not of least complexity")]
    NotLeast { index: usize },
}

/// Lower bound on the essence of a plumbing from lower bounds on its
/// factors: the least factor bound, provided every factor is pi1-essential
/// and every twisted gluing has least complexity no larger than that bound.
pub fn plumb_essence_lower_bound(
    factors: &[usize],
    gluings: &[Gluing],
) -> Result<usize, PlumbBoundError> {
    let n = *factors.iter().min().ok_or(PlumbBoundError::Empty)?;
    if let Some(index) = factors.iter().position(|&b| b < 2) {
        return Err(PlumbBoundError::InessentialFactor {
            index,
            bound: factors[index],
        });
    }
    for (index, g) in gluings.iter().enumerate() {
        if let Gluing::Twisted { complexity, least } = *g {
            if !least {
                return Err(PlumbBoundError::NotLeast { index });
            }
            if complexity > n {
                return Err(PlumbBoundError::ComplexityTooLarge {
                    index,
                    complexity,
                    bound: n,
                });
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{PlaneGraph, Smoothing};
    use crate::fixtures;
    use rand::SeedableRng;

    #[test]
    fn validator_table() {
        let v = validate_twisted_plumbing(1, 1, 5, &[]);
        assert!(!v.pass);
        assert!(validate_twisted_plumbing(1, 1, 6, &[]).pass);
        let v = validate_twisted_plumbing(2, 3, 10, &[]);
        assert!(!v.pass);
        assert!(v.violations.iter().any(|s| s.contains("exceeds defect")));
        assert!(validate_twisted_plumbing(0, 0, 2, &[]).pass);
    }

    #[test]
    fn component_rules() {
        // one pinch joins two pieces; each needs an odd count of at least 3
        assert!(validate_twisted_plumbing(1, 1, 6, &[(1, 3), (1, 3)]).pass);
        let v = validate_twisted_plumbing(1, 1, 6, &[(1, 2), (1, 4)]);
        // both parities fail and the first piece is also too short
        assert_eq!(v.violations.len(), 3);
        let v = validate_twisted_plumbing(1, 1, 6, &[(1, 1), (1, 5)]);
        assert!(v.violations.iter().any(|s| s.contains("at least 3")));
        // a middle piece with two pinches needs two link points
        assert!(validate_twisted_plumbing(2, 2, 8, &[(1, 3), (2, 2), (1, 3)]).pass);
        let v = validate_twisted_plumbing(2, 2, 8, &[(1, 3), (2, 0), (1, 5)]);
        assert!(v.violations.iter().any(|s| s.contains("at least 2")));
    }

    #[test]
    fn validation_is_monotone_in_link_points() {
        for m in 0..4 {
            for d in 0..4 {
                let mut passed = false;
                for l in 0..20 {
                    let p = validate_twisted_plumbing(m, d, l, &[]).pass;
                    assert!(!passed || p, "m={m} d={d} l={l}");
                    passed |= p;
                }
            }
        }
    }

    #[test]
    fn tree_counts() {
        let path = tree_count_inequality(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!((path.lhs, path.rhs, path.holds), (8, 8, true));
        let star = tree_count_inequality(&[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!((star.lhs, star.rhs, star.holds), (10, 10, true));
        assert!(matches!(
            tree_count_inequality(&[(0, 1)]),
            Err(PlumbingError::TooFewEdges(1))
        ));
        assert!(matches!(
            tree_count_inequality(&[(0, 1), (1, 0)]),
            Err(PlumbingError::NotATree(_))
        ));
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for e in 2..60 {
            let t = random_tree(&mut rng, e);
            assert_eq!(t.len(), e);
            assert!(tree_count_inequality(&t).unwrap().holds);
        }
    }

    #[test]
    fn plumbing_bounds() {
        assert_eq!(plumb_essence_lower_bound(&[3, 4], &[Gluing::Untwisted]), Ok(3));
        let tw = Gluing::Twisted {
            complexity: 4,
            least: true,
        };
        assert_eq!(plumb_essence_lower_bound(&[4, 4], &[tw]), Ok(4));
        assert!(matches!(
            plumb_essence_lower_bound(&[1, 5], &[Gluing::Untwisted]),
            Err(PlumbBoundError::InessentialFactor { index: 0, .. })
        ));
        assert!(plumb_essence_lower_bound(&[3, 3], &[tw]).is_err());
    }

    fn checkerboard_state(d: &LinkDiagram, color: Color) -> State {
        State::checkerboard(d, &d.checkerboard_coloring().unwrap(), color)
    }

    #[test]
    fn blocks_of_state_graphs() {
        // two triangles sharing a vertex
        let mut g = PlaneGraph::cycle(3, Smoothing::A);
        g.attach_cycle(0, 0, 3, Smoothing::A);
        let d = g.to_diagram().unwrap();
        let color = g.vertex_color(&d).unwrap();
        let t = deplumb_state(&d, &checkerboard_state(&d, color)).unwrap();
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.edges.len(), 1);
        assert!(t.is_tree());
        assert_eq!(t.girth(), Some(3));

        let theta = fixtures::trefoil();
        let state = checkerboard_state(&theta.diagram, theta.color);
        let t = deplumb_state(&theta.diagram, &state).unwrap();
        assert_eq!(t.nodes.len(), 1);
    }

    #[test]
    fn f1_has_seven_factors() {
        let f = fixtures::f1();
        let state = checkerboard_state(&f.diagram, f.color);
        let t = deplumb_state(&f.diagram, &state).unwrap();
        assert_eq!(t.nodes.len(), 7);
        assert!(t.is_tree());
        let res = f.diagram.resolve_state(&state).unwrap();
        assert_eq!(t.euler_characteristic(), res.euler_characteristic());
    }

    #[test]
    fn trefoil_caps() {
        let f = fixtures::trefoil();
        let caps = find_diagrammatic_twisted_caps(&f.diagram, f.color, 3).unwrap();
        assert!(!caps.is_empty());
        assert_eq!(caps.iter().map(|c| c.complexity).min(), Some(2));
        let ctx = TaitContext::new(&f.diagram, f.color).unwrap();
        let all: Vec<usize> = (0..3).collect();
        for c in &caps {
            assert!(ctx.check_cap(&all, c).is_empty(), "{c:?}");
        }
        // the white surface is a Mobius band with three half twists
        let caps = find_diagrammatic_twisted_caps(&f.diagram, f.color.opposite(), 3).unwrap();
        assert!(caps.is_empty());
    }

    #[test]
    fn annulus_has_no_caps() {
        let f = fixtures::twisted_annulus(4);
        for r in 1..5 {
            assert!(find_diagrammatic_twisted_caps(&f.diagram, f.color, r)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn trefoil_splits_into_two_hopf_bands() {
        let f = fixtures::trefoil();
        let h = hierarchical_twisted_deplumb(&f.diagram, f.color, None).unwrap();
        let leaves = h.leaves();
        assert_eq!(leaves.len(), 2);
        for &l in &leaves {
            let n = &h.nodes[l];
            assert_eq!((n.betti, n.euler_characteristic, n.crossings.len()), (1, 0, 2));
        }
        assert_eq!(h.nodes[0].euler_characteristic, -1);
        assert!(h.reassembles());
        assert_eq!(h.complexities(), vec![2]);
    }

    #[test]
    fn hierarchy_leaves_are_bands() {
        let f = fixtures::borromean();
        for color in [f.color, f.color.opposite()] {
            let h = hierarchical_twisted_deplumb(&f.diagram, color, None).unwrap();
            assert!(h.reassembles());
            let root = &h.nodes[0];
            assert_eq!(h.leaves().len(), root.betti);
            assert!(h.leaves().iter().all(|&l| h.nodes[l].betti == 1));
        }
        // a threshold at the least complexity leaves the surface whole
        let h = hierarchical_twisted_deplumb(&f.diagram, f.color, Some(4)).unwrap();
        assert_eq!(h.nodes.len(), 1);
    }

    #[test]
    fn cycles_of_small_graphs() {
        let f = fixtures::borromean();
        let g = tait_graph(&f.diagram, f.color).unwrap();
        // K4 has four triangles and three 4-cycles
        assert_eq!(simple_cycles(&g, 3).len(), 4);
        assert_eq!(simple_cycles(&g, 4).len(), 3);
        let t = fixtures::trefoil();
        let g = tait_graph(&t.diagram, t.color).unwrap();
        assert_eq!(simple_cycles(&g, 2).len(), 3);
    }
}
