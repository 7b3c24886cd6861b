//! Closed assemblies of subdisks, their boundary words and verdicts.
//!
//! A closed disk glued from subdisks exists with every height at most `n`
//! exactly when some cap chord is realized at level at most `n` on both
//! sides: the two branches hanging from that chord form the tree. Trees are
//! built by backtracking over the recorded subdisks, checking embeddedness
//! cell by cell, and every tree's boundary is projected to the Tait graph,
//! where free reduction decides whether it is essential in the surface.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::enumerate::{
    describe, key, run, subdisk_height, BudgetExceeded, ChordKey, RawSubdisk, Walker,
};
use super::{
    weave, FlatCapDecomposition, SearchConfig, SearchMode, Side, SpotId, Strata, StratumSummary,
    SubdiskType,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapSearchError {
    #[error("node budget exceeded after {nodes} nodes; the search is undecided")]
    BudgetExceeded { nodes: u64 },
    #[error("the assembly is not closed: {0}")]
    NotClosed(String),
}

/// A passage of `∂X` through a vertical arc, or a wrap around the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Letter {
    /// Crossing the Tait edge of `crossing` from its first surface quadrant
    /// to its second (`forward`) or back.
    Edge {
        crossing: usize,
        forward: bool,
    },
    Touch {
        edge: usize,
    },
}

impl Letter {
    fn inverse_of(self, other: Letter) -> bool {
        match (self, other) {
            (
                Letter::Edge {
                    crossing: a,
                    forward: x,
                },
                Letter::Edge {
                    crossing: b,
                    forward: y,
                },
            ) => a == b && x != y,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordReport {
    /// The closed walk of `∂X` in the Tait graph.
    pub word: Vec<Letter>,
    /// Its free cyclic reduction.
    pub reduced: Vec<Letter>,
    pub essential: bool,
    pub touches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyNode {
    pub subdisk: SubdiskType,
    pub parent: Option<usize>,
    /// Index of the chord glued to the parent, in this node's chord order.
    pub parent_chord: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapAssembly {
    pub mode: SearchMode,
    pub nodes: Vec<AssemblyNode>,
    pub max_height: u32,
    pub touches: usize,
    pub boundary_trace: Vec<Letter>,
    #[serde(skip)]
    raw: Vec<RawNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct RawNode {
    side: Side,
    /// Chords in traversal order; a child traverses its parent chord backwards.
    chords: Vec<(SpotId, SpotId)>,
    parent: Option<(usize, usize)>,
    children: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FakeDiagnostics {
    pub odd_fake: bool,
    pub string_contradiction: bool,
    pub messages: Vec<String>,
}

impl FakeDiagnostics {
    pub fn consistent(&self) -> bool {
        !self.odd_fake && !self.string_contradiction
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapVerdict {
    pub closed: bool,
    pub boundary_l_count: usize,
    pub essential: bool,
    pub fake_flags: FakeDiagnostics,
}

/// The facts about a candidate cap that the fake-cap rules look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FakeCandidate {
    pub l_count: usize,
    /// Marked fake: the boundary already bounds a disk upstairs.
    pub fake: bool,
    /// Longest cyclic run of consecutive boundary arcs between link touches
    /// that are not parallel into the link.
    pub essential_run: usize,
    /// Whether a simplifying move is still available.
    pub simplifiable: bool,
}

/// Flags candidates whose fake marking contradicts the parity rule (a fake
/// cap in simplest position meets the link an even number of times) or the
/// string rule (a fake cap meeting the link `2r` times has a boundary arc
/// parallel into the link among any `r` consecutive arcs).
pub fn fake_cap_filters(c: &FakeCandidate) -> FakeDiagnostics {
    let mut messages = Vec::new();
    let odd_fake = c.fake && c.l_count % 2 == 1 && !c.simplifiable;
    if odd_fake {
        messages.push(format!(
            "marked fake with {} link touches, which is odd",
            c.l_count
        ));
    }
    let r = c.l_count / 2;
    let string_contradiction = c.fake && c.l_count.is_multiple_of(2) && r >= 1 && c.essential_run >= r;
    if string_contradiction {
        messages.push(format!(
            "marked fake with {} link touches but {} consecutive arcs are not parallel into the link",
            c.l_count, c.essential_run
        ));
    }
    FakeDiagnostics {
        odd_fake,
        string_contradiction,
        messages,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapSearchOutcome {
    /// At least one essential closed cap was assembled.
    Found { caps: usize },
    /// No cap of the allowed height exists; `reason` names the argument.
    NoneExists { reason: NoneReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoneReason {
    /// No bigon exists, and every disk tree has a leaf.
    EmptyBaseStratum,
    /// No cap chord is realized on both sides within the height bound.
    NoClosedInterface,
    /// Trees exist for the relaxed count, but none is embedded and essential.
    NoAdmissibleAssembly,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapSearchReport {
    pub mode: SearchMode,
    pub max_height: u32,
    pub max_touches: usize,
    /// Subdisks above height 0 are searched among those with at most this
    /// many chords that pass each port once; height 0 is always complete.
    pub max_chords: usize,
    pub strata: Vec<StratumSummary>,
    pub closed_interfaces: usize,
    pub caps: Vec<(CapAssembly, CapVerdict)>,
    /// Closed assemblies rejected because their boundary is inessential.
    pub inessential_closed: usize,
    pub outcome: CapSearchOutcome,
    pub nodes: u64,
}

/// Searches for closed caps with every subdisk of height at most
/// `cfg.max_height` and at most `cfg.max_touches` link touches.
pub fn find_bounded_height_caps(
    dec: &FlatCapDecomposition,
    cfg: &SearchConfig,
) -> Result<(Strata, CapSearchReport), CapSearchError> {
    let walker = Walker::new(dec, *cfg);
    let strata =
        run(&walker).map_err(|BudgetExceeded(n)| CapSearchError::BudgetExceeded { nodes: n })?;
    let n = cfg.max_height;
    let closed: Vec<ChordKey> = strata.level[0]
        .iter()
        .filter(|&(k, &la)| la <= n && strata.level[1].get(k).is_some_and(|&lb| lb <= n))
        .map(|(k, _)| *k)
        .collect();
    let mut builder = TreeBuilder::new(dec, cfg, &strata, walker.nodes());
    for &k in &closed {
        if builder.caps.len() >= cfg.max_caps {
            break;
        }
        builder.assemble_at(k)?;
    }
    let outcome = if !builder.caps.is_empty() {
        CapSearchOutcome::Found {
            caps: builder.caps.len(),
        }
    } else if strata.levels[0].is_empty() {
        CapSearchOutcome::NoneExists {
            reason: NoneReason::EmptyBaseStratum,
        }
    } else if closed.is_empty() {
        CapSearchOutcome::NoneExists {
            reason: NoneReason::NoClosedInterface,
        }
    } else {
        CapSearchOutcome::NoneExists {
            reason: NoneReason::NoAdmissibleAssembly,
        }
    };
    let report = CapSearchReport {
        mode: cfg.mode,
        max_height: n,
        max_touches: cfg.max_touches,
        max_chords: cfg.max_chords,
        strata: strata.summary(),
        closed_interfaces: closed.len(),
        caps: builder.caps,
        inessential_closed: builder.inessential,
        outcome,
        nodes: builder.nodes,
    };
    Ok((strata, report))
}

/// Backtracking over disk trees glued from recorded subdisks.
struct TreeBuilder<'a> {
    dec: &'a FlatCapDecomposition,
    cfg: &'a SearchConfig,
    strata: &'a Strata,
    /// For each side and chord, the subdisks having it, with the branch
    /// height when that chord points up.
    witnesses: [BTreeMap<ChordKey, Vec<(usize, u32)>>; 2],
    caps: Vec<(CapAssembly, CapVerdict)>,
    inessential: usize,
    nodes: u64,
}

struct Pending {
    side: Side,
    /// Chord as the parent traverses it.
    chord: (SpotId, SpotId),
    allowance: u32,
    parent: usize,
    parent_index: usize,
}

impl<'a> TreeBuilder<'a> {
    fn new(
        dec: &'a FlatCapDecomposition,
        cfg: &'a SearchConfig,
        strata: &'a Strata,
        nodes: u64,
    ) -> TreeBuilder<'a> {
        let mut witnesses: [BTreeMap<ChordKey, Vec<(usize, u32)>>; 2] =
            [BTreeMap::new(), BTreeMap::new()];
        for (i, (s, _)) in strata.raw.iter().enumerate() {
            let far = &strata.level[s.side.other().index()];
            let ks: Vec<ChordKey> = s.keys().collect();
            for (j, k) in ks.iter().enumerate() {
                let branch = ks
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != j)
                    .map(|(_, o)| far.get(o).map(|l| l + 1))
                    .try_fold(0u32, |acc, l| l.map(|l| acc.max(l)));
                if let Some(b) = branch {
                    witnesses[s.side.index()]
                        .entry(*k)
                        .or_default()
                        .push((i, b));
                }
            }
        }
        TreeBuilder {
            dec,
            cfg,
            strata,
            witnesses,
            caps: Vec::new(),
            inessential: 0,
            nodes,
        }
    }

    fn tick(&mut self) -> Result<(), CapSearchError> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(CapSearchError::BudgetExceeded { nodes: self.nodes });
        }
        Ok(())
    }

    /// Roots a tree at the upper subdisks through chord `k`.
    fn assemble_at(&mut self, k: ChordKey) -> Result<(), CapSearchError> {
        let n = self.cfg.max_height;
        let roots: Vec<usize> = self.witnesses[0]
            .get(&k)
            .map(|v| v.iter().filter(|w| w.1 <= n).map(|w| w.0).collect())
            .unwrap_or_default();
        for r in roots {
            if self.caps.len() >= self.cfg.max_caps {
                break;
            }
            let s = &self.strata.raw[r].0;
            let mut nodes = vec![RawNode {
                side: s.side,
                chords: s.chords.clone(),
                parent: None,
                children: BTreeMap::new(),
            }];
            let mut pending: Vec<Pending> = s
                .chords
                .iter()
                .enumerate()
                .map(|(i, &c)| Pending {
                    side: Side::Below,
                    chord: c,
                    allowance: if key(c.0, c.1) == k {
                        n
                    } else {
                        n.saturating_sub(1)
                    },
                    parent: 0,
                    parent_index: i,
                })
                .collect();
            if s.chords.iter().any(|&c| key(c.0, c.1) != k) && n == 0 {
                continue;
            }
            if !self.admissible(&nodes) {
                continue;
            }
            self.grow(&mut nodes, &mut pending)?;
        }
        Ok(())
    }

    fn grow(
        &mut self,
        nodes: &mut Vec<RawNode>,
        pending: &mut Vec<Pending>,
    ) -> Result<(), CapSearchError> {
        if self.caps.len() >= self.cfg.max_caps {
            return Ok(());
        }
        self.tick()?;
        let Some(p) = pending.pop() else {
            self.finish(nodes);
            return Ok(());
        };
        let k = key(p.chord.0, p.chord.1);
        let options: Vec<(usize, u32)> = self.witnesses[p.side.index()]
            .get(&k)
            .map(|v| v.iter().copied().filter(|w| w.1 <= p.allowance).collect())
            .unwrap_or_default();
        for (w, _) in options {
            let s: &RawSubdisk = &self.strata.raw[w].0;
            let mut chords = s.chords.clone();
            // orient so the shared chord runs backwards
            let idx = match chords.iter().position(|&c| c == (p.chord.1, p.chord.0)) {
                Some(i) => i,
                None => {
                    chords = chords.iter().rev().map(|&(a, b)| (b, a)).collect();
                    chords
                        .iter()
                        .position(|&c| c == (p.chord.1, p.chord.0))
                        .expect("witness holds the chord")
                }
            };
            let id = nodes.len();
            nodes.push(RawNode {
                side: p.side,
                chords: chords.clone(),
                parent: Some((p.parent, idx)),
                children: BTreeMap::new(),
            });
            nodes[p.parent].children.insert(p.parent_index, id);
            if self.admissible(nodes) {
                let before = pending.len();
                for (i, &c) in chords.iter().enumerate() {
                    if i != idx {
                        pending.push(Pending {
                            side: p.side.other(),
                            chord: c,
                            allowance: p.allowance.saturating_sub(1),
                            parent: id,
                            parent_index: i,
                        });
                    }
                }
                self.grow(nodes, pending)?;
                pending.truncate(before);
            }
            nodes[p.parent].children.remove(&p.parent_index);
            nodes.pop();
            if self.caps.len() >= self.cfg.max_caps {
                break;
            }
        }
        pending.push(p);
        Ok(())
    }

    /// The touch budget, and a common order of crossing points on every
    /// vertical arc and edge under which the pieces embed. Arcs of `X ∩ W`
    /// share one sheet per cap face. Surface chords share one sheet per face
    /// and side, or per face when the boundary must embed in `F`.
    fn admissible(&self, nodes: &[RawNode]) -> bool {
        let dec = self.dec;
        // every chord's arc, and whether the node runs it backwards
        let mut arc_of: Vec<Vec<(usize, bool)>> = nodes
            .iter()
            .map(|nd| vec![(0, false); nd.chords.len()])
            .collect();
        let mut arcs = 0;
        let mut touches = 0;
        for (i, nd) in nodes.iter().enumerate() {
            for (j, &(a, b)) in nd.chords.iter().enumerate() {
                if nd.parent.is_none_or(|p| p.1 != j) {
                    arc_of[i][j] = (arcs, false);
                    arcs += 1;
                    touches += usize::from(dec.is_touch(a)) + usize::from(dec.is_touch(b));
                }
            }
        }
        if touches > self.cfg.max_touches {
            return false;
        }
        for (i, nd) in nodes.iter().enumerate() {
            if let Some((p, j)) = nd.parent {
                let k = nodes[p]
                    .children
                    .iter()
                    .find(|&(_, &c)| c == i)
                    .map(|(&k, _)| k)
                    .expect("child is listed");
                arc_of[i][j] = (arc_of[p][k].0, true);
            }
        }
        // point at the start and end of chord j as node i runs it
        let ends = |i: usize, j: usize| {
            let (arc, back) = arc_of[i][j];
            if back {
                (2 * arc + 1, 2 * arc)
            } else {
                (2 * arc, 2 * arc + 1)
            }
        };
        let mut sheets: BTreeMap<(usize, usize), Vec<(weave::End, weave::End)>> = BTreeMap::new();
        let split = usize::from(!self.cfg.mode.embedded_boundary());
        for (i, nd) in nodes.iter().enumerate() {
            let k = nd.chords.len();
            for (j, &(a, b)) in nd.chords.iter().enumerate() {
                let (pa, pb) = ends(i, j);
                if !arc_of[i][j].1 {
                    let f = dec.spot_face(a, false);
                    sheets
                        .entry((f, 2))
                        .or_default()
                        .push((dec.weave_end(a, f, pa), dec.weave_end(b, f, pb)));
                }
                let next = (j + 1) % k;
                let (t, t2) = (dec.port(nd.side, b), dec.port(nd.side, nd.chords[next].0));
                let f = dec.spot_face(t, true);
                let sheet = (f, split * nd.side.index());
                sheets.entry(sheet).or_default().push((
                    dec.weave_end(t, f, pb),
                    dec.weave_end(t2, f, ends(i, next).0),
                ));
            }
        }
        let sheets: Vec<_> = sheets.into_values().collect();
        weave::consistent(&sheets, 2 * arcs)
    }

    fn finish(&mut self, nodes: &[RawNode]) {
        let asm = self.build(nodes);
        let word = word_of(self.dec, &asm.raw);
        if !word.essential {
            self.inessential += 1;
            return;
        }
        let verdict = verdict_for(self.dec, &asm, &word);
        self.caps.push((asm, verdict));
    }

    fn build(&self, nodes: &[RawNode]) -> CapAssembly {
        let far_height = |nd: &RawNode| {
            let s = RawSubdisk {
                side: nd.side,
                chords: nd.chords.clone(),
            };
            subdisk_height(&s, &self.strata.level).unwrap_or(0)
        };
        let heights = prune_heights(nodes);
        let out_nodes: Vec<AssemblyNode> = nodes
            .iter()
            .zip(&heights)
            .map(|(nd, &h)| {
                let s = RawSubdisk {
                    side: nd.side,
                    chords: nd.chords.clone(),
                };
                debug_assert!(far_height(nd) <= h);
                AssemblyNode {
                    subdisk: describe(self.dec, &s, h),
                    parent: nd.parent.map(|p| p.0),
                    parent_chord: nd.parent.map(|p| p.1),
                }
            })
            .collect();
        let word = word_of(self.dec, nodes);
        CapAssembly {
            mode: self.cfg.mode,
            max_height: heights.iter().copied().max().unwrap_or(0),
            touches: word.touches,
            boundary_trace: word.word,
            nodes: out_nodes,
            raw: nodes.to_vec(),
        }
    }
}

/// Heights by repeated leaf removal on the gluing tree.
fn prune_heights(nodes: &[RawNode]) -> Vec<u32> {
    let n = nodes.len();
    let mut deg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for (i, nd) in nodes.iter().enumerate() {
        if let Some((p, _)) = nd.parent {
            adj[i].push(p);
            adj[p].push(i);
            deg[i] += 1;
            deg[p] += 1;
        }
    }
    let mut height = vec![u32::MAX; n];
    let mut alive = n;
    let mut round = 0;
    while alive > 0 {
        let leaves: Vec<usize> = (0..n)
            .filter(|&i| height[i] == u32::MAX && deg[i] <= 1)
            .collect();
        for &l in &leaves {
            height[l] = round;
            alive -= 1;
        }
        for &l in &leaves {
            for &m in &adj[l] {
                if height[m] == u32::MAX {
                    deg[m] -= 1;
                }
            }
        }
        round += 1;
    }
    height
}

/// The boundary walk of a glued tree, starting at the root.
fn word_of(dec: &FlatCapDecomposition, nodes: &[RawNode]) -> WordReport {
    let mut word = Vec::new();
    tour(dec, nodes, 0, &mut word);
    let touches = word
        .iter()
        .filter(|l| matches!(l, Letter::Touch { .. }))
        .count();
    let edges: Vec<Letter> = word
        .iter()
        .copied()
        .filter(|l| matches!(l, Letter::Edge { .. }))
        .collect();
    let reduced = cyclic_reduce(&edges);
    WordReport {
        essential: !reduced.is_empty(),
        word,
        reduced,
        touches,
    }
}

fn tour(dec: &FlatCapDecomposition, nodes: &[RawNode], id: usize, out: &mut Vec<Letter>) {
    let nd = &nodes[id];
    let k = nd.chords.len();
    let first = nd.parent.map_or(0, |p| p.1 + 1);
    let count = if nd.parent.is_some() { k - 1 } else { k };
    for step in 0..count {
        let i = (first + step) % k;
        if let Some(&child) = nd.children.get(&i) {
            let (x, y) = nd.chords[i];
            out.push(pass(dec, nd.side, x));
            tour(dec, nodes, child, out);
            out.push(pass(dec, nd.side.other(), y));
        }
    }
}

/// `∂X` passing through the port at cap spot `x` from `side` to the other.
fn pass(dec: &FlatCapDecomposition, side: Side, x: SpotId) -> Letter {
    match dec.spot_crossing(x) {
        None => Letter::Touch {
            edge: x as usize - 4 * dec.crossing_count(),
        },
        Some(c) => {
            let from = (dec.port(side, x) % 4) as u8;
            Letter::Edge {
                crossing: c,
                forward: from == dec.vertical_arcs[c].surface_quadrants[0],
            }
        }
    }
}

fn reduce(word: &[Letter]) -> Vec<Letter> {
    let mut st: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if st.last().is_some_and(|&t| t.inverse_of(l)) {
            st.pop();
        } else {
            st.push(l);
        }
    }
    st
}

fn cyclic_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut w = reduce(word);
    while w.len() >= 2 && w[0].inverse_of(w[w.len() - 1]) {
        w.pop();
        w.remove(0);
    }
    w
}

/// The reduced boundary word of a closed assembly.
pub fn boundary_word(
    assembly: &CapAssembly,
    dec: &FlatCapDecomposition,
) -> Result<WordReport, CapSearchError> {
    for (i, nd) in assembly.raw.iter().enumerate() {
        for j in 0..nd.chords.len() {
            let up = nd.parent.is_some_and(|p| p.1 == j);
            if !up && !nd.children.contains_key(&j) {
                return Err(CapSearchError::NotClosed(format!(
                    "chord {j} of node {i} is not glued"
                )));
            }
        }
    }
    Ok(word_of(dec, &assembly.raw))
}

/// Free cyclic reduction of a closed walk given directly as letters.
pub fn reduce_word(word: &[Letter]) -> Vec<Letter> {
    let edges: Vec<Letter> = word
        .iter()
        .copied()
        .filter(|l| matches!(l, Letter::Edge { .. }))
        .collect();
    cyclic_reduce(&edges)
}

fn verdict_for(_dec: &FlatCapDecomposition, asm: &CapAssembly, word: &WordReport) -> CapVerdict {
    let cand = FakeCandidate {
        l_count: word.touches,
        fake: !word.essential,
        essential_run: essential_run(&word.word),
        simplifiable: false,
    };
    CapVerdict {
        closed: true,
        boundary_l_count: asm.touches,
        essential: word.essential,
        fake_flags: fake_cap_filters(&cand),
    }
}

/// Longest cyclic run of boundary arcs between touches whose Tait walk does
/// not reduce to a point, the proxy for arcs not parallel into the link.
fn essential_run(word: &[Letter]) -> usize {
    let touches: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, Letter::Touch { .. }))
        .map(|(i, _)| i)
        .collect();
    if touches.is_empty() {
        return 0;
    }
    let m = touches.len();
    let arcs: Vec<bool> = (0..m)
        .map(|i| {
            let (s, e) = (touches[i], touches[(i + 1) % m]);
            let seg: Vec<Letter> = if e > s {
                word[s + 1..e].to_vec()
            } else {
                word[s + 1..].iter().chain(&word[..e]).copied().collect()
            };
            !reduce(&seg).is_empty()
        })
        .collect();
    if arcs.iter().all(|&x| x) {
        return m;
    }
    let mut best = 0;
    let mut run = 0;
    for i in 0..2 * m {
        if arcs[i % m] {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best.min(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: usize, f: bool) -> Letter {
        Letter::Edge {
            crossing: c,
            forward: f,
        }
    }

    #[test]
    fn cancelling_passes_reduce_to_nothing() {
        assert!(reduce_word(&[e(3, true), e(3, false)]).is_empty());
        assert!(reduce_word(&[e(1, true), e(2, true), e(2, false), e(1, false)]).is_empty());
    }

    #[test]
    fn theta_cycle_is_essential() {
        assert_eq!(reduce_word(&[e(0, true), e(1, false)]).len(), 2);
    }

    #[test]
    fn fake_parity_rules() {
        let odd = fake_cap_filters(&FakeCandidate {
            l_count: 3,
            fake: true,
            essential_run: 0,
            simplifiable: false,
        });
        assert!(odd.odd_fake);
        let zero = fake_cap_filters(&FakeCandidate {
            l_count: 0,
            fake: true,
            essential_run: 0,
            simplifiable: false,
        });
        assert!(zero.consistent());
        let four = fake_cap_filters(&FakeCandidate {
            l_count: 4,
            fake: true,
            essential_run: 2,
            simplifiable: false,
        });
        assert!(four.string_contradiction);
        let ok = fake_cap_filters(&FakeCandidate {
            l_count: 4,
            fake: true,
            essential_run: 1,
            simplifiable: false,
        });
        assert!(ok.consistent());
    }

    fn theta_surface(paths: &[Vec<crate::diagram::Smoothing>]) -> FlatCapDecomposition {
        let g = crate::diagram::PlaneGraph::theta(paths);
        let d = g.to_diagram().unwrap();
        let color = g.vertex_color(&d).unwrap();
        FlatCapDecomposition::build(&d, color).unwrap()
    }

    #[test]
    fn two_mobius_bands_compress_only_algebraically() {
        use crate::diagram::Smoothing::{A, B};
        // Net twists (1, 1, 0): two same-handed Mobius bands summed along an
        // arc, spanning the unknot. A definite form gives nonzero slope, so
        // no compressing disk exists; a rank-two free group cannot inject
        // into the unknot group, so an immersed one does.
        let dec = theta_surface(&[vec![A], vec![A], vec![B, A]]);
        let (_, geo) =
            find_bounded_height_caps(&dec, &SearchConfig::new(2, SearchMode::Geometric)).unwrap();
        assert!(geo.caps.is_empty());
        let (_, alg) =
            find_bounded_height_caps(&dec, &SearchConfig::new(2, SearchMode::Algebraic)).unwrap();
        assert!(!alg.caps.is_empty());
    }

    #[test]
    fn reduced_alternating_surfaces_have_no_caps() {
        use crate::diagram::{Color, PlaneGraph, Smoothing::B};
        let graphs = [
            PlaneGraph::cycle(3, B),
            PlaneGraph::k4(B),
            PlaneGraph::theta(&[vec![B; 3], vec![B; 3], vec![B; 3]]),
            PlaneGraph::theta(&[vec![B], vec![B; 2], vec![B; 3]]),
        ];
        for g in graphs {
            let d = g.to_diagram().unwrap();
            for color in [Color::Black, Color::White] {
                let dec = FlatCapDecomposition::build(&d, color).unwrap();
                for mode in [SearchMode::Geometric, SearchMode::Algebraic] {
                    let (_, r) =
                        find_bounded_height_caps(&dec, &SearchConfig::new(2, mode)).unwrap();
                    assert!(r.caps.is_empty(), "{color:?} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn leaf_pruning_on_a_path() {
        let node = |p: Option<(usize, usize)>| RawNode {
            side: Side::Above,
            chords: vec![],
            parent: p,
            children: BTreeMap::new(),
        };
        let nodes = vec![
            node(None),
            node(Some((0, 0))),
            node(Some((1, 0))),
            node(Some((2, 0))),
            node(Some((3, 0))),
        ];
        assert_eq!(prune_heights(&nodes), vec![0, 1, 2, 1, 0]);
    }
}
