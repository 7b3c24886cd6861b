//! Subdisk types stratified by height.
//!
//! A cap chord is realized on a side at level `k` when some subdisk in that
//! ball has it as its upward chord and every other chord realized on the
//! opposite side at level at most `k - 1`. Bigons realize level 0. Each round
//! extends every upward chord by a depth-first walk around the ball's
//! boundary sphere, using only chords realized in earlier rounds, so the
//! levels are the smallest heights a branch through each chord can have.
//! The height of a subdisk is then the second largest of `level + 1` over
//! its chords, which is the round at which leaf pruning removes it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::Serialize;

use super::{FlatCapDecomposition, SearchConfig, SearchMode, Side, Spot, SpotId};
use crate::par;

pub(crate) type ChordKey = (SpotId, SpotId);

pub(crate) fn key(a: SpotId, b: SpotId) -> ChordKey {
    (a.min(b), a.max(b))
}

/// A subdisk as its cyclic list of cap chords `(from, to)`; the surface chord
/// after chord `i` runs from the port of `to_i` to the port of `from_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RawSubdisk {
    pub side: Side,
    pub chords: Vec<(SpotId, SpotId)>,
}

impl RawSubdisk {
    /// Least rotation of either traversal direction.
    fn canonical(side: Side, chords: &[(SpotId, SpotId)]) -> RawSubdisk {
        let k = chords.len();
        let rev: Vec<(SpotId, SpotId)> = chords.iter().rev().map(|&(a, b)| (b, a)).collect();
        let mut best: Option<Vec<(SpotId, SpotId)>> = None;
        for seq in [chords, &rev[..]] {
            for r in 0..k {
                let cand: Vec<(SpotId, SpotId)> = (0..k).map(|i| seq[(r + i) % k]).collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        RawSubdisk {
            side,
            chords: best.expect("a subdisk has a chord"),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = ChordKey> + '_ {
        self.chords.iter().map(|&(a, b)| key(a, b))
    }
}

/// A cap chord of a subdisk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapChord {
    pub cap_face: usize,
    pub from: Spot,
    pub to: Spot,
    /// Surface face holding the boundary arc that follows this chord.
    pub next_surface_face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdiskType {
    pub side: Side,
    pub height: u32,
    pub chords: Vec<CapChord>,
    pub touches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumSummary {
    pub height: u32,
    pub count: usize,
    pub above: usize,
    pub below: usize,
}

/// Subdisk types of height at most `max_height`, by height.
#[derive(Debug, Clone, Serialize)]
pub struct Strata {
    pub mode: SearchMode,
    pub max_height: u32,
    pub max_touches: usize,
    pub max_chords: usize,
    pub levels: Vec<Vec<SubdiskType>>,
    /// First round that realized no new chord; every later stratum is empty.
    pub stable_from: Option<u32>,
    pub nodes: u64,
    #[serde(skip)]
    pub(crate) raw: Vec<(RawSubdisk, u32)>,
    /// Realization level of every chord on each side.
    #[serde(skip)]
    pub(crate) level: [BTreeMap<ChordKey, u32>; 2],
}

impl Strata {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn summary(&self) -> Vec<StratumSummary> {
        self.levels
            .iter()
            .enumerate()
            .map(|(h, l)| StratumSummary {
                height: h as u32,
                count: l.len(),
                above: l.iter().filter(|s| s.side == Side::Above).count(),
                below: l.iter().filter(|s| s.side == Side::Below).count(),
            })
            .collect()
    }

    pub fn realized_level(&self, side: Side, a: SpotId, b: SpotId) -> Option<u32> {
        self.level[side.index()].get(&key(a, b)).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BudgetExceeded(pub u64);

pub(crate) struct Walker<'a> {
    pub dec: &'a FlatCapDecomposition,
    pub cfg: SearchConfig,
    pub surface_spots: Vec<Vec<SpotId>>,
    pub cap_spots: Vec<Vec<SpotId>>,
    nodes: AtomicU64,
    stop: AtomicBool,
}

impl<'a> Walker<'a> {
    pub fn new(dec: &'a FlatCapDecomposition, cfg: SearchConfig) -> Walker<'a> {
        let touches = cfg.max_touches > 0;
        Walker {
            dec,
            cfg,
            surface_spots: dec.surface_face_spots(touches),
            cap_spots: dec.cap_face_spots(touches),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cfg.node_budget {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }

    pub fn exceeded(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    /// All cap chords, each once, in canonical order.
    pub fn cap_chords(&self) -> Vec<(SpotId, SpotId)> {
        let mut out = Vec::new();
        for spots in &self.cap_spots {
            for (i, &a) in spots.iter().enumerate() {
                for &b in &spots[i + 1..] {
                    if self.dec.chord_ok(a, b) {
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Subdisks on `side` with upward chord `up`, whose other chords are
    /// realized on the opposite side at level below `round`.
    fn extend(
        &self,
        side: Side,
        up: (SpotId, SpotId),
        round: u32,
        opposite: &BTreeMap<SpotId, Vec<(SpotId, u32)>>,
    ) -> Vec<RawSubdisk> {
        let mut out = Vec::new();
        let mut path = vec![up];
        let touches = usize::from(self.dec.is_touch(up.0)) + usize::from(self.dec.is_touch(up.1));
        if touches > self.cfg.max_touches {
            return out;
        }
        let mut surface_arcs: Vec<(usize, SpotId, SpotId)> = Vec::new();
        self.walk(
            side,
            round,
            opposite,
            &mut path,
            &mut surface_arcs,
            touches,
            &mut out,
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        side: Side,
        round: u32,
        opposite: &BTreeMap<SpotId, Vec<(SpotId, u32)>>,
        path: &mut Vec<(SpotId, SpotId)>,
        surface_arcs: &mut Vec<(usize, SpotId, SpotId)>,
        touches: usize,
        out: &mut Vec<RawSubdisk>,
    ) {
        if !self.tick() {
            return;
        }
        let dec = self.dec;
        let start = path[0].0;
        let cur = path.last().expect("path is never empty").1;
        let t = dec.port(side, cur);
        let f = dec.spot_face(t, true);
        for &t2 in &self.surface_spots[f] {
            if !dec.chord_ok(t, t2) {
                continue;
            }
            // one subdisk's boundary is a simple curve on its ball's sphere
            if surface_arcs
                .iter()
                .any(|&(g, x, y)| g == f && dec.chords_cross(f, x, y, t, t2))
            {
                continue;
            }
            let a = dec.port(side, t2);
            if a == start {
                out.push(RawSubdisk::canonical(side, path));
                continue;
            }
            if round == 0 || path.len() >= self.cfg.max_chords {
                continue;
            }
            if path.iter().any(|&(x, y)| x == a || y == a) {
                continue;
            }
            let Some(partners) = opposite.get(&a) else {
                continue;
            };
            let cf = dec.spot_face(a, false);
            for &(b, lvl) in partners {
                if lvl >= round || path.iter().any(|&(x, y)| x == b || y == b) {
                    continue;
                }
                let extra = usize::from(dec.is_touch(a)) + usize::from(dec.is_touch(b));
                if touches + extra > self.cfg.max_touches {
                    continue;
                }
                if path.iter().any(|&(x, y)| {
                    dec.spot_face(x, false) == cf && dec.chords_cross(cf, x, y, a, b)
                }) {
                    continue;
                }
                path.push((a, b));
                surface_arcs.push((f, t, t2));
                self.walk(
                    side,
                    round,
                    opposite,
                    path,
                    surface_arcs,
                    touches + extra,
                    out,
                );
                surface_arcs.pop();
                path.pop();
            }
        }
    }
}

/// Characterizes all subdisk types of height at most `cfg.max_height`.
pub fn enumerate_subdisks(
    dec: &FlatCapDecomposition,
    cfg: &SearchConfig,
) -> Result<Strata, super::CapSearchError> {
    let walker = Walker::new(dec, *cfg);
    run(&walker).map_err(|BudgetExceeded(n)| super::CapSearchError::BudgetExceeded { nodes: n })
}

pub(crate) fn run(walker: &Walker<'_>) -> Result<Strata, BudgetExceeded> {
    let cfg = walker.cfg;
    let chords = walker.cap_chords();
    let mut level: [BTreeMap<ChordKey, u32>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut found: BTreeMap<RawSubdisk, u32> = BTreeMap::new();
    let mut stable_from = None;
    let jobs: Vec<(Side, (SpotId, SpotId))> = Side::BOTH
        .iter()
        .flat_map(|&s| chords.iter().map(move |&c| (s, c)))
        .collect();
    for round in 0..=cfg.max_height {
        // partner lists of chords realized so far, per side
        let adj: [BTreeMap<SpotId, Vec<(SpotId, u32)>>; 2] = [0, 1].map(|s| {
            let mut m: BTreeMap<SpotId, Vec<(SpotId, u32)>> = BTreeMap::new();
            for (&(a, b), &l) in &level[s] {
                m.entry(a).or_default().push((b, l));
                m.entry(b).or_default().push((a, l));
            }
            m
        });
        let results = par::map(&jobs, |&(side, up)| {
            walker.extend(side, up, round, &adj[side.other().index()])
        });
        if walker.exceeded() {
            return Err(BudgetExceeded(walker.nodes()));
        }
        let mut grew = false;
        for (&(side, up), subs) in jobs.iter().zip(&results) {
            if !subs.is_empty() {
                let slot = level[side.index()].entry(key(up.0, up.1)).or_insert(round);
                if *slot == round {
                    grew = true;
                }
            }
            for s in subs {
                found.entry(s.clone()).or_insert(round);
            }
        }
        if !grew {
            stable_from = Some(round);
            break;
        }
    }

    let mut levels: Vec<Vec<SubdiskType>> = vec![Vec::new(); cfg.max_height as usize + 1];
    let mut raw = Vec::with_capacity(found.len());
    for (s, first_round) in found {
        let h = subdisk_height(&s, &level).expect("found subdisks have realized chords");
        debug_assert_eq!(h, first_round, "height agrees with the round that found it");
        levels[h as usize].push(describe(walker.dec, &s, h));
        raw.push((s, h));
    }
    let seen: BTreeSet<u32> = raw.iter().map(|r| r.1).collect();
    debug_assert!(seen.iter().all(|&h| h <= cfg.max_height));
    Ok(Strata {
        mode: cfg.mode,
        max_height: cfg.max_height,
        max_touches: cfg.max_touches,
        max_chords: cfg.max_chords,
        levels,
        stable_from,
        nodes: walker.nodes(),
        raw,
        level,
    })
}

/// Second largest `level + 1` over the chords, realized on the far side.
pub(crate) fn subdisk_height(s: &RawSubdisk, level: &[BTreeMap<ChordKey, u32>; 2]) -> Option<u32> {
    if s.chords.len() == 1 {
        return Some(0);
    }
    let far = &level[s.side.other().index()];
    // an unrealized chord can only be the upward one
    let mut v: Vec<u32> = s
        .keys()
        .map(|k| far.get(&k).map_or(u32::MAX, |l| l + 1))
        .collect();
    v.sort_unstable();
    let h = v[v.len() - 2];
    (h != u32::MAX).then_some(h)
}

pub(crate) fn describe(dec: &FlatCapDecomposition, s: &RawSubdisk, height: u32) -> SubdiskType {
    let k = s.chords.len();
    let chords = (0..k)
        .map(|i| {
            let (a, b) = s.chords[i];
            CapChord {
                cap_face: dec.spot_face(a, false),
                from: dec.spot(a),
                to: dec.spot(b),
                next_surface_face: dec.spot_face(dec.port(s.side, b), true),
            }
        })
        .collect();
    let touches = s
        .chords
        .iter()
        .map(|&(a, b)| usize::from(dec.is_touch(a)) + usize::from(dec.is_touch(b)))
        .sum();
    SubdiskType {
        side: s.side,
        height,
        chords,
        touches,
    }
}
