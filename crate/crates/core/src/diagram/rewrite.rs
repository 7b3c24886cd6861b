//! Rewriting a state surface on the sphere into a checkerboard surface.
//!
//! While some state circle is not innermost, pick one such circle `C` and
//! the edge `E0` it enters its first arc along. The disk of `C` lies above
//! everything on its inside, so the piece of `E0` can be slid across that
//! disk to a curve running just inside the rest of `C`. The slid strand
//! passes over `C`'s own edges twice beside every crossing whose band hangs
//! inside, and the disk shrinks to a strip cut by those new crossings into
//! innermost pieces. Each step removes one non-innermost circle and adds
//! `2k` crossings and `2k + 1` circles, where `k` counts the inside bands,
//! so the Euler characteristic is unchanged.

use serde::Serialize;

use super::{assemble, Color, DiagramError, LinkDiagram, Smoothing, State, StateResolution};

#[derive(Debug, Clone, Serialize)]
pub struct RewriteStep {
    /// Circle rewritten, by index in the resolution at the start of the step.
    pub circle: usize,
    pub inside_bands: usize,
    pub crossings_added: usize,
    pub non_innermost_before: usize,
    pub non_innermost_after: usize,
    pub circles_before: usize,
    pub circles_after: usize,
    pub euler_characteristic: i64,
}

#[derive(Debug, Clone)]
pub struct RewriteOutcome {
    pub diagram: LinkDiagram,
    pub state: State,
    pub color: Color,
    pub steps: Vec<RewriteStep>,
}

impl RewriteOutcome {
    pub fn euler_characteristic(&self) -> i64 {
        self.steps.last().map_or_else(
            || self.resolution().euler_characteristic(),
            |s| s.euler_characteristic,
        )
    }

    pub fn resolution(&self) -> StateResolution {
        self.diagram
            .resolve_state(&self.state)
            .expect("outcome state fits its diagram")
    }
}

const BACK: usize = 0;
const RIGHT: usize = 1;
const FORWARD: usize = 2;
const LEFT: usize = 3;

/// A new crossing on an edge of the rewritten circle, next to crossing slot
/// `slot`. Its ends are numbered back (toward `slot`), right, forward, left.
struct Event {
    slot: usize,
    corner_left: bool,
    /// Whether the slid strand crosses from the inside to the corner side.
    outward: bool,
}

impl Event {
    fn inside_end(&self) -> usize {
        if self.corner_left {
            RIGHT
        } else {
            LEFT
        }
    }

    fn corner_end(&self) -> usize {
        if self.corner_left {
            LEFT
        } else {
            RIGHT
        }
    }

    /// The corner piece and the strip both sit in cut-off quadrants.
    fn smoothing(&self) -> Smoothing {
        if self.corner_left {
            Smoothing::A
        } else {
            Smoothing::B
        }
    }
}

impl LinkDiagram {
    /// Rewrites the state surface of `state` as a checkerboard surface of a
    /// new diagram and reports the color that realizes it.
    pub fn state_to_checkerboard(&self, state: &State) -> Result<RewriteOutcome, DiagramError> {
        if self.genus() > 0 {
            return Err(DiagramError::NotPlanar(self.genus()));
        }
        if !self.is_connected() {
            return Err(DiagramError::Split {
                pieces: self.piece_count(),
            });
        }
        let mut d = self.clone();
        let mut st = state.clone();
        let mut steps = Vec::new();
        let mut res = d.resolve_state(&st)?;
        let budget = res.circle_count() + 1;
        loop {
            let bad = res.non_innermost();
            if bad.is_empty() {
                break;
            }
            if steps.len() > budget {
                return Err(DiagramError::RewriteFailed(
                    "non-innermost count did not decrease".into(),
                ));
            }
            let circle = bad[0];
            let (nd, ns, k) = rewrite_once(&d, &st, &res, circle)?;
            let nres = nd.resolve_state(&ns)?;
            let after = nres.non_innermost().len();
            steps.push(RewriteStep {
                circle,
                inside_bands: k,
                crossings_added: 2 * k,
                non_innermost_before: bad.len(),
                non_innermost_after: after,
                circles_before: res.circle_count(),
                circles_after: nres.circle_count(),
                euler_characteristic: nres.euler_characteristic(),
            });
            if after >= bad.len() {
                return Err(DiagramError::RewriteFailed(format!(
                    "step {} left {after} non-innermost circles",
                    steps.len()
                )));
            }
            d = nd;
            st = ns;
            res = nres;
        }
        let color = checkerboard_color(&d, &st)?;
        Ok(RewriteOutcome {
            diagram: d,
            state: st,
            color,
            steps,
        })
    }
}

/// The color whose checkerboard state is `st`.
fn checkerboard_color(d: &LinkDiagram, st: &State) -> Result<Color, DiagramError> {
    let coloring = d.checkerboard_coloring()?;
    if d.is_crossingless() {
        return Ok(Color::Black);
    }
    let q = st.0[0].cut_quadrants()[0];
    let color = coloring.color(d.corner_face(0, q));
    if State::checkerboard(d, &coloring, color) != *st {
        return Err(DiagramError::RewriteFailed(
            "innermost state is not a checkerboard state".into(),
        ));
    }
    Ok(color)
}

fn rewrite_once(
    d: &LinkDiagram,
    st: &State,
    res: &StateResolution,
    circle: usize,
) -> Result<(LinkDiagram, State, usize), DiagramError> {
    let steps = &res.circles[circle].steps;
    let m = steps.len();
    let inside = res.inside_region(circle);
    let inward: Vec<bool> = steps
        .iter()
        .map(|s| {
            let q = st.0[s.crossing].channel_quadrants()[0];
            res.face_region[d.corner_face(s.crossing, q)] == inside
        })
        .collect();
    let k = inward.iter().filter(|&&b| b).count();
    if k == 0 {
        return Err(DiagramError::RewriteFailed(format!(
            "circle {circle} has no inside band"
        )));
    }

    // The corner of a passage lies to the left of an edge leaving the
    // crossing at slot `q` and to the right of one leaving at slot `q + 1`.
    let make = |slot: usize, q: usize, outward: bool| Event {
        slot,
        corner_left: slot % 4 == q,
        outward,
    };
    let entry_slot = |j: usize| 4 * steps[j].crossing + steps[j].enter as usize;
    let exit_slot = |j: usize| 4 * steps[j].crossing + steps[j].exit as usize;

    // Slid strand order: backwards around the circle, exit side then entry side.
    let mut events: Vec<Event> = Vec::with_capacity(2 * k);
    let mut exit_event = vec![usize::MAX; m];
    let mut entry_event = vec![usize::MAX; m];
    for j in (0..m).rev() {
        if !inward[j] {
            continue;
        }
        let q = steps[j].corner_quadrant();
        exit_event[j] = events.len();
        events.push(make(exit_slot(j), q, true));
        entry_event[j] = events.len();
        events.push(make(entry_slot(j), q, false));
    }

    let n = d.crossing_count();
    let total = n + events.len();
    let mut partner: Vec<usize> = (0..4 * n).map(|s| d.partner(s)).collect();
    partner.resize(4 * total, usize::MAX);
    let end = |e: usize, which: usize| 4 * (n + e) + which;

    // Ports along each edge of the circle, in traversal order; consecutive
    // pairs are joined.
    for j in 0..m {
        let prev = (j + m - 1) % m;
        let mut ports = vec![exit_slot(prev)];
        if inward[prev] {
            ports.extend([end(exit_event[prev], BACK), end(exit_event[prev], FORWARD)]);
        }
        if j == 0 {
            for (i, ev) in events.iter().enumerate() {
                let (arrive, leave) = if ev.outward {
                    (ev.inside_end(), ev.corner_end())
                } else {
                    (ev.corner_end(), ev.inside_end())
                };
                ports.extend([end(i, arrive), end(i, leave)]);
            }
        }
        if inward[j] {
            ports.extend([end(entry_event[j], FORWARD), end(entry_event[j], BACK)]);
        }
        ports.push(entry_slot(j));
        for pair in ports.chunks(2) {
            partner[pair[0]] = pair[1];
            partner[pair[1]] = pair[0];
        }
    }
    debug_assert!(partner.iter().all(|&p| p != usize::MAX));

    let nd = assemble(&partner).map_err(|e| DiagramError::RewriteFailed(e.to_string()))?;
    if nd.genus() != 0 {
        return Err(DiagramError::RewriteFailed(
            "rewritten diagram is not planar".into(),
        ));
    }
    let mut ns = st.0.clone();
    ns.extend(events.iter().map(Event::smoothing));
    debug_assert!(events.iter().all(|e| e.slot < 4 * n));
    Ok((nd, State(ns), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::PlaneGraph;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap()
    }

    #[test]
    fn innermost_state_is_unchanged() {
        let d = trefoil();
        let out = d
            .state_to_checkerboard(&State::all(Smoothing::B, 3))
            .unwrap();
        assert!(out.steps.is_empty());
        assert_eq!(out.diagram, d);
    }

    #[test]
    fn trefoil_states_all_reach_checkerboards() {
        let d = trefoil();
        for mask in 0..8u32 {
            let st = State(
                (0..3)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Smoothing::B
                        } else {
                            Smoothing::A
                        }
                    })
                    .collect(),
            );
            let before = d.resolve_state(&st).unwrap();
            let out = d.state_to_checkerboard(&st).unwrap();
            let after = out.resolution();
            assert_eq!(
                after.euler_characteristic(),
                before.euler_characteristic(),
                "mask {mask}"
            );
            assert_eq!(after.is_orientable(), before.is_orientable(), "mask {mask}");
            assert_eq!(out.diagram.component_count(), d.component_count());
            assert!(after.non_innermost().is_empty());
        }
    }

    #[test]
    fn borromean_seifert_state() {
        let d = PlaneGraph::k4(Smoothing::A).to_diagram().unwrap();
        let st = State::seifert(&d);
        let before = d.resolve_state(&st).unwrap();
        let out = d.state_to_checkerboard(&st).unwrap();
        let after = out.resolution();
        assert_eq!(after.euler_characteristic(), before.euler_characteristic());
        assert_eq!(after.is_orientable(), before.is_orientable());
        for s in &out.steps {
            assert!(s.non_innermost_after < s.non_innermost_before);
        }
    }

    #[test]
    fn genus_one_is_rejected() {
        let d = LinkDiagram::parse("X 1 2 1 2").unwrap();
        assert!(matches!(
            d.state_to_checkerboard(&State::all(Smoothing::A, 1)),
            Err(DiagramError::NotPlanar(1))
        ));
    }
}
