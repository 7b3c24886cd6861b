//! States, state circles, and the nesting of state circles on the sphere.
//!
//! Smoothing convention: the A-smoothing joins slot 1 with slot 2 and slot 3
//! with slot 0, so it cuts off quadrants 1 and 3 and opens a channel through
//! quadrants 0 and 2. The B-smoothing joins 0 with 1 and 2 with 3.

use serde::{Deserialize, Serialize};

use super::{DiagramError, LinkDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Smoothing {
    A,
    B,
}

impl Smoothing {
    /// Slot joined to slot `k` by this smoothing.
    pub fn partner_slot(self, k: usize) -> usize {
        match (self, k % 4) {
            (Smoothing::A, 0) => 3,
            (Smoothing::A, 1) => 2,
            (Smoothing::A, 2) => 1,
            (Smoothing::A, _) => 0,
            (Smoothing::B, 0) => 1,
            (Smoothing::B, 1) => 0,
            (Smoothing::B, 2) => 3,
            (Smoothing::B, _) => 2,
        }
    }

    /// The two quadrants cut off by the smoothing arcs.
    pub fn cut_quadrants(self) -> [usize; 2] {
        match self {
            Smoothing::A => [1, 3],
            Smoothing::B => [0, 2],
        }
    }

    /// The two quadrants joined through the crossing.
    pub fn channel_quadrants(self) -> [usize; 2] {
        match self {
            Smoothing::A => [0, 2],
            Smoothing::B => [1, 3],
        }
    }

    pub fn flip(self) -> Smoothing {
        match self {
            Smoothing::A => Smoothing::B,
            Smoothing::B => Smoothing::A,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Smoothing::A => 'A',
            Smoothing::B => 'B',
        }
    }
}

/// One smoothing per crossing, indexed in crossing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State(pub Vec<Smoothing>);

impl State {
    pub fn all(s: Smoothing, n: usize) -> State {
        State(vec![s; n])
    }

    /// Parses `allA`, `allB`, `seifert`, or a word such as `AABAB` in crossing order.
    pub fn parse(spec: &str, d: &LinkDiagram) -> Result<State, DiagramError> {
        let n = d.crossing_count();
        match spec {
            "allA" => return Ok(State::all(Smoothing::A, n)),
            "allB" => return Ok(State::all(Smoothing::B, n)),
            "seifert" => return Ok(State::seifert(d)),
            _ => {}
        }
        let mut out = Vec::with_capacity(spec.len());
        for ch in spec.chars() {
            match ch {
                'A' | 'a' => out.push(Smoothing::A),
                'B' | 'b' => out.push(Smoothing::B),
                _ => return Err(DiagramError::BadStateString(spec.to_string())),
            }
        }
        if out.len() != n {
            return Err(DiagramError::StateLength {
                given: out.len(),
                expected: n,
            });
        }
        Ok(State(out))
    }

    /// The oriented smoothing at every crossing.
    pub fn seifert(d: &LinkDiagram) -> State {
        State(
            (0..d.crossing_count())
                .map(|c| {
                    if d.crossing_sign(c) > 0 {
                        Smoothing::B
                    } else {
                        Smoothing::A
                    }
                })
                .collect(),
        )
    }

    /// The state whose circles bound the faces of one checkerboard color:
    /// at each crossing, the smoothing cutting off the quadrants of that color.
    pub fn checkerboard(
        d: &LinkDiagram,
        coloring: &super::CheckerboardColoring,
        color: super::Color,
    ) -> State {
        State(
            (0..d.crossing_count())
                .map(|c| {
                    if coloring.color(d.corner_face(c, 1)) == color {
                        Smoothing::A
                    } else {
                        Smoothing::B
                    }
                })
                .collect(),
        )
    }

    pub fn word(&self) -> String {
        self.0.iter().map(|s| s.letter()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A passage of a state circle through a crossing along one smoothing arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcStep {
    pub crossing: usize,
    pub enter: u8,
    pub exit: u8,
}

impl ArcStep {
    /// The quadrant hugged by the arc.
    pub fn corner_quadrant(&self) -> usize {
        let (a, b) = (self.enter as usize, self.exit as usize);
        if b == (a + 1) % 4 {
            a
        } else {
            b
        }
    }

    /// +1 when the arc runs from slot k to slot k + 1, -1 otherwise.
    pub fn direction(&self) -> i8 {
        if self.exit as usize == (self.enter as usize + 1) % 4 {
            1
        } else {
            -1
        }
    }
}

/// A state circle: arcs at crossings, joined by the edges from each exit slot
/// to the next entry slot. The crossingless unknot has one circle with no steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCircle {
    pub steps: Vec<ArcStep>,
}

/// A resolved state with circle incidences and the region structure of the
/// circles on the projection surface.
#[derive(Debug, Clone)]
pub struct StateResolution {
    pub state: State,
    pub circles: Vec<StateCircle>,
    /// Circle through each slot.
    pub slot_circle: Vec<usize>,
    /// Region of the complement of the circles containing each face.
    pub face_region: Vec<usize>,
    pub region_count: usize,
    /// For each circle, its (corner-side, channel-side) regions, read at its first arc.
    pub circle_sides: Vec<(usize, usize)>,
    /// Whether some crossing band lies in the region.
    pub region_has_band: Vec<bool>,
}

impl LinkDiagram {
    /// Resolves every crossing of `state` and traces the state circles.
    pub fn resolve_state(&self, state: &State) -> Result<StateResolution, DiagramError> {
        let n = self.crossing_count();
        if state.len() != n {
            return Err(DiagramError::StateLength {
                given: state.len(),
                expected: n,
            });
        }
        if self.is_crossingless() {
            return Ok(StateResolution {
                state: state.clone(),
                circles: vec![StateCircle { steps: Vec::new() }],
                slot_circle: Vec::new(),
                face_region: vec![0, 1],
                region_count: 2,
                circle_sides: vec![(0, 1)],
                region_has_band: vec![false, false],
            });
        }
        let mut slot_circle = vec![usize::MAX; 4 * n];
        let mut circles = Vec::new();
        for start in 0..4 * n {
            if slot_circle[start] != usize::MAX {
                continue;
            }
            let id = circles.len();
            let mut steps = Vec::new();
            let mut leave = start;
            loop {
                slot_circle[leave] = id;
                let arrive = self.partner(leave);
                slot_circle[arrive] = id;
                let c = arrive / 4;
                let k_in = arrive % 4;
                let k_out = state.0[c].partner_slot(k_in);
                steps.push(ArcStep {
                    crossing: c,
                    enter: k_in as u8,
                    exit: k_out as u8,
                });
                leave = 4 * c + k_out;
                if leave == start {
                    break;
                }
            }
            circles.push(StateCircle { steps });
        }

        // Regions: faces glued through crossing channels.
        let f = self.face_count();
        let mut uf = UnionFind::new(f);
        for c in 0..n {
            let [q0, q1] = state.0[c].channel_quadrants();
            uf.union(self.corner_face(c, q0), self.corner_face(c, q1));
        }
        let mut rid = vec![usize::MAX; f];
        let mut face_region = vec![0; f];
        let mut region_count = 0;
        for face in 0..f {
            let r = uf.find(face);
            if rid[r] == usize::MAX {
                rid[r] = region_count;
                region_count += 1;
            }
            face_region[face] = rid[r];
        }
        let mut region_has_band = vec![false; region_count];
        for c in 0..n {
            let [q0, _] = state.0[c].channel_quadrants();
            region_has_band[face_region[self.corner_face(c, q0)]] = true;
        }
        let circle_sides = circles
            .iter()
            .map(|circ| {
                let s = circ.steps[0];
                let q = s.corner_quadrant();
                (
                    face_region[self.corner_face(s.crossing, q)],
                    face_region[self.corner_face(s.crossing, q + 1)],
                )
            })
            .collect();
        Ok(StateResolution {
            state: state.clone(),
            circles,
            slot_circle,
            face_region,
            region_count,
            circle_sides,
            region_has_band,
        })
    }
}

impl StateResolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Circles met by the two arcs at crossing `c`.
    pub fn crossing_circles(&self, c: usize) -> (usize, usize) {
        let [q0, q1] = self.state.0[c].cut_quadrants();
        (self.slot_circle[4 * c + q0], self.slot_circle[4 * c + q1])
    }

    /// Euler characteristic of the state surface: one disk per circle, one band per crossing.
    pub fn euler_characteristic(&self) -> i64 {
        self.circles.len() as i64 - self.state.len() as i64
    }

    /// Whether the state surface is orientable. Each band is a half-twisted
    /// band; the surface is orientable exactly when the circles can be
    /// oriented so that the two arcs at every crossing run parallel.
    pub fn is_orientable(&self) -> bool {
        let m = self.circles.len();
        // direction of each arc as traversed by its circle, keyed by slot
        let mut arc_dir = std::collections::HashMap::new();
        for circ in &self.circles {
            for st in &circ.steps {
                let low = if st.direction() > 0 {
                    st.enter
                } else {
                    st.exit
                };
                arc_dir.insert((st.crossing, low as usize), st.direction());
            }
        }
        // constraint graph: flip[i] xor flip[j] == need
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m];
        for c in 0..self.state.len() {
            let lows = self.state.0[c].cut_quadrants();
            let d1 = arc_dir[&(c, lows[0])];
            let d2 = arc_dir[&(c, lows[1])];
            let need = d1 == d2;
            let i = self.slot_circle[4 * c + lows[0]];
            let j = self.slot_circle[4 * c + lows[1]];
            adj[i].push((j, need));
            adj[j].push((i, need));
        }
        let mut flip: Vec<Option<bool>> = vec![None; m];
        for s in 0..m {
            if flip[s].is_some() {
                continue;
            }
            flip[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let fu = flip[u].unwrap();
                for &(v, need) in &adj[u] {
                    let want = fu ^ need;
                    match flip[v] {
                        None => {
                            flip[v] = Some(want);
                            stack.push(v);
                        }
                        Some(fv) if fv != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Circles adjacent to each region.
    fn region_degree(&self) -> Vec<usize> {
        let mut deg = vec![0; self.region_count];
        for &(a, b) in &self.circle_sides {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    fn side_is_clean(&self, region: usize, deg: &[usize]) -> bool {
        deg[region] == 1 && !self.region_has_band[region]
    }

    /// A circle is innermost when one of its sides holds no other circle and
    /// no crossing band, so that its state disk can be pushed into the sphere.
    pub fn is_innermost(&self, circle: usize) -> bool {
        let deg = self.region_degree();
        let (a, b) = self.circle_sides[circle];
        self.side_is_clean(a, &deg) || self.side_is_clean(b, &deg)
    }

    pub fn non_innermost(&self) -> Vec<usize> {
        let deg = self.region_degree();
        (0..self.circles.len())
            .filter(|&i| {
                let (a, b) = self.circle_sides[i];
                !(self.side_is_clean(a, &deg) || self.side_is_clean(b, &deg))
            })
            .collect()
    }

    /// Region on the side of `circle` away from the region holding face 0;
    /// this is where the circle's state disk projects when disks are nested
    /// in the plane with face 0 unbounded. Valid on genus 0 diagrams.
    pub fn inside_region(&self, circle: usize) -> usize {
        let root = self.face_region.first().copied().unwrap_or(0);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.region_count];
        for (i, &(a, b)) in self.circle_sides.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut depth = vec![usize::MAX; self.region_count];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let (a, b) = self.circle_sides[circle];
        if depth[a] > depth[b] {
            a
        } else {
            b
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap()
    }

    #[test]
    fn trefoil_state_circles() {
        let d = trefoil();
        let a = d.resolve_state(&State::all(Smoothing::A, 3)).unwrap();
        let b = d.resolve_state(&State::all(Smoothing::B, 3)).unwrap();
        assert_eq!(a.circle_count(), 2);
        assert_eq!(b.circle_count(), 3);
    }

    #[test]
    fn each_crossing_gives_two_passages() {
        let d = trefoil();
        let r = d.resolve_state(&State::all(Smoothing::A, 3)).unwrap();
        let passages: usize = r.circles.iter().map(|c| c.steps.len()).sum();
        assert_eq!(passages, 6);
    }

    #[test]
    fn unknot_single_circle() {
        let d = LinkDiagram::unknot();
        let r = d.resolve_state(&State(Vec::new())).unwrap();
        assert_eq!(r.circle_count(), 1);
        assert!(r.is_innermost(0));
    }

    #[test]
    fn trefoil_surfaces_orientability() {
        let d = trefoil();
        let a = d.resolve_state(&State::all(Smoothing::A, 3)).unwrap();
        let b = d.resolve_state(&State::all(Smoothing::B, 3)).unwrap();
        // two disks and three bands: the genus one Seifert surface
        assert!(a.is_orientable());
        // three disks joined in a triangle: a Moebius band with three half twists
        assert!(!b.is_orientable());
        assert!(d
            .resolve_state(&State::seifert(&d))
            .unwrap()
            .is_orientable());
    }

    #[test]
    fn trefoil_all_b_is_innermost() {
        let d = trefoil();
        let b = d.resolve_state(&State::all(Smoothing::B, 3)).unwrap();
        assert!(b.non_innermost().is_empty());
    }

    #[test]
    fn state_strings() {
        let d = trefoil();
        assert_eq!(State::parse("ABA", &d).unwrap().word(), "ABA");
        assert!(State::parse("AB", &d).is_err());
        assert!(State::parse("AXA", &d).is_err());
    }
}
