//! Structural flags: alternating, reduced, prime, nugatory crossings.

use serde::{Deserialize, Serialize};

use super::LinkDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramFlags {
    pub alternating: bool,
    pub connected: bool,
    pub reduced: bool,
    pub cellular: bool,
    pub diagram_prime: bool,
    pub split: bool,
}

impl LinkDiagram {
    /// Every edge runs from an under-passage to an over-passage.
    pub fn is_alternating(&self) -> bool {
        (0..self.edges.len()).all(|e| {
            let [a, b] = self.edges[e];
            (a % 2) != (b % 2)
        })
    }

    /// Crossings met twice by a single face, in increasing order.
    pub fn doubled_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count())
            .filter(|&c| {
                let f: Vec<usize> = (0..4).map(|q| self.corner_face(c, q)).collect();
                (0..4).any(|i| (i + 1..4).any(|j| f[i] == f[j]))
            })
            .collect()
    }

    /// Removably nugatory crossings: a face meets the crossing in two opposite
    /// quadrants and the curve through that face and the crossing cuts off a
    /// disk. On the sphere every doubled crossing qualifies.
    pub fn detect_nugatory(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in 0..self.crossing_count() {
            let f: Vec<usize> = (0..4).map(|q| self.corner_face(c, q)).collect();
            let removable = (0..2).any(|k| f[k] == f[k + 2] && self.cuts_off_disk(c, k));
            if removable {
                out.push(c);
            }
        }
        out
    }

    /// Smooths crossing `c` so that quadrants `k` and `k + 2` join, and reports
    /// whether this separates the diagram with a genus 0 piece on one side.
    fn cuts_off_disk(&self, c: usize, k: usize) -> bool {
        if self.genus() == 0 {
            return true;
        }
        let n = self.crossing_count();
        // Surviving slots are renumbered by skipping crossing c.
        let renum = |s: usize| {
            let d = s / 4;
            if d > c {
                s - 4
            } else {
                s
            }
        };
        let m = n - 1;
        let mut partner = vec![usize::MAX; 4 * m];
        // Follow an edge end through the smoothed crossing until a surviving slot is hit.
        let follow = |start: usize| -> Option<usize> {
            let mut s = self.partner(start);
            let mut guard = 0;
            while s / 4 == c {
                let k2 = s % 4;
                // arcs of the smoothing: (k+1, k+2) and (k+3, k)
                let other = if k2 == (k + 1) % 4 {
                    (k + 2) % 4
                } else if k2 == (k + 2) % 4 {
                    (k + 1) % 4
                } else if k2 == (k + 3) % 4 {
                    k
                } else {
                    (k + 3) % 4
                };
                s = self.partner(4 * c + other);
                guard += 1;
                if guard > 8 {
                    return None;
                }
            }
            Some(s)
        };
        for s in 0..4 * n {
            if s / 4 == c {
                continue;
            }
            if let Some(t) = follow(s) {
                partner[renum(s)] = renum(t);
            }
        }
        let side_a = [follow(4 * c + (k + 1) % 4), follow(4 * c + (k + 2) % 4)];
        let side_b = [follow(4 * c + (k + 3) % 4), follow(4 * c + k)];
        // A side with no surviving crossing is a bare loop: a disk.
        let piece = super::piece_labels(m, &partner);
        let pa = side_a.iter().flatten().next().map(|&s| piece[renum(s) / 4]);
        let pb = side_b.iter().flatten().next().map(|&s| piece[renum(s) / 4]);
        let (pa, pb) = match (pa, pb) {
            (None, _) | (_, None) => return true,
            (Some(a), Some(b)) => (a, b),
        };
        if pa == pb {
            return false;
        }
        let (faces, _) = super::trace_faces_raw(m, &partner);
        let genus_of = |p: usize| {
            let v = piece.iter().filter(|&&q| q == p).count() as i64;
            let f = faces
                .iter()
                .filter(|fc| piece[fc.corners[0].crossing] == p)
                .count() as i64;
            (2 - (v - 2 * v + f)) / 2
        };
        genus_of(pa) == 0 || genus_of(pb) == 0
    }

    /// Whether removing two edges can split the crossings into two nonempty
    /// sets. Loops never separate and are skipped.
    pub fn separating_two_edge_cut(&self) -> Option<(usize, usize)> {
        let n = self.crossing_count();
        let e = self.edges.len();
        let ends: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a / 4, b / 4)).collect();
        for i in 0..e {
            if ends[i].0 == ends[i].1 {
                continue;
            }
            for j in i + 1..e {
                if ends[j].0 == ends[j].1 {
                    continue;
                }
                let mut seen = vec![false; n];
                seen[0] = true;
                let mut stack = vec![0];
                while let Some(c) = stack.pop() {
                    for k in 0..4 {
                        let s = 4 * c + k;
                        let ed = self.slot_edge(s);
                        if ed == i || ed == j {
                            continue;
                        }
                        let d = self.partner(s) / 4;
                        if !seen[d] {
                            seen[d] = true;
                            stack.push(d);
                        }
                    }
                }
                if seen.iter().any(|&x| !x) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn classify(&self) -> DiagramFlags {
        let connected = self.is_connected();
        let reduced = self.doubled_crossings().is_empty();
        let diagram_prime = connected
            && reduced
            && (self.crossing_count() < 2 || self.separating_two_edge_cut().is_none());
        DiagramFlags {
            alternating: self.is_alternating(),
            connected,
            reduced,
            cellular: connected,
            diagram_prime,
            split: !connected,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> LinkDiagram {
        LinkDiagram::parse(s).unwrap()
    }

    #[test]
    fn trefoil_flags() {
        let f = parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").classify();
        assert!(f.alternating && f.reduced && f.diagram_prime && f.connected && !f.split);
    }

    #[test]
    fn kink_flags() {
        let d = parse("X 1 1 2 2");
        assert!(!d.classify().reduced);
        assert_eq!(d.detect_nugatory(), vec![0]);
    }

    #[test]
    fn trefoil_has_no_nugatory() {
        assert!(parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3")
            .detect_nugatory()
            .is_empty());
    }

    #[test]
    fn trefoil_with_kink() {
        // edge 6 of the trefoil opened into a kink: 6 -> 6, 7, 7, 8
        let d = parse("X 1 4 2 5\nX 3 8 4 1\nX 5 2 6 3\nX 6 7 7 8");
        assert_eq!(d.detect_nugatory(), vec![3]);
        assert!(!d.classify().diagram_prime);
    }

    #[test]
    fn split_diagram_is_parsed() {
        let d = parse("X 1 1 2 2\nX 3 3 4 4");
        let f = d.classify();
        assert!(f.split && !f.connected && !f.diagram_prime);
    }
}
