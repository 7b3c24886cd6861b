//! Orders of crossing points along vertical arcs and edges.
//!
//! Several arcs of `X ∩ W` may end on one vertical arc. Their endpoints lie
//! at distinct heights, and that one order is what every face meeting the
//! arc sees at its corner there, upward at even quadrants and downward at odd
//! ones. Chords that are disjoint cell by cell when each corner is a single
//! point can still force incompatible orders at a shared corner, so a glued
//! tree is only embedded when some choice of orders keeps every sheet's
//! chords disjoint at once.

/// A chord end: its spot's position on the face boundary, the arc or edge
/// its point lies on, the point, and whether the face runs down that arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct End {
    pub base: usize,
    pub container: usize,
    pub point: usize,
    pub flip: bool,
}

/// Orderings tried before giving up and accepting. Accepting keeps the
/// search complete, since this check only removes candidates.
const PERMUTATION_BUDGET: u64 = 200_000;

/// Whether the points on each container can be ordered so that no two
/// chords of one sheet cross.
pub(crate) fn consistent(sheets: &[Vec<(End, End)>], point_count: usize) -> bool {
    // pairs whose verdict depends on the orders, keyed by the containers involved
    let mut pending: Vec<([End; 4], Vec<usize>)> = Vec::new();
    for sheet in sheets {
        for (i, &(a, b)) in sheet.iter().enumerate() {
            for &(c, d) in &sheet[i + 1..] {
                let ends = [a, b, c, d];
                let shared: Vec<usize> = shared_containers(&ends);
                if shared.is_empty() {
                    if crosses(&ends, &[]) {
                        return false;
                    }
                } else {
                    pending.push((ends, shared));
                }
            }
        }
    }
    if pending.is_empty() {
        return true;
    }
    let mut members: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for sheet in sheets {
        for &(a, b) in sheet {
            for e in [a, b] {
                let m = members.entry(e.container).or_default();
                if !m.contains(&e.point) {
                    m.push(e.point);
                }
            }
        }
    }
    let mut order: Vec<usize> = pending.iter().flat_map(|p| p.1.iter().copied()).collect();
    order.sort_unstable();
    order.dedup();
    // larger containers first prune the most
    order.sort_by_key(|c| std::cmp::Reverse(members[c].len()));
    let place = |c: usize| {
        order
            .iter()
            .position(|&x| x == c)
            .expect("listed container")
    };
    let mut by_stage: Vec<Vec<[End; 4]>> = vec![Vec::new(); order.len()];
    for (ends, shared) in &pending {
        let stage = shared.iter().map(|&c| place(c)).max().expect("nonempty");
        by_stage[stage].push(*ends);
    }
    let mut rank = vec![0usize; point_count];
    let mut budget = PERMUTATION_BUDGET;
    let groups: Vec<Vec<usize>> = order.iter().map(|c| members[c].clone()).collect();
    search(0, &groups, &by_stage, &mut rank, &mut budget).unwrap_or(true)
}

/// Containers holding two ends that sit at one spot.
fn shared_containers(ends: &[End; 4]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if ends[i].base == ends[j].base
                && ends[i].point != ends[j].point
                && !out.contains(&ends[i].container)
            {
                out.push(ends[i].container);
            }
        }
    }
    out
}

/// Chords `ends[0..2]` and `ends[2..4]` cross once points are ranked.
fn crosses(ends: &[End; 4], rank: &[usize]) -> bool {
    let pos = |e: &End| {
        let r = rank.get(e.point).copied().unwrap_or(0) as i64;
        (e.base, if e.flip { -r } else { r })
    };
    let [pa, pb, pc, pd] = [pos(&ends[0]), pos(&ends[1]), pos(&ends[2]), pos(&ends[3])];
    if pa == pc || pa == pd || pb == pc || pb == pd {
        return false;
    }
    let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
    let inside = |x: (usize, i64)| x > lo && x < hi;
    inside(pc) != inside(pd)
}

/// `None` when the budget runs out.
fn search(
    stage: usize,
    groups: &[Vec<usize>],
    by_stage: &[Vec<[End; 4]>],
    rank: &mut [usize],
    budget: &mut u64,
) -> Option<bool> {
    if stage == groups.len() {
        return Some(true);
    }
    let mut perm = groups[stage].clone();
    perm.sort_unstable();
    loop {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        for (r, &p) in perm.iter().enumerate() {
            rank[p] = r;
        }
        if by_stage[stage].iter().all(|e| !crosses(e, rank)) {
            match search(stage + 1, groups, by_stage, rank, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
        }
        if !next_permutation(&mut perm) {
            return Some(false);
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn end(base: usize, container: usize, point: usize) -> End {
        End {
            base,
            container,
            point,
            flip: false,
        }
    }

    #[test]
    fn disjoint_bases_need_no_order() {
        let sheet = vec![(end(0, 0, 0), end(4, 2, 1)), (end(2, 1, 2), end(6, 3, 3))];
        assert!(!consistent(&[sheet], 4));
        let sheet = vec![(end(0, 0, 0), end(2, 1, 1)), (end(4, 2, 2), end(6, 3, 3))];
        assert!(consistent(&[sheet], 4));
    }

    #[test]
    fn one_order_serves_two_sheets_or_fails() {
        // points 0 and 1 share container 0 at base 0 of both sheets; the
        // first sheet wants 0 nearer base 2, the second wants 1 nearer it
        let s1 = vec![(end(0, 0, 0), end(2, 1, 2)), (end(0, 0, 1), end(4, 2, 3))];
        let s2 = vec![(end(0, 0, 1), end(2, 3, 4)), (end(0, 0, 0), end(4, 4, 5))];
        assert!(consistent(std::slice::from_ref(&s1), 6));
        assert!(consistent(std::slice::from_ref(&s2), 6));
        assert!(!consistent(&[s1.clone(), s2], 6));
        // a flipped corner reverses what the second sheet sees
        let s3 = vec![
            (
                End {
                    flip: true,
                    ..end(0, 0, 1)
                },
                end(2, 3, 4),
            ),
            (
                End {
                    flip: true,
                    ..end(0, 0, 0)
                },
                end(4, 4, 5),
            ),
        ];
        assert!(consistent(&[s1, s3], 6));
    }

    #[test]
    fn parallel_chords_nest() {
        // two chords between the same pair of spots must nest
        let ok = vec![(end(0, 0, 0), end(2, 1, 2)), (end(0, 0, 1), end(2, 1, 3))];
        assert!(consistent(&[ok], 4));
        // and a second sheet pinning both orders the crossing way fails
        let a = vec![(end(0, 0, 0), end(2, 1, 2)), (end(0, 0, 1), end(2, 1, 3))];
        let pin0 = vec![(end(0, 0, 0), end(1, 5, 4)), (end(0, 0, 1), end(3, 6, 5))];
        let pin1 = vec![(end(0, 1, 2), end(1, 7, 6)), (end(0, 1, 3), end(3, 8, 7))];
        assert!(!consistent(&[a, pin0, pin1], 8));
    }

    #[test]
    fn permutations_enumerate_all_orders() {
        let mut v = vec![0, 1, 2, 3];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 24);
    }
}
