//! Named diagrams and surfaces used by tests, the CLI and the self test.
//!
//! Knots from tables use the PD convention of the parser. Surfaces built from
//! signed plane graphs are the checkerboard surface of the vertex colour, so
//! each graph vertex is a disk and each edge a half-twisted band.

use crate::diagram::{Color, LinkDiagram, PlaneGraph, Smoothing};

use Smoothing::{A, B};

/// A diagram with a chosen checkerboard surface.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub diagram: LinkDiagram,
    pub color: Color,
}

impl Fixture {
    fn pd(name: &'static str, pd: &[[u32; 4]], color: Color) -> Fixture {
        let diagram = LinkDiagram::from_pd(pd, None).expect("fixture PD is valid");
        Fixture { name, diagram, color }
    }

    fn graph(name: &'static str, g: &PlaneGraph) -> Fixture {
        let diagram = g.to_diagram().expect("fixture graph is planar");
        let color = g.vertex_color(&diagram).expect("medial diagrams are colorable");
        Fixture { name, diagram, color }
    }

    /// The same diagram with the other checkerboard surface.
    pub fn opposite(&self) -> Fixture {
        Fixture { color: self.color.opposite(), ..self.clone() }
    }
}

pub fn trefoil() -> Fixture {
    Fixture::pd("trefoil", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], Color::Black)
}

pub fn figure_eight() -> Fixture {
    Fixture::pd("figure-eight", &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]], Color::Black)
}

/// The knot 6_2.
pub fn six_two() -> Fixture {
    Fixture::pd(
        "6_2",
        &[[1, 4, 2, 5], [5, 10, 6, 11], [3, 9, 4, 8], [9, 3, 10, 2], [7, 12, 8, 1], [11, 6, 12, 7]],
        Color::Black,
    )
}

/// The knot 8_5, drawn as the alternating pretzel P(3,3,2).
pub fn eight_five() -> Fixture {
    Fixture::graph("8_5", &PlaneGraph::theta(&[vec![B; 3], vec![B; 3], vec![B; 2]]))
}

/// Prime reduced alternating knots.
pub fn prime_alternating() -> Vec<Fixture> {
    vec![trefoil(), figure_eight(), six_two(), eight_five()]
}

/// The Borromean rings as the medial of K4.
pub fn borromean() -> Fixture {
    Fixture::graph("borromean", &PlaneGraph::k4(A))
}

/// Two disks joined by three bands with `k`, `-k` and `k` half twists.
pub fn pretzel(k: usize) -> Fixture {
    let name = match k {
        2 => "pretzel(-2,2,-2)",
        3 => "pretzel(-3,3,-3)",
        _ => "pretzel(-k,k,-k)",
    };
    Fixture::graph(name, &PlaneGraph::theta(&[vec![B; k], vec![A; k], vec![B; k]]))
}

/// An unknotted annulus with `n` half twists.
pub fn twisted_annulus(n: usize) -> Fixture {
    Fixture::graph("twisted annulus", &PlaneGraph::cycle(n, A))
}

/// Closure of a braid on `strands` strands. Letter `i` is the generator
/// crossing strands `|i|` and `|i| + 1`, positive for `i > 0`. Strands no
/// letter touches have no crossings and are left out.
pub fn braid_closure(strands: usize, word: &[i32]) -> LinkDiagram {
    assert!(word.iter().all(|&g| g != 0 && (g.unsigned_abs() as usize) < strands));
    let mut next = 1u32;
    let start: Vec<u32> = (0..strands)
        .map(|_| {
            next += 1;
            next - 1
        })
        .collect();
    let mut at = start.clone();
    let mut rows = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let (l, r) = (at[i], at[i + 1]);
        let (nl, nr) = (next, next + 1);
        next += 2;
        // counterclockwise from the incoming under strand
        rows.push(if g > 0 { [l, r, nr, nl] } else { [r, nr, nl, l] });
        at[i] = nl;
        at[i + 1] = nr;
    }
    // close each strand onto its starting label
    let rename = |x: u32| at.iter().position(|&y| y == x).map_or(x, |p| start[p]);
    let rows: Vec<[u32; 4]> = rows.iter().map(|r| r.map(rename)).collect();
    LinkDiagram::from_pd(&rows, None).expect("braid closures are planar")
}

/// Seifert surface of the closure of the 3-braid `s1 s1 s2 s1^-1 s1^-1 s2`:
/// a Hopf band on the last two strands plumbed onto the compressible
/// surface of `s1 s1 s1^-1 s1^-1`. Its Seifert circles are nested.
pub fn plumbed_seifert() -> LinkDiagram {
    braid_closure(3, &[1, 1, 2, -1, -1, 2])
}

/// The plane graph of [`f0`].
pub fn f0_graph() -> PlaneGraph {
    PlaneGraph::theta(&[vec![A], vec![A], vec![B, A]])
}

/// Two disks joined by bands with net twists 1, 1 and 0: the boundary
/// connected sum of two same-handed Mobius bands, spanning the unknot. It
/// has nonzero slope, so no compressing disk, but its rank-two free group
/// cannot inject into the unknot group.
pub fn f0() -> Fixture {
    Fixture::graph("F0", &f0_graph())
}

/// The plane graph of [`f1`].
pub fn f1_graph() -> PlaneGraph {
    let mut g = f0_graph();
    for pole in [0, 1] {
        // the poles have degree three; fill corners from the last so earlier
        // positions stay put
        for corner in (0..3).rev() {
            g.attach_cycle(pole, corner, 4, A);
        }
    }
    g
}

/// [`f0`] with an annulus of two full twists plumbed into each of the six
/// corners at its two three-valent disks.
pub fn f1() -> Fixture {
    Fixture::graph("F1", &f1_graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::goeritz_matrix;

    #[test]
    fn table_knots_have_their_determinants() {
        // |det| of the Goeritz form is the knot determinant
        for (f, det) in [(trefoil(), 3), (figure_eight(), 5), (six_two(), 11), (eight_five(), 21)] {
            let d = goeritz_matrix(&f.diagram, f.color).unwrap().determinant();
            assert_eq!(d.magnitude().to_string(), det.to_string(), "{}", f.name);
            assert_eq!(f.diagram.component_count(), 1);
            let flags = f.diagram.classify();
            assert!(flags.alternating && flags.reduced && flags.diagram_prime, "{}", f.name);
        }
    }

    #[test]
    fn f1_has_seven_boundary_components() {
        // each annulus with an even number of half twists adds a component
        assert_eq!(f0().diagram.component_count(), 1);
        assert_eq!(f1().diagram.component_count(), 7);
        assert_eq!(f1().diagram.crossing_count(), 4 + 6 * 4);
    }

    #[test]
    fn braid_closures() {
        // s1^3 is the trefoil; the idle third strand leaves no crossings
        let d = braid_closure(3, &[1, 1, 1]);
        assert_eq!((d.crossing_count(), d.component_count()), (3, 1));
        let det = goeritz_matrix(&d, Color::Black).unwrap().determinant();
        assert_eq!(det.magnitude().to_string(), "3");
        // (s1 s2^-1)^2 is the figure-eight, alternating
        let d = braid_closure(3, &[1, -2, 1, -2]);
        assert!(d.classify().alternating);
        let det = goeritz_matrix(&d, Color::Black).unwrap().determinant();
        assert_eq!(det.magnitude().to_string(), "5");
        let d = plumbed_seifert();
        let res = d.resolve_state(&crate::diagram::State::seifert(&d)).unwrap();
        assert!(!res.non_innermost().is_empty());
    }

    #[test]
    fn pretzel_bands() {
        for k in [2, 3] {
            let f = pretzel(k);
            assert_eq!(f.diagram.crossing_count(), 3 * k);
            let comps = if k % 2 == 0 { 3 } else { 1 };
            assert_eq!(f.diagram.component_count(), comps);
        }
    }
}
