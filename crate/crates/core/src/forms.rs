//! Goeritz forms of checkerboard surfaces and their minima.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Color, DiagramError, LinkDiagram, Smoothing};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("crossing {0} meets one face twice; the diagram is not reduced")]
    NotReduced(usize),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Integer symmetric matrix of the Gordon-Litherland pairing on the first
/// homology of one checkerboard surface, in the basis of the opposite-color
/// regions with the highest-indexed region dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoeritzForm {
    pub matrix: Vec<Vec<i64>>,
    /// Opposite-color faces indexing rows and columns.
    pub retained_regions: Vec<usize>,
    pub omitted_region: Option<usize>,
    pub surface_color: Color,
    /// +1 when crossings whose surface smoothing is A count positively, -1
    /// when the matrix was negated to make a definite form positive.
    pub sign_convention: i32,
}

impl GoeritzForm {
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> GoeritzForm {
        let n = matrix.len();
        assert!(matrix.iter().all(|r| r.len() == n), "square matrix");
        GoeritzForm {
            matrix,
            retained_regions: (0..n).collect(),
            omitted_region: None,
            surface_color: Color::Black,
            sign_convention: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// Exact value of x^T G x.
    pub fn evaluate(&self, x: &[i64]) -> i128 {
        let n = self.dim();
        let mut total = 0i128;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row: i128 = (0..n)
                .map(|j| self.matrix[i][j] as i128 * x[j] as i128)
                .sum();
            total += x[i] as i128 * row;
        }
        total
    }

    /// Leading principal minors, exactly, by fraction-free elimination. Stops
    /// after the first minor that is not positive.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.dim();
        let mut m: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut prev = BigInt::from(1);
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = m[k][k].clone();
            out.push(pivot.clone());
            if !pivot.is_positive() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&pivot * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = pivot;
        }
        out
    }

    /// Sylvester's criterion in exact arithmetic. The empty form counts as definite.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let minors = self.leading_minors();
        minors.len() == self.dim() && minors.iter().all(|v| v.is_positive())
    }

    pub fn negated(&self) -> GoeritzForm {
        GoeritzForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|&v| -v).collect())
                .collect(),
            sign_convention: -self.sign_convention,
            ..self.clone()
        }
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.dim();
        if n == 0 {
            return BigInt::from(1);
        }
        // Fraction-free elimination with row swaps.
        let mut m: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut prev = BigInt::from(1);
        let mut sign = 1;
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        prev * sign
    }
}

/// The Goeritz form of the checkerboard surface of `color`. Rows are the
/// opposite-color faces; a crossing joining two of them contributes `-eta`
/// off the diagonal, with `eta = +1` when the surface's smoothing there is A.
/// When the resulting form is negative definite it is negated so that the
/// definite surface of a reduced alternating diagram reads positive.
pub fn goeritz_matrix(d: &LinkDiagram, color: Color) -> Result<GoeritzForm, FormError> {
    if !d.is_connected() {
        return Err(DiagramError::Split {
            pieces: d.piece_count(),
        }
        .into());
    }
    if let Some(&c) = d.doubled_crossings().first() {
        return Err(FormError::NotReduced(c));
    }
    let coloring = d.checkerboard_coloring()?;
    let regions = coloring.faces_of(color.opposite());
    let r = regions.len();
    let index = |f: usize| {
        regions
            .binary_search(&f)
            .expect("region of the opposite color")
    };
    let mut full = vec![vec![0i64; r]; r];
    for c in 0..d.crossing_count() {
        let label = if coloring.color(d.corner_face(c, 1)) == color {
            Smoothing::A
        } else {
            Smoothing::B
        };
        let eta = if label == Smoothing::A { 1 } else { -1 };
        let [q0, q1] = label.channel_quadrants();
        let (i, j) = (index(d.corner_face(c, q0)), index(d.corner_face(c, q1)));
        full[i][j] -= eta;
        full[j][i] -= eta;
        full[i][i] += eta;
        full[j][j] += eta;
    }
    let keep = r.saturating_sub(1);
    let matrix: Vec<Vec<i64>> = full
        .iter()
        .take(keep)
        .map(|row| row[..keep].to_vec())
        .collect();
    let form = GoeritzForm {
        matrix,
        retained_regions: regions[..keep].to_vec(),
        omitted_region: regions.last().copied(),
        surface_color: color,
        sign_convention: 1,
    };
    if !form.is_positive_definite() && form.negated().is_positive_definite() {
        return Ok(form.negated());
    }
    Ok(form)
}

/// Minimum of a positive definite form over nonzero integer vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMinimum {
    pub value: i64,
    /// A minimizing vector, scaled so its first nonzero entry is positive.
    pub witness: Vec<i64>,
    /// Per-coordinate bound `|x_i| <= bound_i` covering every vector of value
    /// at most the smallest diagonal entry.
    pub coordinate_bounds: Vec<i64>,
    /// Lattice points visited by the enumeration.
    pub nodes: u64,
}

/// Fincke-Pohst enumeration of all vectors with value at most the smallest
/// diagonal entry, from a floating Cholesky factorization with slack; every
/// candidate is re-evaluated exactly.
pub fn form_minimum(form: &GoeritzForm) -> Result<FormMinimum, FormError> {
    if !form.is_positive_definite() {
        return Err(FormError::NotPositiveDefinite);
    }
    let n = form.dim();
    if n == 0 {
        return Err(FormError::NotPositiveDefinite);
    }
    let g: Vec<Vec<f64>> = form
        .matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    // Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    let mut q = g.clone();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = (0..n).map(|i| form.matrix[i][i]).min().expect("nonempty") as f64;
    let slack = 1e-7 * (1.0 + bound);
    let limit = bound + slack;
    let coordinate_bounds = coordinate_bounds(&g, bound + slack);

    // Split on the last coordinate for parallel work; each branch returns
    // its best exact (value, vector) and node count.
    let top = n - 1;
    let r = (limit / q[top][top]).sqrt().floor() as i64;
    let values: Vec<i64> = (-r..=r).collect();
    let branches = par::map(&values, |&v| {
        let mut x = vec![0i64; n];
        x[top] = v;
        let rest = limit - q[top][top] * (v as f64) * (v as f64);
        let mut best: Option<(i128, Vec<i64>)> = None;
        let mut nodes = 1u64;
        if top == 0 {
            consider(form, &x, &mut best);
        } else {
            descend(form, &q, top - 1, rest, &mut x, &mut best, &mut nodes);
        }
        (best, nodes)
    });
    let mut best: Option<(i128, Vec<i64>)> = None;
    let mut nodes = 0;
    for (b, k) in branches {
        nodes += k;
        if let Some(cand) = b {
            if best
                .as_ref()
                .is_none_or(|cur| (cand.0, &cand.1) < (cur.0, &cur.1))
            {
                best = Some(cand);
            }
        }
    }
    let (value, witness) = best.expect("a unit vector meets the diagonal bound");
    Ok(FormMinimum {
        value: value as i64,
        witness,
        coordinate_bounds,
        nodes,
    })
}

fn descend(
    form: &GoeritzForm,
    q: &[Vec<f64>],
    i: usize,
    remaining: f64,
    x: &mut Vec<i64>,
    best: &mut Option<(i128, Vec<i64>)>,
    nodes: &mut u64,
) {
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    if remaining < 0.0 {
        return;
    }
    let half = (remaining / q[i][i]).sqrt();
    let lo = (center - half).ceil() as i64;
    let hi = (center + half).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 - center;
        let rest = remaining - q[i][i] * t * t;
        if rest < 0.0 {
            continue;
        }
        x[i] = v;
        *nodes += 1;
        if i == 0 {
            consider(form, x, best);
        } else {
            descend(form, q, i - 1, rest, x, best, nodes);
        }
    }
    x[i] = 0;
}

fn consider(form: &GoeritzForm, x: &[i64], best: &mut Option<(i128, Vec<i64>)>) {
    let Some(first) = x.iter().position(|&v| v != 0) else {
        return;
    };
    let mut v = x.to_vec();
    if v[first] < 0 {
        v.iter_mut().for_each(|a| *a = -*a);
    }
    let val = form.evaluate(&v);
    if best.as_ref().is_none_or(|cur| (val, &v) < (cur.0, &cur.1)) {
        *best = Some((val, v));
    }
}

/// `|x_i| <= sqrt(c * (G^-1)_ii)` for every x with x^T G x <= c.
fn coordinate_bounds(g: &[Vec<f64>], c: f64) -> Vec<i64> {
    let n = g.len();
    // Gauss-Jordan inverse in floating point; only used for a search box.
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .unwrap();
        a.swap(k, p);
        let piv = a[k][k];
        for v in a[k].iter_mut() {
            *v /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k];
                if f != 0.0 {
                    for j in 0..2 * n {
                        a[i][j] -= f * a[k][j];
                    }
                }
            }
        }
    }
    (0..n)
        .map(|i| (c * a[i][n + i]).max(0.0).sqrt().floor() as i64 + 1)
        .collect()
}

/// Exhaustive minimum over the box `|x_i| <= bound` (for small forms).
pub fn brute_force_minimum(form: &GoeritzForm, bound: i64) -> Option<i64> {
    let n = form.dim();
    let mut x = vec![-bound; n];
    let mut best: Option<i128> = None;
    loop {
        if x.iter().any(|&v| v != 0) {
            let v = form.evaluate(&x);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        let mut i = 0;
        loop {
            if i == n {
                return best.map(|b| b as i64);
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::tait_graph;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap()
    }

    #[test]
    fn trefoil_black_form() {
        let f = goeritz_matrix(&trefoil(), Color::Black).unwrap();
        assert_eq!(f.matrix, vec![vec![2, -1], vec![-1, 2]]);
        assert!(f.is_positive_definite());
        assert_eq!(form_minimum(&f).unwrap().value, 2);
    }

    #[test]
    fn trefoil_white_form() {
        let f = goeritz_matrix(&trefoil(), Color::White).unwrap();
        assert_eq!(f.matrix, vec![vec![3]]);
        assert_eq!(form_minimum(&f).unwrap().value, 3);
    }

    #[test]
    fn hopf_form() {
        let d = crate::diagram::PlaneGraph::cycle(2, Smoothing::A)
            .to_diagram()
            .unwrap();
        let forms: Vec<Vec<Vec<i64>>> = [Color::Black, Color::White]
            .iter()
            .map(|&c| goeritz_matrix(&d, c).unwrap().matrix)
            .collect();
        assert!(forms.contains(&vec![vec![2]]));
    }

    #[test]
    fn kink_is_rejected() {
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        assert!(matches!(
            goeritz_matrix(&d, Color::Black),
            Err(FormError::NotReduced(0))
        ));
    }

    #[test]
    fn definiteness() {
        assert!(GoeritzForm::from_matrix(vec![vec![2, -1], vec![-1, 2]]).is_positive_definite());
        assert!(!GoeritzForm::from_matrix(vec![vec![0]]).is_positive_definite());
        assert!(!GoeritzForm::from_matrix(vec![vec![1, 0], vec![0, -1]]).is_positive_definite());
        assert_eq!(
            GoeritzForm::from_matrix(vec![vec![2, -1], vec![-1, 2]]).determinant(),
            BigInt::from(3)
        );
    }

    #[test]
    fn minima() {
        let id = GoeritzForm::from_matrix(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(form_minimum(&id).unwrap().value, 1);
        assert_eq!(
            form_minimum(&GoeritzForm::from_matrix(vec![vec![3]]))
                .unwrap()
                .value,
            3
        );
        let a2 = GoeritzForm::from_matrix(vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(brute_force_minimum(&a2, 2), Some(2));
        // a form whose minimum is far below its diagonal
        let skew = GoeritzForm::from_matrix(vec![vec![10, 9], vec![9, 10]]);
        let m = form_minimum(&skew).unwrap();
        assert_eq!(m.value, 2);
        assert_eq!(skew.evaluate(&m.witness), 2);
        assert_eq!(
            brute_force_minimum(&skew, *m.coordinate_bounds.iter().max().unwrap()),
            Some(2)
        );
    }

    #[test]
    fn tait_girth_matches_form_minimum_on_trefoil() {
        let d = trefoil();
        for c in [Color::Black, Color::White] {
            let g = tait_graph(&d, c).unwrap().girth().length.unwrap() as i64;
            assert_eq!(
                form_minimum(&goeritz_matrix(&d, c).unwrap()).unwrap().value,
                g
            );
        }
    }
}
