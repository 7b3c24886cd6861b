//! Property suite behind the `selftest` command and the acceptance test.
//!
//! Every check is seeded and its report holds no timings, so the JSON form is
//! the same on every run and for every thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capsearch::{
    enumerate_subdisks, find_bounded_height_caps, CapSearchOutcome, FlatCapDecomposition,
    NoneReason, SearchConfig, SearchMode,
};
use crate::diagram::{Color, LinkDiagram, PlaneGraph, Smoothing, State};
use crate::essence::{essence_alternating_checkerboard, Bound};
use crate::fixtures;
use crate::forms::{brute_force_minimum, form_minimum, goeritz_matrix, GoeritzForm};
use crate::graphs::{state_graph, tait_graph, LabeledMultigraph};
use crate::par;
use crate::plumbing::{deplumb_state, random_tree, tree_count_inequality, validate_twisted_plumbing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Node budget for each cap search.
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub budget: u64,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = fn(&SuiteConfig) -> (bool, String);

/// The checks in order: id, name and body.
pub const CHECKS: &[(u32, &str, Check)] = &[
    (1, "tait girth equals goeritz minimum", girth_matches_form),
    (2, "trefoil essences", trefoil_essences),
    (3, "prime alternating base strata are empty", prime_alternating_certificates),
    (4, "pretzel strata", pretzel_strata),
    (5, "F1 strata and caps", f1_strata),
    (6, "converted plumbing reaches height 4", converted_plumbing_depth),
    (7, "pinch tree count", tree_inequality),
    (8, "twisted plumbing validator", validator_table),
    (9, "deplumbing round trip", deplumb_round_trip),
    (10, "state to checkerboard conservation", rewrite_conservation),
];

/// Runs one check by id.
pub fn run_check(id: u32, cfg: &SuiteConfig) -> Option<CheckResult> {
    let &(id, name, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let (pass, detail) = f(cfg);
    Some(CheckResult {
        id,
        name,
        pass,
        detail,
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .map(|c| run_check(c.0, cfg).expect("listed check"))
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    SuiteReport {
        seed: cfg.seed,
        budget: cfg.budget,
        failed: checks.len() - passed,
        passed,
        checks,
    }
}

fn show<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or("none".into(), |v| v.to_string())
}

fn rng_for(cfg: &SuiteConfig, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id)
}

fn search(cfg: &SuiteConfig, height: u32, mode: SearchMode) -> SearchConfig {
    let mut s = SearchConfig::new(height, mode);
    s.node_budget = cfg.budget;
    s
}

/// Girth by exhaustion: the least size of a nonempty edge set with every
/// degree even. Such a set contains a cycle, and a cycle is such a set.
pub fn brute_force_girth(g: &LabeledMultigraph) -> Option<usize> {
    let m = g.edge_count();
    assert!(m <= 24, "exhaustive girth is for small graphs");
    let mut best: Option<usize> = None;
    for mask in 1u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let mut parity = vec![false; g.vertex_count()];
        for e in 0..m {
            if mask >> e & 1 == 1 {
                let ed = g.edge(e);
                parity[ed.u] ^= true;
                parity[ed.v] ^= true;
            }
        }
        if parity.iter().all(|p| !p) {
            best = Some(size);
        }
    }
    best
}

/// A random reduced alternating diagram: the medial of a 2-connected plane
/// graph with all edges of one sign.
fn random_alternating(rng: &mut ChaCha8Rng, max_crossings: usize) -> LinkDiagram {
    let edges = rng.random_range(2..=max_crossings);
    PlaneGraph::random_two_connected(rng, edges, Smoothing::A)
        .to_diagram()
        .expect("plane graphs have medial diagrams")
}

fn girth_matches_form(cfg: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(cfg, 1);
    let diagrams: Vec<LinkDiagram> = (0..200).map(|_| random_alternating(&mut rng, 12)).collect();
    let outcomes = par::map(&diagrams, |d| -> Result<(), String> {
        let flags = d.classify();
        if !(flags.alternating && flags.reduced) {
            return Err("generator gave a non-reduced or non-alternating diagram".into());
        }
        for color in [Color::Black, Color::White] {
            let girth = tait_graph(d, color).map_err(|e| e.to_string())?.girth();
            let form = goeritz_matrix(d, color).map_err(|e| e.to_string())?;
            let min = form_minimum(&form).map_err(|e| e.to_string())?;
            if girth.length != Some(min.value as usize) {
                return Err(format!(
                    "{} crossings, {}: girth {:?}, form minimum {}",
                    d.crossing_count(),
                    color.name(),
                    girth.length,
                    min.value
                ));
            }
        }
        Ok(())
    });
    let bad: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
    match bad.first() {
        None => (true, "200 diagrams, both colors agree".into()),
        Some(first) => (false, format!("{} mismatches; first: {first}", bad.len())),
    }
}

fn trefoil_essences(_: &SuiteConfig) -> (bool, String) {
    let f = fixtures::trefoil();
    let d = &f.diagram;
    let mut notes = Vec::new();
    let mut ok = true;
    for (color, want) in [(Color::Black, 2), (Color::White, 3)] {
        let oracle = tait_graph(d, color).ok().and_then(|g| brute_force_girth(&g));
        let report = essence_alternating_checkerboard(d, color);
        let got = report.as_ref().ok().map(|r| (r.ess.exact, r.ess.lower, r.ess_g.lower));
        let pass = oracle == Some(want)
            && got == Some((true, Bound::Finite(want), Bound::Finite(want)))
            && report.as_ref().is_ok_and(|r| r.verify(d).is_ok());
        ok &= pass;
        let ess = got.map_or("error".to_string(), |g| g.1.to_string());
        notes.push(format!("{}: ess {ess}, oracle {}", color.name(), show(oracle)));
    }
    let want = GoeritzForm::from_matrix(vec![vec![2, -1], vec![-1, 2]]);
    match goeritz_matrix(d, Color::Black) {
        Ok(form) => {
            let min = form_minimum(&form).ok().map(|m| m.value);
            let brute = brute_force_minimum(&form, 3);
            ok &= form.matrix == want.matrix && min == Some(2) && brute == Some(2);
            notes.push(format!(
                "goeritz {:?}, minimum {}, brute {}",
                form.matrix,
                show(min),
                show(brute)
            ));
        }
        Err(e) => {
            ok = false;
            notes.push(format!("goeritz: {e}"));
        }
    }
    (ok, notes.join("; "))
}

fn prime_alternating_certificates(cfg: &SuiteConfig) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for f in fixtures::prime_alternating() {
        let outcome = FlatCapDecomposition::build(&f.diagram, f.color)
            .map_err(|e| e.to_string())
            .and_then(|dec| {
                find_bounded_height_caps(&dec, &search(cfg, 0, SearchMode::Geometric))
                    .map_err(|e| e.to_string())
            });
        let pass = matches!(
            &outcome,
            Ok((s, r)) if s.levels[0].is_empty() && r.outcome == CapSearchOutcome::NoneExists {
                reason: NoneReason::EmptyBaseStratum
            }
        );
        ok &= pass;
        notes.push(format!("{} {}", f.name, if pass { "empty" } else { "not empty" }));
    }
    (ok, notes.join(", "))
}

fn strata_counts(
    cfg: &SuiteConfig,
    d: &LinkDiagram,
    color: Color,
    height: u32,
    mode: SearchMode,
) -> Result<Vec<usize>, String> {
    let dec = FlatCapDecomposition::build(d, color).map_err(|e| e.to_string())?;
    let strata = enumerate_subdisks(&dec, &search(cfg, height, mode)).map_err(|e| e.to_string())?;
    Ok(strata.counts())
}

fn pretzel_strata(cfg: &SuiteConfig) -> (bool, String) {
    let p3 = fixtures::pretzel(3);
    let p2 = fixtures::pretzel(2);
    let a = strata_counts(cfg, &p3.diagram, p3.color, 1, SearchMode::Geometric);
    let b = strata_counts(cfg, &p2.diagram, p2.color, 2, SearchMode::Geometric);
    let ok_a = matches!(&a, Ok(c) if c[0] > 0 && c[1] == 0);
    let ok_b = matches!(&b, Ok(c) if c[0] > 0 && c[1] > 0 && c[2] == 0);
    let fmt = |r: &Result<Vec<usize>, String>| match r {
        Ok(c) => format!("{c:?}"),
        Err(e) => e.clone(),
    };
    (ok_a && ok_b, format!("{}: {}; {}: {}", p3.name, fmt(&a), p2.name, fmt(&b)))
}

fn f1_strata(cfg: &SuiteConfig) -> (bool, String) {
    let f = fixtures::f1();
    let run = || -> Result<(bool, String), String> {
        let dec = FlatCapDecomposition::build(&f.diagram, f.color).map_err(|e| e.to_string())?;
        let (geo, geo_report) =
            find_bounded_height_caps(&dec, &search(cfg, 2, SearchMode::Geometric))
                .map_err(|e| e.to_string())?;
        let (_, alg_report) = find_bounded_height_caps(&dec, &search(cfg, 1, SearchMode::Algebraic))
            .map_err(|e| e.to_string())?;
        let bdy = enumerate_subdisks(&dec, &search(cfg, 0, SearchMode::Boundary))
            .map_err(|e| e.to_string())?;
        let h0 = geo.levels[0].len();
        let geo_caps = geo_report.caps.len();
        let alg_found = matches!(alg_report.outcome, CapSearchOutcome::Found { .. });
        let b0 = bdy.levels[0].len();
        let checks = [h0 == 12, geo_caps == 0, alg_found, b0 > h0];
        Ok((
            checks.iter().all(|&c| c),
            format!(
                "geometric h0 {h0} (want 12), geometric caps through h2 {geo_caps}, \
                 algebraic cap at h1 {alg_found}, boundary h0 {b0}"
            ),
        ))
    };
    run().unwrap_or_else(|e| (false, e))
}

fn converted_plumbing_depth(cfg: &SuiteConfig) -> (bool, String) {
    let run = || -> Result<String, String> {
        let d = fixtures::plumbed_seifert();
        let out = d
            .state_to_checkerboard(&State::seifert(&d))
            .map_err(|e| e.to_string())?;
        let dec = FlatCapDecomposition::build(&out.diagram, out.color).map_err(|e| e.to_string())?;
        let (strata, report) = find_bounded_height_caps(&dec, &search(cfg, 4, SearchMode::Geometric))
            .map_err(|e| e.to_string())?;
        Ok(format!(
            "{} crossings after rewrite steps {}, geometric strata {:?}, caps {}",
            out.diagram.crossing_count(),
            out.steps.len(),
            strata.counts(),
            report.caps.len()
        ))
    };
    // Both halves are needed: a height-4 subdisk on the converted picture of
    // an essential surface, and empty height 1 on the unconverted picture.
    // The second needs a cap system for nested state disks, which the
    // decomposition does not model, so this check cannot pass.
    let bottom = run().unwrap_or_else(|e| e);
    (false, format!("{bottom}; unconverted picture not modelled"))
}

fn tree_inequality(cfg: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(cfg, 7);
    let trees: Vec<Vec<(usize, usize)>> = (0..10_000)
        .map(|_| {
            let e = rng.random_range(2..=200);
            random_tree(&mut rng, e)
        })
        .collect();
    let failures = par::map(&trees, |t| tree_count_inequality(t).map_or(true, |c| !c.holds))
        .into_iter()
        .filter(|&f| f)
        .count();
    let path = tree_count_inequality(&[(0, 1), (1, 2)]).ok();
    let star = tree_count_inequality(&[(0, 1), (0, 2), (0, 3)]).ok();
    let eq = |c: Option<crate::plumbing::TreeCount>| c.map(|c| (c.lhs, c.rhs));
    let ok = failures == 0 && eq(path) == Some((8, 8)) && eq(star) == Some((10, 10));
    let fmt = |c: Option<(usize, usize)>| c.map_or("error".into(), |(l, r)| format!("{l} vs {r}"));
    (
        ok,
        format!(
            "10000 trees, {failures} failures; path {}, star {}",
            fmt(eq(path)),
            fmt(eq(star))
        ),
    )
}

fn validator_table(_: &SuiteConfig) -> (bool, String) {
    // (defect, diameter, link points, accepted)
    let table = [
        (1, 1, 5, false),
        (1, 1, 6, true),
        (1, 2, 10, false),
        (2, 3, 12, false),
        (2, 2, 8, true),
        (2, 1, 7, false),
        (0, 0, 0, true),
    ];
    let wrong: Vec<String> = table
        .iter()
        .filter(|&&(m, d, l, want)| validate_twisted_plumbing(m, d, l, &[]).pass != want)
        .map(|(m, d, l, want)| format!("(m={m}, d={d}, L={l}) should be {}", accept(*want)))
        .collect();
    if wrong.is_empty() {
        (true, format!("{} rows", table.len()))
    } else {
        (false, wrong.join("; "))
    }
}

fn accept(b: bool) -> &'static str {
    if b {
        "accepted"
    } else {
        "rejected"
    }
}

fn sign(rng: &mut ChaCha8Rng) -> Smoothing {
    if rng.random_bool(0.5) {
        Smoothing::A
    } else {
        Smoothing::B
    }
}

/// A plane graph whose blocks are a random 2-connected graph and some
/// cycles, each block with one sign. Its medial checkerboard states are
/// adequate and homogeneous.
fn random_block_graph(rng: &mut ChaCha8Rng) -> PlaneGraph {
    let edges = rng.random_range(2..=8);
    let s = sign(rng);
    let mut g = PlaneGraph::random_two_connected(rng, edges, s);
    for _ in 0..rng.random_range(0..=3) {
        let v = rng.random_range(0..g.vertex_count());
        let corner = rng.random_range(0..g.rotation_at(v).len());
        let n = rng.random_range(2..=5);
        let s = sign(rng);
        g.attach_cycle(v, corner, n, s);
    }
    g
}

fn deplumb_round_trip(cfg: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(cfg, 9);
    let cases: Vec<(PlaneGraph, bool)> = (0..100)
        .map(|_| {
            let g = random_block_graph(&mut rng);
            let dual = rng.random_bool(0.5);
            (g, dual)
        })
        .collect();
    let outcomes = par::map(&cases, |(g, dual)| -> Result<(), String> {
        let d = g.to_diagram().map_err(|e| e.to_string())?;
        let mut color = g.vertex_color(&d).map_err(|e| e.to_string())?;
        if *dual {
            color = color.opposite();
        }
        let coloring = d.checkerboard_coloring().map_err(|e| e.to_string())?;
        let state = State::checkerboard(&d, &coloring, color);
        let whole = state_graph(&d, &state).map_err(|e| e.to_string())?;
        if !(whole.is_adequate() && whole.is_homogeneous()) {
            return Err("generated state is not adequate and homogeneous".into());
        }
        let tree = deplumb_state(&d, &state).map_err(|e| e.to_string())?;
        let chi = d.resolve_state(&state).map_err(|e| e.to_string())?.euler_characteristic();
        let checks = [
            (tree.girth() == whole.girth().length, "girth"),
            (tree.euler_characteristic() == chi, "euler characteristic"),
            (tree.betti() == whole.betti_number(), "betti number"),
            (tree.is_tree(), "tree shape"),
        ];
        match checks.iter().find(|c| !c.0) {
            Some((_, what)) => Err(format!("{} crossings: {what}", d.crossing_count())),
            None => Ok(()),
        }
    });
    let bad: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
    let f = fixtures::f1();
    let coloring = f.diagram.checkerboard_coloring().expect("F1 is colorable");
    let factors = deplumb_state(&f.diagram, &State::checkerboard(&f.diagram, &coloring, f.color))
        .map_or_else(|e| e.to_string(), |t| t.nodes.len().to_string());
    let ok = bad.is_empty() && factors == "7";
    let head = match bad.first() {
        None => "100 states reassemble".to_string(),
        Some(first) => format!("{} failures; first: {first}", bad.len()),
    };
    (ok, format!("{head}; F1 factors {factors}"))
}

/// Checks one rewrite; returns the number of steps taken.
fn check_rewrite(d: &LinkDiagram, state: &State) -> Result<usize, String> {
    let before = d.resolve_state(state).map_err(|e| e.to_string())?;
    let out = d.state_to_checkerboard(state).map_err(|e| e.to_string())?;
    let after = out.resolution();
    if after.euler_characteristic() != before.euler_characteristic() {
        return Err("euler characteristic changed".into());
    }
    if after.is_orientable() != before.is_orientable() {
        return Err("orientability changed".into());
    }
    if out.diagram.component_count() != d.component_count() {
        return Err("boundary component count changed".into());
    }
    if !after.non_innermost().is_empty() {
        return Err("result is not a checkerboard state".into());
    }
    let coloring = out.diagram.checkerboard_coloring().map_err(|e| e.to_string())?;
    if State::checkerboard(&out.diagram, &coloring, out.color) != out.state {
        return Err("result state differs from the reported checkerboard color".into());
    }
    if out.steps.iter().any(|s| s.non_innermost_after >= s.non_innermost_before) {
        return Err("a step did not reduce the non-innermost count".into());
    }
    Ok(out.steps.len())
}

fn rewrite_conservation(cfg: &SuiteConfig) -> (bool, String) {
    let b = fixtures::borromean();
    let borromean = check_rewrite(&b.diagram, &State::seifert(&b.diagram));
    let mut rng = rng_for(cfg, 10);
    let cases: Vec<(LinkDiagram, State)> = (0..50)
        .map(|_| {
            let edges = rng.random_range(2..=10);
            let mut g = PlaneGraph::random_two_connected(&mut rng, edges, Smoothing::A);
            for e in 0..g.edge_count() {
                let s = sign(&mut rng);
                g.set_sign(e, s);
            }
            let d = g.to_diagram().expect("plane graphs have medial diagrams");
            let state = State((0..d.crossing_count()).map(|_| sign(&mut rng)).collect());
            (d, state)
        })
        .collect();
    let outcomes = par::map(&cases, |(d, s)| check_rewrite(d, s));
    let steps: usize = outcomes.iter().filter_map(|r| r.as_ref().ok()).sum();
    let bad: Vec<&String> = outcomes.iter().filter_map(|r| r.as_ref().err()).collect();
    let ok = borromean.as_ref().is_ok_and(|&n| n > 0) && bad.is_empty();
    let head = match bad.first() {
        None => format!("50 random states conserved over {steps} steps"),
        Some(first) => format!("{} failures; first: {first}", bad.len()),
    };
    let b = borromean.map_or_else(|e| e, |n| format!("rewrite steps {n}"));
    (ok, format!("borromean seifert state {b}; {head}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_girth_of_small_graphs() {
        let f = fixtures::trefoil();
        let black = tait_graph(&f.diagram, Color::Black).unwrap();
        let white = tait_graph(&f.diagram, Color::White).unwrap();
        assert_eq!(brute_force_girth(&black), Some(2));
        assert_eq!(brute_force_girth(&white), Some(3));
        let tree = LabeledMultigraph::new(2, Vec::new());
        assert_eq!(brute_force_girth(&tree), None);
    }

    #[test]
    fn cheap_checks_pass() {
        let cfg = SuiteConfig::default();
        for id in [2, 7, 8, 9, 10] {
            let r = run_check(id, &cfg).unwrap();
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn random_block_states_are_homogeneously_adequate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_block_graph(&mut rng);
            let d = g.to_diagram().unwrap();
            let color = g.vertex_color(&d).unwrap();
            let state = State::checkerboard(&d, &d.checkerboard_coloring().unwrap(), color);
            let sg = state_graph(&d, &state).unwrap();
            assert!(sg.is_adequate() && sg.is_homogeneous());
        }
    }
}
