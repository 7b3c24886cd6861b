//! Command bodies. Each returns the full text to print.

use serde::Serialize;
use serde_json::{json, Value};

use essence_core::capsearch::{
    find_bounded_height_caps, CapSearchError, CapSearchOutcome, CapSearchReport,
    FlatCapDecomposition, NoneReason, SearchConfig, SearchMode, Strata,
};
use essence_core::diagram::{Color, LinkDiagram, State};
use essence_core::essence::{
    combine_bounds, end_essential_report, essence_alternating_checkerboard,
    essence_state_surface, EssenceError, EssenceReport,
};
use essence_core::forms::{form_minimum, goeritz_matrix, FormError};
use essence_core::graphs::{state_graph, tait_graph, LabeledMultigraph};
use essence_core::par;
use essence_core::plumbing::{deplumb_state as deplumb, hierarchical_twisted_deplumb};
use essence_core::suite::{run_check, run_suite, SuiteConfig, SuiteReport, CHECKS};

use crate::input::{load, Input, FIXTURES};
use crate::{Failure, Format, Global};

fn hyp(e: impl std::fmt::Display) -> Failure {
    Failure::Hypotheses(e.to_string())
}

fn essence_failure(e: EssenceError) -> Failure {
    match e {
        EssenceError::Integrity(m) => Failure::Integrity(m),
        other => hyp(other),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Picks the JSON or the text rendering.
fn emit<T: Serialize>(g: &Global, value: &T, text: impl FnOnce() -> String) -> String {
    match g.format {
        Format::Json => to_json(value),
        Format::Text => text(),
    }
}

fn color_of(input: &Input, color: Option<Color>) -> Color {
    color.or(input.default_color).unwrap_or(Color::Black)
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn crossing_list(cs: &[usize]) -> String {
    cs.iter().map(|c| format!("c{}", c + 1)).collect::<Vec<_>>().join(", ")
}

pub fn classify(g: &Global, source: &str) -> Result<String, Failure> {
    let d = load(source)?.diagram;
    let flags = d.classify();
    let nugatory = d.detect_nugatory();
    let value = json!({
        "flags": flags,
        "genus": d.genus(),
        "crossings": d.crossing_count(),
        "components": d.component_count(),
        "nugatory": nugatory,
    });
    Ok(emit(g, &value, || {
        let mut words = Vec::new();
        words.push(if flags.alternating { "alternating" } else { "non-alternating" }.to_string());
        if flags.split {
            words.push(format!("split ({} pieces)", d.piece_count()));
        }
        if flags.reduced {
            words.push("reduced".into());
            if flags.connected {
                words.push(if flags.diagram_prime { "prime" } else { "composite" }.into());
            }
        } else if nugatory.is_empty() {
            words.push("reduced: false".into());
        } else {
            words.push(format!("reduced: false (nugatory: {})", crossing_list(&nugatory)));
        }
        let sep = if flags.reduced && !flags.split { " " } else { ", " };
        format!(
            "{}, genus {}\n{}, {}\n",
            words.join(sep),
            d.genus(),
            count(d.crossing_count(), "crossing"),
            count(d.component_count(), "component")
        )
    }))
}

#[derive(Serialize)]
struct GraphSummary<'a> {
    surface: String,
    vertices: usize,
    edges: &'a [essence_core::graphs::GraphEdge],
    betti: usize,
    girth: Option<usize>,
    girth_cycle: Vec<usize>,
    adequate: bool,
    homogeneous: bool,
    blocks: usize,
}

fn summarize<'a>(surface: String, h: &'a LabeledMultigraph) -> GraphSummary<'a> {
    let girth = h.girth();
    GraphSummary {
        surface,
        vertices: h.vertex_count(),
        edges: h.edges(),
        betti: h.betti_number(),
        girth: girth.length,
        girth_cycle: girth.cycle.iter().map(|&e| h.edge(e).crossing).collect(),
        adequate: h.is_adequate(),
        homogeneous: h.is_homogeneous(),
        blocks: h.blocks().blocks.len(),
    }
}

fn graph_text(s: &GraphSummary) -> String {
    let mut out = format!("{}: {} vertices, {} edges\n", s.surface, s.vertices, s.edges.len());
    for e in s.edges {
        out.push_str(&format!(
            "  c{}: v{} - v{} ({})\n",
            e.crossing + 1,
            e.u,
            e.v,
            e.label.letter()
        ));
    }
    let girth = match s.girth {
        Some(n) => format!("{n} (cycle {})", crossing_list(&s.girth_cycle)),
        None => "infinite".into(),
    };
    out.push_str(&format!(
        "  betti {}, girth {girth}, blocks {}, adequate {}, homogeneous {}\n",
        s.betti, s.blocks, s.adequate, s.homogeneous
    ));
    out
}

pub fn graphs(
    g: &Global,
    source: &str,
    color: Option<Color>,
    state: Option<&str>,
) -> Result<String, Failure> {
    let d = load(source)?.diagram;
    let mut graphs = Vec::new();
    if let Some(spec) = state {
        let st = State::parse(spec, &d).map_err(hyp)?;
        graphs.push((format!("state graph of {}", st.word()), state_graph(&d, &st).map_err(hyp)?));
    } else {
        let colors = match color {
            Some(c) => vec![c],
            None => vec![Color::Black, Color::White],
        };
        for c in colors {
            graphs.push((format!("{} Tait graph", c.name()), tait_graph(&d, c).map_err(hyp)?));
        }
    }
    let summaries: Vec<GraphSummary> = graphs.iter().map(|(s, h)| summarize(s.clone(), h)).collect();
    Ok(emit(g, &summaries, || summaries.iter().map(graph_text).collect()))
}

pub fn goeritz(g: &Global, source: &str, color: Option<Color>) -> Result<String, Failure> {
    let input = load(source)?;
    let color = color_of(&input, color);
    let d = &input.diagram;
    let form = goeritz_matrix(d, color).map_err(hyp)?;
    let min = match form_minimum(&form) {
        Ok(m) => Some(m),
        Err(FormError::NotPositiveDefinite) => None,
        Err(e) => return Err(hyp(e)),
    };
    let value = json!({
        "form": form,
        "determinant": form.determinant().to_string(),
        "positive_definite": form.is_positive_definite(),
        "minimum": min,
    });
    Ok(emit(g, &value, || {
        let mut out = format!("Goeritz form of the {} surface", color.name());
        if form.sign_convention < 0 {
            out.push_str(" (negated to be positive definite)");
        }
        out.push('\n');
        for row in &form.matrix {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            out.push_str(&format!("  [{}]\n", cells.join(" ")));
        }
        out.push_str(&format!("determinant {}\n", form.determinant()));
        match &min {
            Some(m) => out.push_str(&format!("minimum {} at {:?}\n", m.value, m.witness)),
            None => out.push_str("indefinite: no minimum\n"),
        }
        out
    }))
}

fn search_config(g: &Global, height: u32, mode: SearchMode) -> SearchConfig {
    let mut cfg = SearchConfig::new(height, mode);
    cfg.node_budget = g.budget;
    cfg
}

fn run_search(
    g: &Global,
    d: &LinkDiagram,
    color: Color,
    cfg: &SearchConfig,
) -> Result<(Strata, CapSearchReport), Failure> {
    let dec = FlatCapDecomposition::build(d, color).map_err(hyp)?;
    par::with_threads(g.threads, || find_bounded_height_caps(&dec, cfg)).map_err(|e| match e {
        CapSearchError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        other => Failure::Integrity(other.to_string()),
    })
}

pub fn essence(
    g: &Global,
    source: &str,
    color: Option<Color>,
    state: Option<&str>,
    cap_height: Option<u32>,
) -> Result<String, Failure> {
    let input = load(source)?;
    let d = &input.diagram;
    let (report, verdict) = match state {
        Some(spec) => {
            let st = State::parse(spec, d).map_err(hyp)?;
            let verdict = end_essential_report(d, &st).map_err(essence_failure)?;
            if d.genus() > 0 {
                // only the end-essentiality classifier applies off the sphere
                return Ok(emit(g, &json!({ "end_essentiality": verdict }), || {
                    end_text(&verdict)
                }));
            }
            (essence_state_surface(d, &st).map_err(essence_failure)?, Some(verdict))
        }
        None => {
            let color = color_of(&input, color);
            let mut report = essence_alternating_checkerboard(d, color).map_err(essence_failure)?;
            if let Some(h) = cap_height {
                let (_, geo) = run_search(g, d, color, &search_config(g, h, SearchMode::Geometric))?;
                let (_, alg) = run_search(g, d, color, &search_config(g, h, SearchMode::Algebraic))?;
                report = combine_bounds(report, &[&geo, &alg], None).map_err(essence_failure)?;
            }
            (report, None)
        }
    };
    report.verify(d).map_err(essence_failure)?;
    let value = json!({ "report": report, "end_essentiality": verdict });
    Ok(emit(g, &value, || {
        let mut out = render_report(&report);
        if let Some(v) = &verdict {
            out.push_str(&end_text(v));
        }
        out
    }))
}

fn render_report(r: &EssenceReport) -> String {
    let mut out = r.render();
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

fn end_text(v: &essence_core::essence::EndEssVerdict) -> String {
    let verdict = serde_json::to_value(v.verdict).expect("verdict serializes");
    let mut out = format!("end-essentiality (genus {}): {}", v.genus, verdict.as_str().unwrap_or(""));
    if let Some(rule) = &v.rule {
        out.push_str(&format!(" ({rule})"));
    }
    out.push('\n');
    out
}

pub struct SearchArgs {
    pub height: u32,
    pub mode: SearchMode,
    pub touches: Option<usize>,
    pub max_chords: usize,
    pub dump_strata: bool,
}

fn mode_name(m: SearchMode) -> &'static str {
    match m {
        SearchMode::Geometric => "geometric",
        SearchMode::Boundary => "boundary",
        SearchMode::Algebraic => "algebraic",
    }
}

pub fn capsearch(
    g: &Global,
    source: &str,
    color: Option<Color>,
    args: SearchArgs,
) -> Result<String, Failure> {
    let input = load(source)?;
    let color = color_of(&input, color);
    let mut cfg = search_config(g, args.height, args.mode);
    cfg.max_chords = args.max_chords;
    if let Some(t) = args.touches {
        cfg.max_touches = t;
    }
    let (strata, report) = run_search(g, &input.diagram, color, &cfg)?;
    let value = if args.dump_strata {
        json!({ "color": color, "report": report, "strata": strata })
    } else {
        json!({ "color": color, "report": report })
    };
    Ok(emit(g, &value, || {
        let counts: Vec<String> = report
            .strata
            .iter()
            .map(|s| format!("h{}: {}", s.height, s.count))
            .collect();
        let verdict = match report.outcome {
            CapSearchOutcome::Found { caps } => {
                format!("essential {} cap found ({caps} assembled)", mode_name(args.mode))
            }
            CapSearchOutcome::NoneExists {
                reason: NoneReason::EmptyBaseStratum,
            } => "certificate: no subdisk of height 0, so no cap".into(),
            CapSearchOutcome::NoneExists { .. } => {
                format!("no {} cap of height <= {}", mode_name(args.mode), args.height)
            }
        };
        let mut out = format!("{} surface, {} search\n", color.name(), mode_name(args.mode));
        out.push_str(&format!("{} - {verdict}\n", counts.join(", ")));
        if args.height > 0 {
            out.push_str(&format!(
                "note: heights above 0 cover subdisks with at most {} chords\n",
                cfg.max_chords
            ));
        }
        if args.dump_strata {
            for (h, level) in strata.levels.iter().enumerate() {
                out.push_str(&format!("height {h}:\n"));
                for s in level {
                    let chords: Vec<String> = s
                        .chords
                        .iter()
                        .map(|c| format!("cap face {}", c.cap_face))
                        .collect();
                    out.push_str(&format!(
                        "  {:?}, {} touches: {}\n",
                        s.side,
                        s.touches,
                        chords.join(", ")
                    ));
                }
            }
        }
        out
    }))
}

pub fn deplumb_state(g: &Global, source: &str, spec: &str) -> Result<String, Failure> {
    let d = load(source)?.diagram;
    let st = State::parse(spec, &d).map_err(hyp)?;
    let tree = deplumb(&d, &st).map_err(hyp)?;
    Ok(emit(g, &tree, || {
        let mut out = format!(
            "state {}: {}, euler characteristic {}\n",
            st.word(),
            count(tree.nodes.len(), "block"),
            tree.euler_characteristic()
        );
        for (i, n) in tree.nodes.iter().enumerate() {
            let girth = n.girth.length.map_or("infinite".into(), |x| x.to_string());
            out.push_str(&format!(
                "  block {i}: crossings {}; betti {}, girth {girth}, chi {}\n",
                crossing_list(&n.crossings),
                n.betti,
                n.euler_characteristic
            ));
        }
        for e in &tree.edges {
            out.push_str(&format!(
                "  blocks {} and {} share circle {}\n",
                e.blocks.0, e.blocks.1, e.circle
            ));
        }
        out
    }))
}

pub fn deplumb_twisted(
    g: &Global,
    source: &str,
    color: Option<Color>,
    threshold: &str,
) -> Result<String, Failure> {
    let input = load(source)?;
    let color = color_of(&input, color);
    let threshold = match threshold {
        "inf" => None,
        t => Some(
            t.parse::<usize>()
                .map_err(|_| Failure::Input(format!("threshold {t:?} is not a number or inf")))?,
        ),
    };
    let h = hierarchical_twisted_deplumb(&input.diagram, color, threshold).map_err(hyp)?;
    Ok(emit(g, &h, || {
        let leaves = h.leaves();
        let mut out = format!(
            "{} surface: {}, {}, split complexities {:?}\n",
            color.name(),
            count(h.nodes.len(), "node"),
            if leaves.len() == 1 { "1 leaf".to_string() } else { format!("{} leaves", leaves.len()) },
            h.complexities()
        );
        for (i, n) in h.nodes.iter().enumerate() {
            let kind = match &n.split {
                Some(s) => format!(
                    "split into {} and {} (complexity {})",
                    s.children[0], s.children[1], s.cap.complexity
                ),
                None if n.betti == 1 => "leaf: band".into(),
                None => "leaf".into(),
            };
            out.push_str(&format!(
                "  node {i}: crossings {}; betti {}, chi {}; {kind}\n",
                crossing_list(&n.crossings),
                n.betti,
                n.euler_characteristic
            ));
        }
        out
    }))
}

pub fn selftest(g: &Global, only: &[u32]) -> Result<String, Failure> {
    let cfg = SuiteConfig {
        seed: g.seed,
        budget: g.budget,
    };
    for id in only {
        if !CHECKS.iter().any(|c| c.0 == *id) {
            return Err(Failure::Input(format!("no check with id {id}")));
        }
    }
    let report: SuiteReport = par::with_threads(g.threads, || {
        if only.is_empty() {
            run_suite(&cfg)
        } else {
            let checks: Vec<_> = only.iter().filter_map(|&id| run_check(id, &cfg)).collect();
            let passed = checks.iter().filter(|c| c.pass).count();
            SuiteReport {
                seed: cfg.seed,
                budget: cfg.budget,
                failed: checks.len() - passed,
                passed,
                checks,
            }
        }
    });
    let out = emit(g, &report, || {
        let mut out = String::new();
        for c in &report.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {:>2} {}: {}\n", c.id, c.name, c.detail));
        }
        out.push_str(&format!("{} passed, {} failed\n", report.passed, report.failed));
        out
    });
    if report.all_passed() {
        Ok(out)
    } else {
        Err(Failure::Selftest(out))
    }
}

pub fn fixtures(g: &Global) -> String {
    let value: Vec<Value> = FIXTURES
        .iter()
        .map(|(name, about)| json!({ "name": name, "about": about }))
        .collect();
    emit(g, &value, || {
        FIXTURES
            .iter()
            .map(|(name, about)| format!("{name:<16} {about}\n"))
            .collect()
    })
}
