//! Essence of spanning surfaces: bounds with checkable certificates.
//!
//! The essence of a surface is the least number of times the boundary of an
//! essential cap meets the link. The geometric essence asks the cap's
//! boundary to be embedded and the contractible essence asks it to be
//! contractible in the surface. Exact values come from the Tait graph of a
//! reduced alternating diagram and from the state graph of a homogeneously
//! adequate state; everything else is reported as bounds.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::capsearch::{CapSearchOutcome, CapSearchReport, NoneReason, SearchMode};
use crate::diagram::{Color, LinkDiagram, State};
use crate::forms::{form_minimum, goeritz_matrix};
use crate::graphs::{state_graph, tait_graph, Girth, GraphError, LabeledMultigraph};
use crate::plumbing::{TaitContext, TwistedCapDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EssenceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the diagram must be {0}")]
    Hypotheses(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
}

/// A nonnegative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub enum Bound {
    Finite(usize),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(n) => Some(n),
            Bound::Infinite => None,
        }
    }
}

impl From<Option<usize>> for Bound {
    fn from(v: Option<usize>) -> Bound {
        v.map_or(Bound::Infinite, Bound::Finite)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(n) => s.serialize_u64(*n as u64),
            Bound::Infinite => s.serialize_str("inf"),
        }
    }
}

/// What licenses a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    /// No information: zero below, infinity above.
    Trivial,
    /// Shortest Tait cycle of a reduced alternating diagram.
    TaitGirth,
    /// A cap running beside a Tait cycle, giving the upper bound.
    FramingCycle,
    /// Minimum of the definite Goeritz form, agreeing with the Tait girth.
    FormMinimum,
    /// Shortest state graph cycle of a homogeneously adequate state.
    StateGraphGirth,
    /// Least essence bound over pi1-essential plumbing factors.
    PlumbingFactors,
    /// A closed essential cap assembled by the cap search.
    AlgebraicCap,
    /// A closed essential cap with embedded boundary.
    GeometricCap,
    /// The cap search found no outermost subdisk at all.
    EmptyBaseStratum,
    /// Every geometric cap is a cap, so the essence is at most the
    /// geometric essence.
    GeometricDominates,
    /// Consequences of a lower bound on the contractible essence.
    ContractibleClause,
    /// Twice the essence minus two bounds the contractible essence once
    /// the first Betti number is at least two.
    ContractibleBound,
    /// A cap beside a Tait cycle crossing the other surface once.
    TwistedCap,
    /// No cap beside a Tait cycle up to the searched complexity.
    TwistedCapSearch,
    /// An annulus or Mobius band has no contractible essential cap.
    SingleCycle,
}

/// Data that re-derives a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Witness {
    None,
    /// A cycle of the Tait or state graph, as crossings in order.
    Cycle { crossings: Vec<usize> },
    /// A Goeritz form vector.
    Vector { coordinates: Vec<i64> },
    /// Essence bounds of plumbing factors.
    Factors { bounds: Vec<usize> },
    /// A cap search result.
    Search {
        mode: SearchMode,
        max_height: u32,
        boundary_points: Option<usize>,
    },
    Twisted { cap: Box<TwistedCapDatum> },
    /// Bounds this one was derived from.
    Derived { from: Vec<Tag> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tag: Tag,
    pub witness: Witness,
}

impl Certificate {
    pub fn new(tag: Tag, witness: Witness) -> Certificate {
        Certificate { tag, witness }
    }

    fn trivial() -> Certificate {
        Certificate::new(Tag::Trivial, Witness::None)
    }

    fn derived(tag: Tag, from: &[Tag]) -> Certificate {
        Certificate::new(
            tag,
            Witness::Derived {
                from: from.to_vec(),
            },
        )
    }
}

/// Certified lower and upper bounds on one quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub lower: Bound,
    pub upper: Bound,
    pub lower_certificate: Certificate,
    pub upper_certificate: Certificate,
    pub exact: bool,
    /// Conditions the bounds rest on beyond their certificates.
    pub qualifiers: Vec<String>,
}

impl Estimate {
    pub fn unknown() -> Estimate {
        Estimate {
            lower: Bound::Finite(0),
            upper: Bound::Infinite,
            lower_certificate: Certificate::trivial(),
            upper_certificate: Certificate::trivial(),
            exact: false,
            qualifiers: Vec::new(),
        }
    }

    pub fn exactly(value: Bound, lower: Certificate, upper: Certificate) -> Estimate {
        Estimate {
            lower: value,
            upper: value,
            lower_certificate: lower,
            upper_certificate: upper,
            exact: true,
            qualifiers: Vec::new(),
        }
    }

    fn raise(&mut self, value: Bound, by: Certificate) -> bool {
        if value > self.lower {
            self.lower = value;
            self.lower_certificate = by;
            true
        } else {
            false
        }
    }

    fn lower_to(&mut self, value: Bound, by: Certificate) -> bool {
        if value < self.upper {
            self.upper = value;
            self.upper_certificate = by;
            true
        } else {
            false
        }
    }

    fn qualify(&mut self, notes: &[String]) {
        for n in notes {
            if !self.qualifiers.contains(n) {
                self.qualifiers.push(n.clone());
            }
        }
    }

    fn settle(&mut self, what: &str) -> Result<(), EssenceError> {
        if self.lower > self.upper {
            return Err(EssenceError::Integrity(format!(
                "{what}: lower bound {} exceeds upper bound {}",
                self.lower, self.upper
            )));
        }
        self.exact = self.lower == self.upper;
        Ok(())
    }

    pub fn render(&self) -> String {
        if self.exact {
            format!("{}", self.lower)
        } else {
            format!("[{}, {}]", self.lower, self.upper)
        }
    }
}

/// Which surface a report describes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Surface {
    Checkerboard { color: Color },
    State { state: String, layering: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssenceReport {
    pub surface: Surface,
    pub crossings: usize,
    pub ess: Estimate,
    pub ess_g: Estimate,
    pub ess_c: Option<Estimate>,
    /// Hypotheses of the exact results that the input fails.
    pub unmet: Vec<String>,
}

impl EssenceReport {
    fn bounds_only(surface: Surface, crossings: usize, unmet: Vec<String>) -> EssenceReport {
        EssenceReport {
            surface,
            crossings,
            ess: Estimate::unknown(),
            ess_g: Estimate::unknown(),
            ess_c: None,
            unmet,
        }
    }

    /// Re-derives every bound that carries a cycle, vector or cap witness.
    pub fn verify(&self, d: &LinkDiagram) -> Result<(), EssenceError> {
        let graph = match &self.surface {
            Surface::Checkerboard { color } => tait_graph(d, *color)?,
            Surface::State { state, .. } => {
                let s = State::parse(state, d)
                    .map_err(|e| EssenceError::Integrity(format!("state {state:?}: {e}")))?;
                state_graph(d, &s)?
            }
        };
        let mut estimates = vec![("ess", &self.ess), ("ess_g", &self.ess_g)];
        if let Some(c) = &self.ess_c {
            estimates.push(("ess_c", c));
        }
        for (name, est) in estimates {
            if est.lower > est.upper || est.exact != (est.lower == est.upper) {
                return Err(EssenceError::Integrity(format!("{name}: inconsistent bounds")));
            }
            for (value, cert) in [
                (est.lower, &est.lower_certificate),
                (est.upper, &est.upper_certificate),
            ] {
                check_witness(d, &self.surface, &graph, value, cert)
                    .map_err(|e| EssenceError::Integrity(format!("{name}: {e}")))?;
            }
        }
        if self.ess.upper > self.ess_g.upper && self.ess_g.upper != Bound::Infinite {
            return Err(EssenceError::Integrity(
                "essence bound above geometric essence bound".into(),
            ));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let surface = match &self.surface {
            Surface::Checkerboard { color } => format!("{} checkerboard surface", color.name()),
            Surface::State { state, .. } => format!("state surface of {state}"),
        };
        out.push_str(&format!("{surface}, {} crossings\n", self.crossings));
        if self.ess.exact && self.ess_g.exact && self.ess.lower == self.ess_g.lower {
            out.push_str(&format!(
                "ess = ess_g = {} ({})\n",
                self.ess.lower,
                describe(&self.ess.lower_certificate)
            ));
        } else {
            for (name, e) in [("ess", &self.ess), ("ess_g", &self.ess_g)] {
                out.push_str(&format!("{name} {}\n", bounds_line(e)));
            }
        }
        if let Some(c) = &self.ess_c {
            out.push_str(&format!("ess_c {}\n", bounds_line(c)));
        }
        for e in [Some(&self.ess), Some(&self.ess_g), self.ess_c.as_ref()]
            .into_iter()
            .flatten()
        {
            for q in &e.qualifiers {
                let line = format!("note: {q}\n");
                if !out.contains(&line) {
                    out.push_str(&line);
                }
            }
        }
        if !self.unmet.is_empty() {
            out.push_str(&format!(
                "bounds only; unmet: {}\n",
                self.unmet.join(", ")
            ));
        }
        out
    }
}

fn bounds_line(e: &Estimate) -> String {
    if e.exact {
        let (lo, up) = (&e.lower_certificate, &e.upper_certificate);
        let why = if up.tag == Tag::Trivial || lo == up {
            describe(lo)
        } else if lo.tag == Tag::Trivial {
            describe(up)
        } else {
            format!("{}, and {}", describe(lo), describe(up))
        };
        format!("= {} ({why})", e.lower)
    } else {
        format!(
            ">= {} ({}), <= {} ({})",
            e.lower,
            describe(&e.lower_certificate),
            e.upper,
            describe(&e.upper_certificate)
        )
    }
}

fn describe(c: &Certificate) -> String {
    let tag = serde_json::to_value(c.tag)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    match &c.witness {
        Witness::Cycle { crossings } => {
            let names: Vec<String> = crossings.iter().map(|c| format!("c{}", c + 1)).collect();
            format!("{tag}; cycle {}", names.join(""))
        }
        Witness::Twisted { cap } => format!(
            "{tag}; skips c{} on a {}-cycle",
            cap.skipped + 1,
            cap.cycle.len()
        ),
        Witness::Search {
            mode, max_height, ..
        } => {
            let mode = serde_json::to_value(mode)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            format!("{tag}; {mode} search to height {max_height}")
        }
        _ => tag,
    }
}

fn check_witness(
    d: &LinkDiagram,
    surface: &Surface,
    graph: &LabeledMultigraph,
    value: Bound,
    cert: &Certificate,
) -> Result<(), String> {
    match &cert.witness {
        Witness::Cycle { crossings } => {
            if !graph.is_simple_cycle(crossings) {
                return Err(format!("{crossings:?} is not a cycle"));
            }
            if value != Bound::Finite(crossings.len()) {
                return Err(format!("cycle of length {} certifies {value}", crossings.len()));
            }
        }
        Witness::Vector { coordinates } => {
            let Surface::Checkerboard { color } = surface else {
                return Err("form vector on a state surface".into());
            };
            let form = goeritz_matrix(d, *color).map_err(|e| e.to_string())?;
            let v = form.evaluate(coordinates);
            if coordinates.iter().all(|&x| x == 0) || value != Bound::Finite(v as usize) {
                return Err(format!("form vector evaluates to {v}, not {value}"));
            }
        }
        Witness::Twisted { cap } => {
            let Surface::Checkerboard { color } = surface else {
                return Err("twisted cap on a state surface".into());
            };
            let ctx = TaitContext::new(d, *color).map_err(|e| e.to_string())?;
            let all: Vec<usize> = (0..d.crossing_count()).collect();
            let bad = ctx.check_cap(&all, cap);
            if !bad.is_empty() {
                return Err(bad.join("; "));
            }
            if value != Bound::Finite(cap.complexity) {
                return Err(format!("cap of complexity {} certifies {value}", cap.complexity));
            }
        }
        Witness::Factors { bounds } => {
            if value != Bound::Finite(bounds.iter().copied().min().unwrap_or(0)) {
                return Err(format!("factor bounds {bounds:?} do not give {value}"));
            }
        }
        Witness::None => {
            if cert.tag == Tag::Trivial && value != Bound::Finite(0) && value != Bound::Infinite {
                return Err(format!("trivial certificate for {value}"));
            }
        }
        Witness::Search { .. } | Witness::Derived { .. } => {}
    }
    Ok(())
}

/// Hypotheses of the alternating checkerboard result that `d` fails.
fn alternating_unmet(d: &LinkDiagram) -> Vec<String> {
    let flags = d.classify();
    let mut unmet = Vec::new();
    for (ok, name) in [
        (flags.connected, "connected"),
        (flags.reduced, "reduced"),
        (flags.alternating, "alternating"),
        (d.genus() == 0, "genus 0"),
    ] {
        if !ok {
            unmet.push(name.to_string());
        }
    }
    unmet
}

/// Essence of a checkerboard surface of a connected reduced alternating
/// diagram on the sphere. The Tait girth and the Goeritz minimum are both
/// computed and must agree; other diagrams get a bounds-only report.
pub fn essence_alternating_checkerboard(
    d: &LinkDiagram,
    color: Color,
) -> Result<EssenceReport, EssenceError> {
    let surface = Surface::Checkerboard { color };
    let unmet = alternating_unmet(d);
    if !unmet.is_empty() {
        let mut report = EssenceReport::bounds_only(surface, d.crossing_count(), unmet);
        if d.is_connected() && d.genus() == 0 {
            // the checkerboard surface is the state surface of its state
            let coloring = d
                .checkerboard_coloring()
                .map_err(|e| EssenceError::Graph(e.into()))?;
            let state = State::checkerboard(d, &coloring, color);
            let g = state_graph(d, &state)?;
            if g.is_adequate() && g.is_homogeneous() {
                let girth = g.girth();
                let cert = Certificate::new(Tag::StateGraphGirth, girth_witness(&g, &girth));
                let value = Bound::from(girth.length);
                report.ess.raise(value, cert.clone());
                report.ess_g.raise(value, cert);
                report.ess.settle("ess")?;
                report.ess_g.settle("ess_g")?;
            }
        }
        return Ok(report);
    }
    let g = tait_graph(d, color)?;
    let girth = g.girth();
    let (ess, form_cert) = match girth.length {
        None => (Bound::Infinite, None),
        Some(n) => {
            let form = goeritz_matrix(d, color)
                .map_err(|e| EssenceError::Integrity(format!("Goeritz form: {e}")))?;
            let min = form_minimum(&form)
                .map_err(|e| EssenceError::Integrity(format!("Goeritz minimum: {e}")))?;
            if min.value != n as i64 {
                return Err(EssenceError::Integrity(format!(
                    "Tait girth {n} differs from Goeritz minimum {}",
                    min.value
                )));
            }
            let cert = Certificate::new(
                Tag::FormMinimum,
                Witness::Vector {
                    coordinates: min.witness,
                },
            );
            (Bound::Finite(n), Some(cert))
        }
    };
    let lower = Certificate::new(Tag::TaitGirth, girth_witness(&g, &girth));
    let upper = Certificate::new(Tag::FramingCycle, girth_witness(&g, &girth));
    let mut ess_est = Estimate::exactly(ess, lower, upper);
    let mut ess_g = ess_est.clone();
    if let Some(cert) = form_cert {
        // the form gives the geometric essence's certificate independently
        ess_g.lower_certificate = cert;
    }
    let ess_c = ess_c_report(d, color, ess.finite().map_or(1, |n| n.saturating_sub(1)))?;
    ess_est.exact = true;
    Ok(EssenceReport {
        surface,
        crossings: d.crossing_count(),
        ess: ess_est,
        ess_g,
        ess_c: Some(ess_c),
        unmet: Vec::new(),
    })
}

fn cycle_crossings(g: &LabeledMultigraph, edges: &[usize]) -> Vec<usize> {
    edges.iter().map(|&e| g.edge(e).crossing).collect()
}

/// The shortest cycle, or nothing for a forest.
fn girth_witness(g: &LabeledMultigraph, girth: &Girth) -> Witness {
    match girth.length {
        Some(_) => Witness::Cycle {
            crossings: cycle_crossings(g, &girth.cycle),
        },
        None => Witness::None,
    }
}

const LAYERING_NOTE: &str =
    "the lower bound holds under every layering of the state disks; equality holds for some layering";

/// Essence of the state surface of a homogeneously adequate state on the
/// sphere: the state graph girth bounds it below under every layering and
/// equals it under some layering. Other states get an inconclusive report
/// naming the failed conditions.
pub fn essence_state_surface(d: &LinkDiagram, state: &State) -> Result<EssenceReport, EssenceError> {
    let surface = Surface::State {
        state: state.word(),
        layering: LAYERING_NOTE.into(),
    };
    let g = state_graph(d, state)?;
    let mut unmet = Vec::new();
    if d.genus() != 0 {
        unmet.push("genus 0".to_string());
    }
    if !g.is_adequate() {
        unmet.push("adequate".to_string());
    }
    if !g.is_homogeneous() {
        unmet.push("homogeneous".to_string());
    }
    if !unmet.is_empty() {
        return Ok(EssenceReport::bounds_only(surface, d.crossing_count(), unmet));
    }
    let girth = g.girth();
    let value = Bound::from(girth.length);
    let cert = Certificate::new(Tag::StateGraphGirth, girth_witness(&g, &girth));
    let mut ess = Estimate::exactly(value, cert.clone(), cert);
    ess.qualify(&[LAYERING_NOTE.to_string()]);
    let ess_g = ess.clone();
    Ok(EssenceReport {
        surface,
        crossings: d.crossing_count(),
        ess,
        ess_g,
        ess_c: None,
        unmet,
    })
}

const COMPLETENESS_NOTE: &str =
    "contractible essence is exact modulo cap-family completeness: only caps beside Tait cycles are searched";

/// Contractible essence of a checkerboard surface of a reduced alternating
/// diagram, from caps beside Tait cycles of length up to `max_r + 1`.
pub fn ess_c_report(d: &LinkDiagram, color: Color, max_r: usize) -> Result<Estimate, EssenceError> {
    let ctx = TaitContext::new(d, color).map_err(|e| EssenceError::Hypotheses(e.to_string()))?;
    let betti = ctx.graph.betti_number();
    if betti <= 1 {
        let cert = Certificate::new(Tag::SingleCycle, Witness::None);
        return Ok(Estimate::exactly(Bound::Infinite, cert.clone(), cert));
    }
    let mut est = Estimate::unknown();
    let all: Vec<usize> = (0..d.crossing_count()).collect();
    let caps = ctx.caps(&all, max_r + 1);
    let girth = ctx.graph.girth();
    if let Some(n) = girth.length {
        est.lower_to(
            Bound::Finite(2 * (n - 1)),
            Certificate::new(
                Tag::ContractibleBound,
                Witness::Cycle {
                    crossings: cycle_crossings(&ctx.graph, &girth.cycle),
                },
            ),
        );
    }
    match caps.iter().min_by_key(|c| c.complexity) {
        Some(cap) => {
            let value = Bound::Finite(cap.complexity);
            est.lower_to(
                value,
                Certificate::new(
                    Tag::TwistedCap,
                    Witness::Twisted {
                        cap: Box::new(cap.clone()),
                    },
                ),
            );
            est.raise(value, Certificate::new(Tag::TwistedCapSearch, Witness::None));
        }
        None => {
            est.raise(
                Bound::Finite(2 * max_r + 2),
                Certificate::new(Tag::TwistedCapSearch, Witness::None),
            );
        }
    }
    est.qualify(&[COMPLETENESS_NOTE.to_string()]);
    est.settle("ess_c")?;
    Ok(est)
}

/// Lower bound on the essence from a plumbing decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingBound {
    pub factor_bounds: Vec<usize>,
    pub bound: usize,
}

/// Merges cap search results and a plumbing bound into a report, then
/// applies the implications between the three essences. Fails when two
/// certified bounds contradict each other.
pub fn combine_bounds(
    mut report: EssenceReport,
    searches: &[&CapSearchReport],
    plumbing: Option<&PlumbingBound>,
) -> Result<EssenceReport, EssenceError> {
    for s in searches {
        let witness = |points| Witness::Search {
            mode: s.mode,
            max_height: s.max_height,
            boundary_points: points,
        };
        match &s.outcome {
            CapSearchOutcome::Found { .. } => {
                let best = s
                    .caps
                    .iter()
                    .filter(|(_, v)| v.closed && v.essential)
                    .map(|(_, v)| v.boundary_l_count)
                    .min();
                if let Some(b) = best {
                    let (target, tag) = match s.mode {
                        SearchMode::Algebraic => (&mut report.ess, Tag::AlgebraicCap),
                        _ => (&mut report.ess_g, Tag::GeometricCap),
                    };
                    target.lower_to(Bound::Finite(b), Certificate::new(tag, witness(Some(b))));
                }
            }
            CapSearchOutcome::NoneExists {
                reason: NoneReason::EmptyBaseStratum,
            } => {
                // every cap has an outermost subdisk, and none exists with
                // this many link touches
                let b = Bound::Finite(s.max_touches + 1);
                let cert = Certificate::new(Tag::EmptyBaseStratum, witness(None));
                match s.mode {
                    SearchMode::Algebraic => report.ess.raise(b, cert),
                    _ => report.ess_g.raise(b, cert),
                };
            }
            CapSearchOutcome::NoneExists { .. } => {}
        }
    }
    if let Some(p) = plumbing {
        report.ess.raise(
            Bound::Finite(p.bound),
            Certificate::new(
                Tag::PlumbingFactors,
                Witness::Factors {
                    bounds: p.factor_bounds.clone(),
                },
            ),
        );
    }
    dominate(&mut report);
    if let Some(c) = report.ess_c.clone() {
        apply_contractible_clauses(&mut report, &c);
        dominate(&mut report);
    }
    report.ess.settle("ess")?;
    report.ess_g.settle("ess_g")?;
    if let Some(c) = report.ess_c.as_mut() {
        c.settle("ess_c")?;
    }
    Ok(report)
}

/// The essence never exceeds the geometric essence.
fn dominate(report: &mut EssenceReport) {
    let g = report.ess_g.clone();
    let e = report.ess.clone();
    if report.ess.lower_to(
        g.upper,
        Certificate::derived(Tag::GeometricDominates, &[g.upper_certificate.tag]),
    ) {
        report.ess.qualify(&g.qualifiers);
    }
    if report.ess_g.raise(
        e.lower,
        Certificate::derived(Tag::GeometricDominates, &[e.lower_certificate.tag]),
    ) {
        report.ess_g.qualify(&e.qualifiers);
    }
}

/// With contractible essence at least `2r`: a geometric essence of at most
/// `2r` is the essence, and otherwise the essence is at least `2r`.
fn apply_contractible_clauses(report: &mut EssenceReport, c: &Estimate) {
    let two_r = match c.lower {
        Bound::Finite(n) => Bound::Finite(n - n % 2),
        Bound::Infinite => Bound::Infinite,
    };
    if two_r == Bound::Finite(0) {
        return;
    }
    let from = [c.lower_certificate.tag];
    let g = report.ess_g.clone();
    let mut changed = false;
    if g.upper <= two_r {
        changed |= report.ess.raise(g.lower, Certificate::derived(Tag::ContractibleClause, &from));
        changed |= report.ess.lower_to(g.upper, Certificate::derived(Tag::ContractibleClause, &from));
    }
    let floor = g.lower.min(two_r);
    changed |= report.ess.raise(floor, Certificate::derived(Tag::ContractibleClause, &from));
    if changed {
        report.ess.qualify(&c.qualifiers);
        report.ess.qualify(&g.qualifiers);
    }
}

/// What the end-essentiality results license for a state surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndEss {
    EndEssential,
    /// Only on the sphere: pi1-essential.
    Pi1Essential,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndEssVerdict {
    pub genus: u32,
    pub cellular: bool,
    pub alternating: bool,
    pub nugatory_free: bool,
    pub adequate: bool,
    pub homogeneous: bool,
    pub verdict: EndEss,
    /// The rule that gave the verdict.
    pub rule: Option<String>,
}

/// Classifies a state surface of a diagram on a closed surface of genus
/// `d.genus()`. Claims end-essentiality only for adequate states of
/// cellular alternating diagrams without removable nugatory crossings, or
/// for homogeneously adequate states; on the sphere a homogeneously
/// adequate state gives a pi1-essential surface.
pub fn end_essential_report(d: &LinkDiagram, state: &State) -> Result<EndEssVerdict, EssenceError> {
    let flags = d.classify();
    let g = state_graph(d, state)?;
    let mut v = EndEssVerdict {
        genus: d.genus(),
        cellular: flags.cellular,
        alternating: flags.alternating,
        nugatory_free: d.detect_nugatory().is_empty(),
        adequate: g.is_adequate(),
        homogeneous: g.is_homogeneous(),
        verdict: EndEss::Inconclusive,
        rule: None,
    };
    let homogeneously_adequate = v.adequate && v.homogeneous;
    if v.genus == 0 {
        if homogeneously_adequate {
            v.verdict = EndEss::Pi1Essential;
            v.rule = Some("homogeneously adequate state on the sphere".into());
        }
    } else if v.cellular && v.alternating && v.nugatory_free && v.adequate {
        v.verdict = EndEss::EndEssential;
        v.rule = Some("adequate state of a cellular alternating diagram without removable nugatory crossings".into());
    } else if homogeneously_adequate {
        v.verdict = EndEss::EndEssential;
        v.rule = Some("homogeneously adequate state in a thickened surface".into());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capsearch::{find_bounded_height_caps, FlatCapDecomposition, SearchConfig};
    use crate::diagram::Smoothing;
    use crate::fixtures;
    use crate::forms::brute_force_minimum;

    /// Shortest cycle by trying every edge sequence, independent of the BFS.
    fn brute_girth(g: &LabeledMultigraph) -> Option<usize> {
        (1..=g.edge_count()).find(|&len| {
            let mut seq = vec![0usize; len];
            loop {
                if g.is_simple_cycle(&seq) {
                    return true;
                }
                let mut i = 0;
                loop {
                    if i == len {
                        return false;
                    }
                    seq[i] += 1;
                    if seq[i] < g.edge_count() {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
            }
        })
    }

    #[test]
    fn trefoil_essences() {
        let f = fixtures::trefoil();
        for (color, expected) in [(f.color, 2), (f.color.opposite(), 3)] {
            let g = tait_graph(&f.diagram, color).unwrap();
            assert_eq!(brute_girth(&g), Some(expected));
            let form = goeritz_matrix(&f.diagram, color).unwrap();
            assert_eq!(brute_force_minimum(&form, 3), Some(expected as i64));
            let r = essence_alternating_checkerboard(&f.diagram, color).unwrap();
            assert!(r.ess.exact && r.ess_g.exact);
            assert_eq!(r.ess.lower, Bound::Finite(expected));
            assert_eq!(r.ess_g.upper, Bound::Finite(expected));
            r.verify(&f.diagram).unwrap();
        }
        let black = essence_alternating_checkerboard(&f.diagram, f.color).unwrap();
        let c = black.ess_c.unwrap();
        assert_eq!((c.lower, c.upper), (Bound::Finite(2), Bound::Finite(2)));
        let white = essence_alternating_checkerboard(&f.diagram, f.color.opposite()).unwrap();
        assert_eq!(white.ess_c.unwrap().lower, Bound::Infinite);
    }

    #[test]
    fn kink_falls_back_to_bounds() {
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        for color in [Color::Black, Color::White] {
            let r = essence_alternating_checkerboard(&d, color).unwrap();
            assert!(r.unmet.contains(&"reduced".to_string()));
            // one surface is a disk, which has no caps at all
            let disk = r.ess.lower == Bound::Infinite;
            assert_eq!(r.ess.exact, disk);
            r.verify(&d).unwrap();
        }
        assert!(ess_c_report(&d, Color::Black, 2).is_err());
    }

    #[test]
    fn state_surfaces() {
        let f = fixtures::figure_eight();
        let all_a = State::all(Smoothing::A, 4);
        let r = essence_state_surface(&f.diagram, &all_a).unwrap();
        // all-A of a reduced alternating diagram is a checkerboard surface
        let color = [Color::Black, Color::White]
            .into_iter()
            .find(|&c| {
                let col = f.diagram.checkerboard_coloring().unwrap();
                State::checkerboard(&f.diagram, &col, c) == all_a
            })
            .unwrap();
        let cb = essence_alternating_checkerboard(&f.diagram, color).unwrap();
        assert_eq!(r.ess.lower, cb.ess.lower);
        assert!(r.ess.exact && !r.ess.qualifiers.is_empty());
        r.verify(&f.diagram).unwrap();

        // a kink's state with the loop is inadequate
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        for s in [Smoothing::A, Smoothing::B] {
            let r = essence_state_surface(&d, &State::all(s, 1)).unwrap();
            if r.unmet.contains(&"adequate".to_string()) {
                assert_eq!(r.ess.lower, Bound::Finite(0));
                assert!(!r.ess.exact);
            }
        }
    }

    #[test]
    fn two_block_state_takes_least_girth() {
        // a digon and a triangle sharing a vertex
        let mut g = crate::diagram::PlaneGraph::cycle(2, Smoothing::A);
        g.attach_cycle(0, 0, 3, Smoothing::A);
        let d = g.to_diagram().unwrap();
        let color = g.vertex_color(&d).unwrap();
        let state = State::checkerboard(&d, &d.checkerboard_coloring().unwrap(), color);
        let r = essence_state_surface(&d, &state).unwrap();
        assert_eq!(r.ess.lower, Bound::Finite(2));
        let tree = crate::plumbing::deplumb_state(&d, &state).unwrap();
        let girths: Vec<_> = tree.nodes.iter().map(|n| n.girth.length.unwrap()).collect();
        assert_eq!(girths.iter().min(), Some(&2));
        assert_eq!(girths.len(), 2);
    }

    fn report(ess_g: (usize, usize), ess_c: usize) -> EssenceReport {
        let cert = |t| Certificate::new(t, Witness::None);
        let mut r = EssenceReport::bounds_only(Surface::Checkerboard { color: Color::Black }, 0, vec![]);
        r.ess_g = Estimate {
            lower: Bound::Finite(ess_g.0),
            upper: Bound::Finite(ess_g.1),
            lower_certificate: cert(Tag::EmptyBaseStratum),
            upper_certificate: cert(Tag::GeometricCap),
            exact: false,
            qualifiers: vec![],
        };
        let mut c = Estimate::unknown();
        c.raise(Bound::Finite(ess_c), cert(Tag::TwistedCapSearch));
        r.ess_c = Some(c);
        r
    }

    #[test]
    fn contractible_clauses() {
        // geometric essence 3 at most 2r = 4: the essence equals it
        let r = combine_bounds(report((3, 3), 4), &[], None).unwrap();
        assert_eq!((r.ess.lower, r.ess.upper), (Bound::Finite(3), Bound::Finite(3)));
        // geometric essence above 2r: only the essence at least 2r follows
        let r = combine_bounds(report((7, 9), 4), &[], None).unwrap();
        assert_eq!(r.ess.lower, Bound::Finite(4));
        assert_eq!(r.ess.upper, Bound::Finite(9));
        assert!(!r.ess.exact);
    }

    #[test]
    fn plumbed_factors_bound_the_essence() {
        let p = PlumbingBound {
            factor_bounds: vec![3, 4],
            bound: crate::plumbing::plumb_essence_lower_bound(
                &[3, 4],
                &[crate::plumbing::Gluing::Untwisted],
            )
            .unwrap(),
        };
        let r = EssenceReport::bounds_only(Surface::Checkerboard { color: Color::Black }, 0, vec![]);
        let r = combine_bounds(r, &[], Some(&p)).unwrap();
        assert_eq!(r.ess.lower, Bound::Finite(3));
        assert_eq!(r.ess_g.lower, Bound::Finite(3));
    }

    #[test]
    fn contradictions_are_integrity_errors() {
        let mut r = report((3, 3), 0);
        r.ess.raise(Bound::Finite(5), Certificate::new(Tag::PlumbingFactors, Witness::None));
        assert!(matches!(
            combine_bounds(r, &[], None),
            Err(EssenceError::Integrity(_))
        ));
    }

    #[test]
    fn algebraic_cap_bounds_f1() {
        let f = fixtures::f1();
        let dec = FlatCapDecomposition::build(&f.diagram, f.color).unwrap();
        let (_, s) = find_bounded_height_caps(&dec, &SearchConfig::new(1, SearchMode::Algebraic))
            .unwrap();
        let base = essence_alternating_checkerboard(&f.diagram, f.color).unwrap();
        assert!(!base.unmet.is_empty());
        let r = combine_bounds(base, &[&s], None).unwrap();
        assert_eq!(r.ess.upper, Bound::Finite(0));
        assert_eq!(r.ess.upper_certificate.tag, Tag::AlgebraicCap);
        r.verify(&f.diagram).unwrap();
    }

    #[test]
    fn end_essential_verdicts() {
        let f = fixtures::figure_eight();
        let v = end_essential_report(&f.diagram, &State::all(Smoothing::A, 4)).unwrap();
        assert_eq!(v.verdict, EndEss::Pi1Essential);
        let d = LinkDiagram::parse("X 1 1 2 2").unwrap();
        for s in [Smoothing::A, Smoothing::B] {
            let v = end_essential_report(&d, &State::all(s, 1)).unwrap();
            assert!(!v.nugatory_free);
            if !v.adequate {
                assert_eq!(v.verdict, EndEss::Inconclusive);
            }
        }
    }

    #[test]
    fn torus_diagrams() {
        // two crossings filling a torus with two square faces
        let d = LinkDiagram::from_pd(&[[4, 3, 2, 1], [1, 4, 3, 2]], None).unwrap();
        assert_eq!(d.genus(), 1);
        let v = end_essential_report(&d, &State::parse("AB", &d).unwrap()).unwrap();
        assert!(v.cellular && v.alternating && v.nugatory_free && v.adequate);
        assert_eq!(v.verdict, EndEss::EndEssential);
        let v = end_essential_report(&d, &State::parse("AA", &d).unwrap()).unwrap();
        assert!(!v.adequate);
        assert_eq!(v.verdict, EndEss::Inconclusive);
        // the same with a kink added
        let d = LinkDiagram::from_pd(&[[6, 3, 2, 1], [1, 4, 3, 2], [4, 5, 5, 6]], None).unwrap();
        assert_eq!(d.genus(), 1);
        for w in ["ABA", "ABB", "AAA", "BBB"] {
            let v = end_essential_report(&d, &State::parse(w, &d).unwrap()).unwrap();
            assert!(!v.nugatory_free);
            if !(v.adequate && v.homogeneous) {
                assert_eq!(v.verdict, EndEss::Inconclusive, "{w}");
            }
        }
    }
}
