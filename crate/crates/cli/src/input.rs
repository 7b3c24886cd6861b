//! Reading diagrams from files, stdin or fixture names.

use std::io::Read;

use essence_core::diagram::{Color, LinkDiagram};
use essence_core::fixtures;

use crate::Failure;

/// A parsed input with the surface color a fixture suggests.
pub struct Input {
    pub diagram: LinkDiagram,
    pub default_color: Option<Color>,
}

/// Names accepted in place of a path, with a short description.
pub const FIXTURES: &[(&str, &str)] = &[
    ("trefoil", "trefoil, black surface is the theta-graph surface"),
    ("figure-eight", "figure-eight knot"),
    ("6_2", "the knot 6_2"),
    ("8_5", "the knot 8_5 as the pretzel P(3,3,2)"),
    ("borromean", "Borromean rings as the medial of K4"),
    ("pretzel-3", "pretzel P(-3,3,-3), two disks and three bands"),
    ("pretzel-2", "pretzel P(-2,2,-2), two disks and three bands"),
    ("f0", "two same-handed Mobius bands summed along a disk"),
    ("f1", "f0 with six plumbed annuli"),
    ("twisted-annulus", "unknotted annulus with four half twists"),
    ("plumbed-seifert", "closure of the 3-braid s1 s1 s2 s1^-1 s1^-1 s2"),
];

fn fixture(name: &str) -> Option<Input> {
    let f = match name {
        "trefoil" => fixtures::trefoil(),
        "figure-eight" => fixtures::figure_eight(),
        "6_2" => fixtures::six_two(),
        "8_5" => fixtures::eight_five(),
        "borromean" => fixtures::borromean(),
        "pretzel-3" => fixtures::pretzel(3),
        "pretzel-2" => fixtures::pretzel(2),
        "f0" => fixtures::f0(),
        "f1" => fixtures::f1(),
        "twisted-annulus" => fixtures::twisted_annulus(4),
        "plumbed-seifert" => {
            return Some(Input {
                diagram: fixtures::plumbed_seifert(),
                default_color: None,
            })
        }
        _ => return None,
    };
    Some(Input {
        diagram: f.diagram,
        default_color: Some(f.color),
    })
}

/// Reads `source`: `-` for stdin, a path, or a fixture name. Documents whose
/// first non-blank character is `{` are read as JSON.
pub fn load(source: &str) -> Result<Input, Failure> {
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        match std::fs::read_to_string(source) {
            Ok(s) => s,
            Err(e) => {
                if let Some(f) = fixture(source) {
                    return Ok(f);
                }
                return Err(Failure::Input(format!("{source}: {e}")));
            }
        }
    };
    let parsed = if text.trim_start().starts_with('{') {
        LinkDiagram::parse_json(&text)
    } else {
        LinkDiagram::parse(&text)
    };
    let diagram = parsed.map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    Ok(Input {
        diagram,
        default_color: None,
    })
}
