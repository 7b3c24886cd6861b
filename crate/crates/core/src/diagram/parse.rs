//! PD-code documents.
//!
//! Text grammar, one item per line:
//!
//! ```text
//! # comment
//! genus 0          optional header; asserts the genus of the rotation system
//! X 1 4 2 5        one crossing, labels counterclockwise from the incoming under-strand
//! U                the crossingless unknot (must be the only item)
//! ```
//!
//! A `/` may separate items on one line. The JSON mirror is
//! `{"crossings": [[a, b, c, d], ...], "genus": g, "unknot": false}` with
//! `genus` and `unknot` optional.

use serde::Deserialize;
use thiserror::Error;

use super::{BuildError, LinkDiagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyDocument,
    MalformedToken(String),
    MissingLabels,
    DuplicateGenus,
    UnknotWithCrossings,
    Structure(BuildError),
    Json(String),
}

/// A parse failure with a 1-based line and column (0 when not tied to a position).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {}", describe(.kind))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::EmptyDocument => "empty document".into(),
        ParseErrorKind::MalformedToken(t) => format!("malformed token {t:?}"),
        ParseErrorKind::MissingLabels => "crossing needs exactly four edge labels".into(),
        ParseErrorKind::DuplicateGenus => "genus header given twice".into(),
        ParseErrorKind::UnknotWithCrossings => "`U` cannot be combined with crossings".into(),
        ParseErrorKind::Structure(e) => e.to_string(),
        ParseErrorKind::Json(m) => format!("invalid JSON document: {m}"),
    }
}

struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl LinkDiagram {
    /// Parses the PD text grammar.
    pub fn parse(text: &str) -> Result<LinkDiagram, ParseError> {
        let mut crossings: Vec<[u32; 4]> = Vec::new();
        let mut where_label: std::collections::HashMap<u32, (usize, usize)> = Default::default();
        let mut genus: Option<u32> = None;
        let mut unknot: Option<(usize, usize)> = None;
        let mut first_crossing: Option<(usize, usize)> = None;

        for (li, raw_line) in text.lines().enumerate() {
            let line_no = li + 1;
            let content = raw_line.split('#').next().unwrap_or("");
            let mut offset = 0;
            for item in content.split('/') {
                let toks = tokens(item, line_no, offset);
                offset += item.len() + 1;
                let Some(head) = toks.first() else { continue };
                match head.text {
                    "X" => {
                        if toks.len() != 5 {
                            return Err(err(head, ParseErrorKind::MissingLabels));
                        }
                        let mut row = [0u32; 4];
                        for (k, t) in toks[1..].iter().enumerate() {
                            let v: u32 =
                                t.text.parse().ok().filter(|&v| v > 0).ok_or_else(|| {
                                    err(t, ParseErrorKind::MalformedToken(t.text.to_string()))
                                })?;
                            where_label.entry(v).or_insert((t.line, t.col));
                            row[k] = v;
                        }
                        first_crossing.get_or_insert((head.line, head.col));
                        crossings.push(row);
                    }
                    "genus" => {
                        if toks.len() != 2 {
                            return Err(err(
                                head,
                                ParseErrorKind::MalformedToken(item.trim().to_string()),
                            ));
                        }
                        let g: u32 = toks[1].text.parse().map_err(|_| {
                            err(
                                &toks[1],
                                ParseErrorKind::MalformedToken(toks[1].text.to_string()),
                            )
                        })?;
                        if genus.replace(g).is_some() {
                            return Err(err(head, ParseErrorKind::DuplicateGenus));
                        }
                    }
                    "U" => {
                        if toks.len() != 1 {
                            return Err(err(
                                &toks[1],
                                ParseErrorKind::MalformedToken(toks[1].text.to_string()),
                            ));
                        }
                        unknot = Some((head.line, head.col));
                    }
                    other => {
                        return Err(err(head, ParseErrorKind::MalformedToken(other.to_string())))
                    }
                }
            }
        }

        if let Some((line, col)) = unknot {
            if !crossings.is_empty() {
                return Err(ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::UnknotWithCrossings,
                });
            }
            if genus.unwrap_or(0) != 0 {
                return Err(ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::Structure(BuildError::GenusMismatch {
                        declared: genus.unwrap(),
                        computed: 0,
                    }),
                });
            }
            return Ok(LinkDiagram::unknot());
        }
        if crossings.is_empty() {
            return Err(ParseError {
                line: 0,
                col: 0,
                kind: ParseErrorKind::EmptyDocument,
            });
        }
        LinkDiagram::from_pd(&crossings, genus).map_err(|e| {
            let (line, col) = match &e {
                BuildError::SlotUsedTwice(l)
                | BuildError::UnmatchedSlot(l)
                | BuildError::InconsistentOrientation(l) => {
                    where_label.get(l).copied().unwrap_or((0, 0))
                }
                _ => first_crossing.unwrap_or((0, 0)),
            };
            ParseError {
                line,
                col,
                kind: ParseErrorKind::Structure(e),
            }
        })
    }

    /// Parses the JSON mirror schema.
    pub fn parse_json(text: &str) -> Result<LinkDiagram, ParseError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            crossings: Vec<[u32; 4]>,
            #[serde(default)]
            genus: Option<u32>,
            #[serde(default)]
            unknot: bool,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            col: e.column(),
            kind: ParseErrorKind::Json(e.to_string()),
        })?;
        if doc.unknot {
            if !doc.crossings.is_empty() {
                return Err(ParseError {
                    line: 0,
                    col: 0,
                    kind: ParseErrorKind::UnknotWithCrossings,
                });
            }
            return Ok(LinkDiagram::unknot());
        }
        if doc.crossings.is_empty() {
            return Err(ParseError {
                line: 0,
                col: 0,
                kind: ParseErrorKind::EmptyDocument,
            });
        }
        LinkDiagram::from_pd(&doc.crossings, doc.genus).map_err(|e| ParseError {
            line: 0,
            col: 0,
            kind: ParseErrorKind::Structure(e),
        })
    }
}

fn tokens(item: &str, line: usize, offset: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let bytes = item.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push(Tok {
            text: &item[start..i],
            line,
            col: offset + start + 1,
        });
    }
    out
}

fn err(t: &Tok<'_>, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: t.line,
        col: t.col,
        kind,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_text() {
        let d = LinkDiagram::parse("# trefoil\nX 1 4 2 5\nX 3 6 4 1\n\nX 5 2 6 3\n").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.face_count(), 5);
    }

    #[test]
    fn slash_separated() {
        let d = LinkDiagram::parse("X 1 4 2 5 / X 3 6 4 1 / X 5 2 6 3").unwrap();
        assert_eq!(d.edge_count(), 6);
    }

    #[test]
    fn empty_is_error() {
        assert_eq!(
            LinkDiagram::parse("").unwrap_err().kind,
            ParseErrorKind::EmptyDocument
        );
        assert_eq!(
            LinkDiagram::parse("# nothing\n\n").unwrap_err().kind,
            ParseErrorKind::EmptyDocument
        );
    }

    #[test]
    fn malformed_token_position() {
        let e = LinkDiagram::parse("X 1 4 2 5\nX 3 six 4 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        assert!(matches!(e.kind, ParseErrorKind::MalformedToken(_)));
    }

    #[test]
    fn unmatched_and_reused() {
        let e = LinkDiagram::parse("X 1 2 3 4").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Structure(BuildError::UnmatchedSlot(1))
        ));
        let e = LinkDiagram::parse("X 1 1 1 2\n").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Structure(BuildError::SlotUsedTwice(1))
        ));
    }

    #[test]
    fn genus_header_checked() {
        assert!(LinkDiagram::parse("genus 0\nX 1 1 2 2").is_ok());
        let e = LinkDiagram::parse("genus 1\nX 1 1 2 2").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Structure(BuildError::GenusMismatch { .. })
        ));
    }

    #[test]
    fn unknot_document() {
        let d = LinkDiagram::parse("U\n").unwrap();
        assert!(d.is_crossingless());
        assert!(LinkDiagram::parse("U\nX 1 1 2 2").is_err());
    }

    #[test]
    fn json_mirror() {
        let d = LinkDiagram::parse_json(
            r#"{"crossings": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "genus": 0}"#,
        )
        .unwrap();
        assert_eq!(d.face_count(), 5);
        assert!(LinkDiagram::parse_json(r#"{"crossings": []}"#).is_err());
    }

    #[test]
    fn text_round_trip() {
        let d = LinkDiagram::parse("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3").unwrap();
        let again = LinkDiagram::parse(&d.to_pd_text()).unwrap();
        assert_eq!(d, again);
    }
}
