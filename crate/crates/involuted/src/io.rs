//! Input parsing, diagram serialization, and SVG rendering.
//!
//! Two input grammars are supported, both with entries separated by commas
//! and/or whitespace and no comment syntax:
//!
//! * lower-distance matrix: the strict lower triangle in row-major order,
//!   `d(1,0) d(2,0) d(2,1) d(3,0) ...`; the entry count must be `n(n-1)/2`.
//! * point cloud: one point per line, equal arity.
//!
//! The structured output is a versioned JSON document ([`DiagramDocument`],
//! schema version 1) that re-parses to an equal value. Infinite deaths are
//! serialized as the distinguished token `"inf"`, never as a sentinel
//! number. Floats print in shortest round-trip form, so identical runs are
//! byte-identical.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::pipeline::{Mode, Persistence};
use crate::reduction::Chain;
use crate::rips::{point_count_for_triangular, DistanceMatrix, Filtration, RipsError};

pub const SCHEMA_VERSION: u32 = 1;
pub const DOCUMENT_FORMAT: &str = "involuted/diagram";
pub const TIE_BREAK: &str = "diameter,dimension,rank/v1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid number {token:?} at byte {offset}")]
    BadToken { offset: usize, token: String },
    #[error("value {value} at byte {offset} must be a finite non-negative number")]
    BadDistanceValue { offset: usize, value: f64 },
    #[error("value {value} at byte {offset} must be finite")]
    NonFiniteCoordinate { offset: usize, value: f64 },
    #[error(
        "{count} entries is not n(n-1)/2 for any n; nearest are {lo} entries (n={n_lo}) and {hi} entries (n={n_hi})"
    )]
    NotTriangular {
        count: usize,
        lo: usize,
        n_lo: usize,
        hi: usize,
        n_hi: usize,
    },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Matrix(#[from] RipsError),
    #[error("structured document: {0}")]
    BadDocument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    /// Lower-distance when the entry count is triangular, point cloud
    /// otherwise.
    #[default]
    Auto,
    LowerDistance,
    PointCloud,
}

fn tokenize(input: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in input.char_indices() {
        if ch == ',' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s, &input[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, &input[s..]));
    }
    tokens
}

fn parse_number(offset: usize, token: &str) -> Result<f64, ParseError> {
    token.parse::<f64>().map_err(|_| ParseError::BadToken {
        offset,
        token: token.to_string(),
    })
}

/// Parses a lower-distance matrix. Empty input is the empty point set.
pub fn parse_lower_distance(input: &str) -> Result<DistanceMatrix, ParseError> {
    let tokens = tokenize(input);
    let mut entries = Vec::with_capacity(tokens.len());
    for (offset, token) in tokens {
        let value = parse_number(offset, token)?;
        if !value.is_finite() || value < 0.0 {
            return Err(ParseError::BadDistanceValue { offset, value });
        }
        entries.push(value);
    }
    let count = entries.len();
    if point_count_for_triangular(count).is_none() {
        let mut n_lo = 1;
        while (n_lo + 1) * n_lo / 2 < count {
            n_lo += 1;
        }
        return Err(ParseError::NotTriangular {
            count,
            lo: n_lo * (n_lo - 1) / 2,
            n_lo,
            hi: (n_lo + 1) * n_lo / 2,
            n_hi: n_lo + 1,
        });
    }
    Ok(DistanceMatrix::from_lower_triangular(&entries)?)
}

/// Parses a point cloud, one point per line; blank lines are skipped.
pub fn parse_point_cloud(input: &str) -> Result<DistanceMatrix, ParseError> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut expected: Option<usize> = None;
    let mut offset = 0usize;
    for (line_no, line) in input.lines().enumerate() {
        let tokens = tokenize(line);
        if !tokens.is_empty() {
            let mut point = Vec::with_capacity(tokens.len());
            for (tok_offset, token) in &tokens {
                let value = parse_number(offset + tok_offset, token)?;
                if !value.is_finite() {
                    return Err(ParseError::NonFiniteCoordinate {
                        offset: offset + tok_offset,
                        value,
                    });
                }
                point.push(value);
            }
            match expected {
                None => expected = Some(point.len()),
                Some(arity) if arity != point.len() => {
                    return Err(ParseError::RaggedRow {
                        line: line_no + 1,
                        expected: arity,
                        found: point.len(),
                    });
                }
                Some(_) => {}
            }
            points.push(point);
        }
        offset += line.len() + 1;
    }
    Ok(DistanceMatrix::from_points(&points)?)
}

/// Parses either grammar. `Auto` picks lower-distance exactly when the token
/// count is triangular (ambiguous inputs exist; force a format to override).
pub fn parse_input(input: &str, format: InputFormat) -> Result<DistanceMatrix, ParseError> {
    match format {
        InputFormat::LowerDistance => parse_lower_distance(input),
        InputFormat::PointCloud => parse_point_cloud(input),
        InputFormat::Auto => {
            let count = tokenize(input).len();
            if point_count_for_triangular(count).is_some() {
                parse_lower_distance(input)
            } else {
                parse_point_cloud(input)
            }
        }
    }
}

/// Serializes a matrix as a lower-distance file, one row per line, shortest
/// round-trip float form: re-parsing yields the identical matrix.
pub fn emit_lower_distance(dm: &DistanceMatrix) -> String {
    let mut out = String::new();
    for i in 1..dm.len() {
        for j in 0..i {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", dm.distance(i, j));
        }
        out.push('\n');
    }
    out
}

/// Serializes a point cloud, one point per line.
pub fn emit_point_cloud(points: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A death value: a finite diameter or the distinguished infinity token.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Death {
    Finite(f64),
    Infinite,
}

impl Serialize for Death {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Death::Finite(v) => serializer.serialize_f64(*v),
            Death::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Death {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DeathVisitor;
        impl Visitor<'_> for DeathVisitor {
            type Value = Death;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Death, E> {
                Ok(Death::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Death, E> {
                Ok(Death::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Death, E> {
                Ok(Death::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Death, E> {
                if v == "inf" {
                    Ok(Death::Infinite)
                } else {
                    Err(E::custom(format!("unknown death token {v:?}")))
                }
            }
        }
        deserializer.deserialize_any(DeathVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeTerm {
    /// Vertices as 0-based input indices, ascending.
    pub simplex: Vec<u32>,
    /// Coefficient in `[1, p)`.
    pub coefficient: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub birth: f64,
    pub death: Death,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<Vec<RepresentativeTerm>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionDiagram {
    pub dim: usize,
    pub intervals: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    pub points: usize,
    pub modulus: u32,
    pub max_dim: usize,
    /// `None` means the filtration was unbounded.
    pub threshold: Option<f64>,
    pub mode: String,
    pub tie_break: String,
    pub skip_trivial: bool,
}

/// The machine-readable diagram: intervals per dimension, sorted by
/// (dim, birth, death), plus the run metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub format: String,
    pub version: u32,
    pub metadata: DocumentMetadata,
    pub diagram: Vec<DimensionDiagram>,
}

impl DiagramDocument {
    pub fn from_persistence(persistence: &Persistence, mode: Mode, skip_trivial: bool) -> Self {
        let filtration = &persistence.filtration;
        let mut diagram = Vec::new();
        for dim in 0..=persistence.max_dim {
            let mut intervals: Vec<Interval> = persistence
                .pairs_in_dim(dim)
                .filter(|p| !(skip_trivial && p.is_trivial()))
                .map(|p| Interval {
                    birth: p.birth.diameter,
                    death: match p.death {
                        Some(d) => Death::Finite(d.diameter),
                        None => Death::Infinite,
                    },
                    representative: p
                        .representative
                        .as_ref()
                        .map(|chain| representative_terms(chain, filtration)),
                })
                .collect();
            intervals.sort_by(|a, b| {
                a.birth.total_cmp(&b.birth).then(match (a.death, b.death) {
                    (Death::Finite(x), Death::Finite(y)) => x.total_cmp(&y),
                    (Death::Finite(_), Death::Infinite) => std::cmp::Ordering::Less,
                    (Death::Infinite, Death::Finite(_)) => std::cmp::Ordering::Greater,
                    (Death::Infinite, Death::Infinite) => std::cmp::Ordering::Equal,
                })
            });
            diagram.push(DimensionDiagram { dim, intervals });
        }
        DiagramDocument {
            format: DOCUMENT_FORMAT.to_string(),
            version: SCHEMA_VERSION,
            metadata: DocumentMetadata {
                points: filtration.point_count(),
                modulus: persistence.modulus,
                max_dim: persistence.max_dim,
                threshold: persistence.threshold,
                mode: mode.as_str().to_string(),
                tie_break: TIE_BREAK.to_string(),
                skip_trivial,
            },
            diagram,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(input: &str) -> Result<Self, ParseError> {
        let doc: DiagramDocument =
            serde_json::from_str(input).map_err(|e| ParseError::BadDocument(e.to_string()))?;
        if doc.format != DOCUMENT_FORMAT {
            return Err(ParseError::BadDocument(format!(
                "unknown format {:?}",
                doc.format
            )));
        }
        if doc.version != SCHEMA_VERSION {
            return Err(ParseError::BadDocument(format!(
                "unsupported schema version {}",
                doc.version
            )));
        }
        Ok(doc)
    }
}

fn representative_terms(chain: &Chain, filtration: &Filtration) -> Vec<RepresentativeTerm> {
    chain
        .iter()
        .map(|&(pos, coeff)| RepresentativeTerm {
            simplex: filtration.vertices_of(pos),
            coefficient: coeff.value(),
        })
        .collect()
}

/// Renders a chain as `[0,1] + 2*[1,3]`.
pub fn format_chain(chain: &Chain, filtration: &Filtration) -> String {
    let terms = representative_terms(chain, filtration);
    format_terms(&terms)
}

fn format_terms(terms: &[RepresentativeTerm]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|t| {
            let vertices = t
                .simplex
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            if t.coefficient == 1 {
                format!("[{vertices}]")
            } else {
                format!("{}*[{vertices}]", t.coefficient)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Svg,
}

/// Serializes the document in the requested format.
pub fn emit(doc: &DiagramDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => emit_text(doc),
        OutputFormat::Json => doc.to_json(),
        OutputFormat::Svg => emit_svg(doc),
    }
}

fn emit_text(doc: &DiagramDocument) -> String {
    let m = &doc.metadata;
    let threshold = match m.threshold {
        Some(t) => t.to_string(),
        None => "unbounded".to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "# {} v{}", doc.format, doc.version);
    let _ = writeln!(
        out,
        "# points={} modulus={} max_dim={} threshold={} mode={} skip_trivial={} tie_break={}",
        m.points, m.modulus, m.max_dim, threshold, m.mode, m.skip_trivial, m.tie_break
    );
    for dd in &doc.diagram {
        let _ = writeln!(out, "persistence intervals in dim {}:", dd.dim);
        for interval in &dd.intervals {
            let death = match interval.death {
                Death::Finite(d) => d.to_string(),
                Death::Infinite => "inf".to_string(),
            };
            let _ = write!(out, " [{}, {})", interval.birth, death);
            if let Some(rep) = &interval.representative {
                let _ = write!(out, " representative: {}", format_terms(rep));
            }
            out.push('\n');
        }
    }
    out
}

const SVG_SIZE: f64 = 520.0;
const SVG_PLOT_LO: f64 = 70.0;
const SVG_PLOT_HI: f64 = 480.0;
const SVG_INF_Y: f64 = 52.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Birth/death scatter above the diagonal, one marker class per dimension,
/// essential classes on the band above the plot. Self-contained and static.
fn emit_svg(doc: &DiagramDocument) -> String {
    let mut hi = f64::MIN;
    let mut lo: f64 = 0.0;
    for dd in &doc.diagram {
        for i in &dd.intervals {
            hi = hi.max(i.birth);
            lo = lo.min(i.birth);
            if let Death::Finite(d) = i.death {
                hi = hi.max(d);
            }
        }
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let span = hi - lo;
    let scale = (SVG_PLOT_HI - SVG_PLOT_LO) / span;
    let x = |v: f64| SVG_PLOT_LO + (v - lo) * scale;
    let y = |v: f64| SVG_PLOT_HI - (v - lo) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        SVG_SIZE
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>",
        SVG_SIZE
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>",
        SVG_PLOT_LO, SVG_PLOT_HI, SVG_PLOT_HI, SVG_PLOT_HI
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>",
        SVG_PLOT_LO, SVG_PLOT_HI, SVG_PLOT_LO, SVG_PLOT_LO
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#bbb\"/>",
        SVG_PLOT_LO, SVG_PLOT_HI, SVG_PLOT_HI, SVG_PLOT_LO
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>",
        SVG_PLOT_LO, SVG_INF_Y, SVG_PLOT_HI, SVG_INF_Y
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">inf</text>",
        SVG_PLOT_LO - 30.0,
        SVG_INF_Y + 4.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">{}</text>",
        SVG_PLOT_LO - 4.0,
        SVG_PLOT_HI + 16.0,
        lo
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">{}</text>",
        SVG_PLOT_HI - 10.0,
        SVG_PLOT_HI + 16.0,
        hi
    );
    for dd in &doc.diagram {
        let color = PALETTE[dd.dim % PALETTE.len()];
        let _ = writeln!(out, "  <g fill=\"{}\" fill-opacity=\"0.8\">", color);
        for i in &dd.intervals {
            let cy = match i.death {
                Death::Finite(d) => y(d),
                Death::Infinite => SVG_INF_Y,
            };
            let _ = writeln!(
                out,
                "    <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\"><title>dim {}: [{}, {})</title></circle>",
                x(i.birth),
                cy,
                dd.dim,
                i.birth,
                match i.death {
                    Death::Finite(d) => d.to_string(),
                    Death::Infinite => "inf".to_string(),
                }
            );
        }
        let _ = writeln!(out, "  </g>");
    }
    for dd in &doc.diagram {
        let color = PALETTE[dd.dim % PALETTE.len()];
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{}\">dim {}</text>",
            SVG_PLOT_HI - 50.0,
            SVG_PLOT_LO + 20.0 + 16.0 * dd.dim as f64,
            color,
            dd.dim
        );
    }
    out.push_str("</svg>\n");
    out
}
