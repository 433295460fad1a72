//! JSON, DOT and TikZ exporters. The JSON form round-trips exactly; the
//! drawings place nodes on a circle in one fundamental domain and are for
//! figures only.

use std::fmt::Write as _;

use crate::graph::{Color, DimerModel};
use crate::quiver::Quiver;

pub fn model_to_json(model: &DimerModel) -> String {
    let mut s = serde_json::to_string_pretty(&model.to_raw()).expect("serializable");
    s.push('\n');
    s
}

pub fn model_to_dot(model: &DimerModel) -> String {
    let mut out = String::from("graph dimer {\n");
    for n in model.nodes() {
        let (shape, fill) = match n.color {
            Color::White => ("circle", "white"),
            Color::Black => ("circle", "black"),
        };
        let fontcolor = match n.color {
            Color::White => "black",
            Color::Black => "white",
        };
        writeln!(
            out,
            "  \"{}\" [shape={shape}, style=filled, fillcolor={fill}, fontcolor={fontcolor}];",
            n.id
        )
        .unwrap();
    }
    for e in model.edges() {
        let w = &model.nodes()[e.white.0].id;
        let b = &model.nodes()[e.black.0].id;
        let label = if e.offset.is_zero() {
            e.id.to_string()
        } else {
            format!("{} {}", e.id, e.offset)
        };
        writeln!(out, "  \"{w}\" -- \"{b}\" [label=\"{label}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn quiver_to_dot(q: &Quiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in 0..q.vertex_count {
        writeln!(out, "  f{v};").unwrap();
    }
    for a in &q.arrows {
        let label = if a.offset.is_zero() {
            format!("a{}", a.id)
        } else {
            format!("a{} {}", a.id, a.offset)
        };
        writeln!(out, "  f{} -> f{} [label=\"{label}\"];", a.tail, a.head).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One fundamental domain with nodes on a circle; offsets annotate edges
/// that wrap. Lossy by design.
pub fn model_to_tikz(model: &DimerModel) -> String {
    let n = model.node_count() as f64;
    let mut out = String::from("\\begin{tikzpicture}\n");
    out.push_str("  \\draw[dashed] (0,0) rectangle (4,4);\n");
    let pos = |i: usize| -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * (i as f64) / n;
        (2.0 + 1.5 * t.cos(), 2.0 + 1.5 * t.sin())
    };
    for (i, node) in model.nodes().iter().enumerate() {
        let (x, y) = pos(i);
        let fill = match node.color {
            Color::White => "white",
            Color::Black => "black",
        };
        writeln!(
            out,
            "  \\node[circle, draw, fill={fill}, inner sep=2pt] ({}) at ({x:.3},{y:.3}) {{}};",
            node.id
        )
        .unwrap();
    }
    for e in model.edges() {
        let w = &model.nodes()[e.white.0].id;
        let b = &model.nodes()[e.black.0].id;
        if e.offset.is_zero() {
            writeln!(out, "  \\draw ({w}) -- ({b});").unwrap();
        } else {
            writeln!(
                out,
                "  \\draw[densely dotted] ({w}) -- node[font=\\tiny] {{{}}} ({b});",
                e.offset
            )
            .unwrap();
        }
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
