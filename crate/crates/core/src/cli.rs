//! Command-line front end. `run` is pure (argv in, report and exit code
//! out) so the command surface is testable without spawning processes.
//!
//! Exit codes: 0 success, 1 a queried property is false (or a required
//! precondition fails), 2 input error, 3 internal cross-check failure.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::builders::{build_hexagonal, build_square, hanany_vegh_parallelogram, QuotientLattice};
use crate::export;
use crate::graph::DimerModel;
use crate::lattice::{cokernel, IntMatrix, LatticePolygon, Vec2};
use crate::matchings::{enumerate_pms, pm_polygon};
use crate::nccr::{classify, opposite_check, NccrError};
use crate::quiver::dualize;
use crate::toric::ToricData;
use crate::zigzag::{extract_zigzags, is_consistent, is_isoradial, is_properly_ordered};

#[derive(Debug)]
pub struct CommandResult {
    pub exit_code: i32,
    pub report: String,
    pub json: Option<Value>,
}

impl CommandResult {
    fn ok(report: String) -> Self {
        CommandResult {
            exit_code: 0,
            report,
            json: None,
        }
    }

    fn with_json(mut self, v: Value) -> Self {
        self.json = Some(v);
        self
    }

    fn property_false(report: String) -> Self {
        CommandResult {
            exit_code: 1,
            report,
            json: None,
        }
    }

    fn input_error(msg: String) -> Self {
        CommandResult {
            exit_code: 2,
            report: msg,
            json: None,
        }
    }

    fn cross_check_failure(msg: String) -> Self {
        CommandResult {
            exit_code: 3,
            report: msg,
            json: None,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dimer-nccr",
    about = "Dimer models on the torus: consistency, matching polygons, class groups, NCCR classification"
)]
struct Cli {
    /// Emit a machine-readable JSON payload instead of the plain report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a dimer model file and print its shape.
    Validate { model: String },
    /// Run consistency-tier predicates.
    Check(CheckArgs),
    /// List zigzag paths and slopes.
    Zigzags { model: String },
    /// Count perfect matchings; --list dumps them as edge-id sets.
    Pms {
        model: String,
        #[arg(long)]
        list: bool,
    },
    /// Print matching-polygon points with multiplicities and hull vertices.
    Polygon { model: String },
    /// Print the dual quiver and its potential; --dot for DOT output.
    Quiver {
        model: String,
        #[arg(long)]
        dot: bool,
    },
    /// Class group of a ray matrix or a lattice polygon.
    Clgroup(ClgroupArgs),
    /// Classify the tilting module of a consistent model.
    Classify {
        model: String,
        /// Base vertex (default 0; the verdict is base-independent).
        #[arg(long, default_value_t = 0)]
        vertex: usize,
    },
    /// Generate models: regular quotients or a parallelogram realization.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Export a model as json, dot or tikz; --quiver exports its dual.
    Export {
        model: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        quiver: bool,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    model: String,
    #[arg(long)]
    consistency: bool,
    #[arg(long)]
    properly_ordered: bool,
    #[arg(long)]
    isoradial: bool,
}

#[derive(Args, Debug)]
struct ClgroupArgs {
    /// Ray matrix, rows separated by ';' ("1 0 1; 0 1 1; ..."), or a path
    /// to a JSON file holding an array of integer rows.
    #[arg(long)]
    matrix: Option<String>,
    /// Polygon vertices "x,y x,y ..." whose height-one cone is used.
    #[arg(long)]
    polygon: Option<String>,
    /// Vectors to project into the class group, rows separated by ';'.
    #[arg(long)]
    project: Option<String>,
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// Honeycomb quotient by the lattice spanned by (a,b),(c,d).
    Hex {
        #[arg(long)]
        lattice: String,
    },
    /// Square-grid quotient; the lattice must preserve the 2-coloring.
    Square {
        #[arg(long)]
        lattice: String,
    },
    /// Square model realizing a parallelogram toric diagram.
    Hv {
        #[arg(long)]
        polygon: String,
    },
}

pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            return CommandResult {
                exit_code: code,
                report: e.to_string(),
                json: None,
            };
        }
    };
    let want_json = cli.json;
    let mut result = dispatch(cli.command);
    if !want_json {
        result.json = None;
    }
    result
}

fn load_model(path: &str) -> Result<DimerModel, CommandResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandResult::input_error(format!("{path}: {e}")))?;
    DimerModel::from_json(&text)
        .map_err(|e| CommandResult::input_error(format!("{path}: {e}")))
}

fn dispatch(cmd: Command) -> CommandResult {
    match cmd {
        Command::Validate { model } => match load_model(&model) {
            Ok(m) => {
                let report = format!(
                    "valid dimer model: {} nodes, {} edges, {} faces (Euler characteristic 0)",
                    m.node_count(),
                    m.edge_count(),
                    m.face_count()
                );
                let payload = json!({
                    "valid": true,
                    "nodes": m.node_count(),
                    "edges": m.edge_count(),
                    "faces": m.face_count(),
                    "bivalent_nodes": m.bivalent_nodes().len(),
                });
                CommandResult::ok(report).with_json(payload)
            }
            Err(e) => e,
        },
        Command::Check(args) => {
            let m = match load_model(&args.model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let all = !(args.consistency || args.properly_ordered || args.isoradial);
            let mut lines = Vec::new();
            let mut payload = serde_json::Map::new();
            let mut any_false = false;
            if all || args.consistency {
                let r = is_consistent(&m);
                lines.push(format!("consistent: {}", r.holds));
                if let Some(v) = &r.violation {
                    lines.push(format!("  first violation: {v}"));
                }
                payload.insert("consistent".into(), json!(r.holds));
                any_false |= !r.holds;
            }
            if all || args.properly_ordered {
                let r = is_properly_ordered(&m);
                lines.push(format!("properly ordered: {}", r.holds));
                if let Some(v) = &r.violation {
                    lines.push(format!("  first violation: {v}"));
                }
                payload.insert("properly_ordered".into(), json!(r.holds));
                any_false |= !r.holds;
            }
            if all || args.isoradial {
                let r = is_isoradial(&m);
                lines.push(format!("isoradial: {}", r.holds));
                if let Some(v) = &r.violation {
                    lines.push(format!("  first violation: {v}"));
                }
                payload.insert("isoradial".into(), json!(r.holds));
                any_false |= !r.holds;
            }
            let report = lines.join("\n");
            let mut res = if any_false {
                CommandResult::property_false(report)
            } else {
                CommandResult::ok(report)
            };
            res.json = Some(Value::Object(payload));
            res
        }
        Command::Zigzags { model } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let zz = extract_zigzags(&m);
            let mut lines = vec![format!("{} zigzag paths", zz.len())];
            let mut items = Vec::new();
            for (i, z) in zz.iter().enumerate() {
                lines.push(format!(
                    "  path {i}: slope {} length {} edges {:?}",
                    z.slope,
                    z.len(),
                    z.edge_ids(&m)
                ));
                items.push(json!({
                    "slope": [z.slope.x, z.slope.y],
                    "edges": z.edge_ids(&m),
                }));
            }
            CommandResult::ok(lines.join("\n")).with_json(json!({ "zigzags": items }))
        }
        Command::Pms { model, list } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let pms = enumerate_pms(&m);
            let sets: Vec<Vec<&str>> = pms.iter().map(|p| p.edge_ids(&m)).collect();
            let payload = json!({ "count": pms.len(), "matchings": sets });
            let report = if list {
                serde_json::to_string_pretty(&sets).unwrap()
            } else {
                format!("{} perfect matchings", pms.len())
            };
            CommandResult::ok(report).with_json(payload)
        }
        Command::Polygon { model } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let poly = match pm_polygon(&m, None) {
                Ok(p) => p,
                Err(e) => return CommandResult::property_false(e.to_string()),
            };
            let mut lines = vec!["matching polygon points (class: multiplicity):".into()];
            for (p, ms) in &poly.points {
                lines.push(format!("  {}: {}", p, ms.len()));
            }
            lines.push(format!(
                "hull vertices (counterclockwise): {}",
                poly.hull
                    .vertices()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            let payload = json!({
                "points": poly
                    .points
                    .iter()
                    .map(|(p, ms)| json!({ "class": [p.x, p.y], "multiplicity": ms.len() }))
                    .collect::<Vec<_>>(),
                "hull": poly
                    .hull
                    .vertices()
                    .iter()
                    .map(|v| [v.x, v.y])
                    .collect::<Vec<_>>(),
            });
            CommandResult::ok(lines.join("\n")).with_json(payload)
        }
        Command::Quiver { model, dot } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            if m.has_bivalent_nodes() {
                return CommandResult::input_error(
                    "model has bivalent nodes; remove them before dualizing".into(),
                );
            }
            let (q, w) = dualize(&m);
            if dot {
                return CommandResult::ok(export::quiver_to_dot(&q));
            }
            let mut lines = vec![
                format!("vertices: {}", q.vertex_count),
                format!("arrows: {}", q.arrow_count()),
            ];
            for a in &q.arrows {
                lines.push(format!(
                    "  a{}: f{} -> f{} (dual edge {}, offset {})",
                    a.id,
                    a.tail,
                    a.head,
                    m.edges()[a.dual_edge.0].id,
                    a.offset
                ));
            }
            lines.push("potential (plus cycles minus minus cycles):".into());
            for c in &w.plus_cycles {
                lines.push(format!(
                    "  + {}",
                    c.iter().map(|a| format!("a{a}")).collect::<Vec<_>>().join(" ")
                ));
            }
            for c in &w.minus_cycles {
                lines.push(format!(
                    "  - {}",
                    c.iter().map(|a| format!("a{a}")).collect::<Vec<_>>().join(" ")
                ));
            }
            let payload = json!({
                "vertices": q.vertex_count,
                "arrows": q
                    .arrows
                    .iter()
                    .map(|a| json!({
                        "tail": a.tail,
                        "head": a.head,
                        "dual_edge": m.edges()[a.dual_edge.0].id,
                        "offset": [a.offset.x, a.offset.y],
                    }))
                    .collect::<Vec<_>>(),
            });
            CommandResult::ok(lines.join("\n")).with_json(payload)
        }
        Command::Clgroup(args) => run_clgroup(args),
        Command::Classify { model, vertex } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let c = match classify(&m) {
                Ok(c) => c,
                Err(NccrError::InconsistentModel(v)) => {
                    return CommandResult::property_false(format!("model is not consistent: {v}"))
                }
                Err(NccrError::Matching(e)) => {
                    return CommandResult::property_false(e.to_string())
                }
                Err(NccrError::CrossCheckFailure(v)) => {
                    return CommandResult::cross_check_failure(v)
                }
            };
            if vertex >= c.base_list.classes.len() {
                return CommandResult::input_error(format!(
                    "vertex {vertex} out of range (quiver has {} vertices)",
                    c.base_list.classes.len()
                ));
            }
            let ctx = crate::nccr::NccrContext::new(&m).expect("already classified");
            let ml = ctx.tilting_at(vertex);
            let opp = match opposite_check(&m, vertex) {
                Ok(b) => b,
                Err(e) => return CommandResult::cross_check_failure(e.to_string()),
            };
            let mut lines = vec![
                format!("verdict: {}", c.verdict),
                format!("class group: {}", ml.td.class_group_name()),
                format!(
                    "flags: generator={} basic={} splitting={} steady={} semi-steady={}",
                    c.generator, c.basic, c.splitting, c.steady, c.semi_steady
                ),
            ];
            lines.push(format!("classes at base vertex {vertex}:"));
            for (j, cl) in ml.classes.iter().enumerate() {
                lines.push(format!(
                    "  T[{vertex},{j}] label {:?} -> class (torsion {:?}, free {:?})",
                    cl.repr, cl.coords.torsion, cl.coords.free
                ));
            }
            if c.semi_steady && !c.steady {
                lines.push(format!(
                    "partition: I = {:?}, I* = {:?}",
                    c.plain, c.dual
                ));
            }
            lines.push(format!("opposite-quiver duality check: {opp}"));
            for chk in &c.cross_checks {
                lines.push(format!("cross-check: {chk}"));
            }
            let payload = json!({
                "verdict": c.verdict.to_string(),
                "class_group": ml.td.class_group_name(),
                "steady": c.steady,
                "semi_steady": c.semi_steady,
                "basic": c.basic,
                "partition_plain": c.plain,
                "partition_dual": c.dual,
                "opposite_check": opp,
                "classes": ml
                    .classes
                    .iter()
                    .map(|cl| json!({
                        "label": cl.repr,
                        "torsion": cl.coords.torsion,
                        "free": cl.coords.free,
                    }))
                    .collect::<Vec<_>>(),
            });
            CommandResult::ok(lines.join("\n")).with_json(payload)
        }
        Command::Build(b) => run_build(b),
        Command::Export {
            model,
            format,
            quiver,
        } => {
            let m = match load_model(&model) {
                Ok(m) => m,
                Err(e) => return e,
            };
            let out = match (format.as_str(), quiver) {
                ("json", false) => export::model_to_json(&m),
                ("dot", false) => export::model_to_dot(&m),
                ("tikz", false) => export::model_to_tikz(&m),
                ("dot", true) => {
                    if m.has_bivalent_nodes() {
                        return CommandResult::input_error(
                            "model has bivalent nodes; remove them before dualizing".into(),
                        );
                    }
                    export::quiver_to_dot(&dualize(&m).0)
                }
                (f, true) => {
                    return CommandResult::input_error(format!(
                        "--quiver supports only dot output, got {f}"
                    ))
                }
                (f, _) => {
                    return CommandResult::input_error(format!(
                        "unknown format {f} (expected json, dot or tikz)"
                    ))
                }
            };
            CommandResult::ok(out)
        }
    }
}

fn run_clgroup(args: ClgroupArgs) -> CommandResult {
    let matrix: IntMatrix = match (&args.matrix, &args.polygon) {
        (Some(spec), None) => match parse_matrix_spec(spec) {
            Ok(m) => m,
            Err(e) => return CommandResult::input_error(e),
        },
        (None, Some(spec)) => match parse_polygon_spec(spec) {
            Ok(p) => ToricData::from_polygon(p).lambda,
            Err(e) => return CommandResult::input_error(e),
        },
        _ => {
            return CommandResult::input_error(
                "provide exactly one of --matrix or --polygon".into(),
            )
        }
    };
    let group = cokernel(&matrix);
    let name = {
        let mut parts: Vec<String> = (0..group.free_rank).map(|_| "Z".to_string()).collect();
        parts.extend(group.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" x ")
        }
    };
    let mut lines = vec![
        format!("class group: {name}"),
        format!(
            "free rank {} torsion {:?}",
            group.free_rank, group.torsion
        ),
    ];
    let mut projections = Vec::new();
    if let Some(p) = &args.project {
        for row in p.split(';') {
            let u: Result<Vec<i64>, _> =
                row.split_whitespace().map(|t| t.parse::<i64>()).collect();
            let Ok(u) = u else {
                return CommandResult::input_error(format!("bad vector: {row}"));
            };
            if u.len() != group.ambient_rank() {
                return CommandResult::input_error(format!(
                    "vector length {} != {}",
                    u.len(),
                    group.ambient_rank()
                ));
            }
            let e = group.project(&u);
            lines.push(format!(
                "  {:?} -> torsion {:?} free {:?}",
                u, e.torsion, e.free
            ));
            projections.push(json!({ "u": u, "torsion": e.torsion, "free": e.free }));
        }
    }
    let payload = json!({
        "class_group": name,
        "free_rank": group.free_rank,
        "torsion": group.torsion,
        "projections": projections,
    });
    CommandResult::ok(lines.join("\n")).with_json(payload)
}

fn run_build(cmd: BuildCommand) -> CommandResult {
    let model = match cmd {
        BuildCommand::Hex { lattice } => parse_lattice_spec(&lattice)
            .and_then(|l| build_hexagonal(l).map_err(|e| e.to_string())),
        BuildCommand::Square { lattice } => parse_lattice_spec(&lattice)
            .and_then(|l| build_square(l).map_err(|e| e.to_string())),
        BuildCommand::Hv { polygon } => parse_polygon_spec(&polygon)
            .and_then(|p| hanany_vegh_parallelogram(&p).map_err(|e| e.to_string())),
    };
    match model {
        Ok(m) => CommandResult::ok(export::model_to_json(&m)),
        Err(e) => CommandResult::input_error(e),
    }
}

fn parse_lattice_spec(spec: &str) -> Result<QuotientLattice, String> {
    let nums: Result<Vec<i64>, _> = spec.split_whitespace().map(|t| t.parse()).collect();
    let nums = nums.map_err(|_| format!("bad lattice spec: {spec}"))?;
    if nums.len() != 4 {
        return Err(format!("lattice spec needs 4 integers \"a b c d\", got {spec}"));
    }
    QuotientLattice::new(Vec2::new(nums[0], nums[1]), Vec2::new(nums[2], nums[3]))
        .map_err(|e| e.to_string())
}

fn parse_polygon_spec(spec: &str) -> Result<LatticePolygon, String> {
    let mut pts = Vec::new();
    for tok in spec.split_whitespace() {
        let (x, y) = tok
            .split_once(',')
            .ok_or_else(|| format!("bad point: {tok}"))?;
        let x: i64 = x.trim().parse().map_err(|_| format!("bad point: {tok}"))?;
        let y: i64 = y.trim().parse().map_err(|_| format!("bad point: {tok}"))?;
        pts.push(Vec2::new(x, y));
    }
    LatticePolygon::from_vertex_cycle(pts).map_err(|e| e.to_string())
}

fn parse_matrix_spec(spec: &str) -> Result<IntMatrix, String> {
    // Either inline rows separated by ';', or a JSON file of integer rows.
    let text = if spec.contains(';') || spec.trim().parse::<i64>().is_ok() || spec.contains(' ') {
        None
    } else {
        std::fs::read_to_string(spec).ok()
    };
    let rows: Vec<Vec<i64>> = match text {
        Some(json_text) => serde_json::from_str(&json_text)
            .map_err(|e| format!("bad matrix JSON in {spec}: {e}"))?,
        None => {
            let mut rows = Vec::new();
            for row in spec.split(';') {
                let r: Result<Vec<i64>, _> =
                    row.split_whitespace().map(|t| t.parse()).collect();
                rows.push(r.map_err(|_| format!("bad matrix row: {row}"))?);
            }
            rows
        }
    };
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows must be nonempty and of equal length".into());
    }
    Ok(IntMatrix::from_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_path(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn run_cli(args: &[&str]) -> CommandResult {
        let mut argv = vec!["dimer-nccr"];
        argv.extend(args);
        run(argv)
    }

    #[test]
    fn validate_fixture() {
        let r = run_cli(&["validate", &fixture_path("square2x2.json")]);
        assert_eq!(r.exit_code, 0);
        assert!(r.report.contains("4 nodes"));
    }

    #[test]
    fn validate_garbage_exits_2() {
        let r = run_cli(&["validate", "/nonexistent/garbage.json"]);
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn check_isoradial_square() {
        let r = run_cli(&["check", "--isoradial", &fixture_path("square2x2.json")]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.report, "isoradial: true");
    }

    #[test]
    fn check_all_predicates_reports_three_lines() {
        let r = run_cli(&["check", &fixture_path("hex1.json")]);
        assert_eq!(r.exit_code, 0);
        assert!(r.report.contains("consistent: true"));
        assert!(r.report.contains("properly ordered: true"));
        assert!(r.report.contains("isoradial: true"));
    }

    #[test]
    fn check_failing_predicate_exits_1() {
        let r = run_cli(&["check", "--isoradial", &fixture_path("ex52_nonregular.json")]);
        assert_eq!(r.exit_code, 1);
        assert!(r.report.contains("isoradial: false"));
    }

    #[test]
    fn classify_square_reports_verdict() {
        let r = run_cli(&["classify", &fixture_path("square2x2.json")]);
        assert_eq!(r.exit_code, 0, "{}", r.report);
        assert!(r.report.contains("verdict: semi-steady (not steady)"));
        assert!(r.report.contains("class group: Z x Z/2"));
    }

    #[test]
    fn clgroup_inline_matrix() {
        let r = run_cli(&[
            "clgroup",
            "--matrix",
            "1 0 1; 0 1 1; -1 0 1; 0 -1 1",
        ]);
        assert_eq!(r.exit_code, 0);
        assert!(r.report.contains("Z x Z/2"));
    }

    #[test]
    fn clgroup_polygon_with_projection() {
        let r = run_cli(&[
            "clgroup",
            "--polygon",
            "0,1 -1,0 0,-1 1,-1",
            "--project",
            "1 0 0 0; 2 0 0 0",
        ]);
        assert_eq!(r.exit_code, 0);
        assert!(r.report.contains("class group: Z"));
    }

    #[test]
    fn build_square_pipes_into_validate() {
        let r = run_cli(&["build", "square", "--lattice", "2 0 0 2"]);
        assert_eq!(r.exit_code, 0);
        let m = DimerModel::from_json(&r.report).unwrap();
        assert_eq!(m.node_count(), 4);
    }

    #[test]
    fn build_rejects_bad_lattice() {
        let r = run_cli(&["build", "square", "--lattice", "1 0 0 2"]);
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn export_round_trip() {
        let r = run_cli(&["export", &fixture_path("hex1.json"), "--format", "json"]);
        assert_eq!(r.exit_code, 0);
        let m = DimerModel::from_json(&r.report).unwrap();
        assert!(m.is_isomorphic_to(&crate::fixtures::hex1()));
    }

    #[test]
    fn deterministic_output() {
        let a = run_cli(&["classify", &fixture_path("square2x2.json")]);
        let b = run_cli(&["classify", &fixture_path("square2x2.json")]);
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn usage_error_exits_2() {
        let r = run_cli(&["frobnicate"]);
        assert_eq!(r.exit_code, 2);
    }
}
