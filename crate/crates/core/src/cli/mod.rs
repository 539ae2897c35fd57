//! Command front end: loading, dispatch, reports and output files.
//!
//! Every `cmd_*` function is usable from Rust; the `layercloud` binary only parses
//! arguments and maps errors to exit codes with [`exit_code`].

pub mod generate;
pub mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::io::{common_denominator, format_rational, representation_from_json, representation_to_json, Instance};
use crate::model::{check_epsilon, contact_report, require_valid, validate_graph, LayeredGraph, Representation, Violation};
use crate::oracle::{self, GridSearchConfig};
use crate::{exact, flow, twolayer, Q};

pub use generate::{effective_seed, gen_random_instance, SEED_ENV};
pub use render::render_svg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    AreaMin,
    BboxMin,
    MaxContacts,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::AreaMin => "area-min",
            Mode::BboxMin => "bbox-min",
            Mode::MaxContacts => "max-contacts",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    MinCostFlow,
    BoxSearch,
    TwoLayerSweep,
    BranchAndBound,
    GridOracle,
    SubsetOracle,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::MinCostFlow => "min-cost-flow",
            SolverKind::BoxSearch => "box-search",
            SolverKind::TwoLayerSweep => "two-layer-sweep",
            SolverKind::BranchAndBound => "branch-and-bound",
            SolverKind::GridOracle => "grid-oracle",
            SolverKind::SubsetOracle => "subset-oracle",
        })
    }
}

fn ser_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub layers: usize,
    pub layer_sizes: Vec<usize>,
    pub edges: usize,
    #[serde(serialize_with = "ser_q")]
    pub epsilon: Q,
    /// Width of the widest layer.
    #[serde(serialize_with = "ser_q")]
    pub max_layer_width: Q,
    /// Widest rectangle times the longest layer.
    #[serde(serialize_with = "ser_q")]
    pub box_bound: Q,
}

impl InstanceSummary {
    pub fn of(inst: &Instance) -> Self {
        let g = &inst.graph;
        InstanceSummary {
            layers: g.num_layers(),
            layer_sizes: (0..g.num_layers()).map(|i| g.layer_len(i)).collect(),
            edges: g.edges().len(),
            epsilon: inst.epsilon,
            max_layer_width: g.max_layer_width(),
            box_bound: g.max_width() * Q::from_integer(g.max_layer_len() as i64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    Gap {
        #[serde(serialize_with = "ser_q")]
        gap_total: Q,
        #[serde(serialize_with = "ser_q")]
        bbox_width: Q,
    },
    Contacts {
        realized: usize,
        lost: usize,
    },
}

impl Objective {
    /// Recomputes the objective of `mode` from scratch. Invalid layouts are an
    /// internal error since no solver may emit one.
    pub fn measure(mode: Mode, g: &LayeredGraph, r: &Representation) -> Result<Self> {
        let report = contact_report(g, r)?;
        if !report.is_valid() {
            return Err(Error::Internal(format!("emitted layout has false adjacencies {:?}", report.false_adjacencies)));
        }
        Ok(match mode {
            Mode::AreaMin | Mode::BboxMin => Objective::Gap { gap_total: report.gap_total, bbox_width: report.bbox_width },
            Mode::MaxContacts => Objective::Contacts { realized: report.realized.len(), lost: report.lost.len() },
        })
    }

    /// The number an oracle would compare: gap total, or realized contacts.
    fn key(&self, mode: Mode) -> Q {
        match (self, mode) {
            (Objective::Gap { bbox_width, .. }, Mode::BboxMin) => *bbox_width,
            (Objective::Gap { gap_total, .. }, _) => *gap_total,
            (Objective::Contacts { realized, .. }, _) => Q::from_integer(*realized as i64),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Gap { gap_total, bbox_width } => {
                write!(f, "gap_total {} bbox_width {}", format_rational(gap_total), format_rational(bbox_width))
            }
            Objective::Contacts { realized, lost } => {
                write!(f, "realized {realized}/{} lost {lost}", realized + lost)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub solver: SolverKind,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

/// Outcome of one solve. `objective` is always recomputed from the emitted layout.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub instance: InstanceSummary,
    pub mode: Mode,
    pub solver: SolverKind,
    pub objective: Objective,
    /// Solver specific counters (flow solves, search nodes, sweep operations).
    pub counters: BTreeMap<&'static str, u64>,
    pub oracle: Option<OracleCheck>,
    #[serde(serialize_with = "ser_duration")]
    pub elapsed: Duration,
}

fn ser_duration<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.instance;
        writeln!(
            f,
            "instance: L={} sizes={:?} edges={} eps={} W_max={} w_max*K={}",
            s.layers,
            s.layer_sizes,
            s.edges,
            format_rational(&s.epsilon),
            format_rational(&s.max_layer_width),
            format_rational(&s.box_bound)
        )?;
        writeln!(f, "{} via {}: {}", self.mode, self.solver, self.objective)?;
        for (k, v) in &self.counters {
            writeln!(f, "  {k}: {v}")?;
        }
        if let Some(o) = &self.oracle {
            writeln!(f, "oracle ({}) agrees: {}", o.solver, format_rational(&o.value))?;
        }
        write!(f, "time: {:.3} ms", self.elapsed.as_secs_f64() * 1e3)
    }
}

/// A solved instance.
#[derive(Clone, Debug)]
pub struct Solved {
    pub report: RunReport,
    pub representation: Representation,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Use the branch and bound solver for max-contacts even on two layers.
    pub exact: bool,
    pub emit_lp: Option<PathBuf>,
    pub oracle_check: bool,
    pub svg: Option<PathBuf>,
    pub json: Option<PathBuf>,
    /// Plain-text arc list of the flow network (area-min and bbox-min).
    pub dump_network: Option<PathBuf>,
}

/// Maps an error to the process exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::Infeasible(_) => 2,
        Error::OracleMismatch(_) => 3,
        _ => 1,
    }
}

fn finish(
    inst: &Instance,
    mode: Mode,
    solver: SolverKind,
    representation: Representation,
    claimed: Q,
    counters: BTreeMap<&'static str, u64>,
    started: Instant,
) -> Result<Solved> {
    let objective = Objective::measure(mode, &inst.graph, &representation)?;
    if objective.key(mode) != claimed {
        return Err(Error::Internal(format!(
            "{solver} claimed {} but the layout measures {objective}",
            format_rational(&claimed)
        )));
    }
    let report = RunReport {
        instance: InstanceSummary::of(inst),
        mode,
        solver,
        objective,
        counters,
        oracle: None,
        elapsed: started.elapsed(),
    };
    Ok(Solved { report, representation })
}

/// Runs the solver for `mode`: flows for area-min and bbox-min; for max-contacts
/// the two-layer sweep when L = 2 and not `exact`, else branch and bound.
pub fn solve_instance(inst: &Instance, mode: Mode, exact: bool) -> Result<Solved> {
    require_valid(&inst.graph)?;
    let (g, eps) = (&inst.graph, inst.epsilon);
    let started = Instant::now();
    let mut counters = BTreeMap::new();
    match mode {
        Mode::AreaMin => {
            let out = flow::minimize_area(g, eps)?;
            finish(inst, mode, SolverKind::MinCostFlow, out.representation, out.gap_total, counters, started)
        }
        Mode::BboxMin => {
            let out = flow::minimize_bounding_box(g, eps)?;
            counters.insert("flow_solves", out.solves as u64);
            let measured = contact_report(g, &out.representation)?.bbox_width;
            if measured != out.width {
                return Err(Error::Internal(format!(
                    "strip width {} but layout spans {}",
                    format_rational(&out.width),
                    format_rational(&measured)
                )));
            }
            finish(inst, mode, SolverKind::BoxSearch, out.representation, out.width, counters, started)
        }
        Mode::MaxContacts if g.num_layers() == 2 && !exact => {
            let out = twolayer::sweep(g, eps)?;
            counters.insert("sweep_ops", out.stats.ops);
            counters.insert("max_pieces", out.stats.max_pieces as u64);
            let claimed = Q::from_integer(out.realized as i64);
            finish(inst, mode, SolverKind::TwoLayerSweep, out.representation, claimed, counters, started)
        }
        Mode::MaxContacts => {
            let out = exact::maximize_contacts(g, eps)?;
            counters.insert("search_nodes", out.nodes as u64);
            let claimed = Q::from_integer(out.realized_count() as i64);
            finish(inst, mode, SolverKind::BranchAndBound, out.representation, claimed, counters, started)
        }
    }
}

/// Integer copy of the instance for the oracles and the factor it was scaled by.
fn integral(inst: &Instance) -> Result<(LayeredGraph, i64, i64)> {
    let g = &inst.graph;
    let s = common_denominator(g.widths().iter().flatten().chain(std::iter::once(&inst.epsilon)));
    let k = Q::from_integer(s);
    let widths = g.widths().iter().map(|row| row.iter().map(|w| w * k).collect()).collect();
    let scaled = LayeredGraph::new(widths, g.up_intervals().to_vec())?;
    Ok((scaled, (inst.epsilon * k).to_integer(), s))
}

/// Solves with an oracle. `subset` picks the realized-subset oracle instead of
/// grid enumeration. Rational instances are scaled to integers first.
pub fn solve_with_oracle(inst: &Instance, mode: Mode, subset: bool) -> Result<Solved> {
    require_valid(&inst.graph)?;
    let started = Instant::now();
    let (g, eps, s) = integral(inst)?;
    let cfg = GridSearchConfig::with_epsilon(eps);
    let solver = if subset { SolverKind::SubsetOracle } else { SolverKind::GridOracle };
    let (value, rep) = match mode {
        Mode::AreaMin => {
            let (gap, rep) = if subset { oracle::subset_min_gap(&g, &cfg)? } else { oracle::brute_force_min_gap(&g, &cfg)? };
            (Q::new(gap, s), rep)
        }
        Mode::MaxContacts => {
            let (n, rep) =
                if subset { oracle::subset_max_contacts(&g, &cfg)? } else { oracle::brute_force_max_contacts(&g, &cfg)? };
            (Q::from_integer(n as i64), rep)
        }
        Mode::BboxMin => {
            let (b, rep) = if subset { oracle::subset_min_bbox(&g, &cfg)? } else { oracle::brute_force_min_bbox(&g, &cfg)? };
            (Q::new(b, s), rep)
        }
    };
    let k = Q::new(1, s);
    let rows = rep.rows().iter().map(|row| row.iter().map(|x| x * k).collect()).collect();
    let representation = Representation::new(inst.epsilon, rows).normalized();
    finish(inst, mode, solver, representation, value, BTreeMap::new(), started)
}

fn attach_oracle(solved: &mut Solved, inst: &Instance, mode: Mode, subset: bool) -> Result<()> {
    let other = solve_with_oracle(inst, mode, subset)?;
    let (mine, theirs) = (solved.report.objective.key(mode), other.report.objective.key(mode));
    if mine != theirs {
        return Err(Error::OracleMismatch(format!(
            "{} found {} but {} found {}",
            solved.report.solver,
            format_rational(&mine),
            other.report.solver,
            format_rational(&theirs)
        )));
    }
    solved.report.oracle = Some(OracleCheck { solver: other.report.solver, value: theirs });
    Ok(())
}

fn write_outputs(inst: &Instance, solved: &Solved, opts: &SolveOptions) -> Result<()> {
    if let Some(path) = &opts.json {
        std::fs::write(path, representation_to_json(&solved.representation) + "\n")?;
    }
    if let Some(path) = &opts.svg {
        std::fs::write(path, render_svg(&inst.graph, &solved.representation)?)?;
    }
    Ok(())
}

fn check_mode_flags(mode: Mode, opts: &SolveOptions) -> Result<()> {
    if mode != Mode::MaxContacts && (opts.exact || opts.emit_lp.is_some()) {
        return Err(Error::Unsupported(format!("--exact and --emit-lp only apply to max-contacts, not {mode}")));
    }
    if mode == Mode::MaxContacts && opts.dump_network.is_some() {
        return Err(Error::Unsupported("max-contacts has no flow network to dump".into()));
    }
    Ok(())
}

/// Loads an instance, solves it and writes the requested files.
pub fn cmd_solve(path: &Path, mode: Mode, opts: &SolveOptions) -> Result<Solved> {
    check_mode_flags(mode, opts)?;
    let inst = Instance::load(path)?;
    require_valid(&inst.graph)?;
    if let Some(lp) = &opts.emit_lp {
        std::fs::write(lp, exact::export_lp(&exact::build_model(&inst.graph, inst.epsilon)?))?;
    }
    if let Some(dump) = &opts.dump_network {
        std::fs::write(dump, flow::build_network(&inst.graph)?.dump_arcs())?;
    }
    let mut solved = solve_instance(&inst, mode, opts.exact)?;
    if opts.oracle_check {
        attach_oracle(&mut solved, &inst, mode, false)?;
    }
    write_outputs(&inst, &solved, opts)?;
    Ok(solved)
}

/// Oracle counterpart of [`cmd_solve`]; `--oracle-check` compares against the
/// second oracle.
pub fn cmd_oracle(path: &Path, mode: Mode, opts: &SolveOptions) -> Result<Solved> {
    check_mode_flags(mode, opts)?;
    if opts.exact || opts.emit_lp.is_some() || opts.dump_network.is_some() {
        return Err(Error::Unsupported("the oracle takes only --oracle-check, --json and --svg".into()));
    }
    let inst = Instance::load(path)?;
    let mut solved = solve_with_oracle(&inst, mode, false)?;
    if opts.oracle_check {
        attach_oracle(&mut solved, &inst, mode, true)?;
    }
    write_outputs(&inst, &solved, opts)?;
    Ok(solved)
}

/// Structural violations of the instance at `path`; empty means valid.
pub fn cmd_validate(path: &Path) -> Result<Vec<Violation>> {
    let inst = Instance::load(path)?;
    let v = validate_graph(&inst.graph);
    if v.is_empty() {
        check_epsilon(&inst.graph, inst.epsilon)?;
    }
    Ok(v)
}

/// Renders a stored representation of the instance at `instance` to SVG.
pub fn cmd_render(instance: &Path, representation: &Path) -> Result<String> {
    let inst = Instance::load(instance)?;
    require_valid(&inst.graph)?;
    let src = std::fs::read_to_string(representation)?;
    let r = representation_from_json(&src)?;
    render_svg(&inst.graph, &r)
}

/// Parameters of `gen`. `sizes` empty means random sizes up to `max_total`.
#[derive(Clone, Debug)]
pub struct GenOptions {
    pub layers: usize,
    pub sizes: Vec<usize>,
    pub max_total: usize,
    pub widths: (i64, i64),
    pub epsilon: Q,
    pub seed: u64,
}

/// Generates an instance; the seed may be overridden by the environment.
pub fn cmd_gen(opts: &GenOptions) -> Result<Instance> {
    use rand::SeedableRng;
    let seed = effective_seed(opts.seed);
    let sizes = if opts.sizes.is_empty() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        generate::random_sizes(opts.layers, opts.max_total, &mut rng)
    } else {
        opts.sizes.clone()
    };
    let g = gen_random_instance(opts.layers, &sizes, opts.widths, seed)?;
    Ok(Instance::new(g, opts.epsilon))
}
