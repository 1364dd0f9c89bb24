//! `rht`: command-line front end for the rational homotopy workbench.
//!
//! Every subcommand loads a model or graph file, runs one library
//! capability, and emits either a human-readable report or stable JSON
//! (`--format structured`). Exit codes: 0 success, 1 usage or I/O error,
//! 2 invalid input (parse errors and violated model invariants).

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rht_core::catalog::{costoya_viruel_model, published_formal_dimension, Graph};
use rht_core::cdga::SullivanModel;
use rht_core::cohomology::cohomology;
use rht_core::dgl::{pair_check, whitehead_lie_table, FreeLieModel, PairCheckReport};
use rht_core::elliptic::{
    default_window, elliptic_report, formal_dimension, EllipticReport, Verdict,
};
use rht_core::selfequiv::{
    infiniteness_criteria, monomial_group, reduction_chain, self_closeness_bound,
    InfinitenessReport, MonomialReport, ReductionCertificate, SelfClosenessBound,
};
use rht_core::text;
use rht_core::whitehead::{whitehead_table, WhiteheadRow};
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "rht",
    version,
    about = "Exact symbolic workbench for Sullivan and Quillen models"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable tables.
    Text,
    /// Stable JSON: identical inputs give byte-identical output.
    Structured,
}

/// Inclusive integer range written `LO..HI`.
#[derive(Clone, Copy, Debug)]
struct ShiftRange {
    lo: i64,
    hi: i64,
}

impl FromStr for ShiftRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
        let lo: i64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad lower bound `{a}`"))?;
        let hi: i64 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad upper bound `{b}`"))?;
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(ShiftRange { lo, hi })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a model file and verify its structural invariants.
    Validate { file: PathBuf },
    /// Cohomology dimensions of a Sullivan model, degree by degree.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
    },
    /// Formal dimension, structural conditions, and vanishing-window evidence.
    Elliptic {
        file: PathBuf,
        /// Degrees above the formal dimension to inspect (default: top
        /// generator degree + 1).
        #[arg(long)]
        window: Option<u32>,
    },
    /// Per-degree boundary maps assembled into the exact sequence table.
    Whitehead {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
    },
    /// Monomial self-equivalence group and infiniteness criteria.
    Equiv { file: PathBuf },
    /// Certified degree-by-degree reduction to the formal-dimension truncation.
    Reduce { file: PathBuf },
    /// Upper bound for self-maps detecting self-equivalence.
    Bound { file: PathBuf },
    /// Homology of a free differential graded Lie algebra.
    DglHomology {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
    },
    /// Compare Sullivan truncation cohomology with Lie skeleton homology.
    PairCheck {
        sullivan: PathBuf,
        lie: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
        /// Truncation-level offsets to test, written LO..HI (inclusive).
        #[arg(long, default_value = "-1..0", allow_hyphen_values = true)]
        shift_range: ShiftRange,
    },
    /// Build the elliptic model attached to a graph and compare its monomial
    /// self-equivalence group with the graph automorphism count.
    RealizeGraph { file: PathBuf },
}

enum CliError {
    Io(PathBuf, std::io::Error),
    Usage(String),
    Model(rht_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) | CliError::Usage(_) => 1,
            CliError::Model(_) => 2,
        }
    }
}

impl From<rht_core::Error> for CliError {
    fn from(e: rht_core::Error) -> Self {
        CliError::Model(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Everything a subcommand emits: the invocation echo, a content digest of
/// the canonical form of the parsed inputs, warnings, and the result payload.
#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    fingerprint: String,
    diagnostics: Vec<String>,
    result: T,
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

/// Write to stdout, treating a closed pipe as a normal early exit instead of
/// a panic (`rht ... | head` must not crash).
fn write_out(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    if out.write_all(s.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn emit<T: Serialize>(format: Format, report: &Report<T>, text: String) {
    match format {
        Format::Structured => {
            let mut json = serde_json::to_string_pretty(report).expect("report serializes");
            json.push('\n');
            write_out(&json);
        }
        Format::Text => {
            write_out(&text);
            for d in &report.diagnostics {
                write_out(&format!("note: {d}\n"));
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_model(path: &Path) -> Result<text::ParsedModel, CliError> {
    Ok(text::parse_model(&read_file(path)?)?)
}

fn load_sullivan(path: &Path) -> Result<SullivanModel, CliError> {
    match load_model(path)? {
        text::ParsedModel::Sullivan(m) => Ok(m),
        text::ParsedModel::Lie(_) => Err(CliError::Usage(format!(
            "{} contains a Lie model; this command needs a Sullivan model",
            path.display()
        ))),
    }
}

fn load_lie(path: &Path) -> Result<FreeLieModel, CliError> {
    match load_model(path)? {
        text::ParsedModel::Lie(m) => Ok(m),
        text::ParsedModel::Sullivan(_) => Err(CliError::Usage(format!(
            "{} contains a Sullivan model; this command needs a Lie model",
            path.display()
        ))),
    }
}

/// Warnings attached to every report on a Sullivan model.
fn sullivan_diagnostics(m: &SullivanModel) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(p) = published_formal_dimension(m) {
        if let Ok(n) = formal_dimension(m) {
            if n != p {
                out.push(format!(
                    "this model was announced with formal dimension {p}, but the \
                     generator-degree formula gives {n}; reporting both"
                ));
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Validate { file } => cmd_validate(cli.format, &file),
        Cmd::Cohomology { file, max_degree } => cmd_cohomology(cli.format, &file, max_degree),
        Cmd::Elliptic { file, window } => cmd_elliptic(cli.format, &file, window),
        Cmd::Whitehead { file, max_degree } => cmd_whitehead(cli.format, &file, max_degree),
        Cmd::Equiv { file } => cmd_equiv(cli.format, &file),
        Cmd::Reduce { file } => cmd_reduce(cli.format, &file),
        Cmd::Bound { file } => cmd_bound(cli.format, &file),
        Cmd::DglHomology { file, max_degree } => cmd_dgl_homology(cli.format, &file, max_degree),
        Cmd::PairCheck {
            sullivan,
            lie,
            max_degree,
            shift_range,
        } => cmd_pair_check(cli.format, &sullivan, &lie, max_degree, shift_range),
        Cmd::RealizeGraph { file } => cmd_realize_graph(cli.format, &file),
    }
}

#[derive(Serialize)]
struct ValidatePayload {
    kind: &'static str,
    generators: usize,
    max_degree: u32,
    differential_square_zero: bool,
}

fn cmd_validate(format: Format, file: &Path) -> Result<(), CliError> {
    let parsed = load_model(file)?;
    let (payload, fingerprint, diagnostics) = match &parsed {
        text::ParsedModel::Sullivan(m) => (
            ValidatePayload {
                kind: "sullivan",
                generators: m.generator_count(),
                max_degree: m.max_generator_degree().unwrap_or(0),
                differential_square_zero: true,
            },
            text::sullivan_fingerprint(m),
            sullivan_diagnostics(m),
        ),
        text::ParsedModel::Lie(m) => (
            ValidatePayload {
                kind: "lie",
                generators: m.generator_count(),
                max_degree: m.max_generator_degree().unwrap_or(0),
                differential_square_zero: true,
            },
            text::lie_fingerprint(m),
            Vec::new(),
        ),
    };
    let text_out = format!(
        "d^2 = 0 verified, {} generators ({} model, top degree {})\n",
        payload.generators, payload.kind, payload.max_degree
    );
    let report = Report {
        command: command_echo(),
        fingerprint,
        diagnostics,
        result: payload,
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct DegreeRow {
    degree: u32,
    dim: usize,
}

#[derive(Serialize)]
struct CohomologyPayload {
    max_degree: u32,
    rows: Vec<DegreeRow>,
}

fn cmd_cohomology(format: Format, file: &Path, max_degree: u32) -> Result<(), CliError> {
    let m = load_sullivan(file)?;
    let rows: Vec<DegreeRow> = (0..=max_degree)
        .map(|k| DegreeRow {
            degree: k,
            dim: cohomology(&m, k).dim(),
        })
        .collect();
    let mut text_out = format!("cohomology dimensions through degree {max_degree}\n");
    text_out.push_str("  k   dim H^k\n");
    for r in &rows {
        text_out.push_str(&format!("  {:<3} {}\n", r.degree, r.dim));
    }
    let report = Report {
        command: command_echo(),
        fingerprint: text::sullivan_fingerprint(&m),
        diagnostics: sullivan_diagnostics(&m),
        result: CohomologyPayload { max_degree, rows },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct AnnouncedDimension {
    announced: i64,
    dim_h_announced: usize,
    formula: i64,
    dim_h_formula: Option<usize>,
}

#[derive(Serialize)]
struct EllipticPayload {
    window: u32,
    report: EllipticReport,
    announced: Option<AnnouncedDimension>,
}

fn cmd_elliptic(format: Format, file: &Path, window: Option<u32>) -> Result<(), CliError> {
    let m = load_sullivan(file)?;
    let window = window.unwrap_or_else(|| default_window(&m));
    let report = elliptic_report(&m, window)?;
    let mut diagnostics = sullivan_diagnostics(&m);

    // When an announced dimension disagrees with the formula, compute the
    // cohomology at both claimed top degrees so the report carries evidence.
    let announced = match published_formal_dimension(&m) {
        Some(p) if p != report.formal_dimension_formula => {
            let dim_p = if p >= 0 {
                cohomology(&m, p as u32).dim()
            } else {
                0
            };
            diagnostics.push(format!(
                "dim H^{} = {} at the announced dimension; dim H^{} = {} at the formula value",
                p,
                dim_p,
                report.formal_dimension_formula,
                report.top_dimension.unwrap_or(0)
            ));
            Some(AnnouncedDimension {
                announced: p,
                dim_h_announced: dim_p,
                formula: report.formal_dimension_formula,
                dim_h_formula: report.top_dimension,
            })
        }
        _ => None,
    };

    let mut text_out = format!(
        "formal dimension (degree formula): {}\n",
        report.formal_dimension_formula
    );
    for c in [
        &report.condition1,
        &report.condition3,
        &report.condition4,
        &report.corollary_even_gap,
    ] {
        match &c.witness {
            None => text_out.push_str(&format!("  [ok]   {}\n", c.name)),
            Some(w) => text_out.push_str(&format!("  [FAIL] {}: {w}\n", c.name)),
        }
    }
    if let Some(top) = report.top_dimension {
        text_out.push_str(&format!(
            "dim H^{} = {top}\n",
            report.formal_dimension_formula
        ));
    }
    text_out.push_str(&format!(
        "window of {} degrees above the formal dimension: {}\n",
        window,
        if report.window_violations.is_empty() {
            "all vanish".to_string()
        } else {
            format!("nonzero at {:?}", report.window_violations)
        }
    ));
    if let Some(a) = &announced {
        text_out.push_str(&format!(
            "announced dimension {}: dim H^{} = {}\n",
            a.announced, a.announced, a.dim_h_announced
        ));
    }
    text_out.push_str(&format!(
        "verdict: {}\n",
        match &report.verdict {
            Verdict::Consistent => "consistent with ellipticity".to_string(),
            Verdict::Inconsistent { violations } => format!("inconsistent: {}", violations.join("; ")),
        }
    ));
    let report = Report {
        command: command_echo(),
        fingerprint: text::sullivan_fingerprint(&m),
        diagnostics,
        result: EllipticPayload {
            window,
            report,
            announced,
        },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct SullivanWhiteheadPayload {
    max_degree: u32,
    rows: Vec<WhiteheadRow>,
    exact: bool,
}

fn cmd_whitehead(format: Format, file: &Path, max_degree: u32) -> Result<(), CliError> {
    match load_model(file)? {
        text::ParsedModel::Sullivan(m) => {
            let rows = whitehead_table(&m, max_degree)?;
            let mut text_out = format!(
                "exact sequence table through degree {max_degree} (all junctions verified)\n"
            );
            text_out.push_str("  k   dim V^k  rank b^k  dim H^{k+1}(trunc)  dim H^{k+1}  class\n");
            for r in &rows {
                text_out.push_str(&format!(
                    "  {:<3} {:<8} {:<9} {:<18} {:<11} {:?}\n",
                    r.k,
                    r.v_dim,
                    r.b_matrix.rank(),
                    r.h_trunc_dim,
                    r.h_full_dim,
                    r.classification()
                ));
            }
            let report = Report {
                command: command_echo(),
                fingerprint: text::sullivan_fingerprint(&m),
                diagnostics: sullivan_diagnostics(&m),
                result: SullivanWhiteheadPayload {
                    max_degree,
                    rows,
                    exact: true,
                },
            };
            emit(format, &report, text_out);
        }
        text::ParsedModel::Lie(m) => {
            let rows = whitehead_lie_table(&m, max_degree)?;
            let mut text_out = format!(
                "Lie exact sequence table through degree {max_degree} (all junctions verified)\n"
            );
            text_out.push_str("  q   dim W_q  rank b_q  dim H_{q-1}(skel)  dim H_{q-1}  class\n");
            for r in &rows {
                text_out.push_str(&format!(
                    "  {:<3} {:<8} {:<9} {:<17} {:<11} {:?}\n",
                    r.q,
                    r.w_dim,
                    r.b_matrix.rank(),
                    r.h_skeleton_dim,
                    r.h_full_dim,
                    r.classification()
                ));
            }
            #[derive(Serialize)]
            struct LieWhiteheadPayload {
                max_degree: u32,
                rows: Vec<rht_core::dgl::LieWhiteheadRow>,
                exact: bool,
            }
            let report = Report {
                command: command_echo(),
                fingerprint: text::lie_fingerprint(&m),
                diagnostics: Vec::new(),
                result: LieWhiteheadPayload {
                    max_degree,
                    rows,
                    exact: true,
                },
            };
            emit(format, &report, text_out);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EquivPayload {
    group: MonomialReport,
    criteria: InfinitenessReport,
}

fn render_group_text(group: &MonomialReport, criteria: &InfinitenessReport) -> String {
    let mut out = format!("monomial self-equivalence group: {}\n", group.description);
    out.push_str(&format!(
        "base variables (zero differential): {}\n",
        group.base_variables.join(", ")
    ));
    let inadmissible = group
        .branches
        .iter()
        .filter(|b| !b.admissible || !b.consistent)
        .count();
    out.push_str(&format!(
        "permutation branches: {} total, {} solvable, {} without solutions\n",
        group.branches.len(),
        group.solvable_branches,
        inadmissible
    ));
    for (i, b) in group.branches.iter().enumerate() {
        if !b.admissible || !b.consistent {
            continue;
        }
        out.push_str(&format!(
            "  branch {i}: permutation {:?}, free rank {}, sign choices {}, solutions {}\n",
            b.permutation,
            b.free_rank,
            b.torsion_2,
            match b.solution_count {
                None => "infinite".to_string(),
                Some(c) => c.to_string(),
            }
        ));
        for s in &b.scalars {
            let rendered: Vec<String> =
                s.iter().map(rht_core::exactla::q_to_string).collect();
            out.push_str(&format!("    scalars ({})\n", rendered.join(", ")));
        }
    }
    for c in &criteria.criteria {
        match (&c.fires, &c.witness) {
            (true, Some(w)) => out.push_str(&format!("criterion fires [{}]: {w}\n", c.name)),
            (true, None) => out.push_str(&format!("criterion fires [{}]\n", c.name)),
            (false, _) => out.push_str(&format!("criterion silent [{}]\n", c.name)),
        }
    }
    out
}

fn cmd_equiv(format: Format, file: &Path) -> Result<(), CliError> {
    let m = load_sullivan(file)?;
    let group = monomial_group(&m)?;
    let criteria = infiniteness_criteria(&m)?;
    let text_out = render_group_text(&group, &criteria);
    let report = Report {
        command: command_echo(),
        fingerprint: text::sullivan_fingerprint(&m),
        diagnostics: sullivan_diagnostics(&m),
        result: EquivPayload { group, criteria },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct ReducePayload {
    certificate: ReductionCertificate,
}

fn cmd_reduce(format: Format, file: &Path) -> Result<(), CliError> {
    let m = load_sullivan(file)?;
    let certificate = reduction_chain(&m)?;
    let mut text_out = format!(
        "reduction from top degree {} toward formal dimension {}\n",
        certificate.top_degree, certificate.formal_dimension
    );
    if certificate.steps.is_empty() {
        text_out.push_str("  no degrees above the formal dimension; nothing to reduce\n");
    } else {
        text_out.push_str("  q    dim V^q  rank b^q  dim H^{q+1}  kernel term  evidence\n");
        for s in &certificate.steps {
            text_out.push_str(&format!(
                "  {:<4} {:<8} {:<9} {:<11} {:<12} {:?}\n",
                s.q, s.v_dim, s.b_rank, s.h_dim, s.kernel_term, s.evidence
            ));
        }
    }
    text_out.push_str(&format!(
        "{}\n",
        if certificate.complete {
            format!(
                "complete: self-equivalences are detected on the truncation at degree {}",
                certificate.final_level
            )
        } else {
            format!("incomplete: no argument at degree {}", certificate.final_level)
        }
    ));
    let report = Report {
        command: command_echo(),
        fingerprint: text::sullivan_fingerprint(&m),
        diagnostics: sullivan_diagnostics(&m),
        result: ReducePayload { certificate },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct BoundPayload {
    bound: SelfClosenessBound,
}

fn cmd_bound(format: Format, file: &Path) -> Result<(), CliError> {
    let m = load_sullivan(file)?;
    let bound = self_closeness_bound(&m)?;
    let text_out = format!(
        "self-closeness bound: {} (formal dimension {})\n  {}\n",
        bound.bound, bound.formal_dimension, bound.certificate
    );
    let report = Report {
        command: command_echo(),
        fingerprint: text::sullivan_fingerprint(&m),
        diagnostics: sullivan_diagnostics(&m),
        result: BoundPayload { bound },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct LieDegreeRow {
    degree: u32,
    lie_dim: usize,
    cycle_dim: usize,
    boundary_dim: usize,
    homology_dim: usize,
}

#[derive(Serialize)]
struct DglPayload {
    max_degree: u32,
    rows: Vec<LieDegreeRow>,
}

fn cmd_dgl_homology(format: Format, file: &Path, max_degree: u32) -> Result<(), CliError> {
    let m = load_lie(file)?;
    let rows: Vec<LieDegreeRow> = (1..=max_degree)
        .map(|k| {
            let h = m.homology(k);
            LieDegreeRow {
                degree: k,
                lie_dim: m.lie_dim(k),
                cycle_dim: h.cycle_dim,
                boundary_dim: h.boundary_dim,
                homology_dim: h.dim(),
            }
        })
        .collect();
    let mut text_out = format!("Lie algebra homology through degree {max_degree}\n");
    text_out.push_str("  k   dim L_k  cycles  boundaries  dim H_k\n");
    for r in &rows {
        text_out.push_str(&format!(
            "  {:<3} {:<8} {:<7} {:<11} {}\n",
            r.degree, r.lie_dim, r.cycle_dim, r.boundary_dim, r.homology_dim
        ));
    }
    let report = Report {
        command: command_echo(),
        fingerprint: text::lie_fingerprint(&m),
        diagnostics: Vec::new(),
        result: DglPayload { max_degree, rows },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct PairPayload {
    max_degree: u32,
    shifts: Vec<PairCheckReport>,
}

fn cmd_pair_check(
    format: Format,
    sullivan: &Path,
    lie: &Path,
    max_degree: u32,
    shift_range: ShiftRange,
) -> Result<(), CliError> {
    let s = match text::parse_model(&read_file(sullivan)?)? {
        text::ParsedModel::Sullivan(m) => m,
        text::ParsedModel::Lie(_) => {
            return Err(CliError::Usage(format!(
                "{} contains a Lie model; the first argument must be a Sullivan model",
                sullivan.display()
            )))
        }
    };
    let l = load_lie(lie)?;
    let mut shifts = Vec::new();
    let mut text_out = format!(
        "dimension comparison through degree {max_degree} (Sullivan level k + shift vs Lie skeleton k - 2)\n"
    );
    for shift in shift_range.lo..=shift_range.hi {
        let rep = pair_check(&s, &l, 2, max_degree, shift)?;
        if rep.all_match {
            text_out.push_str(&format!(
                "  shift {shift}: all {} degrees match\n",
                rep.rows.len()
            ));
        } else {
            let failing: Vec<String> = rep
                .rows
                .iter()
                .filter(|r| !r.matches)
                .map(|r| {
                    format!(
                        "k = {} (sullivan {}, lie {})",
                        r.k, r.sullivan_dim, r.lie_dim
                    )
                })
                .collect();
            text_out.push_str(&format!(
                "  shift {shift}: mismatch at {}\n",
                failing.join(", ")
            ));
        }
        shifts.push(rep);
    }
    let fingerprint = text::fingerprint(&format!(
        "{}{}",
        text::serialize_sullivan(&s),
        text::serialize_lie(&l)
    ));
    let report = Report {
        command: command_echo(),
        fingerprint,
        diagnostics: Vec::new(),
        result: PairPayload { max_degree, shifts },
    };
    emit(format, &report, text_out);
    Ok(())
}

#[derive(Serialize)]
struct RealizePayload {
    vertices: usize,
    edges: usize,
    graph_automorphisms: usize,
    formal_dimension: i64,
    solvable_branches: usize,
    total_order: Option<u128>,
    max_free_rank: usize,
    matches_automorphism_count: bool,
    /// Canonical text of the generated Sullivan model.
    model: String,
}

fn cmd_realize_graph(format: Format, file: &Path) -> Result<(), CliError> {
    let g: Graph = text::parse_graph(&read_file(file)?)?;
    let autos = g.automorphisms()?.len();
    let m = costoya_viruel_model(&g)?;
    let n = formal_dimension(&m)?;
    let group = monomial_group(&m)?;
    let matches = group.total_order == Some(autos as u128);
    let mut diagnostics = Vec::new();
    if !matches {
        diagnostics.push(format!(
            "monomial group order {} does not equal the graph automorphism count {autos}; flagged for review",
            match group.total_order {
                None => "infinite".to_string(),
                Some(t) => t.to_string(),
            }
        ));
    }
    let text_out = format!(
        "graph: {} vertices, {} edges, {} automorphisms\n\
         model: {} generators, formal dimension {}\n\
         monomial self-equivalence group: {}\n\
         solvable permutation branches: {}\n\
         group order {} graph automorphism count\n",
        g.vertex_count(),
        g.edge_count(),
        autos,
        m.generator_count(),
        n,
        group.description,
        group.solvable_branches,
        if matches { "matches" } else { "DIFFERS FROM" },
    );
    let payload = RealizePayload {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        graph_automorphisms: autos,
        formal_dimension: n,
        solvable_branches: group.solvable_branches,
        total_order: group.total_order,
        max_free_rank: group.max_free_rank,
        matches_automorphism_count: matches,
        model: text::serialize_sullivan(&m),
    };
    let report = Report {
        command: command_echo(),
        fingerprint: text::graph_fingerprint(&g),
        diagnostics,
        result: payload,
    };
    emit(format, &report, text_out);
    Ok(())
}
