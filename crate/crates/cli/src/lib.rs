//! Command-line front end: `check`, `solve`, `oracle`, `reduce`, `gen`,
//! `verify`.
//!
//! Exit codes: 0 = yes / solved, 1 = no / infeasible, 2 = input error,
//! 3 = search budget (or enumeration bound) exceeded.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use cgf_core::{
    bf_bfp, bf_disp, bf_min_cycle, bf_min_path, bf_motj, gen_bfp, gen_conservative,
    gen_matching_negatives, is_conservative, lift_disp_to_bfp, lift_motj_nonneg,
    lift_socp_to_bfp, lift_sop_to_socp, lift_sop_to_sp, min_odd_tjoin,
    motj_conservative_zero_to_nonneg, reduce_bfp_to_disp, reduce_bfp_to_socp,
    reduce_socp_to_sop, reduce_sp_to_sop, shortest_parity_path_nonneg,
    shortest_path_conservative, verify_witness, EdgeSet, Error, GenSpec, Parity,
    ParityFilter, ParityPathQuery, ProblemInstance, ProblemKind, ReducedInstance,
    ReductionKind, SearchBudget, Weight, Witness,
};

use format::{
    format_weight, parse_instance, parse_witness, parse_witness_map, serialize_instance,
    serialize_witness, serialize_witness_map, ParsedInstance,
};

#[derive(Parser)]
#[command(name = "cgf", version, about = "Exact solvers and reductions for conservative graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and test conservativeness.
    Check {
        file: PathBuf,
    },
    /// Solve an instance with the best exact method available.
    Solve {
        file: PathBuf,
        /// Step limit per exhaustive search.
        #[arg(long, default_value_t = SearchBudget::DEFAULT_STEPS)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        /// Write the witness in witness-file form.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Solve an instance by brute force only.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = SearchBudget::DEFAULT_STEPS)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Transform an instance into another problem, with a witness map.
    Reduce {
        file: PathBuf,
        /// Target problem: sop, socp, disp or motj-nonneg.
        #[arg(long)]
        to: String,
        /// Write the target instance here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the witness map here (stdout shows only the instance).
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Generate a seeded instance.
    Gen {
        /// conservative, matching-negatives or bfp.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        wmax: Weight,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Problem kind to stamp on the instance (defaults by family).
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness against an instance, optionally lifting it through
    /// a reduction first.
    Verify {
        #[arg(long, required_unless_present = "batch")]
        instance: Option<PathBuf>,
        #[arg(long, required_unless_present = "batch")]
        witness: Option<PathBuf>,
        /// The reduced instance the witness belongs to.
        #[arg(long, requires = "map")]
        reduced: Option<PathBuf>,
        /// Witness map emitted by `reduce`.
        #[arg(long, requires = "reduced")]
        map: Option<PathBuf>,
        /// Manifest of `<instance> <witness>` pairs, one per line.
        #[arg(long, conflicts_with_all = ["instance", "witness", "reduced", "map"])]
        batch: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

/// Entry point shared by the binary and the tests. `args` includes the
/// program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Check { file } => cmd_check(&file, out),
        Command::Solve { file, budget, format, witness_out } => {
            cmd_solve(&file, budget, format, witness_out.as_deref(), false, out)
        }
        Command::Oracle { file, budget, format, witness_out } => {
            cmd_solve(&file, budget, format, witness_out.as_deref(), true, out)
        }
        Command::Reduce { file, to, out: out_file, map_out } => {
            cmd_reduce(&file, &to, out_file.as_deref(), map_out.as_deref(), out)
        }
        Command::Gen { family, n, m, wmax, seed, problem, out: out_file } => {
            cmd_gen(&family, n, m, wmax, seed, problem.as_deref(), out_file.as_deref(), out)
        }
        Command::Verify { instance, witness, reduced, map, batch, format } => match batch {
            Some(manifest) => cmd_verify_batch(&manifest, out),
            None => cmd_verify(
                instance.as_deref().expect("clap enforces --instance"),
                witness.as_deref().expect("clap enforces --witness"),
                reduced.as_deref(),
                map.as_deref(),
                format,
                out,
            ),
        },
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<format::ParseError> for Failure {
    fn from(e: format::ParseError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_no_instance() {
            1
        } else {
            match e {
                Error::BudgetExceeded(_) | Error::TooLarge(_) => 3,
                _ => 2,
            }
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> std::result::Result<ParsedInstance, Failure> {
    let text = read_file(path)?;
    parse_instance(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, content: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            out.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_check(file: &Path, out: &mut dyn Write) -> CmdResult {
    let parsed = load_instance(file)?;
    match &parsed.instance {
        ProblemInstance::Bfp { digraph, s, t } => {
            writeln!(
                out,
                "bfp digraph: {} vertices, {} arcs, s={s}, t={t}",
                digraph.vertex_count(),
                digraph.arc_count()
            )
            .map_err(Failure::from)?;
            writeln!(out, "ok").map_err(Failure::from)?;
            Ok(0)
        }
        other => {
            let g = other.undirected_graph().expect("non-BFP carries an ugraph");
            writeln!(
                out,
                "{} ugraph: {} vertices, {} edges",
                other.kind(),
                g.vertex_count(),
                g.edge_count()
            )
            .map_err(Failure::from)?;
            if is_conservative(g)? {
                writeln!(out, "conservative").map_err(Failure::from)?;
                Ok(0)
            } else {
                writeln!(out, "not conservative").map_err(Failure::from)?;
                Ok(1)
            }
        }
    }
}

/// The solution of one instance: measured weight plus its witness. BFP
/// solutions carry weight 0.
struct Solution {
    weight: Weight,
    witness: Witness,
}

fn edge_witness(set: &EdgeSet) -> Witness {
    Witness::single(set.iter())
}

fn solve_instance(
    parsed: &ParsedInstance,
    budget: SearchBudget,
    brute_only: bool,
) -> std::result::Result<Option<Solution>, Error> {
    let instance = &parsed.instance;
    instance.validate()?;
    match instance {
        ProblemInstance::Sp { graph, s, t } => {
            let found = if brute_only {
                bf_min_path(graph, *s, *t, ParityFilter::Any, budget)?
            } else {
                match shortest_path_conservative(graph, *s, *t) {
                    Ok(r) => Some(r),
                    Err(Error::Infeasible) => None,
                    Err(e) => return Err(e),
                }
            };
            Ok(found.map(|(set, weight)| Solution { weight, witness: edge_witness(&set) }))
        }
        ProblemInstance::Sop { graph, s, t, .. } => {
            let nonneg = graph.edges().iter().all(|e| e.weight >= 0);
            let found = if *s == *t {
                bf_min_cycle(graph, ParityFilter::Odd, Some(*s), budget)?
            } else if nonneg && !brute_only {
                let q = ParityPathQuery { s: *s, t: *t, parity: Parity::Odd };
                match shortest_parity_path_nonneg(graph, &q) {
                    Ok(r) => Some(r),
                    Err(Error::Infeasible) => None,
                    Err(e) => return Err(e),
                }
            } else {
                bf_min_path(graph, *s, *t, ParityFilter::Odd, budget)?
            };
            Ok(found.map(|(set, weight)| Solution { weight, witness: edge_witness(&set) }))
        }
        ProblemInstance::Soc { graph, .. } => {
            let found = bf_min_cycle(graph, ParityFilter::Odd, None, budget)?;
            Ok(found.map(|(set, weight)| Solution { weight, witness: edge_witness(&set) }))
        }
        ProblemInstance::Socp { graph, p, .. } => {
            let found = bf_min_cycle(graph, ParityFilter::Odd, Some(*p), budget)?;
            Ok(found.map(|(set, weight)| Solution { weight, witness: edge_witness(&set) }))
        }
        ProblemInstance::Disp { graph, s1, s2, t1, t2, .. } => {
            let found = bf_disp(graph, *s1, *s2, *t1, *t2, budget)?;
            Ok(found.map(|w| Solution {
                weight: w.total_weight,
                witness: Witness::pair(w.path1.iter(), w.path2.iter()),
            }))
        }
        ProblemInstance::Motj { graph, terminals, .. } => {
            let found = if brute_only {
                bf_motj(graph, terminals, budget)?
            } else {
                let soc = |g: &cgf_core::UndirectedGraph| {
                    bf_min_cycle(g, ParityFilter::Odd, None, budget)
                };
                match min_odd_tjoin(graph, terminals, soc) {
                    Ok(r) => Some(r),
                    Err(e) if e.is_no_instance() => None,
                    Err(e) => return Err(e),
                }
            };
            Ok(found.map(|(set, weight)| Solution { weight, witness: edge_witness(&set) }))
        }
        ProblemInstance::Bfp { digraph, s, t } => {
            let found = bf_bfp(digraph, *s, *t, budget)?;
            Ok(found.map(|(p1, p2)| Solution { weight: 0, witness: Witness::pair(p1, p2) }))
        }
    }
}

fn witness_ids(witness: &Witness) -> (Vec<usize>, Option<Vec<usize>>) {
    (witness.first.clone(), witness.second.clone())
}

fn cmd_solve(
    file: &Path,
    budget: u64,
    fmt: OutputFormat,
    witness_out: Option<&Path>,
    brute_only: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let parsed = load_instance(file)?;
    let budget = SearchBudget::steps(budget);
    let solution = solve_instance(&parsed, budget, brute_only)?;

    let scale = parsed.scale;
    match solution {
        None => {
            match fmt {
                OutputFormat::Text => writeln!(out, "infeasible").map_err(Failure::from)?,
                OutputFormat::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({ "status": "infeasible" })
                )
                .map_err(Failure::from)?,
            }
            Ok(1)
        }
        Some(solution) => {
            // every reported solution is re-checked before exiting 0
            let audited = verify_witness(&parsed.instance, &solution.witness)
                .map_err(|e| Failure::input(format!("internal witness audit failed: {e}")))?;
            if audited != solution.weight {
                return Err(Failure::input(format!(
                    "internal witness audit mismatch: {audited} vs {}",
                    solution.weight
                )));
            }
            if let Some(path) = witness_out {
                std::fs::write(path, serialize_witness(&solution.witness))
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            let bound = parsed.instance.bound();
            let yes = bound.is_none_or(|k| solution.weight <= k);
            let (first, second) = witness_ids(&solution.witness);
            match fmt {
                OutputFormat::Text => {
                    if let Some(k) = bound {
                        writeln!(out, "{}", if yes { "yes" } else { "no" })
                            .map_err(Failure::from)?;
                        writeln!(out, "bound {}", format_weight(k, scale))
                            .map_err(Failure::from)?;
                    }
                    writeln!(out, "optimum {}", format_weight(solution.weight, scale))
                        .map_err(Failure::from)?;
                    if yes {
                        let ids: Vec<String> = first.iter().map(|i| i.to_string()).collect();
                        writeln!(out, "witness {}", ids.join(" ")).map_err(Failure::from)?;
                        if let Some(ids2) = &second {
                            let ids2: Vec<String> = ids2.iter().map(|i| i.to_string()).collect();
                            writeln!(out, "witness2 {}", ids2.join(" ")).map_err(Failure::from)?;
                        }
                    }
                }
                OutputFormat::Json => {
                    let payload = serde_json::json!({
                        "status": if bound.is_some() { if yes { "yes" } else { "no" } } else { "solved" },
                        "optimum": format_weight(solution.weight, scale),
                        "bound": bound.map(|k| format_weight(k, scale)),
                        "witness": first,
                        "witness2": second,
                    });
                    writeln!(out, "{payload}").map_err(Failure::from)?;
                }
            }
            Ok(if yes { 0 } else { 1 })
        }
    }
}

fn reduction_source_mismatch(to: &str, kind: ProblemKind) -> Failure {
    Failure::input(format!("cannot reduce a `{kind}` instance to `{to}`"))
}

fn cmd_reduce(
    file: &Path,
    to: &str,
    out_file: Option<&Path>,
    map_out: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let parsed = load_instance(file)?;
    let reduced: ReducedInstance = match (to, &parsed.instance) {
        ("socp", ProblemInstance::Bfp { digraph, s, t }) => reduce_bfp_to_socp(digraph, *s, *t)?,
        ("disp", ProblemInstance::Bfp { digraph, s, t }) => reduce_bfp_to_disp(digraph, *s, *t)?,
        ("sop", ProblemInstance::Sp { graph, s, t }) => reduce_sp_to_sop(graph, *s, *t)?,
        ("sop", ProblemInstance::Socp { graph, p, k }) => reduce_socp_to_sop(graph, *p, *k)?,
        ("motj-nonneg", ProblemInstance::Motj { graph, terminals, .. }) => {
            if !terminals.is_empty() {
                return Err(Failure::input(
                    "the parity reduction applies to motj instances with an empty T-set",
                ));
            }
            motj_conservative_zero_to_nonneg(graph)?
        }
        (target @ ("socp" | "disp" | "sop" | "motj-nonneg"), other) => {
            return Err(reduction_source_mismatch(target, other.kind()))
        }
        (unknown, _) => return Err(Failure::input(format!("unknown reduction target `{unknown}`"))),
    };
    let target = ParsedInstance { instance: reduced.instance.clone(), scale: parsed.scale };
    emit(out_file, &serialize_instance(&target), out)?;
    // the map follows on stdout unless routed to its own file
    emit(map_out, &serialize_witness_map(&reduced.witness_map), out)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: &str,
    n: usize,
    m: usize,
    wmax: Weight,
    seed: u64,
    problem: Option<&str>,
    out_file: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let spec = GenSpec { n, m, wmax, seed };
    let parsed = match family {
        "conservative" | "matching-negatives" => {
            let graph = if family == "conservative" {
                gen_conservative(&spec)?
            } else {
                gen_matching_negatives(&spec)?
            };
            let kind: ProblemKind = problem
                .unwrap_or("soc")
                .parse()
                .map_err(Failure::input)?;
            let instance = match kind {
                ProblemKind::Soc => ProblemInstance::Soc { graph, k: None },
                ProblemKind::Socp => ProblemInstance::Socp { graph, p: 1, k: None },
                ProblemKind::Motj => ProblemInstance::Motj {
                    graph,
                    terminals: Default::default(),
                    k: None,
                },
                ProblemKind::Sp if n >= 2 => ProblemInstance::Sp { graph, s: 1, t: n },
                ProblemKind::Sop if n >= 2 => {
                    ProblemInstance::Sop { graph, s: 1, t: n, k: None }
                }
                ProblemKind::Disp if n >= 4 => ProblemInstance::Disp {
                    graph,
                    s1: 1,
                    s2: 2,
                    t1: 3,
                    t2: 4,
                    k: None,
                },
                other => {
                    return Err(Failure::input(format!(
                        "cannot stamp problem `{other}` on this family at n={n}"
                    )))
                }
            };
            ParsedInstance { instance, scale: 1 }
        }
        "bfp" => {
            if n < 2 {
                return Err(Failure::input("bfp generation needs n >= 2"));
            }
            let (digraph, s, t) = gen_bfp(&spec)?;
            if let Some(p) = problem {
                if p != "bfp" {
                    return Err(Failure::input("the bfp family generates bfp instances"));
                }
            }
            ParsedInstance { instance: ProblemInstance::Bfp { digraph, s, t }, scale: 1 }
        }
        other => return Err(Failure::input(format!("unknown family `{other}`"))),
    };
    emit(out_file, &serialize_instance(&parsed), out)?;
    Ok(0)
}

/// Lifts a target witness back through the reduction named in the map.
fn lift_witness(
    reduced: &ReducedInstance,
    witness: &Witness,
) -> std::result::Result<Witness, Error> {
    match reduced.witness_map.kind {
        ReductionKind::BfpToSocp => {
            let set: EdgeSet = witness.first.iter().copied().collect();
            let (fwd, back) = lift_socp_to_bfp(reduced, &set)?;
            Ok(Witness::pair(fwd, back))
        }
        ReductionKind::SocpToSopSplit | ReductionKind::SocpToSopConvention => {
            let set: EdgeSet = witness.first.iter().copied().collect();
            Ok(edge_witness(&lift_sop_to_socp(reduced, &set)?))
        }
        ReductionKind::BfpToDisp => {
            let p1: EdgeSet = witness.first.iter().copied().collect();
            let p2: EdgeSet = witness
                .second
                .as_ref()
                .ok_or_else(|| Error::InvalidWitness("missing second path".into()))?
                .iter()
                .copied()
                .collect();
            let (fwd, back) = lift_disp_to_bfp(reduced, &p1, &p2)?;
            Ok(Witness::pair(fwd, back))
        }
        ReductionKind::SpToSop => {
            let set: EdgeSet = witness.first.iter().copied().collect();
            Ok(edge_witness(&lift_sop_to_sp(reduced, &set)?))
        }
        ReductionKind::MotjZeroToNonneg => {
            let set: EdgeSet = witness.first.iter().copied().collect();
            Ok(edge_witness(&lift_motj_nonneg(reduced, &set)?))
        }
    }
}

fn cmd_verify(
    instance_path: &Path,
    witness_path: &Path,
    reduced_path: Option<&Path>,
    map_path: Option<&Path>,
    fmt: OutputFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let parsed = load_instance(instance_path)?;
    let witness_text = read_file(witness_path)?;
    let witness = parse_witness(&witness_text)
        .map_err(|e| Failure::input(format!("{}: {e}", witness_path.display())))?;

    let (checked_witness, lifted) = match (reduced_path, map_path) {
        (Some(rp), Some(mp)) => {
            let reduced_parsed = load_instance(rp)?;
            let map_text = read_file(mp)?;
            let witness_map = parse_witness_map(&map_text)
                .map_err(|e| Failure::input(format!("{}: {e}", mp.display())))?;
            let reduced =
                ReducedInstance { instance: reduced_parsed.instance, witness_map };
            match lift_witness(&reduced, &witness) {
                Ok(w) => (w, true),
                Err(e) => {
                    report_verdict(fmt, out, false, &e.to_string(), None, parsed.scale)?;
                    return Ok(1);
                }
            }
        }
        _ => (witness, false),
    };

    match verify_witness(&parsed.instance, &checked_witness) {
        Ok(weight) => {
            if let Some(k) = parsed.instance.bound() {
                if weight > k {
                    report_verdict(
                        fmt,
                        out,
                        false,
                        &format!(
                            "weight {} exceeds the bound {}",
                            format_weight(weight, parsed.scale),
                            format_weight(k, parsed.scale)
                        ),
                        Some(weight),
                        parsed.scale,
                    )?;
                    return Ok(1);
                }
            }
            let detail = if lifted { "valid (lifted witness)" } else { "valid" };
            report_verdict(fmt, out, true, detail, Some(weight), parsed.scale)?;
            Ok(0)
        }
        Err(Error::InvalidWitness(reason)) => {
            report_verdict(fmt, out, false, &reason, None, parsed.scale)?;
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn report_verdict(
    fmt: OutputFormat,
    out: &mut dyn Write,
    ok: bool,
    detail: &str,
    weight: Option<Weight>,
    scale: i64,
) -> std::result::Result<(), Failure> {
    match fmt {
        OutputFormat::Text => {
            match weight {
                Some(w) => writeln!(out, "{}: {detail} (weight {})", verdict_word(ok), format_weight(w, scale)),
                None => writeln!(out, "{}: {detail}", verdict_word(ok)),
            }
            .map_err(Failure::from)?;
        }
        OutputFormat::Json => {
            let payload = serde_json::json!({
                "status": verdict_word(ok),
                "detail": detail,
                "weight": weight.map(|w| format_weight(w, scale)),
            });
            writeln!(out, "{payload}").map_err(Failure::from)?;
        }
    }
    Ok(())
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "accepted"
    } else {
        "rejected"
    }
}

fn cmd_verify_batch(manifest: &Path, out: &mut dyn Write) -> CmdResult {
    let text = read_file(manifest)?;
    let mut all_ok = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() || fields[0] == "c" {
            continue;
        }
        let [inst, wit] = fields.as_slice() else {
            return Err(Failure::input(format!(
                "{}: line {line}: expected `<instance> <witness>`",
                manifest.display()
            )));
        };
        let mut sink = Vec::new();
        let code = match cmd_verify(
            Path::new(inst),
            Path::new(wit),
            None,
            None,
            OutputFormat::Text,
            &mut sink,
        ) {
            Ok(code) => code,
            Err(failure) => {
                writeln!(out, "{inst} {wit} error {}", failure.message).map_err(Failure::from)?;
                all_ok = false;
                continue;
            }
        };
        let detail = String::from_utf8_lossy(&sink);
        write!(out, "{inst} {wit} {}", detail).map_err(Failure::from)?;
        if code != 0 {
            all_ok = false;
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}
