//! The instance file grammar and its companions (witness files, witness-map
//! files).
//!
//! One record per line:
//!
//! ```text
//! c <comment>
//! p cgf <ugraph|digraph> <n> <m>
//! e <u> <v> <w>        edge, w an integer or a fraction p/q (ugraph)
//! e <tail> <head>      arc (digraph)
//! t <v>                T-set member
//! x <role> <v>         terminal role: s t s1 s2 t1 t2 p
//! k <value>            decision bound, integer or fraction
//! q <kind>             problem kind: sp sop soc socp disp motj bfp
//! ```
//!
//! Fractional weights are scaled by the least common denominator at parse
//! time; every reported optimum is descaled on output. Edge ids are
//! assigned `1..=m` in file order and never renumbered.

use std::collections::BTreeMap;
use std::fmt;

use cgf_core::{
    Digraph, ProblemInstance, ProblemKind, ReductionKind, TerminalSet, UndirectedGraph,
    VertexId, Weight, Witness, WitnessMap,
};

/// A parse failure, pointing at the offending line (1-based; 0 for
/// file-level problems).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// A parsed instance plus the denominator scale applied to its weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: ProblemInstance,
    /// All weights (and the bound) were multiplied by this factor.
    pub scale: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Exact rational with a positive denominator, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    fn parse(token: &str, line: usize) -> Result<Self, ParseError> {
        let (num_s, den_s) = match token.split_once('/') {
            Some((a, b)) => (a, b),
            None => (token, "1"),
        };
        let num: i64 = num_s
            .parse()
            .map_err(|_| ParseError::at(line, format!("bad number `{token}`")))?;
        let den: i64 = den_s
            .parse()
            .map_err(|_| ParseError::at(line, format!("bad number `{token}`")))?;
        if den <= 0 {
            return Err(ParseError::at(line, format!("denominator must be positive in `{token}`")));
        }
        let g = gcd(num, den).max(1);
        Ok(Fraction { num: num / g, den: den / g })
    }

    fn scaled(&self, scale: i64, line: usize) -> Result<i64, ParseError> {
        debug_assert_eq!(scale % self.den, 0);
        (scale / self.den)
            .checked_mul(self.num)
            .ok_or_else(|| ParseError::at(line, "scaled weight overflows"))
    }
}

/// Formats `value / scale` as an integer or a reduced fraction.
pub fn format_weight(value: Weight, scale: i64) -> String {
    debug_assert!(scale >= 1);
    let g = gcd(value, scale).max(1);
    let (num, den) = (value / g, scale / g);
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GraphKind {
    Ugraph,
    Digraph,
}

/// Parses the instance grammar. Edge ids follow file order.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut header: Option<(GraphKind, usize, usize, usize)> = None; // kind, n, m, line
    let mut edges: Vec<(VertexId, VertexId, Fraction, usize)> = Vec::new();
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::new();
    let mut t_set: Vec<(VertexId, usize)> = Vec::new();
    let mut roles: BTreeMap<&str, (VertexId, usize)> = BTreeMap::new();
    let mut bound: Option<(Fraction, usize)> = None;
    let mut kind: Option<(ProblemKind, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let tag = match tokens.next() {
            None => continue, // blank line
            Some(t) => t,
        };
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(ParseError::at(line, "duplicate header"));
                }
                let [fmt_tag, graph_kind, n_s, m_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `p cgf <ugraph|digraph> <n> <m>`"));
                };
                if *fmt_tag != "cgf" {
                    return Err(ParseError::at(line, format!("unknown format `{fmt_tag}`")));
                }
                let gk = match *graph_kind {
                    "ugraph" => GraphKind::Ugraph,
                    "digraph" => GraphKind::Digraph,
                    other => {
                        return Err(ParseError::at(line, format!("unknown graph kind `{other}`")))
                    }
                };
                let n = n_s
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("bad vertex count `{n_s}`")))?;
                let m = m_s
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("bad edge count `{m_s}`")))?;
                header = Some((gk, n, m, line));
            }
            "e" => {
                let (gk, n, _, _) =
                    header.ok_or_else(|| ParseError::at(line, "edge before header"))?;
                let parse_vertex = |s: &str| -> Result<VertexId, ParseError> {
                    let v: VertexId = s
                        .parse()
                        .map_err(|_| ParseError::at(line, format!("bad vertex `{s}`")))?;
                    if v == 0 || v > n {
                        return Err(ParseError::at(line, format!("vertex {v} out of range 1..={n}")));
                    }
                    Ok(v)
                };
                match (gk, rest.as_slice()) {
                    (GraphKind::Ugraph, [u_s, v_s, w_s]) => {
                        let u = parse_vertex(u_s)?;
                        let v = parse_vertex(v_s)?;
                        if u == v {
                            return Err(ParseError::at(line, format!("loop edge at vertex {u}")));
                        }
                        edges.push((u, v, Fraction::parse(w_s, line)?, line));
                    }
                    (GraphKind::Ugraph, _) => {
                        return Err(ParseError::at(line, "expected `e <u> <v> <w>`"))
                    }
                    (GraphKind::Digraph, [u_s, v_s]) => {
                        let u = parse_vertex(u_s)?;
                        let v = parse_vertex(v_s)?;
                        if u == v {
                            return Err(ParseError::at(line, format!("self-arc at vertex {u}")));
                        }
                        arcs.push((u, v));
                    }
                    (GraphKind::Digraph, _) => {
                        return Err(ParseError::at(line, "expected `e <tail> <head>` (arcs carry no weight)"))
                    }
                }
            }
            "t" => {
                let (_, n, _, _) =
                    header.ok_or_else(|| ParseError::at(line, "T-member before header"))?;
                let [v_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `t <v>`"));
                };
                let v: VertexId = v_s
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("bad vertex `{v_s}`")))?;
                if v == 0 || v > n {
                    return Err(ParseError::at(line, format!("vertex {v} out of range 1..={n}")));
                }
                if t_set.iter().any(|&(u, _)| u == v) {
                    return Err(ParseError::at(line, format!("duplicate T vertex {v}")));
                }
                t_set.push((v, line));
            }
            "x" => {
                let (_, n, _, _) =
                    header.ok_or_else(|| ParseError::at(line, "terminal before header"))?;
                let [role, v_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `x <role> <v>`"));
                };
                let role = match *role {
                    r @ ("s" | "t" | "s1" | "s2" | "t1" | "t2" | "p") => r,
                    other => {
                        return Err(ParseError::at(line, format!("unknown terminal role `{other}`")))
                    }
                };
                let v: VertexId = v_s
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("bad vertex `{v_s}`")))?;
                if v == 0 || v > n {
                    return Err(ParseError::at(line, format!("vertex {v} out of range 1..={n}")));
                }
                let role_key = match role {
                    "s" => "s",
                    "t" => "t",
                    "s1" => "s1",
                    "s2" => "s2",
                    "t1" => "t1",
                    "t2" => "t2",
                    _ => "p",
                };
                if roles.insert(role_key, (v, line)).is_some() {
                    return Err(ParseError::at(line, format!("duplicate terminal role `{role}`")));
                }
            }
            "k" => {
                if header.is_none() {
                    return Err(ParseError::at(line, "bound before header"));
                }
                let [k_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `k <value>`"));
                };
                if bound.is_some() {
                    return Err(ParseError::at(line, "duplicate bound"));
                }
                bound = Some((Fraction::parse(k_s, line)?, line));
            }
            "q" => {
                let [kind_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `q <kind>`"));
                };
                if kind.is_some() {
                    return Err(ParseError::at(line, "duplicate problem kind"));
                }
                let k: ProblemKind =
                    kind_s.parse().map_err(|e: String| ParseError::at(line, e))?;
                kind = Some((k, line));
            }
            other => return Err(ParseError::at(line, format!("unknown record `{other}`"))),
        }
    }

    let (graph_kind, n, m, header_line) =
        header.ok_or_else(|| ParseError::at(0, "missing `p cgf ...` header"))?;
    let declared = m;
    let actual = match graph_kind {
        GraphKind::Ugraph => edges.len(),
        GraphKind::Digraph => arcs.len(),
    };
    if declared != actual {
        return Err(ParseError::at(
            header_line,
            format!("header declares {declared} edges, file has {actual}"),
        ));
    }
    let (problem, _) = kind.ok_or_else(|| ParseError::at(0, "missing `q <kind>` record"))?;

    let mut scale = 1i64;
    for &(_, _, f, line) in &edges {
        let g = gcd(scale, f.den).max(1);
        scale = (scale / g)
            .checked_mul(f.den)
            .ok_or_else(|| ParseError::at(line, "denominator least common multiple overflows"))?;
    }
    if let Some((f, line)) = bound {
        let g = gcd(scale, f.den).max(1);
        scale = (scale / g)
            .checked_mul(f.den)
            .ok_or_else(|| ParseError::at(line, "denominator least common multiple overflows"))?;
    }

    let need = |key: &str| -> Result<VertexId, ParseError> {
        roles
            .get(key)
            .map(|&(v, _)| v)
            .ok_or_else(|| ParseError::at(0, format!("problem `{problem}` needs terminal `{key}`")))
    };
    let k_scaled = match bound {
        None => None,
        Some((f, line)) => Some(f.scaled(scale, line)?),
    };

    let instance = match graph_kind {
        GraphKind::Digraph => {
            if problem != ProblemKind::Bfp {
                return Err(ParseError::at(0, format!("problem `{problem}` needs an ugraph")));
            }
            let digraph = Digraph::new(n, &arcs).map_err(|e| ParseError::at(0, e.to_string()))?;
            ProblemInstance::Bfp { digraph, s: need("s")?, t: need("t")? }
        }
        GraphKind::Ugraph => {
            if problem == ProblemKind::Bfp {
                return Err(ParseError::at(0, "problem `bfp` needs a digraph"));
            }
            let mut weighted: Vec<(VertexId, VertexId, Weight)> = Vec::with_capacity(edges.len());
            for &(u, v, f, line) in &edges {
                weighted.push((u, v, f.scaled(scale, line)?));
            }
            let graph = UndirectedGraph::new(n, &weighted)
                .map_err(|e| ParseError::at(0, e.to_string()))?;
            let terminals: TerminalSet = t_set.iter().map(|&(v, _)| v).collect();
            match problem {
                ProblemKind::Sp => ProblemInstance::Sp { graph, s: need("s")?, t: need("t")? },
                ProblemKind::Sop => {
                    ProblemInstance::Sop { graph, s: need("s")?, t: need("t")?, k: k_scaled }
                }
                ProblemKind::Soc => ProblemInstance::Soc { graph, k: k_scaled },
                ProblemKind::Socp => {
                    ProblemInstance::Socp { graph, p: need("p")?, k: k_scaled }
                }
                ProblemKind::Disp => ProblemInstance::Disp {
                    graph,
                    s1: need("s1")?,
                    s2: need("s2")?,
                    t1: need("t1")?,
                    t2: need("t2")?,
                    k: k_scaled,
                },
                ProblemKind::Motj => ProblemInstance::Motj { graph, terminals, k: k_scaled },
                ProblemKind::Bfp => unreachable!(),
            }
        }
    };
    instance.validate().map_err(|e| ParseError::at(0, e.to_string()))?;
    Ok(ParsedInstance { instance, scale })
}

/// Serializes to canonical form: header, kind, edges in id order, sorted
/// T-set, roles in fixed order, bound last. Weights are descaled back to
/// reduced fractions.
pub fn serialize_instance(parsed: &ParsedInstance) -> String {
    let mut out = String::new();
    let instance = &parsed.instance;
    let scale = parsed.scale;
    let mut push = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match instance {
        ProblemInstance::Bfp { digraph, s, t } => {
            push(format!("p cgf digraph {} {}", digraph.vertex_count(), digraph.arc_count()));
            push("q bfp".to_string());
            for a in digraph.arcs() {
                push(format!("e {} {}", a.tail, a.head));
            }
            push(format!("x s {s}"));
            push(format!("x t {t}"));
        }
        _ => {
            let graph = instance.undirected_graph().expect("non-BFP carries an ugraph");
            push(format!("p cgf ugraph {} {}", graph.vertex_count(), graph.edge_count()));
            push(format!("q {}", instance.kind()));
            for e in graph.edges() {
                push(format!("e {} {} {}", e.u, e.v, format_weight(e.weight, scale)));
            }
            match instance {
                ProblemInstance::Sp { s, t, .. } => {
                    push(format!("x s {s}"));
                    push(format!("x t {t}"));
                }
                ProblemInstance::Sop { s, t, .. } => {
                    push(format!("x s {s}"));
                    push(format!("x t {t}"));
                }
                ProblemInstance::Soc { .. } => {}
                ProblemInstance::Socp { p, .. } => push(format!("x p {p}")),
                ProblemInstance::Disp { s1, s2, t1, t2, .. } => {
                    push(format!("x s1 {s1}"));
                    push(format!("x s2 {s2}"));
                    push(format!("x t1 {t1}"));
                    push(format!("x t2 {t2}"));
                }
                ProblemInstance::Motj { terminals, .. } => {
                    for v in terminals.iter() {
                        push(format!("t {v}"));
                    }
                }
                ProblemInstance::Bfp { .. } => unreachable!(),
            }
            if let Some(k) = instance.bound() {
                push(format!("k {}", format_weight(k, scale)));
            }
        }
    }
    out
}

/// Witness files: `w <id>` lines, `w2 <id>` for the second list of the
/// two-path problems.
pub fn parse_witness(text: &str) -> Result<Witness, ParseError> {
    let mut first = Vec::new();
    let mut second: Option<Vec<usize>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let tag = match tokens.next() {
            None => continue,
            Some(t) => t,
        };
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "c" => continue,
            "w" | "w2" => {
                let [id_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, format!("expected `{tag} <id>`")));
                };
                let id: usize = id_s
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("bad id `{id_s}`")))?;
                if tag == "w" {
                    first.push(id);
                } else {
                    second.get_or_insert_with(Vec::new).push(id);
                }
            }
            other => return Err(ParseError::at(line, format!("unknown record `{other}`"))),
        }
    }
    Ok(Witness { first, second })
}

pub fn serialize_witness(witness: &Witness) -> String {
    let mut out = String::new();
    for id in &witness.first {
        out.push_str(&format!("w {id}\n"));
    }
    if let Some(second) = &witness.second {
        for id in second {
            out.push_str(&format!("w2 {id}\n"));
        }
    }
    out
}

fn format_ref(prefix: char, id: usize) -> String {
    format!("{prefix}{id}")
}

fn parse_ref(token: &str, want: char, line: usize) -> Result<usize, ParseError> {
    match token.strip_prefix(want) {
        Some(tail) => {
            tail.parse().map_err(|_| ParseError::at(line, format!("bad id `{token}`")))
        }
        None => Err(ParseError::at(line, format!("expected a `{want}`-id, got `{token}`"))),
    }
}

/// Witness-map files: a reduction tag and one `map <source> <target> <tag>`
/// line per correspondence. Ids are prefixed `v`/`e`/`a`, `-` for none.
pub fn serialize_witness_map(map: &WitnessMap) -> String {
    let mut out = String::new();
    out.push_str(&format!("r {}\n", map.kind.as_str()));
    for (&src, &tgt) in &map.vertex_out {
        out.push_str(&format!("map {} {} out\n", format_ref('v', src), format_ref('v', tgt)));
    }
    for (&src, &tgt) in &map.vertex_in {
        out.push_str(&format!("map {} {} in\n", format_ref('v', src), format_ref('v', tgt)));
    }
    for (&src, &tgt) in &map.arc_to_edge {
        out.push_str(&format!("map {} {} arc\n", format_ref('a', src), format_ref('e', tgt)));
    }
    for (&src, &tgt) in &map.split_edge {
        out.push_str(&format!("map {} {} split\n", format_ref('v', src), format_ref('e', tgt)));
    }
    for (&src, &tgt) in &map.edge_to_edge {
        out.push_str(&format!("map {} {} edge\n", format_ref('e', src), format_ref('e', tgt)));
    }
    for &v in &map.new_vertices {
        out.push_str(&format!("map - {} new-vertex\n", format_ref('v', v)));
    }
    for &e in &map.new_edges {
        out.push_str(&format!("map - {} new-edge\n", format_ref('e', e)));
    }
    for &e in &map.flipped_edges {
        out.push_str(&format!("map {} {} flipped\n", format_ref('e', e), format_ref('e', e)));
    }
    out
}

pub fn parse_witness_map(text: &str) -> Result<WitnessMap, ParseError> {
    let mut kind: Option<ReductionKind> = None;
    let mut map: Option<WitnessMap> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let tag = match tokens.next() {
            None => continue,
            Some(t) => t,
        };
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "c" => continue,
            "r" => {
                let [kind_s] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `r <reduction-kind>`"));
                };
                let k: ReductionKind =
                    kind_s.parse().map_err(|e: String| ParseError::at(line, e))?;
                kind = Some(k);
                map = Some(WitnessMap::empty(k));
            }
            "map" => {
                let m = map
                    .as_mut()
                    .ok_or_else(|| ParseError::at(line, "map entry before `r` record"))?;
                let [src, tgt, entry_tag] = rest.as_slice() else {
                    return Err(ParseError::at(line, "expected `map <source> <target> <tag>`"));
                };
                match *entry_tag {
                    "out" => {
                        m.vertex_out
                            .insert(parse_ref(src, 'v', line)?, parse_ref(tgt, 'v', line)?);
                    }
                    "in" => {
                        m.vertex_in
                            .insert(parse_ref(src, 'v', line)?, parse_ref(tgt, 'v', line)?);
                    }
                    "arc" => {
                        m.arc_to_edge
                            .insert(parse_ref(src, 'a', line)?, parse_ref(tgt, 'e', line)?);
                    }
                    "split" => {
                        m.split_edge
                            .insert(parse_ref(src, 'v', line)?, parse_ref(tgt, 'e', line)?);
                    }
                    "edge" => {
                        m.edge_to_edge
                            .insert(parse_ref(src, 'e', line)?, parse_ref(tgt, 'e', line)?);
                    }
                    "new-vertex" => m.new_vertices.push(parse_ref(tgt, 'v', line)?),
                    "new-edge" => m.new_edges.push(parse_ref(tgt, 'e', line)?),
                    "flipped" => m.flipped_edges.push(parse_ref(tgt, 'e', line)?),
                    other => {
                        return Err(ParseError::at(line, format!("unknown map tag `{other}`")))
                    }
                }
            }
            other => return Err(ParseError::at(line, format!("unknown record `{other}`"))),
        }
    }
    let _ = kind;
    map.ok_or_else(|| ParseError::at(0, "missing `r <reduction-kind>` record"))
}
