use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use stable_kneser::coloring::erdos_coloring;
use stable_kneser::hypergraph::{is_proper, monochromatic_edge};
use stable_kneser::ilp::{export_ilp as write_model, IlpStats, LpDialect};
use stable_kneser::sets::{count_stable, enumerate_stable};
use stable_kneser::solver::{
    almost_stable_rows, chromatic_number_within, cyclic_table_rows, schrijver_rows,
    verify_table_row, Budget, TableRow,
};
use stable_kneser::tucker::{
    check_zp_properties, find_antipodality_violation, find_complementary_pair, schrijver_witness,
    tucker_color_bound, ChainSampler, SignedLabeling, TuckerParams, WitnessRoute, ZpLabeling,
    ZpReport, PAIR_SEARCH_MAX_N,
};
use stable_kneser::{
    Coloring, Error, KSubset, KneserInstance, SignVector, StabilityVariant, WitnessEdge,
};

use crate::output::{csv, json, Format, Outcome};

type Result<T> = std::result::Result<T, Error>;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn join_sets(sets: &[KSubset]) -> String {
    sets.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct Listing<'a> {
    n: usize,
    k: usize,
    s: usize,
    variant: &'a str,
    count: usize,
    vertices: &'a [KSubset],
}

pub fn enumerate(n: usize, k: usize, variant: StabilityVariant, format: Format) -> Result<Outcome> {
    let sets = enumerate_stable(n, k, variant)?;
    let expected = count_stable(n, k, variant)?;
    if expected != sets.len() as u128 {
        return Err(Error::InvariantViolated(format!(
            "enumeration found {} sets but the closed form gives {expected}",
            sets.len()
        )));
    }
    let body = match format {
        Format::Json => json(&Listing {
            n,
            k,
            s: variant.gap(),
            variant: variant.name(),
            count: sets.len(),
            vertices: &sets,
        }),
        Format::Csv => {
            let rows: Vec<Vec<String>> = sets
                .iter()
                .enumerate()
                .map(|(i, s)| vec![(i + 1).to_string(), s.to_string()])
                .collect();
            csv(&["index", "vertex"], &rows)
        }
        Format::Text => {
            let mut out = String::new();
            for s in &sets {
                writeln!(out, "{s}").unwrap();
            }
            writeln!(out, "count {}", sets.len()).unwrap();
            out
        }
    };
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct ChiRow {
    n: usize,
    k: usize,
    r: usize,
    s: usize,
    variant: &'static str,
    chi: Option<usize>,
    lower: usize,
    upper: usize,
    nodes: u64,
    ms: u64,
}

const CHI_HEADER: [&str; 10] = [
    "n", "k", "r", "s", "variant", "chi", "lower", "upper", "nodes", "ms",
];

impl ChiRow {
    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.r.to_string(),
            self.s.to_string(),
            self.variant.to_string(),
            self.chi.map(|c| c.to_string()).unwrap_or_default(),
            self.lower.to_string(),
            self.upper.to_string(),
            self.nodes.to_string(),
            self.ms.to_string(),
        ]
    }
}

fn solve_row(
    n: usize,
    k: usize,
    r: usize,
    variant: StabilityVariant,
    budget: &Budget,
) -> Result<ChiRow> {
    let start = Instant::now();
    let inst = KneserInstance::new(n, k, r, variant)?;
    let base = |chi, lower, upper, nodes| ChiRow {
        n,
        k,
        r,
        s: variant.gap(),
        variant: variant.name(),
        chi,
        lower,
        upper,
        nodes,
        ms: start.elapsed().as_millis() as u64,
    };
    match chromatic_number_within(&inst, budget) {
        Ok(rep) => Ok(base(rep.chi, rep.lower_bound, rep.upper_bound, rep.nodes)),
        Err(Error::BudgetExceeded {
            reason,
            lower,
            upper,
            nodes,
        }) => {
            eprintln!("budget exceeded for n={n} k={k} r={r} {variant}: {reason}");
            Ok(base(None, lower, upper, nodes))
        }
        Err(e) => Err(e),
    }
}

pub fn chi(
    n: usize,
    k: usize,
    r: usize,
    variant: StabilityVariant,
    budget: &Budget,
    format: Format,
) -> Result<Outcome> {
    let row = solve_row(n, k, r, variant, budget)?;
    let code = if row.chi.is_some() { 0 } else { 3 };
    let body = match format {
        Format::Json => json(&row),
        Format::Csv => csv(&CHI_HEADER, &[row.cells()]),
        Format::Text => match row.chi {
            Some(c) => format!(
                "chi(KG^{r}([{n}],{k}) {variant}) = {c}  ({} nodes, {} ms)\n",
                row.nodes, row.ms
            ),
            None => format!(
                "chi(KG^{r}([{n}],{k}) {variant}) in {}..={}  (budget exhausted after {} nodes)\n",
                row.lower, row.upper, row.nodes
            ),
        },
    };
    Ok(Outcome { body, code })
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSet {
    Table,
    Schrijver,
    Almost,
    All,
}

impl RowSet {
    pub fn rows(self) -> Vec<TableRow> {
        match self {
            RowSet::Table => cyclic_table_rows()
                .into_iter()
                .chain(schrijver_rows())
                .collect(),
            RowSet::Schrijver => schrijver_rows(),
            RowSet::Almost => almost_stable_rows(),
            RowSet::All => cyclic_table_rows()
                .into_iter()
                .chain(schrijver_rows())
                .chain(almost_stable_rows())
                .collect(),
        }
    }
}

/// `k,r,n_max,variant,s` with variant one of almost, cyclic, unrestricted.
pub fn parse_row(spec: &str) -> Result<TableRow> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .ok_or_else(|| invalid(format!("row `{spec}` needs k,r,n_max,variant,s")))?
            .parse()
            .map_err(|_| invalid(format!("row `{spec}`: field {} is not a number", i + 1)))
    };
    let (k, r, n_max) = (num(0)?, num(1)?, num(2)?);
    let variant = match parts.get(3).copied() {
        Some("almost") => StabilityVariant::almost(num(4)?),
        Some("cyclic") => StabilityVariant::cyclic(num(4)?),
        Some("unrestricted") => StabilityVariant::Unrestricted,
        _ => {
            return Err(invalid(format!(
                "row `{spec}`: variant must be almost, cyclic or unrestricted"
            )))
        }
    };
    if parts.len() > 5 {
        return Err(invalid(format!("row `{spec}` has too many fields")));
    }
    Ok(TableRow {
        k,
        r,
        n_max,
        variant,
    })
}

#[derive(Serialize)]
struct TableLine {
    #[serde(flatten)]
    solve: ChiRow,
    formula: usize,
    status: &'static str,
}

pub fn verify_table(rows: &[TableRow], budget: &Budget, format: Format) -> Result<Outcome> {
    let mut lines = Vec::new();
    for row in rows {
        for out in verify_table_row(row, budget)? {
            let solve = match out.result {
                Ok(rep) => ChiRow {
                    n: rep.n,
                    k: rep.k,
                    r: rep.r,
                    s: rep.variant.gap(),
                    variant: rep.variant.name(),
                    chi: rep.chi,
                    lower: rep.lower_bound,
                    upper: rep.upper_bound,
                    nodes: rep.nodes,
                    ms: rep.elapsed.as_millis() as u64,
                },
                Err(Error::BudgetExceeded {
                    lower,
                    upper,
                    nodes,
                    ..
                }) => ChiRow {
                    n: out.n,
                    k: row.k,
                    r: row.r,
                    s: row.variant.gap(),
                    variant: row.variant.name(),
                    chi: None,
                    lower,
                    upper,
                    nodes,
                    ms: 0,
                },
                Err(e) => return Err(e),
            };
            let status = match solve.chi {
                Some(c) if c == out.formula => "match",
                Some(_) => "mismatch",
                None => "budget",
            };
            lines.push(TableLine {
                solve,
                formula: out.formula,
                status,
            });
        }
    }
    let code = if lines.iter().any(|l| l.status == "mismatch") {
        4
    } else if lines.iter().any(|l| l.status == "budget") {
        3
    } else {
        0
    };
    let body = match format {
        Format::Json => json(&lines),
        Format::Csv => {
            let mut header = CHI_HEADER.to_vec();
            header.extend(["formula", "status"]);
            let rows: Vec<Vec<String>> = lines
                .iter()
                .map(|l| {
                    let mut c = l.solve.cells();
                    c.push(l.formula.to_string());
                    c.push(l.status.to_string());
                    c
                })
                .collect();
            csv(&header, &rows)
        }
        Format::Text => {
            let mut out = String::new();
            for l in &lines {
                let s = &l.solve;
                let chi = s
                    .chi
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| format!("{}..={}", s.lower, s.upper));
                writeln!(
                    out,
                    "k={} r={} n={:>2} {} s={}: chi={chi} formula={} {}",
                    s.k, s.r, s.n, s.variant, s.s, l.formula, l.status
                )
                .unwrap();
            }
            let matched = lines.iter().filter(|l| l.status == "match").count();
            writeln!(out, "{matched}/{} match", lines.len()).unwrap();
            out
        }
    };
    Ok(Outcome { body, code })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringChoice {
    Erdos,
    Constant(u32),
    Random(u32),
    Under,
    AllTwoColorings,
}

impl ColoringChoice {
    pub fn parse(s: &str) -> Result<Self> {
        let count = |v: &str| -> Result<u32> {
            v.parse::<u32>()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| invalid(format!("`{s}`: color count must be a positive integer")))
        };
        match s.split_once(':') {
            None if s == "erdos" => Ok(ColoringChoice::Erdos),
            None if s == "under" => Ok(ColoringChoice::Under),
            None if s == "all-2-colorings" => Ok(ColoringChoice::AllTwoColorings),
            Some(("constant", c)) | Some(("all", c)) => Ok(ColoringChoice::Constant(count(c)?)),
            Some(("random", c)) => Ok(ColoringChoice::Random(count(c)?)),
            _ => Err(invalid(format!(
                "unknown coloring `{s}` (erdos, constant:C, random:C, under, all-2-colorings)"
            ))),
        }
    }

    fn label(&self) -> String {
        match self {
            ColoringChoice::Erdos => "erdos".into(),
            ColoringChoice::Constant(c) => format!("constant:{c}"),
            ColoringChoice::Random(c) => format!("random:{c}"),
            ColoringChoice::Under => "under".into(),
            ColoringChoice::AllTwoColorings => "all-2-colorings".into(),
        }
    }

    // `under_colors` is the palette for `Under`, one below the proven bound.
    fn build(
        &self,
        inst: &KneserInstance,
        p: usize,
        under_colors: usize,
        seed: u64,
    ) -> Result<Coloring> {
        match *self {
            ColoringChoice::Erdos => erdos_coloring(inst.n(), inst.k(), p)?.restrict(inst),
            ColoringChoice::Constant(c) => Coloring::constant(inst, c),
            ColoringChoice::Random(c) => Coloring::random(inst, c, seed),
            ColoringChoice::Under => {
                if under_colors == 0 {
                    return Err(invalid("the bound is 1 color; there is nothing below it"));
                }
                Coloring::random(inst, under_colors as u32, seed)
            }
            ColoringChoice::AllTwoColorings => unreachable!("handled separately"),
        }
    }
}

#[derive(Serialize)]
struct SignedSuite {
    colors: u32,
    antipodal: bool,
    complementary_pair: Option<(SignVector, SignVector)>,
    witness: Option<WitnessEdge>,
    route: Option<&'static str>,
}

#[derive(Serialize)]
struct TuckerReport {
    coloring: String,
    proper: bool,
    bound: usize,
    zp: ZpReport,
    direct_witness: Option<WitnessEdge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signed: Option<SignedSuite>,
    alarm: Option<String>,
}

#[derive(Serialize)]
struct ExhaustiveWitnessReport {
    p: usize,
    n: usize,
    k: usize,
    vertices: usize,
    colorings: u64,
    witnesses: u64,
    via_pairs: u64,
    direct: u64,
}

const ALL_COLORINGS_MAX_VERTICES: usize = 20;

fn route_name(route: &WitnessRoute) -> &'static str {
    match route {
        WitnessRoute::ComplementaryPair { .. } => "complementary_pair",
        WitnessRoute::DirectSearch => "direct_search",
    }
}

pub fn tucker(
    p: usize,
    n: usize,
    k: usize,
    choice: &ColoringChoice,
    samples: usize,
    seed: u64,
    format: Format,
) -> Result<Outcome> {
    if *choice == ColoringChoice::AllTwoColorings {
        return all_two_colorings(p, n, k, format);
    }
    let inst = KneserInstance::new(n, k, p, StabilityVariant::almost(2))?;
    let bound = tucker_color_bound(n, k, p);
    let coloring = choice.build(&inst, p, bound - 1, seed)?;
    let params = TuckerParams::new(p, n, k, coloring.num_colors() as usize)?;
    let labeling = ZpLabeling::new(params, &inst, &coloring)?;
    let zp = check_zp_properties(&labeling, ChainSampler::Auto { samples, seed })?;
    let proper = is_proper(&inst, &coloring);
    let direct_witness = monochromatic_edge(&inst, &coloring);

    let mut alarm = None;
    if zp.equivariance_failures > 0 || zp.low_level_failures > 0 {
        alarm = Some("a construction-level property failed".to_string());
    } else if proper && zp.high_level_failures > 0 {
        alarm = Some("a proper coloring produced a violating chain".to_string());
    } else if proper && !zp.conclusion_holds {
        alarm = Some(format!(
            "a proper coloring with {} colors is below the bound {bound}",
            params.colors
        ));
    }

    let signed = if p == 2 && n >= 2 * k && n <= PAIR_SEARCH_MAX_N {
        let cyc = KneserInstance::new(n, k, 2, StabilityVariant::cyclic(2))?;
        let limit = n - 2 * k + 1;
        let c = choice.build(&cyc, 2, limit, seed)?;
        let lab = SignedLabeling::new(&cyc, &c)?;
        let antipodal = find_antipodality_violation(|x| lab.label(x), n)?.is_none();
        if !antipodal && alarm.is_none() {
            alarm = Some("the signed labeling is not antipodal".into());
        }
        let complementary_pair = find_complementary_pair(|x| lab.label(x), n)?;
        let (witness, route) = if c.max_color() as usize <= limit {
            let w = schrijver_witness(&cyc, &c)?;
            (Some(w.witness), Some(route_name(&w.route)))
        } else {
            (None, None)
        };
        Some(SignedSuite {
            colors: c.num_colors(),
            antipodal,
            complementary_pair,
            witness,
            route,
        })
    } else {
        None
    };

    let report = TuckerReport {
        coloring: choice.label(),
        proper,
        bound,
        zp,
        direct_witness,
        signed,
        alarm,
    };
    let code = if report.alarm.is_some() { 4 } else { 0 };
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let z = &report.zp;
            let header = [
                "p",
                "n",
                "k",
                "coloring",
                "colors",
                "proper",
                "mode",
                "vectors",
                "pairs",
                "chains",
                "equivariance_failures",
                "low_level_failures",
                "high_level_failures",
                "witness",
            ];
            let row = vec![
                p.to_string(),
                n.to_string(),
                k.to_string(),
                report.coloring.clone(),
                z.colors.to_string(),
                proper.to_string(),
                z.mode.to_string(),
                z.vectors_checked.to_string(),
                z.pairs_checked.to_string(),
                z.chains_checked.to_string(),
                z.equivariance_failures.to_string(),
                z.low_level_failures.to_string(),
                z.high_level_failures.to_string(),
                z.witness
                    .as_ref()
                    .map(|w| join_sets(&w.vertices))
                    .unwrap_or_default(),
            ];
            csv(&header, &[row])
        }
        Format::Text => tucker_text(p, n, k, &report),
    };
    Ok(Outcome { body, code })
}

fn tucker_text(p: usize, n: usize, k: usize, r: &TuckerReport) -> String {
    let z = &r.zp;
    let mut out = String::new();
    writeln!(
        out,
        "Z_{p} labeling on almost 2-stable {k}-subsets of [{n}], coloring {} ({} colors, {})",
        r.coloring,
        z.colors,
        if r.proper { "proper" } else { "improper" }
    )
    .unwrap();
    writeln!(
        out,
        "  alpha={} m={} bound={} conclusion={}",
        z.alpha, z.m, r.bound, z.conclusion_holds
    )
    .unwrap();
    writeln!(
        out,
        "  {} check: {} vectors, {} pairs, {} chains",
        z.mode, z.vectors_checked, z.pairs_checked, z.chains_checked
    )
    .unwrap();
    writeln!(
        out,
        "  failures: equivariance {}, low-level {}, high-level {}",
        z.equivariance_failures, z.low_level_failures, z.high_level_failures
    )
    .unwrap();
    if let Some(chain) = &z.counterexample {
        let vs: Vec<String> = chain
            .vectors()
            .iter()
            .map(SignVector::to_digit_string)
            .collect();
        writeln!(out, "  violating chain: {}", vs.join(" ⊆ ")).unwrap();
    }
    if let Some(w) = &z.witness {
        writeln!(
            out,
            "  chain witness: {} (color {})",
            join_sets(&w.vertices),
            w.color.unwrap_or(0)
        )
        .unwrap();
    }
    if let Some(w) = &r.direct_witness {
        writeln!(
            out,
            "  direct witness: {} (color {})",
            join_sets(&w.vertices),
            w.color.unwrap_or(0)
        )
        .unwrap();
    }
    if let Some(s) = &r.signed {
        writeln!(
            out,
            "signed labeling on cyclic 2-stable {k}-subsets of [{n}] ({} colors)",
            s.colors
        )
        .unwrap();
        writeln!(out, "  antipodal: {}", s.antipodal).unwrap();
        match &s.complementary_pair {
            Some((a, b)) => writeln!(out, "  complementary pair: {a} ⊆ {b}").unwrap(),
            None => writeln!(out, "  complementary pair: none").unwrap(),
        }
        if let (Some(w), Some(route)) = (&s.witness, s.route) {
            writeln!(
                out,
                "  witness: {} (color {}, {route})",
                join_sets(&w.vertices),
                w.color.unwrap_or(0)
            )
            .unwrap();
        }
    }
    if let Some(a) = &r.alarm {
        writeln!(out, "ALARM: {a}").unwrap();
    }
    out
}

fn all_two_colorings(p: usize, n: usize, k: usize, format: Format) -> Result<Outcome> {
    if p != 2 {
        return Err(invalid(
            "all-2-colorings runs the signed suite and needs p = 2",
        ));
    }
    if n < 2 * k || n - 2 * k + 1 < 2 {
        return Err(invalid(format!(
            "two colors exceed n - 2k + 1 for n={n}, k={k}"
        )));
    }
    let inst = KneserInstance::new(n, k, 2, StabilityVariant::cyclic(2))?;
    if inst.len() > ALL_COLORINGS_MAX_VERTICES {
        return Err(Error::BudgetExceeded {
            reason: format!(
                "{} vertices; all 2-colorings stop at {ALL_COLORINGS_MAX_VERTICES}",
                inst.len()
            ),
            lower: 0,
            upper: 0,
            nodes: 0,
        });
    }
    let total = 1u64 << inst.len();
    let mut report = ExhaustiveWitnessReport {
        p,
        n,
        k,
        vertices: inst.len(),
        colorings: total,
        witnesses: 0,
        via_pairs: 0,
        direct: 0,
    };
    for bits in 0..total {
        let colors = (0..inst.len())
            .map(|i| 1 + (bits >> i & 1) as u32)
            .collect();
        let c = Coloring::new(&inst, colors, 2)?;
        let w = schrijver_witness(&inst, &c)?;
        if !w.witness.certifies(&inst, &c) {
            return Err(Error::InvariantViolated(format!(
                "invalid witness for coloring {bits:b}"
            )));
        }
        report.witnesses += 1;
        match w.route {
            WitnessRoute::ComplementaryPair { .. } => report.via_pairs += 1,
            WitnessRoute::DirectSearch => report.direct += 1,
        }
    }
    let code = if report.witnesses == total { 0 } else { 4 };
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => csv(
            &[
                "p",
                "n",
                "k",
                "vertices",
                "colorings",
                "witnesses",
                "via_pairs",
                "direct",
            ],
            &[vec![
                p.to_string(),
                n.to_string(),
                k.to_string(),
                report.vertices.to_string(),
                total.to_string(),
                report.witnesses.to_string(),
                report.via_pairs.to_string(),
                report.direct.to_string(),
            ]],
        ),
        Format::Text => format!(
            "{}/{} witnesses extracted ({} via complementary pairs, {} by direct search)\n",
            report.witnesses, total, report.via_pairs, report.direct
        ),
    };
    Ok(Outcome { body, code })
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Lpsolve,
    Cplex,
}

#[derive(Serialize)]
struct ExportReport<'a> {
    #[serde(flatten)]
    stats: IlpStats,
    constraints: usize,
    dialect: LpDialect,
    model: Option<&'a str>,
}

#[allow(clippy::too_many_arguments)]
pub fn export_ilp(
    n: usize,
    k: usize,
    r: usize,
    variant: StabilityVariant,
    t: usize,
    dialect: Dialect,
    model: Option<&Path>,
    max_edges: usize,
    format: Format,
) -> Result<Outcome> {
    let inst = KneserInstance::new(n, k, r, variant)?;
    let dialect = match dialect {
        Dialect::Lpsolve => LpDialect::LpSolve,
        Dialect::Cplex => LpDialect::Cplex,
    };
    let Some(path) = model else {
        let mut buf = Vec::new();
        let stats = write_model(&inst, t, dialect, max_edges, &mut buf)?;
        eprintln!(
            "{} variables, {} constraints",
            stats.variables,
            stats.constraints()
        );
        return Ok(Outcome::ok(
            String::from_utf8(buf).expect("models are ASCII"),
        ));
    };
    let mut buf = Vec::new();
    let stats = write_model(&inst, t, dialect, max_edges, &mut buf)?;
    std::fs::write(path, &buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let shown = path.to_string_lossy();
    let report = ExportReport {
        stats,
        constraints: stats.constraints(),
        dialect,
        model: Some(&shown),
    };
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => csv(
            &[
                "variables",
                "constraints",
                "assignment_rows",
                "edge_rows",
                "edges",
                "model",
            ],
            &[vec![
                stats.variables.to_string(),
                stats.constraints().to_string(),
                stats.assignment_rows.to_string(),
                stats.edge_rows.to_string(),
                stats.edges.to_string(),
                shown.to_string(),
            ]],
        ),
        Format::Text => format!(
            "{} variables, {} constraints ({} assignment, {} edge) written to {shown}\n",
            stats.variables,
            stats.constraints(),
            stats.assignment_rows,
            stats.edge_rows
        ),
    };
    Ok(Outcome::ok(body))
}
