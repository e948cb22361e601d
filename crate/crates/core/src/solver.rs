//! Exact chromatic numbers by complete backtracking search.
//!
//! The search assigns colors vertex by vertex. Each unassigned vertex keeps a
//! domain of colors it may still take; color `c` leaves the domain of `w` as
//! soon as class `c` plus `w` would contain `r` pairwise-disjoint members.
//! The next vertex is the one with the fewest admissible colors (ties: higher
//! disjointness degree, then lower colex index), and a vertex may open at
//! most one new color, which removes the permutation symmetry of the palette.

use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::coloring::{erdos_coloring, greedy_coloring};
use crate::error::{Error, Result};
use crate::hypergraph::{first_packing, Coloring, KneserInstance};
use crate::sets::StabilityVariant;

/// Resource limits for exact solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 200,
            max_nodes: None,
            time_limit: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_vertices: usize::MAX,
            max_nodes: None,
            time_limit: None,
        }
    }
}

/// Outcome of [`chromatic_number`].
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub variant: StabilityVariant,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub chi: Option<usize>,
    /// Proper coloring with at most `upper_bound` colors.
    pub witness_coloring: Option<Coloring>,
    pub elapsed: Duration,
    pub nodes: u64,
}

impl Serialize for SolveReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            k: usize,
            r: usize,
            s: usize,
            variant: &'a str,
            chi: Option<usize>,
            lower: usize,
            upper: usize,
            nodes: u64,
            ms: u64,
        }
        Wire {
            n: self.n,
            k: self.k,
            r: self.r,
            s: self.variant.gap(),
            variant: self.variant.name(),
            chi: self.chi,
            lower: self.lower_bound,
            upper: self.upper_bound,
            nodes: self.nodes,
            ms: self.elapsed.as_millis() as u64,
        }
        .serialize(serializer)
    }
}

/// A proper coloring with at most `t` colors, if one exists.
pub fn colorable(instance: &KneserInstance, t: usize) -> Option<Coloring> {
    let mut nodes = 0;
    colorable_within(
        instance,
        t,
        &Budget::unlimited(),
        Instant::now(),
        &mut nodes,
    )
    .expect("unlimited budget cannot run out")
}

/// As [`colorable`], counting search nodes into `nodes` and stopping with
/// [`Error::BudgetExceeded`] when the budget runs out.
pub fn colorable_within(
    instance: &KneserInstance,
    t: usize,
    budget: &Budget,
    start: Instant,
    nodes: &mut u64,
) -> Result<Option<Coloring>> {
    if t == 0 {
        return Ok(if instance.is_empty() {
            Some(Coloring::new(instance, Vec::new(), 1)?)
        } else {
            None
        });
    }
    if instance.len() > budget.max_vertices {
        return Err(budget_error(
            format!(
                "{} vertices exceed the cap of {}",
                instance.len(),
                budget.max_vertices
            ),
            *nodes,
        ));
    }
    // more colors than vertices never helps
    let palette = t.min(instance.len().max(1));
    if palette > MAX_PALETTE {
        return Err(Error::invalid(format!(
            "palettes above {MAX_PALETTE} colors are not supported"
        )));
    }
    let mut search = Search::new(instance, palette, budget, start, *nodes);
    let found = search.run();
    *nodes = search.nodes;
    match found {
        Ok(true) => {
            let colors = search.color.iter().map(|&c| c as u32 + 1).collect();
            Ok(Some(Coloring::new(instance, colors, t as u32)?))
        }
        Ok(false) => Ok(None),
        Err(reason) => Err(budget_error(reason, search.nodes)),
    }
}

fn budget_error(reason: String, nodes: u64) -> Error {
    Error::BudgetExceeded {
        reason,
        lower: 0,
        upper: 0,
        nodes,
    }
}

/// Exact chromatic number with the default budget.
pub fn chromatic_number(instance: &KneserInstance) -> Result<SolveReport> {
    chromatic_number_within(instance, &Budget::default())
}

/// Bounds start at 1 (2 when an edge exists) and at the better of the greedy
/// and block colorings; decision calls at `upper - 1` then close the gap.
pub fn chromatic_number_within(instance: &KneserInstance, budget: &Budget) -> Result<SolveReport> {
    let start = Instant::now();
    if instance.len() > budget.max_vertices {
        return Err(Error::BudgetExceeded {
            reason: format!(
                "{} vertices exceed the cap of {}",
                instance.len(),
                budget.max_vertices
            ),
            lower: 1,
            upper: instance.len().max(1),
            nodes: 0,
        });
    }
    let (n, k, r) = (instance.n(), instance.k(), instance.r());
    let mut lower = if instance.has_edge() { 2 } else { 1 };
    let mut best = greedy_coloring(instance);
    if n >= r * k {
        let block = erdos_coloring(n, k, r)?.restrict(instance)?;
        if block.max_color() < best.max_color() {
            best = block;
        }
    }
    let mut upper = best.max_color().max(1) as usize;
    let mut nodes = 0u64;
    while lower < upper {
        match colorable_within(instance, upper - 1, budget, start, &mut nodes) {
            Ok(Some(c)) => {
                upper = c.max_color() as usize;
                best = c;
            }
            Ok(None) => lower = upper,
            Err(Error::BudgetExceeded { reason, nodes, .. }) => {
                return Err(Error::BudgetExceeded {
                    reason,
                    lower,
                    upper,
                    nodes,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let best = Coloring::new(instance, best.colors().to_vec(), upper as u32)?;
    Ok(SolveReport {
        n,
        k,
        r,
        variant: instance.variant(),
        lower_bound: lower,
        upper_bound: upper,
        chi: Some(upper),
        witness_coloring: Some(best),
        elapsed: start.elapsed(),
        nodes,
    })
}

const MAX_PALETTE: usize = 128;
const UNASSIGNED: u8 = u8::MAX;

struct Search<'a> {
    r: usize,
    palette: usize,
    masks: Vec<u64>,
    disjoint: Vec<Vec<usize>>,
    color: Vec<u8>,
    domain: Vec<u128>,
    classes: Vec<Vec<usize>>,
    trail: Vec<(usize, u128)>,
    used: usize,
    assigned: usize,
    nodes: u64,
    budget: &'a Budget,
    start: Instant,
}

impl<'a> Search<'a> {
    fn new(
        instance: &KneserInstance,
        palette: usize,
        budget: &'a Budget,
        start: Instant,
        nodes: u64,
    ) -> Self {
        let masks: Vec<u64> = instance.vertices().iter().map(|v| v.mask()).collect();
        let disjoint = masks
            .iter()
            .map(|&m| (0..masks.len()).filter(|&j| masks[j] & m == 0).collect())
            .collect();
        let full = if palette == 128 {
            u128::MAX
        } else {
            (1u128 << palette) - 1
        };
        Search {
            r: instance.r(),
            palette,
            color: vec![UNASSIGNED; masks.len()],
            domain: vec![full; masks.len()],
            classes: vec![Vec::new(); palette],
            trail: Vec::new(),
            used: 0,
            assigned: 0,
            nodes,
            masks,
            disjoint,
            budget,
            start,
        }
    }

    fn run(&mut self) -> std::result::Result<bool, String> {
        self.descend()
    }

    fn admissible(&self, v: usize) -> u32 {
        let low = if self.used == 128 {
            u128::MAX
        } else {
            (1u128 << self.used) - 1
        };
        (self.domain[v] & low).count_ones() + u32::from(self.used < self.palette)
    }

    fn pick(&self) -> Option<usize> {
        (0..self.masks.len())
            .filter(|&v| self.color[v] == UNASSIGNED)
            .min_by_key(|&v| {
                (
                    self.admissible(v),
                    std::cmp::Reverse(self.disjoint[v].len()),
                    v,
                )
            })
    }

    fn tick(&mut self) -> std::result::Result<(), String> {
        self.nodes += 1;
        if let Some(cap) = self.budget.max_nodes {
            if self.nodes > cap {
                return Err(format!("node cap of {cap} reached"));
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes & 0xfff == 0 && self.start.elapsed() > limit {
                return Err(format!("time limit of {} ms reached", limit.as_millis()));
            }
        }
        Ok(())
    }

    fn descend(&mut self) -> std::result::Result<bool, String> {
        if self.assigned == self.masks.len() {
            return Ok(true);
        }
        self.tick()?;
        let v = match self.pick() {
            Some(v) => v,
            None => return Ok(true),
        };
        let mut candidates: Vec<usize> = (0..self.used)
            .filter(|&c| self.domain[v] >> c & 1 == 1)
            .collect();
        if self.used < self.palette {
            candidates.push(self.used);
        }
        for c in candidates {
            let mark = self.trail.len();
            let opened = c == self.used;
            self.color[v] = c as u8;
            self.assigned += 1;
            self.classes[c].push(v);
            if opened {
                self.used += 1;
            }
            if self.propagate(v, c) && self.descend()? {
                return Ok(true);
            }
            while self.trail.len() > mark {
                let (w, d) = self.trail.pop().expect("trail above mark");
                self.domain[w] = d;
            }
            if opened {
                self.used -= 1;
            }
            self.classes[c].pop();
            self.assigned -= 1;
            self.color[v] = UNASSIGNED;
        }
        Ok(false)
    }

    // Removes `c` from every domain it can no longer enter; false on wipe-out.
    fn propagate(&mut self, v: usize, c: usize) -> bool {
        let bit = 1u128 << c;
        for idx in 0..self.disjoint[v].len() {
            let w = self.disjoint[v][idx];
            if self.color[w] != UNASSIGNED || self.domain[w] & bit == 0 {
                continue;
            }
            if self.closes_edge(v, w, c) {
                self.trail.push((w, self.domain[w]));
                self.domain[w] &= !bit;
                if self.admissible(w) == 0 {
                    return false;
                }
            }
        }
        true
    }

    // Would `w` joining class `c` (which now holds `v`) complete an edge?
    fn closes_edge(&self, v: usize, w: usize, c: usize) -> bool {
        if self.r == 2 {
            return true;
        }
        let blocked = self.masks[v] | self.masks[w];
        let others: Vec<u64> = self.classes[c]
            .iter()
            .filter(|&&u| u != v && self.masks[u] & blocked == 0)
            .map(|&u| self.masks[u])
            .collect();
        first_packing(&others, self.r - 2, blocked).is_some()
    }
}

/// One line of a verification table: all `n` from `rk` to `n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: usize,
    pub r: usize,
    pub n_max: usize,
    pub variant: StabilityVariant,
}

impl TableRow {
    pub fn cyclic(k: usize, r: usize, n_max: usize, s: usize) -> Self {
        TableRow {
            k,
            r,
            n_max,
            variant: StabilityVariant::cyclic(s),
        }
    }
}

/// The six computer-checked rows: cyclic `r`-stable, `r` in {3, 5}.
pub fn cyclic_table_rows() -> Vec<TableRow> {
    vec![
        TableRow::cyclic(2, 3, 9, 3),
        TableRow::cyclic(3, 3, 12, 3),
        TableRow::cyclic(4, 3, 14, 3),
        TableRow::cyclic(2, 5, 13, 5),
        TableRow::cyclic(3, 5, 16, 5),
        TableRow::cyclic(4, 5, 21, 5),
    ]
}

/// Schrijver graphs: cyclic 2-stable, `r = 2`, `k <= 3`, `n <= 10`.
pub fn schrijver_rows() -> Vec<TableRow> {
    (1..=3).map(|k| TableRow::cyclic(k, 2, 10, 2)).collect()
}

/// Almost 2-stable rows at prime uniformity 2 and 3.
pub fn almost_stable_rows() -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = (1..=3)
        .map(|k| TableRow {
            k,
            r: 2,
            n_max: 9,
            variant: StabilityVariant::almost(2),
        })
        .collect();
    rows.push(TableRow {
        k: 2,
        r: 3,
        n_max: 10,
        variant: StabilityVariant::almost(2),
    });
    rows
}

#[derive(Debug)]
pub struct RowOutcome {
    pub n: usize,
    pub formula: usize,
    pub result: Result<SolveReport>,
}

impl RowOutcome {
    pub fn matches(&self) -> bool {
        matches!(&self.result, Ok(rep) if rep.chi == Some(self.formula))
    }
}

/// Solves every `n` in `rk..=n_max` and pairs it with the formula value.
/// Budget failures are recorded per entry and do not stop the sweep.
pub fn verify_table_row(row: &TableRow, budget: &Budget) -> Result<Vec<RowOutcome>> {
    let TableRow {
        k,
        r,
        n_max,
        variant,
    } = *row;
    if n_max < r * k {
        return Err(Error::invalid(format!(
            "row needs n_max >= rk = {}, got {n_max}",
            r * k
        )));
    }
    (r * k..=n_max)
        .map(|n| {
            let formula = crate::coloring::chi_formula(n, k, r)?;
            let result = KneserInstance::new(n, k, r, variant)
                .and_then(|inst| chromatic_number_within(&inst, budget));
            Ok(RowOutcome { n, formula, result })
        })
        .collect()
}
