//! Tucker-type labelings built from colorings, and the searches that turn
//! their combinatorial properties into monochromatic edges.
//!
//! Two labelings live here.
//!
//! * [`ZpLabeling`] maps a non-zero `X ∈ (Z_p ∪ {0})^n` to a pair
//!   `(part, level)`. With `α = p(k-1)`: if `alt(X) <= α` the label is the
//!   first non-zero exponent of `X` with level `alt(X)`; otherwise the
//!   colex-smallest almost 2-stable k-subset `S` lying inside one part `X_j`
//!   gives `(j, c(S) + α)`. A coloring with `C` colors yields levels in
//!   `[α + C]`.
//! * [`SignedLabeling`] is the `p = 2` variant on cyclically 2-stable sets,
//!   with values `±alt(X)` below `2k` and `±(c(S) + 2k - 1)` above, the sign
//!   telling which of `X+` and `X-` holds `S`.
//!
//! For a proper coloring the `Z_p` labeling is equivariant, agrees on parts
//! along nested pairs with equal low level, and never shows `p` pairwise
//! distinct parts along a nested `p`-chain with equal high level. Any chain
//! breaking the last rule exposes `p` disjoint vertices of one color.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{monochromatic_edge, Coloring, KneserInstance, WitnessEdge};
use crate::sets::{KSubset, StabilityVariant};
use crate::sign::SignVector;

/// Largest `n` for which exhaustive chain checks are run.
pub const EXHAUSTIVE_CHAIN_MAX_N: usize = 7;
/// Largest `n` for which complementary pairs are searched exhaustively.
pub const PAIR_SEARCH_MAX_N: usize = 13;

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TuckerParams {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    pub colors: usize,
}

impl TuckerParams {
    pub fn new(p: usize, n: usize, k: usize, colors: usize) -> Result<Self> {
        if !is_prime(p) || p > 7 {
            return Err(Error::invalid(format!(
                "p={p} must be a prime no larger than 7"
            )));
        }
        if k == 0 || k > n || n > 64 {
            return Err(Error::invalid(format!(
                "need 1 <= k <= n <= 64, got n={n}, k={k}"
            )));
        }
        if colors == 0 {
            return Err(Error::invalid("at least one color is needed"));
        }
        Ok(TuckerParams { p, n, k, colors })
    }

    pub fn alpha(&self) -> usize {
        self.p * (self.k - 1)
    }

    pub fn m(&self) -> usize {
        self.alpha() + self.colors
    }
}

/// `α + (m - α)(p - 1) >= n`, the inequality any labeling with both chain
/// properties must satisfy. When it fails, no proper coloring with
/// `params.colors` colors exists.
pub fn zp_tucker_conclusion(params: &TuckerParams) -> bool {
    params.alpha() + (params.m() - params.alpha()) * (params.p - 1) >= params.n
}

/// Smallest number of colors allowed by [`zp_tucker_conclusion`]:
/// `⌈(n - (k-1)p) / (p-1)⌉`, clamped at 1.
pub fn tucker_color_bound(n: usize, k: usize, p: usize) -> usize {
    let alpha = p * (k - 1);
    if n <= alpha {
        1
    } else {
        (n - alpha).div_ceil(p - 1).max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LambdaLabel {
    pub part: usize,
    pub level: usize,
}

/// Colex-smallest subset of `mask` with `k` elements pairwise at linear
/// distance >= 2. Leftmost greedy choice minimises every position at once.
fn smallest_spread_subset(mask: u64, k: usize) -> Option<u64> {
    let mut chosen = 0u64;
    let mut count = 0;
    let mut last: Option<u32> = None;
    let mut rest = mask;
    while rest != 0 && count < k {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        if last.is_none_or(|l| bit >= l + 2) {
            chosen |= 1u64 << bit;
            count += 1;
            last = Some(bit);
        }
    }
    (count == k).then_some(chosen)
}

/// The `Z_p` labeling for a coloring of the almost 2-stable k-subsets.
#[derive(Clone, Copy, Debug)]
pub struct ZpLabeling<'a> {
    params: TuckerParams,
    instance: &'a KneserInstance,
    coloring: &'a Coloring,
}

impl<'a> ZpLabeling<'a> {
    /// `instance` must be `V(n, k, 2)` (almost 2-stable) and the coloring may
    /// use at most `params.colors` colors.
    pub fn new(
        params: TuckerParams,
        instance: &'a KneserInstance,
        coloring: &'a Coloring,
    ) -> Result<Self> {
        if instance.variant() != StabilityVariant::almost(2) {
            return Err(Error::invalid(
                "the Z_p labeling needs the almost 2-stable vertex set",
            ));
        }
        if instance.n() != params.n || instance.k() != params.k {
            return Err(Error::invalid("instance and parameters disagree on (n, k)"));
        }
        if coloring.colors().len() != instance.len() {
            return Err(Error::invalid("coloring does not match instance"));
        }
        if coloring.max_color() as usize > params.colors {
            return Err(Error::invalid(format!(
                "coloring uses color {} but only {} are allowed",
                coloring.max_color(),
                params.colors
            )));
        }
        Ok(ZpLabeling {
            params,
            instance,
            coloring,
        })
    }

    pub fn params(&self) -> &TuckerParams {
        &self.params
    }

    pub fn label(&self, x: &SignVector) -> Result<LambdaLabel> {
        self.label_with_source(x).map(|(l, _)| l)
    }

    /// The label together with the vertex that determined it (high levels).
    pub fn label_with_source(&self, x: &SignVector) -> Result<(LambdaLabel, Option<KSubset>)> {
        if x.p() != self.params.p || x.len() != self.params.n {
            return Err(Error::ShapeMismatch(format!(
                "expected p={}, n={}; got p={}, n={}",
                self.params.p,
                self.params.n,
                x.p(),
                x.len()
            )));
        }
        let (_, first) = x
            .first_nonzero()
            .ok_or_else(|| Error::invalid("the labeling is undefined on the zero vector"))?;
        let alt = x.alt();
        let alpha = self.params.alpha();
        if alt <= alpha {
            return Ok((
                LambdaLabel {
                    part: first as usize,
                    level: alt,
                },
                None,
            ));
        }
        let best = (1..=self.params.p)
            .filter_map(|j| smallest_spread_subset(x.part_mask(j), self.params.k).map(|m| (m, j)))
            .min();
        let (mask, part) = best.ok_or_else(|| {
            Error::invariant(format!(
                "alt({x}) = {alt} > {alpha} but no part holds an almost 2-stable {}-subset",
                self.params.k
            ))
        })?;
        let set = KSubset::from_mask(self.params.n, mask)?;
        let color = self
            .coloring
            .color_of(self.instance, &set)
            .ok_or_else(|| Error::invariant(format!("{set} is not a vertex of the instance")))?;
        Ok((
            LambdaLabel {
                part,
                level: color as usize + alpha,
            },
            Some(set),
        ))
    }
}

/// One-shot form of [`ZpLabeling::label`].
pub fn lambda_zp(
    x: &SignVector,
    params: TuckerParams,
    instance: &KneserInstance,
    coloring: &Coloring,
) -> Result<LambdaLabel> {
    ZpLabeling::new(params, instance, coloring)?.label(x)
}

/// Nested non-zero sign vectors `X(1) ⊆ X(2) ⊆ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Chain(Vec<SignVector>);

impl Chain {
    pub fn new(vectors: Vec<SignVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("a chain needs at least one vector"));
        }
        if vectors[0].is_zero() {
            return Err(Error::invalid("chain vectors must be non-zero"));
        }
        for w in vectors.windows(2) {
            if !w[0].is_subvector(&w[1])? {
                return Err(Error::invalid(format!(
                    "{} is not a subvector of {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Chain(vectors))
    }

    pub fn vectors(&self) -> &[SignVector] {
        &self.0
    }
}

/// How chains are produced for [`check_zp_properties`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainSampler {
    /// Every nested pair and every nested `p`-chain. Needs `n <= 7`.
    Exhaustive,
    /// Seeded random `p`-chains.
    Random { samples: usize, seed: u64 },
    /// Exhaustive for `n <= 7`, random otherwise.
    Auto { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ZpReport {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    pub colors: usize,
    pub alpha: usize,
    pub m: usize,
    pub mode: &'static str,
    pub vectors_checked: u64,
    pub pairs_checked: u64,
    pub chains_checked: u64,
    pub equivariance_failures: u64,
    pub low_level_failures: u64,
    pub high_level_failures: u64,
    /// First `p`-chain with equal high levels and pairwise distinct parts.
    pub counterexample: Option<Chain>,
    /// The monochromatic edge read off `counterexample`.
    pub witness: Option<WitnessEdge>,
    pub conclusion_holds: bool,
}

impl ZpReport {
    pub fn all_hold(&self) -> bool {
        self.equivariance_failures == 0
            && self.low_level_failures == 0
            && self.high_level_failures == 0
    }
}

/// Checks equivariance and both chain properties of the labeling on the
/// chains produced by `sampler`.
pub fn check_zp_properties(labeling: &ZpLabeling<'_>, sampler: ChainSampler) -> Result<ZpReport> {
    let params = *labeling.params();
    let mut report = ZpReport {
        p: params.p,
        n: params.n,
        k: params.k,
        colors: params.colors,
        alpha: params.alpha(),
        m: params.m(),
        conclusion_holds: zp_tucker_conclusion(&params),
        ..ZpReport::default()
    };
    let exhaustive = match sampler {
        ChainSampler::Exhaustive => {
            if params.n > EXHAUSTIVE_CHAIN_MAX_N {
                return Err(Error::BudgetExceeded {
                    reason: format!(
                        "exhaustive chain checks stop at n = {EXHAUSTIVE_CHAIN_MAX_N}, got {}",
                        params.n
                    ),
                    lower: 0,
                    upper: 0,
                    nodes: 0,
                });
            }
            None
        }
        ChainSampler::Random { samples, seed } => Some((samples, seed)),
        ChainSampler::Auto { samples, seed } => {
            (params.n > EXHAUSTIVE_CHAIN_MAX_N).then_some((samples, seed))
        }
    };
    match exhaustive {
        None => {
            report.mode = "exhaustive";
            exhaustive_check(labeling, &mut report)?;
        }
        Some((samples, seed)) => {
            report.mode = "random";
            random_check(labeling, samples, seed, &mut report)?;
        }
    }
    if let Some(chain) = &report.counterexample {
        report.witness = Some(witness_from_chain(labeling, chain)?);
    }
    Ok(report)
}

/// Reads `p` disjoint same-colored vertices off a chain whose labels share
/// one high level and have pairwise distinct parts.
pub fn witness_from_chain(labeling: &ZpLabeling<'_>, chain: &Chain) -> Result<WitnessEdge> {
    let mut sets = Vec::with_capacity(chain.0.len());
    let mut color = None;
    for x in &chain.0 {
        let (label, source) = labeling.label_with_source(x)?;
        let set = source.ok_or_else(|| Error::invalid(format!("{x} has a low-level label")))?;
        let c = label.level - labeling.params().alpha();
        if color.is_some_and(|prev| prev != c) {
            return Err(Error::invalid("chain labels do not share one level"));
        }
        color = Some(c);
        sets.push(set);
    }
    let witness = WitnessEdge {
        vertices: sets,
        color: color.map(|c| c as u32),
    };
    if !witness.is_pairwise_disjoint() {
        return Err(Error::invariant(format!(
            "chain {:?} yields overlapping vertices {:?}",
            chain.0, witness.vertices
        )));
    }
    Ok(witness)
}

// Vectors of length n over {0..p} indexed in base p + 1, coordinate i at
// weight (p + 1)^i.
struct VectorTable {
    p: usize,
    n: usize,
    pow: Vec<usize>,
}

impl VectorTable {
    fn new(p: usize, n: usize) -> Self {
        let pow = (0..=n).map(|i| (p + 1).pow(i as u32)).collect();
        VectorTable { p, n, pow }
    }

    fn size(&self) -> usize {
        self.pow[self.n]
    }

    fn vector(&self, mut idx: usize) -> SignVector {
        let entries = (0..self.n)
            .map(|_| {
                let d = (idx % (self.p + 1)) as u8;
                idx /= self.p + 1;
                d
            })
            .collect();
        SignVector::from_raw(self.p, entries)
    }

    fn shifted(&self, mut idx: usize, a: usize) -> usize {
        let mut out = 0;
        for i in 0..self.n {
            let d = idx % (self.p + 1);
            idx /= self.p + 1;
            if d != 0 {
                out += ((d - 1 + a) % self.p + 1) * self.pow[i];
            }
        }
        out
    }
}

const NO_LABEL: (u8, u16) = (0, 0);

fn label_table(labeling: &ZpLabeling<'_>, table: &VectorTable) -> Result<Vec<(u8, u16)>> {
    (0..table.size())
        .into_par_iter()
        .map(|idx| {
            if idx == 0 {
                return Ok(NO_LABEL);
            }
            let l = labeling.label(&table.vector(idx))?;
            Ok((l.part as u8, l.level as u16))
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    chains: u64,
    low: u64,
    high: u64,
    first_high: Option<Vec<usize>>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.chains += other.chains;
        self.low += other.low;
        self.high += other.high;
        if self.first_high.is_none() {
            self.first_high = other.first_high;
        }
        self
    }
}

fn exhaustive_check(labeling: &ZpLabeling<'_>, report: &mut ZpReport) -> Result<()> {
    let params = *labeling.params();
    let (p, n, alpha) = (params.p, params.n, params.alpha());
    let table = VectorTable::new(p, n);
    let labels = label_table(labeling, &table)?;

    let equivariance_failures: u64 = (1..table.size())
        .into_par_iter()
        .map(|idx| {
            let (part, level) = labels[idx];
            (1..p)
                .filter(|&a| {
                    let (sp, sl) = labels[table.shifted(idx, a)];
                    sl != level || sp as usize != (part as usize - 1 + a) % p + 1
                })
                .count() as u64
        })
        .sum();
    report.vectors_checked = table.size() as u64 - 1;
    report.equivariance_failures = equivariance_failures;

    // A coordinate of a nested chain of length `len` is either 0 throughout
    // or takes value v from position `from` onwards.
    let states = |len: usize| -> Vec<(usize, usize)> {
        let mut s = vec![(0, 0)];
        for v in 1..=p {
            for from in 0..len {
                s.push((v, from));
            }
        }
        s
    };

    let pair_states = states(2);
    let chain_states = states(p);

    // Split on the last coordinate so that the merged order is the
    // sequential order.
    let pair_tally = pair_states
        .par_iter()
        .map(|&top| {
            let mut tally = Tally::default();
            let mut idx = vec![0usize; 2];
            apply_state(&mut idx, top, table.pow[n - 1], 1);
            walk(&pair_states, &table.pow, n - 1, &mut idx, &mut |ix| {
                if ix[0] == 0 {
                    return;
                }
                tally.pairs += 1;
                let (a, b) = (labels[ix[0]], labels[ix[1]]);
                if a.1 == b.1 && (a.1 as usize) <= alpha && a.0 != b.0 {
                    tally.low += 1;
                }
            });
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);

    let chain_tally = chain_states
        .par_iter()
        .map(|&top| {
            let mut tally = Tally::default();
            let mut idx = vec![0usize; p];
            apply_state(&mut idx, top, table.pow[n - 1], 1);
            walk(&chain_states, &table.pow, n - 1, &mut idx, &mut |ix| {
                if ix[0] == 0 {
                    return;
                }
                tally.chains += 1;
                let level = labels[ix[0]].1;
                if (level as usize) <= alpha || ix.iter().any(|&i| labels[i].1 != level) {
                    return;
                }
                let mut seen = 0u32;
                for &i in ix.iter() {
                    seen |= 1 << labels[i].0;
                }
                if seen.count_ones() as usize == p {
                    tally.high += 1;
                    if tally.first_high.is_none() {
                        tally.first_high = Some(ix.to_vec());
                    }
                }
            });
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);

    report.pairs_checked = pair_tally.pairs;
    report.low_level_failures = pair_tally.low;
    report.chains_checked = chain_tally.chains;
    report.high_level_failures = chain_tally.high;
    if let Some(ix) = chain_tally.first_high {
        report.counterexample = Some(Chain::new(ix.iter().map(|&i| table.vector(i)).collect())?);
    }
    Ok(())
}

fn apply_state(idx: &mut [usize], (v, from): (usize, usize), weight: usize, sign: isize) {
    if v == 0 {
        return;
    }
    for slot in idx.iter_mut().skip(from) {
        *slot = (*slot as isize + sign * (v * weight) as isize) as usize;
    }
}

fn walk(
    states: &[(usize, usize)],
    pow: &[usize],
    coords: usize,
    idx: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if coords == 0 {
        visit(idx);
        return;
    }
    let weight = pow[coords - 1];
    for &st in states {
        apply_state(idx, st, weight, 1);
        walk(states, pow, coords - 1, idx, visit);
        apply_state(idx, st, weight, -1);
    }
}

fn random_chain(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Vec<SignVector> {
    loop {
        let top: Vec<u8> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.85) {
                    rng.gen_range(1..=p as u8)
                } else {
                    0
                }
            })
            .collect();
        let mut chain = vec![top];
        for _ in 1..p {
            let prev = chain.last().expect("non-empty");
            let next = prev
                .iter()
                .map(|&e| if e != 0 && rng.gen_bool(0.85) { e } else { 0 })
                .collect();
            chain.push(next);
        }
        chain.reverse();
        if chain[0].iter().any(|&e| e != 0) {
            return chain
                .into_iter()
                .map(|e| SignVector::from_raw(p, e))
                .collect();
        }
    }
}

fn random_check(
    labeling: &ZpLabeling<'_>,
    samples: usize,
    seed: u64,
    report: &mut ZpReport,
) -> Result<()> {
    let params = *labeling.params();
    let (p, n, alpha) = (params.p, params.n, params.alpha());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains: Vec<(Vec<SignVector>, usize)> = (0..samples)
        .map(|_| {
            let chain = random_chain(&mut rng, p, n);
            let shift = rng.gen_range(1..p.max(2));
            (chain, shift)
        })
        .collect();

    struct Outcome {
        equivariance: u64,
        low: u64,
        pairs: u64,
        high: bool,
    }
    let outcomes: Vec<Outcome> = chains
        .par_iter()
        .map(|(chain, shift)| -> Result<Outcome> {
            let labels: Vec<LambdaLabel> = chain
                .iter()
                .map(|x| labeling.label(x))
                .collect::<Result<_>>()?;
            let mut equivariance = 0;
            for (x, l) in chain.iter().zip(&labels) {
                let s = labeling.label(&x.omega_shift(*shift))?;
                if s.level != l.level || s.part != (l.part - 1 + shift) % p + 1 {
                    equivariance += 1;
                }
            }
            let mut low = 0;
            let mut pairs = 0;
            for i in 0..labels.len() {
                for j in i + 1..labels.len() {
                    pairs += 1;
                    let (a, b) = (labels[i], labels[j]);
                    if a.level == b.level && a.level <= alpha && a.part != b.part {
                        low += 1;
                    }
                }
            }
            let level = labels[0].level;
            let high = level > alpha
                && labels.iter().all(|l| l.level == level)
                && labels
                    .iter()
                    .map(|l| 1u32 << l.part)
                    .fold(0, |a, b| a | b)
                    .count_ones() as usize
                    == p;
            Ok(Outcome {
                equivariance,
                low,
                pairs,
                high,
            })
        })
        .collect::<Result<_>>()?;

    report.vectors_checked = (samples * p) as u64;
    report.chains_checked = samples as u64;
    for (i, o) in outcomes.iter().enumerate() {
        report.equivariance_failures += o.equivariance;
        report.low_level_failures += o.low;
        report.pairs_checked += o.pairs;
        if o.high {
            report.high_level_failures += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(Chain::new(chains[i].0.clone())?);
            }
        }
    }
    Ok(())
}

/// The signed (`p = 2`) labeling on cyclically 2-stable k-subsets.
#[derive(Clone, Copy, Debug)]
pub struct SignedLabeling<'a> {
    instance: &'a KneserInstance,
    coloring: &'a Coloring,
}

impl<'a> SignedLabeling<'a> {
    /// `instance` must be the cyclically 2-stable k-subsets of `[n]`.
    pub fn new(instance: &'a KneserInstance, coloring: &'a Coloring) -> Result<Self> {
        if instance.variant() != StabilityVariant::cyclic(2) {
            return Err(Error::invalid(
                "the signed labeling needs the cyclic 2-stable vertex set",
            ));
        }
        if coloring.colors().len() != instance.len() {
            return Err(Error::invalid("coloring does not match instance"));
        }
        Ok(SignedLabeling { instance, coloring })
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn label(&self, x: &SignVector) -> Result<i32> {
        self.label_with_source(x).map(|(l, _)| l)
    }

    /// Ties between sources go to the smaller color, then the colex-smaller
    /// set; a set lies in at most one of `X+` and `X-`.
    pub fn label_with_source(&self, x: &SignVector) -> Result<(i32, Option<KSubset>)> {
        if x.p() != 2 || x.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "expected a signed vector of length {}, got p={}, n={}",
                self.n(),
                x.p(),
                x.len()
            )));
        }
        let (_, first) = x
            .first_nonzero()
            .ok_or_else(|| Error::invalid("the labeling is undefined on the zero vector"))?;
        let sign = |entry: u8| if entry == 1 { 1 } else { -1 };
        let k = self.instance.k();
        let alt = x.alt();
        if alt < 2 * k {
            return Ok((sign(first) * alt as i32, None));
        }
        let (plus, minus) = (x.part_mask(1), x.part_mask(2));
        let best = self
            .instance
            .vertices()
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                if s.is_within(plus) {
                    Some((self.coloring.color(i), *s, 1))
                } else if s.is_within(minus) {
                    Some((self.coloring.color(i), *s, -1))
                } else {
                    None
                }
            })
            .min_by_key(|&(c, s, _)| (c, s));
        let (color, set, sgn) = best.ok_or_else(|| {
            Error::invariant(format!(
                "alt({x}) = {alt} >= {} but neither sign class holds a cyclic 2-stable {k}-subset",
                2 * k
            ))
        })?;
        Ok((sgn * (color as i32 + 2 * k as i32 - 1), Some(set)))
    }
}

pub fn lambda_signed(
    x: &SignVector,
    instance: &KneserInstance,
    coloring: &Coloring,
) -> Result<i32> {
    SignedLabeling::new(instance, coloring)?.label(x)
}

// {+,-,0}^n in base 3: digit 1 is '+', digit 2 is '-'.
fn signed_vector(n: usize, mut idx: usize) -> SignVector {
    let entries = (0..n)
        .map(|_| {
            let d = (idx % 3) as u8;
            idx /= 3;
            d
        })
        .collect();
    SignVector::from_raw(2, entries)
}

fn signed_table<F>(lambda: &F, n: usize) -> Result<Vec<i32>>
where
    F: Fn(&SignVector) -> Result<i32> + Sync,
{
    (0..3usize.pow(n as u32))
        .into_par_iter()
        .map(|idx| {
            if idx == 0 {
                Ok(0)
            } else {
                lambda(&signed_vector(n, idx))
            }
        })
        .collect()
}

fn check_pair_budget(n: usize) -> Result<()> {
    if n == 0 || n > PAIR_SEARCH_MAX_N {
        return Err(Error::BudgetExceeded {
            reason: format!(
                "exhaustive signed search needs 1 <= n <= {PAIR_SEARCH_MAX_N}, got {n}"
            ),
            lower: 0,
            upper: 0,
            nodes: 0,
        });
    }
    Ok(())
}

/// First `X` (in base-3 index order) with `λ(-X) != -λ(X)`.
pub fn find_antipodality_violation<F>(lambda: F, n: usize) -> Result<Option<SignVector>>
where
    F: Fn(&SignVector) -> Result<i32> + Sync,
{
    check_pair_budget(n)?;
    let table = signed_table(&lambda, n)?;
    let neg = |idx: usize| -> usize {
        let (mut i, mut out, mut w) = (idx, 0, 1);
        while i > 0 {
            let d = i % 3;
            out += [0, 2, 1][d] * w;
            i /= 3;
            w *= 3;
        }
        out
    };
    Ok((1..table.len())
        .into_par_iter()
        .find_first(|&i| table[neg(i)] != -table[i])
        .map(|i| signed_vector(n, i)))
}

/// Exhaustive search for `A ⊆ B` with `λ(A) = -λ(B)`.
///
/// `B` runs over non-zero vectors in base-3 index order and `A` over the
/// non-zero subvectors of `B` in increasing support-subset order; the first
/// hit is returned.
pub fn find_complementary_pair<F>(lambda: F, n: usize) -> Result<Option<(SignVector, SignVector)>>
where
    F: Fn(&SignVector) -> Result<i32> + Sync,
{
    check_pair_budget(n)?;
    let table = signed_table(&lambda, n)?;
    let pow: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    let hit = (1..table.len()).into_par_iter().find_map_first(|b| {
        let target = -table[b];
        let mut weights = Vec::with_capacity(n);
        let mut rest = b;
        for &w in &pow {
            let d = rest % 3;
            rest /= 3;
            if d != 0 {
                weights.push(d * w);
            }
        }
        let full = (1u32 << weights.len()) - 1;
        (1..=full).find_map(|sub| {
            let a: usize = weights
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 1)
                .map(|(_, &w)| w)
                .sum();
            (table[a] == target).then_some((a, b))
        })
    });
    Ok(hit.map(|(a, b)| (signed_vector(n, a), signed_vector(n, b))))
}

/// How a [`schrijver_witness`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum WitnessRoute {
    ComplementaryPair { a: SignVector, b: SignVector },
    DirectSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchrijverWitness {
    pub witness: WitnessEdge,
    #[serde(flatten)]
    pub route: WitnessRoute,
}

/// Two disjoint same-colored vertices for a coloring of the cyclically
/// 2-stable k-subsets of `[n]` with at most `n - 2k + 1` colors.
///
/// The complementary pair of the signed labeling is tried first; its two
/// source sets are disjoint and share a color. If no pair exists, or `n` is
/// beyond the exhaustive range, a direct monochromatic-edge search is used.
pub fn schrijver_witness(
    instance: &KneserInstance,
    coloring: &Coloring,
) -> Result<SchrijverWitness> {
    let (n, k) = (instance.n(), instance.k());
    if instance.r() != 2 {
        return Err(Error::invalid("Schrijver witnesses live in graphs (r = 2)"));
    }
    if n < 2 * k {
        return Err(Error::invalid(format!("need n >= 2k, got n={n}, k={k}")));
    }
    let limit = n - 2 * k + 1;
    if coloring.max_color() as usize > limit {
        return Err(Error::invalid(format!(
            "coloring uses color {} but at most n - 2k + 1 = {limit} are allowed",
            coloring.max_color()
        )));
    }
    let labeling = SignedLabeling::new(instance, coloring)?;
    if n <= PAIR_SEARCH_MAX_N {
        if let Some((a, b)) = find_complementary_pair(|x| labeling.label(x), n)? {
            let (la, sa) = labeling.label_with_source(&a)?;
            let (lb, sb) = labeling.label_with_source(&b)?;
            let (sa, sb) = match (sa, sb) {
                (Some(sa), Some(sb)) => (sa, sb),
                _ => {
                    return Err(Error::invariant(format!(
                        "complementary pair {a} ⊆ {b} with low labels {la}, {lb}"
                    )))
                }
            };
            let ca = coloring.color_of(instance, &sa);
            let cb = coloring.color_of(instance, &sb);
            if !sa.is_disjoint(&sb) || ca != cb {
                return Err(Error::invariant(format!(
                    "complementary pair {a} ⊆ {b} gives {sa} and {sb}, not a monochromatic edge"
                )));
            }
            let mut vertices = vec![sa, sb];
            vertices.sort();
            return Ok(SchrijverWitness {
                witness: WitnessEdge {
                    vertices,
                    color: ca,
                },
                route: WitnessRoute::ComplementaryPair { a, b },
            });
        }
    }
    let witness = monochromatic_edge(instance, coloring).ok_or_else(|| {
        Error::invariant(format!(
            "a proper coloring of the cyclic 2-stable {k}-subsets of [{n}] with {limit} colors"
        ))
    })?;
    Ok(SchrijverWitness {
        witness,
        route: WitnessRoute::DirectSearch,
    })
}
