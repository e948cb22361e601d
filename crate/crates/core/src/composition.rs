//! Composite uniformities from prime ones.
//!
//! If every coloring of `V(n, k, s1)` with `t` colors has `r1` disjoint
//! same-colored members once `n >= r1 k + (t-1)(r1-1)`, and likewise for
//! `(r2, s2)`, then the same holds for `(r1 r2, s1 s2)`. The proof is
//! constructive and [`compose_witness`] runs it: a large set `A` of size
//! `n1 = r1 k + (t-1)(r1-1)` pulls the coloring back to `[n1]` through
//! [`index_map`], the inner finder colors `A` by the color of an inner edge,
//! and the outer finder returns `r2` disjoint large sets of one such color.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{monochromatic_edge, Coloring, KneserInstance, WitnessEdge};
use crate::sets::{KSubset, StabilityVariant};

/// Number of prime factors of `r` counted with multiplicity.
pub fn mu(r: usize) -> Result<usize> {
    Ok(prime_factors(r)?.len())
}

/// Prime factors of `r` in nondecreasing order, with multiplicity.
pub fn prime_factors(r: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let mut out = Vec::new();
    let mut rest = r;
    let mut d = 2;
    while d * d <= rest {
        while rest % d == 0 {
            out.push(d);
            rest /= d;
        }
        d += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionPlan {
    r: usize,
    s: usize,
    factors: Vec<(usize, usize)>,
}

impl CompositionPlan {
    /// Factors are `(r_i, s_i)` pairs. The first factor is the innermost
    /// level of the recursion.
    pub fn new(factors: Vec<(usize, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("a plan needs at least one factor"));
        }
        if let Some(&(r, s)) = factors.iter().find(|&&(r, s)| r < 2 || s < 1) {
            return Err(Error::invalid(format!(
                "factor ({r}, {s}) needs r >= 2 and s >= 1"
            )));
        }
        let r = factors
            .iter()
            .try_fold(1usize, |acc, &(r, _)| acc.checked_mul(r));
        let s = factors
            .iter()
            .try_fold(1usize, |acc, &(_, s)| acc.checked_mul(s));
        match (r, s) {
            (Some(r), Some(s)) if s <= 64 => Ok(CompositionPlan { r, s, factors }),
            _ => Err(Error::invalid("plan products overflow the supported range")),
        }
    }

    /// Prime factors of `r` in nondecreasing order, each with `s = 2`.
    pub fn corollary(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid(format!("need r >= 2, got {r}")));
        }
        CompositionPlan::new(prime_factors(r)?.into_iter().map(|p| (p, 2)).collect())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    fn split(&self) -> Option<((usize, usize), CompositionPlan)> {
        let (&head, rest) = self.factors.split_first()?;
        let rest = CompositionPlan::new(rest.to_vec()).ok()?;
        Some((head, rest))
    }
}

/// `{a_i : i ∈ B}` where `a_1 < a_2 < ...` are the elements of `a`.
pub fn index_map(a: &KSubset, b: &KSubset) -> Result<KSubset> {
    if b.n() != a.k() {
        return Err(Error::invalid(format!(
            "B lives in [{}] but A has {} elements",
            b.n(),
            a.k()
        )));
    }
    let elems = a.elements();
    let picked: Vec<usize> = b.iter().map(|i| elems[i - 1]).collect();
    KSubset::new(a.n(), &picked)
}

/// Leaf finder used by [`compose_witness`] when none is supplied.
pub fn direct_finder(instance: &KneserInstance, coloring: &Coloring) -> Option<WitnessEdge> {
    monochromatic_edge(instance, coloring)
}

/// Smallest ground set the recursion guarantees an edge on:
/// `(t-1)(r-1) + rk`.
pub fn required_ground(r: usize, k: usize, t: usize) -> usize {
    t.saturating_sub(1) * (r - 1) + r * k
}

/// `r` pairwise disjoint, same-colored members of `V(n, k, s)` for a
/// coloring with at most `t` colors, where `(r, s)` come from `plan`.
///
/// `instance` must be the almost `s`-stable k-subsets of `[n]`. The leaf
/// finder is called on the single-factor levels; a `None` there means the
/// guarantee failed at that scale and is reported as an invariant violation.
pub fn compose_witness(
    plan: &CompositionPlan,
    instance: &KneserInstance,
    coloring: &Coloring,
    t: usize,
    base_finder: &dyn Fn(&KneserInstance, &Coloring) -> Option<WitnessEdge>,
) -> Result<WitnessEdge> {
    let (n, k) = (instance.n(), instance.k());
    if instance.r() != plan.r() || instance.variant() != StabilityVariant::almost(plan.s()) {
        return Err(Error::invalid(format!(
            "instance must be KG^{}([n],k) on almost {}-stable sets",
            plan.r(),
            plan.s()
        )));
    }
    if t == 0 || coloring.max_color() as usize > t {
        return Err(Error::invalid(format!(
            "coloring uses color {} but t = {t}",
            coloring.max_color()
        )));
    }
    if coloring.colors().len() != instance.len() {
        return Err(Error::invalid("coloring does not match instance"));
    }
    let need = required_ground(plan.r(), k, t);
    if n < need {
        return Err(Error::invalid(format!(
            "need n >= (t-1)(r-1) + rk = {need}, got n = {n}"
        )));
    }
    let witness = compose(plan, instance, coloring, t, base_finder)?;
    check_witness(&witness, instance, coloring, plan.r())?;
    Ok(witness)
}

fn check_witness(
    w: &WitnessEdge,
    instance: &KneserInstance,
    coloring: &Coloring,
    r: usize,
) -> Result<()> {
    let colors: Option<Vec<u32>> = w
        .vertices
        .iter()
        .map(|s| coloring.color_of(instance, s))
        .collect();
    let ok = w.vertices.len() == r
        && w.is_pairwise_disjoint()
        && colors.is_some_and(|c| c.iter().all(|&x| Some(x) == w.color));
    if ok {
        Ok(())
    } else {
        Err(Error::invariant(format!(
            "composed witness {:?} is not a monochromatic edge of size {r}",
            w.vertices
        )))
    }
}

fn leaf(
    instance: &KneserInstance,
    coloring: &Coloring,
    finder: &dyn Fn(&KneserInstance, &Coloring) -> Option<WitnessEdge>,
) -> Result<WitnessEdge> {
    let w = finder(instance, coloring).ok_or_else(|| {
        Error::invariant(format!(
            "no monochromatic edge in a {}-coloring of KG^{}([{}],{}) {}",
            coloring.max_color(),
            instance.r(),
            instance.n(),
            instance.k(),
            instance.variant()
        ))
    })?;
    check_witness(&w, instance, coloring, instance.r())?;
    Ok(w)
}

fn compose(
    plan: &CompositionPlan,
    instance: &KneserInstance,
    coloring: &Coloring,
    t: usize,
    finder: &dyn Fn(&KneserInstance, &Coloring) -> Option<WitnessEdge>,
) -> Result<WitnessEdge> {
    let Some(((r1, s1), outer_plan)) = plan.split() else {
        return leaf(instance, coloring, finder);
    };
    let (n, k) = (instance.n(), instance.k());
    let n1 = r1 * k + (t - 1) * (r1 - 1);
    let inner = KneserInstance::new(n1, k, r1, StabilityVariant::almost(s1))?;
    let outer = KneserInstance::new(
        n,
        n1,
        outer_plan.r(),
        StabilityVariant::almost(outer_plan.s()),
    )?;

    // h~(A) is the color of an inner edge under the pulled-back coloring h.
    let mut inner_edges = Vec::with_capacity(outer.len());
    let mut h_tilde = Vec::with_capacity(outer.len());
    for a in outer.vertices() {
        let h = pull_back(a, &inner, instance, coloring, t)?;
        let edge = leaf(&inner, &h, finder)?;
        h_tilde.push(edge.color.unwrap_or(1));
        inner_edges.push(edge);
    }
    let h_tilde = Coloring::new(&outer, h_tilde, t as u32)?;
    let big = compose(&outer_plan, &outer, &h_tilde, t, finder)?;

    let mut vertices = Vec::with_capacity(plan.r());
    for a in &big.vertices {
        let idx = outer
            .index_of(a)
            .ok_or_else(|| Error::invariant(format!("{a} is not a vertex of the outer level")))?;
        for b in &inner_edges[idx].vertices {
            vertices.push(index_map(a, b)?);
        }
    }
    vertices.sort();
    Ok(WitnessEdge {
        vertices,
        color: big.color,
    })
}

fn pull_back(
    a: &KSubset,
    inner: &KneserInstance,
    instance: &KneserInstance,
    coloring: &Coloring,
    t: usize,
) -> Result<Coloring> {
    let colors = inner
        .vertices()
        .iter()
        .map(|b| {
            let s = index_map(a, b)?;
            coloring
                .color_of(instance, &s)
                .ok_or_else(|| Error::invariant(format!("{s} = A[{b}] is not stable enough")))
        })
        .collect::<Result<Vec<u32>>>()?;
    Coloring::new(inner, colors, t as u32)
}

/// `⌈(n - (k-1) r) / (r - 1)⌉`, the chromatic number claimed for the almost
/// `2^μ(r)`-stable `KG^r([n], k)`.
pub fn corollary_lower_bound(n: usize, k: usize, r: usize) -> Result<usize> {
    crate::coloring::chi_formula(n, k, r)
}
