//! Kneser hypergraphs, held implicitly through their vertex list.
//!
//! Edges are never materialised. Every query reduces to a packing question
//! on one color class: does it contain `r` pairwise-disjoint members?

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{enumerate_stable, KSubset, StabilityVariant};

/// `KG^r([n], k)` restricted to the stable vertices of `variant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneserInstance {
    n: usize,
    k: usize,
    r: usize,
    variant: StabilityVariant,
    vertices: Vec<KSubset>,
}

impl KneserInstance {
    pub fn new(n: usize, k: usize, r: usize, variant: StabilityVariant) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid(format!(
                "uniformity r={r} must be at least 2"
            )));
        }
        let vertices = enumerate_stable(n, k, variant)?;
        Ok(KneserInstance {
            n,
            k,
            r,
            variant,
            vertices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn variant(&self) -> StabilityVariant {
        self.variant
    }

    /// Vertices in colex order.
    pub fn vertices(&self) -> &[KSubset] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, set: &KSubset) -> Option<usize> {
        self.vertices.binary_search(set).ok()
    }

    /// Whether any edge exists, i.e. some `r` vertices are pairwise disjoint.
    pub fn has_edge(&self) -> bool {
        let masks: Vec<u64> = self.vertices.iter().map(KSubset::mask).collect();
        first_packing(&masks, self.r, 0).is_some()
    }

    /// Every edge as a sorted list of vertex indices, stopping with an error
    /// once `limit` edges have been produced.
    pub fn edges(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        let masks: Vec<u64> = self.vertices.iter().map(KSubset::mask).collect();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(self.r);
        let mut overflow = false;
        all_packings(&masks, self.r, 0, 0, &mut stack, &mut |edge| {
            if out.len() == limit {
                overflow = true;
                return false;
            }
            out.push(edge.to_vec());
            true
        });
        if overflow {
            return Err(Error::BudgetExceeded {
                reason: format!("more than {limit} edges"),
                lower: 0,
                upper: 0,
                nodes: limit as u64,
            });
        }
        Ok(out)
    }
}

/// A total assignment of colors `1..=num_colors` to the vertices of an
/// instance, indexed like [`KneserInstance::vertices`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: u32,
}

impl Coloring {
    pub fn new(instance: &KneserInstance, colors: Vec<u32>, num_colors: u32) -> Result<Self> {
        if colors.len() != instance.len() {
            return Err(Error::invalid(format!(
                "coloring has {} entries for {} vertices",
                colors.len(),
                instance.len()
            )));
        }
        if let Some(bad) = colors.iter().find(|&&c| c == 0 || c > num_colors) {
            return Err(Error::invalid(format!(
                "color {bad} outside [1, {num_colors}]"
            )));
        }
        Ok(Coloring { colors, num_colors })
    }

    /// Colors every vertex with `f`; the palette size is the largest color used.
    pub fn from_fn(instance: &KneserInstance, f: impl FnMut(&KSubset) -> u32) -> Result<Self> {
        let colors: Vec<u32> = instance.vertices().iter().map(f).collect();
        let num_colors = colors.iter().copied().max().unwrap_or(1).max(1);
        Coloring::new(instance, colors, num_colors)
    }

    pub fn constant(instance: &KneserInstance, color: u32) -> Result<Self> {
        Coloring::new(instance, vec![color; instance.len()], color.max(1))
    }

    /// Uniform colors from `[t]`, reproducible from `seed`.
    pub fn random(instance: &KneserInstance, t: u32, seed: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::invalid("a random coloring needs at least one color"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors = (0..instance.len()).map(|_| rng.gen_range(1..=t)).collect();
        Coloring::new(instance, colors, t)
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, vertex: usize) -> u32 {
        self.colors[vertex]
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn color_of(&self, instance: &KneserInstance, set: &KSubset) -> Option<u32> {
        instance.index_of(set).map(|i| self.colors[i])
    }

    /// Vertex indices grouped by color; entry `c - 1` holds color `c`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c as usize - 1].push(v);
        }
        classes
    }
}

/// `r` pairwise-disjoint sets; with a color it certifies an improper coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEdge {
    pub vertices: Vec<KSubset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
}

impl WitnessEdge {
    pub fn is_pairwise_disjoint(&self) -> bool {
        let mut seen = 0u64;
        for v in &self.vertices {
            if seen & v.mask() != 0 {
                return false;
            }
            seen |= v.mask();
        }
        true
    }

    /// Checks the witness against an instance and coloring: right size,
    /// pairwise disjoint, all vertices present and sharing `self.color`.
    pub fn certifies(&self, instance: &KneserInstance, coloring: &Coloring) -> bool {
        if self.vertices.len() != instance.r() || !self.is_pairwise_disjoint() {
            return false;
        }
        let colors: Option<Vec<u32>> = self
            .vertices
            .iter()
            .map(|v| coloring.color_of(instance, v))
            .collect();
        match (colors, self.color) {
            (Some(cs), Some(c)) => cs.iter().all(|&x| x == c),
            _ => false,
        }
    }
}

/// First `r` pairwise-disjoint members of `vertices`, taking the
/// lexicographically smallest index tuple once the list is in colex order.
pub fn find_disjoint_tuple(vertices: &[KSubset], r: usize) -> Result<Option<WitnessEdge>> {
    if r < 2 {
        return Err(Error::invalid(format!(
            "tuple size r={r} must be at least 2"
        )));
    }
    if let Some(w) = vertices.windows(2).find(|w| w[0].n() != w[1].n()) {
        return Err(Error::invalid(format!(
            "vertices over different ground sets ({} and {})",
            w[0].n(),
            w[1].n()
        )));
    }
    let mut sorted = vertices.to_vec();
    sorted.sort();
    let masks: Vec<u64> = sorted.iter().map(KSubset::mask).collect();
    Ok(first_packing(&masks, r, 0).map(|idx| WitnessEdge {
        vertices: idx.into_iter().map(|i| sorted[i]).collect(),
        color: None,
    }))
}

pub fn is_proper(instance: &KneserInstance, coloring: &Coloring) -> bool {
    monochromatic_edge(instance, coloring).is_none()
}

/// A monochromatic edge of the smallest color that has one, choosing the
/// colex-first packing inside that class.
pub fn monochromatic_edge(instance: &KneserInstance, coloring: &Coloring) -> Option<WitnessEdge> {
    assert_eq!(
        coloring.colors.len(),
        instance.len(),
        "coloring does not match instance"
    );
    for (c, class) in coloring.classes().into_iter().enumerate() {
        let masks: Vec<u64> = class.iter().map(|&v| instance.vertices[v].mask()).collect();
        if let Some(idx) = first_packing(&masks, instance.r(), 0) {
            return Some(WitnessEdge {
                vertices: idx
                    .into_iter()
                    .map(|i| instance.vertices[class[i]])
                    .collect(),
                color: Some(c as u32 + 1),
            });
        }
    }
    None
}

/// Lexicographically first index tuple of `r` pairwise-disjoint masks, all
/// disjoint from `blocked`. `r == 0` yields the empty tuple.
pub(crate) fn first_packing(masks: &[u64], r: usize, blocked: u64) -> Option<Vec<usize>> {
    let mut stack = Vec::with_capacity(r);
    let mut found = None;
    all_packings(masks, r, 0, blocked, &mut stack, &mut |t| {
        found = Some(t.to_vec());
        false
    });
    found
}

// Depth-first over increasing index tuples; `visit` returns false to stop.
fn all_packings(
    masks: &[u64],
    r: usize,
    start: usize,
    used: u64,
    stack: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if stack.len() == r {
        return visit(stack);
    }
    let need = r - stack.len();
    if masks.len() < start + need {
        return true;
    }
    for i in start..=masks.len() - need {
        let m = masks[i];
        if m & used != 0 {
            continue;
        }
        stack.push(i);
        let go_on = all_packings(masks, r, i + 1, used | m, stack, visit);
        stack.pop();
        if !go_on {
            return false;
        }
    }
    true
}
