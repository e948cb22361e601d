//! Chromatic-number formula and explicit proper colorings.

use crate::error::{Error, Result};
use crate::hypergraph::{first_packing, Coloring, KneserInstance};
use crate::sets::KSubset;

/// `⌈(n - (k-1) r) / (r - 1)⌉`, the chromatic number of `KG^r([n], k)`.
pub fn chi_formula(n: usize, k: usize, r: usize) -> Result<usize> {
    if r < 2 || k == 0 {
        return Err(Error::invalid(format!(
            "need r >= 2 and k >= 1, got r={r}, k={k}"
        )));
    }
    if n < r * k {
        return Err(Error::invalid(format!(
            "formula needs n >= rk, got n={n} < {}",
            r * k
        )));
    }
    Ok((n - (k - 1) * r).div_ceil(r - 1))
}

/// Block coloring of all k-subsets of `[n]` by their maximum.
///
/// Sets inside `[rk - 1]` get color 1; above that, the maxima are cut into
/// blocks of `r - 1` consecutive values, one color per block. Class 1 cannot
/// hold `r` disjoint sets (that needs `rk` points) and any other class
/// cannot either (`r` disjoint sets have `r` distinct maxima).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErdosColoring {
    n: usize,
    k: usize,
    r: usize,
}

impl ErdosColoring {
    pub fn color_of(&self, set: &KSubset) -> u32 {
        let first_block = self.r * self.k - 1;
        let max = set.max_element();
        if max <= first_block {
            1
        } else {
            1 + (max - first_block).div_ceil(self.r - 1) as u32
        }
    }

    /// Palette size; equals [`chi_formula`].
    pub fn num_colors(&self) -> u32 {
        let top = self.r * self.k - 1;
        1 + (self.n - top).div_ceil(self.r - 1) as u32
    }

    /// The coloring restricted to the vertices of `instance`.
    pub fn restrict(&self, instance: &KneserInstance) -> Result<Coloring> {
        if instance.n() != self.n || instance.k() != self.k {
            return Err(Error::invalid(format!(
                "instance (n={}, k={}) does not match coloring (n={}, k={})",
                instance.n(),
                instance.k(),
                self.n,
                self.k
            )));
        }
        let colors = instance
            .vertices()
            .iter()
            .map(|s| self.color_of(s))
            .collect();
        Coloring::new(instance, colors, self.num_colors())
    }
}

pub fn erdos_coloring(n: usize, k: usize, r: usize) -> Result<ErdosColoring> {
    chi_formula(n, k, r)?;
    Ok(ErdosColoring { n, k, r })
}

/// Colex-order first fit: each vertex takes the smallest color whose class
/// would still contain no `r` pairwise-disjoint members.
pub fn greedy_coloring(instance: &KneserInstance) -> Coloring {
    let r = instance.r();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut colors = Vec::with_capacity(instance.len());
    for v in instance.vertices() {
        let m = v.mask();
        let slot = classes
            .iter()
            .position(|class| first_packing(class, r - 1, m).is_none())
            .unwrap_or_else(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
        classes[slot].push(m);
        colors.push(slot as u32 + 1);
    }
    let used = (classes.len() as u32).max(1);
    Coloring::new(instance, colors, used).expect("greedy colors are in range")
}
