//! k-subsets of `[n]`, stability constraints and their enumeration.
//!
//! Subsets are stored as bitmasks (element `i` is bit `i - 1`), which caps the
//! ground set at 64 points. Comparing two masks numerically is exactly the
//! colexicographic order on sorted element lists, so `Ord` on [`KSubset`] is
//! the colex order used everywhere else in the crate.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// A non-empty subset of `[n]`, typically a vertex of a Kneser hypergraph.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSubset {
    n: u8,
    mask: u64,
}

impl KSubset {
    /// Builds a subset from a strictly increasing list of elements of `[n]`.
    pub fn new(n: usize, elements: &[usize]) -> Result<Self> {
        check_ground(n)?;
        if elements.is_empty() {
            return Err(Error::invalid("a k-subset needs at least one element"));
        }
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::invalid(format!("element {e} outside [1, {n}]")));
            }
            if e <= prev {
                return Err(Error::invalid(format!(
                    "elements must be strictly increasing, got {prev} then {e}"
                )));
            }
            prev = e;
            mask |= 1u64 << (e - 1);
        }
        Ok(KSubset { n: n as u8, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_ground(n)?;
        if mask == 0 {
            return Err(Error::invalid("a k-subset needs at least one element"));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::invalid(format!(
                "mask {mask:#x} has bits outside [1, {n}]"
            )));
        }
        Ok(KSubset { n: n as u8, mask })
    }

    pub(crate) fn from_mask_unchecked(n: usize, mask: u64) -> Self {
        debug_assert!(mask != 0 && n <= MAX_GROUND);
        KSubset { n: n as u8, mask }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn iter(&self) -> MaskIter {
        MaskIter(self.mask)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> usize {
        self.mask.trailing_zeros() as usize + 1
    }

    pub fn max_element(&self) -> usize {
        64 - self.mask.leading_zeros() as usize
    }

    pub fn contains(&self, element: usize) -> bool {
        (1..=64).contains(&element) && self.mask >> (element - 1) & 1 == 1
    }

    pub fn is_disjoint(&self, other: &KSubset) -> bool {
        self.mask & other.mask == 0
    }

    /// True if every element lies in the set described by `mask`.
    pub fn is_within(&self, mask: u64) -> bool {
        self.mask & !mask == 0
    }
}

impl PartialOrd for KSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mask.cmp(&other.mask).then(self.n.cmp(&other.n))
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for KSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Ascending iterator over the elements (1-based) of a bitmask.
#[derive(Clone, Debug)]
pub struct MaskIter(u64);

impl Iterator for MaskIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for MaskIter {}

/// Which k-subsets of `[n]` count as vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StabilityVariant {
    /// All k-subsets. Same vertex set as `Almost { s: 1 }`.
    Unrestricted,
    /// Distinct elements at linear distance at least `s`.
    Almost { s: usize },
    /// Distinct elements at distance at least `s` on the `n`-cycle.
    Cyclic { s: usize },
}

impl StabilityVariant {
    pub fn almost(s: usize) -> Self {
        StabilityVariant::Almost { s }
    }

    pub fn cyclic(s: usize) -> Self {
        StabilityVariant::Cyclic { s }
    }

    /// The gap parameter; 1 for the unrestricted variant.
    pub fn gap(&self) -> usize {
        match *self {
            StabilityVariant::Unrestricted => 1,
            StabilityVariant::Almost { s } | StabilityVariant::Cyclic { s } => s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StabilityVariant::Unrestricted => "unrestricted",
            StabilityVariant::Almost { .. } => "almost",
            StabilityVariant::Cyclic { .. } => "cyclic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gap() == 0 {
            return Err(Error::invalid("stability gap s must be at least 1"));
        }
        Ok(())
    }
}

impl fmt::Display for StabilityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityVariant::Unrestricted => f.write_str("unrestricted"),
            StabilityVariant::Almost { s } => write!(f, "almost {s}-stable"),
            StabilityVariant::Cyclic { s } => write!(f, "cyclic {s}-stable"),
        }
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::invalid(format!(
            "ground set size {n} outside [1, {MAX_GROUND}]"
        )));
    }
    Ok(())
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    check_ground(n)?;
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Gap test on sorted elements. Pairwise linear gaps are minimised by
/// consecutive elements; the largest pairwise gap is `max - min`.
pub fn is_stable(set: &KSubset, variant: StabilityVariant) -> bool {
    let s = variant.gap();
    let min_gap_ok = || {
        let mut it = set.iter();
        let mut prev = match it.next() {
            Some(e) => e,
            None => return true,
        };
        for e in it {
            if e - prev < s {
                return false;
            }
            prev = e;
        }
        true
    };
    match variant {
        StabilityVariant::Unrestricted => true,
        StabilityVariant::Almost { .. } => min_gap_ok(),
        StabilityVariant::Cyclic { .. } => {
            if set.k() < 2 {
                return true;
            }
            min_gap_ok() && set.n() - (set.max_element() - set.min_element()) >= s
        }
    }
}

/// All stable k-subsets of `[n]` in colex order.
pub fn enumerate_stable(n: usize, k: usize, variant: StabilityVariant) -> Result<Vec<KSubset>> {
    check_nk(n, k)?;
    variant.validate()?;
    let s = variant.gap();
    let mut out = Vec::new();
    gap_sets(n, k, s, 1, 0, &mut |mask| {
        let set = KSubset::from_mask_unchecked(n, mask);
        if is_stable(&set, variant) {
            out.push(set);
        }
    });
    out.sort_unstable();
    Ok(out)
}

// every k-subset with consecutive gaps >= s, elements drawn from [from, n]
fn gap_sets(n: usize, k: usize, s: usize, from: usize, acc: u64, emit: &mut impl FnMut(u64)) {
    if k == 0 {
        emit(acc);
        return;
    }
    // the remaining k elements need (k - 1) * s + 1 points
    let span = (k - 1) * s + 1;
    if from + span > n + 1 {
        return;
    }
    for e in from..=(n + 1 - span) {
        gap_sets(n, k - 1, s, e + s, acc | 1u64 << (e - 1), emit);
    }
}

/// Number of stable k-subsets, from closed forms.
pub fn count_stable(n: usize, k: usize, variant: StabilityVariant) -> Result<u128> {
    check_nk(n, k)?;
    variant.validate()?;
    let (n, k) = (n as u128, k as u128);
    let count = match variant {
        StabilityVariant::Unrestricted => binomial(n, k),
        StabilityVariant::Almost { s } => {
            let shrink = (k - 1) * (s as u128 - 1);
            if shrink > n {
                0
            } else {
                binomial(n - shrink, k)
            }
        }
        // singletons carry no pair constraint
        StabilityVariant::Cyclic { .. } if k == 1 => n,
        StabilityVariant::Cyclic { s } => {
            let shrink = k * (s as u128 - 1);
            if n <= shrink {
                0
            } else {
                let m = n - shrink;
                n * binomial(m, k) / m
            }
        }
    };
    Ok(count)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
