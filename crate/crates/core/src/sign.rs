//! Sign vectors over `Z_p ∪ {0}`.
//!
//! Entry `j` in `1..=p` stands for the group element `ω^j`; 0 is the zero
//! sign. For `p = 2`, entry 1 is `+` and entry 2 is `-`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sets::MAX_GROUND;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    p: u8,
    entries: Vec<u8>,
}

impl SignVector {
    pub fn new(p: usize, entries: Vec<u8>) -> Result<Self> {
        if !(2..=9).contains(&p) {
            return Err(Error::invalid(format!("group order p={p} outside [2, 9]")));
        }
        if entries.len() > MAX_GROUND {
            return Err(Error::invalid(format!(
                "length {} exceeds {MAX_GROUND}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e as usize > p) {
            return Err(Error::invalid(format!("entry {bad} outside [0, {p}]")));
        }
        Ok(SignVector {
            p: p as u8,
            entries,
        })
    }

    pub(crate) fn from_raw(p: usize, entries: Vec<u8>) -> Self {
        SignVector {
            p: p as u8,
            entries,
        }
    }

    pub fn zero(p: usize, n: usize) -> Result<Self> {
        SignVector::new(p, vec![0; n])
    }

    /// Parses `+`, `-` and `0` into a `p = 2` vector.
    pub fn from_signs(signs: &str) -> Result<Self> {
        let entries = signs
            .chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' | '−' => Ok(2),
                '0' => Ok(0),
                other => Err(Error::invalid(format!("unexpected sign {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        SignVector::new(2, entries)
    }

    /// Parses a digit string such as `"2303500 2"` (spaces ignored).
    pub fn from_digits(p: usize, digits: &str) -> Result<Self> {
        let entries = digits
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|ch| {
                ch.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("unexpected digit {ch:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        SignVector::new(p, entries)
    }

    pub fn p(&self) -> usize {
        self.p as usize
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Position (1-based) and value of the first non-zero entry.
    pub fn first_nonzero(&self) -> Option<(usize, u8)> {
        self.entries
            .iter()
            .enumerate()
            .find(|(_, &e)| e != 0)
            .map(|(i, &e)| (i + 1, e))
    }

    /// The part `X_j = { i : x_i = ω^j }` as a bitmask over `[n]`.
    pub fn part_mask(&self, j: usize) -> u64 {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e as usize == j)
            .fold(0u64, |m, (i, _)| m | 1u64 << i)
    }

    pub fn support_mask(&self) -> u64 {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .fold(0u64, |m, (i, _)| m | 1u64 << i)
    }

    /// Length of the longest alternating subsequence of non-zero entries.
    ///
    /// Taking every non-zero entry that differs from the previously taken
    /// one is optimal, so this is the number of value changes in the
    /// non-zero subsequence plus one.
    pub fn alt(&self) -> usize {
        let mut last = 0u8;
        let mut count = 0;
        for &e in &self.entries {
            if e != 0 && e != last {
                count += 1;
                last = e;
            }
        }
        count
    }

    /// `self ⊆ other`: every non-zero entry of `self` agrees with `other`.
    pub fn is_subvector(&self, other: &SignVector) -> Result<bool> {
        self.check_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| a == 0 || a == b))
    }

    /// Action of `ω^a`: every non-zero exponent `j` becomes `(j - 1 + a) mod p + 1`.
    pub fn omega_shift(&self, a: usize) -> SignVector {
        let p = self.p as usize;
        let entries = self
            .entries
            .iter()
            .map(|&e| {
                if e == 0 {
                    0
                } else {
                    ((e as usize - 1 + a) % p + 1) as u8
                }
            })
            .collect();
        SignVector { p: self.p, entries }
    }

    /// `-X` for signed vectors; the same as `omega_shift(1)` when `p = 2`.
    pub fn negate(&self) -> SignVector {
        self.omega_shift(1)
    }

    pub fn to_digit_string(&self) -> String {
        self.entries.iter().map(|&e| char::from(b'0' + e)).collect()
    }

    /// `+`/`-`/`0` rendering; only meaningful for `p = 2`.
    pub fn to_sign_string(&self) -> String {
        self.entries
            .iter()
            .map(|&e| match e {
                0 => '0',
                1 => '+',
                _ => '-',
            })
            .collect()
    }

    fn check_shape(&self, other: &SignVector) -> Result<()> {
        if self.p != other.p || self.entries.len() != other.entries.len() {
            return Err(Error::ShapeMismatch(format!(
                "(p={}, n={}) vs (p={}, n={})",
                self.p,
                self.entries.len(),
                other.p,
                other.entries.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 2 {
            f.write_str(&self.to_sign_string())
        } else {
            f.write_str(&self.to_digit_string())
        }
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector(p={}, {})", self.p, self)
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
