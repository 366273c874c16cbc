//! Bitmask subsets of the ground set {1,…,n} and dense per-subset tables.
//!
//! Element `i` (1-based) lives at bit `i-1`. Tables store one entry per
//! nonempty subset, at offset `bits - 1`.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full ground set {1,…,n}.
    pub fn full(n: usize) -> SubsetMask {
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> SubsetMask {
        debug_assert!((1..=MAX_GROUND).contains(&i));
        SubsetMask(1 << (i - 1))
    }

    /// Builds a mask from 1-based elements. Duplicates are merged.
    pub fn from_elements(elems: &[usize]) -> Result<SubsetMask> {
        let mut bits = 0u32;
        for &e in elems {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::Parse(format!("element {e} outside 1..=16")));
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }

    /// Shorthand used heavily in tests and formula code; panics on bad input.
    pub fn of(elems: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(elems).expect("valid elements")
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn intersect(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn complement(self, n: usize) -> SubsetMask {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }

    #[inline]
    pub fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_GROUND).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as usize)
        }
    }

    /// Elements in increasing order (1-based).
    pub fn elements(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cardinality());
        let mut b = self.0;
        while b != 0 {
            let t = b.trailing_zeros() as usize;
            out.push(t + 1);
            b &= b - 1;
        }
        out
    }

    /// Zero-based indices, as used for matrix row selection.
    pub fn indices(self) -> Vec<usize> {
        self.elements().into_iter().map(|e| e - 1).collect()
    }

    /// Dense table offset of a nonempty mask.
    #[inline]
    pub fn offset(self) -> usize {
        debug_assert!(self.0 != 0);
        self.0 as usize - 1
    }

    /// Digit-string form ("13"), valid when every element is ≤ 9.
    pub fn digit_string(self) -> Option<String> {
        let e = self.elements();
        if e.iter().any(|&x| x > 9) {
            return None;
        }
        Some(e.iter().map(|d| char::from(b'0' + *d as u8)).collect())
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.elements().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SubsetMask {
    type Err = Error;

    /// Accepts "[1,3]" (sorted or not) and the digit form "13".
    fn from_str(s: &str) -> Result<SubsetMask> {
        let s = s.trim();
        let elems: Vec<usize> = if let Some(inner) = s.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| Error::Parse(format!("unterminated subset '{s}'")))?;
            if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad element '{t}' in '{s}'"))))
                    .collect::<Result<_>>()?
            }
        } else if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            s.bytes().map(|b| (b - b'0') as usize).collect()
        } else {
            return Err(Error::Parse(format!("unrecognised subset '{s}'")));
        };
        SubsetMask::from_elements(&elems)
    }
}

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_GROUND).contains(&n) {
        Ok(())
    } else {
        Err(Error::SizeOutOfRange(n))
    }
}

/// All nonempty subsets of {1,…,n} in increasing bit order.
pub fn enumerate_subsets(n: usize) -> Result<impl Iterator<Item = SubsetMask>> {
    check_n(n)?;
    Ok((1u32..(1u32 << n)).map(SubsetMask))
}

/// All subsets of `s` (including ∅ and `s`), in increasing bit order.
pub fn subsets_of(s: SubsetMask) -> impl Iterator<Item = SubsetMask> {
    let full = s.0;
    let mut cur: Option<u32> = Some(0);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == full { None } else { Some(((c | !full).wrapping_add(1)) & full) };
        Some(SubsetMask(c))
    })
}

/// Dense table of one value per nonempty subset of {1,…,n}.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetVector<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Clone> SubsetVector<T> {
    pub fn filled(n: usize, value: T) -> Result<Self> {
        check_n(n)?;
        Ok(SubsetVector { n, entries: vec![value; (1usize << n) - 1] })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(SubsetMask) -> T) -> Result<Self> {
        check_n(n)?;
        let entries = (1u32..(1u32 << n)).map(|b| f(SubsetMask(b))).collect();
        Ok(SubsetVector { n, entries })
    }

    /// Wraps a table already laid out in mask order.
    pub fn from_entries(n: usize, entries: Vec<T>) -> Result<Self> {
        check_n(n)?;
        if entries.len() != (1usize << n) - 1 {
            return Err(Error::DimensionMismatch(format!("{} entries for n={n}, expected {}", entries.len(), (1usize << n) - 1)));
        }
        Ok(SubsetVector { n, entries })
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(SubsetMask, &T) -> U) -> SubsetVector<U> {
        SubsetVector { n: self.n, entries: self.iter().map(|(s, v)| f(s, v)).collect() }
    }
}

impl<T> SubsetVector<T> {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, &T)> {
        self.entries.iter().enumerate().map(|(k, v)| (SubsetMask(k as u32 + 1), v))
    }

    #[inline]
    pub fn get(&self, s: SubsetMask) -> &T {
        &self.entries[s.offset()]
    }

    #[inline]
    pub fn set(&mut self, s: SubsetMask, v: T) {
        self.entries[s.offset()] = v;
    }
}

impl<T> Index<SubsetMask> for SubsetVector<T> {
    type Output = T;
    fn index(&self, s: SubsetMask) -> &T {
        &self.entries[s.offset()]
    }
}

impl<T> IndexMut<SubsetMask> for SubsetVector<T> {
    fn index_mut(&mut self, s: SubsetMask) -> &mut T {
        &mut self.entries[s.offset()]
    }
}
