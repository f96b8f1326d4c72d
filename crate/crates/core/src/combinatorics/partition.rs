use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// A multiset of positive integers, stored in non-increasing order.
///
/// `Ord` is the canonical term order used everywhere a collection of
/// partitions is displayed: fewer parts first, then larger parts first
/// (`{3} < {2,1} < {1,1,1}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalizes `parts` (sorts non-increasing). Rejects empty input and
    /// zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidParameter("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Wraps parts already known to be positive and non-increasing.
    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty() && parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&x| x > 0));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `p`, the sum of the parts.
    pub fn order(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `m`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn has_odd_part(&self) -> bool {
        self.parts.iter().any(|p| p % 2 == 1)
    }

    /// Distinct part values paired with their multiplicities, largest value
    /// first.
    pub fn grouped(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &part in &self.parts {
            match out.last_mut() {
                Some((value, count)) if *value == part => *count += 1,
                _ => out.push((part, 1)),
            }
        }
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts
            .len()
            .cmp(&other.parts.len())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Multiplicity profile of a partition: how many parts take each distinct
/// value, in order of first appearance in the canonical part list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub multiplicities: Vec<u32>,
}

impl MultiplicityProfile {
    /// `h`, the number of distinct part values.
    pub fn distinct(&self) -> usize {
        self.multiplicities.len()
    }

    /// `m`, the total number of parts.
    pub fn total(&self) -> u32 {
        self.multiplicities.iter().sum()
    }
}

pub fn multiplicity_profile(part: &Partition) -> MultiplicityProfile {
    MultiplicityProfile {
        multiplicities: part.grouped().into_iter().map(|(_, l)| l).collect(),
    }
}

/// Every partition of `p`, in decreasing lexicographic order of the part lists.
pub fn enumerate_partitions(p: u32) -> Result<Vec<Partition>> {
    enumerate_partitions_with_cap(p, super::DEFAULT_ORDER_CAP)
}

pub fn enumerate_partitions_with_cap(p: u32, cap: u32) -> Result<Vec<Partition>> {
    if p == 0 || p > cap {
        return Err(Error::OrderOutOfRange { p, cap });
    }
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(p as usize);
    descend(p, p, &mut stack, &mut out);
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_sorted(stack.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        stack.push(part);
        descend(remaining - part, part, stack, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(p: &Partition) -> Vec<u32> {
        p.parts().to_vec()
    }

    #[test]
    fn partitions_of_three() {
        let all: Vec<_> = enumerate_partitions(3).unwrap().iter().map(parts).collect();
        assert_eq!(all, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn partitions_of_one() {
        let all: Vec<_> = enumerate_partitions(1).unwrap().iter().map(parts).collect();
        assert_eq!(all, vec![vec![1]]);
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(
            enumerate_partitions(0),
            Err(Error::OrderOutOfRange { p: 0, cap: 30 })
        );
        assert!(enumerate_partitions(31).is_err());
        assert_eq!(enumerate_partitions_with_cap(40, 40).unwrap().len(), 37338);
    }

    #[test]
    fn output_is_strictly_decreasing_lexicographically() {
        let all = enumerate_partitions(9).unwrap();
        for w in all.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
    }

    #[test]
    fn profiles() {
        let p = Partition::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(multiplicity_profile(&p).multiplicities, vec![4]);
        let p = Partition::new(vec![1, 2, 2, 2]).unwrap();
        assert_eq!(p.parts(), &[2, 2, 2, 1]);
        let prof = multiplicity_profile(&p);
        assert_eq!(prof.multiplicities, vec![3, 1]);
        assert_eq!(prof.distinct(), 2);
        assert_eq!(prof.total(), 4);
        let p = Partition::new(vec![5]).unwrap();
        assert_eq!(multiplicity_profile(&p).multiplicities, vec![1]);
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn term_order() {
        let mut v = vec![
            Partition::new(vec![1, 1, 1]).unwrap(),
            Partition::new(vec![3]).unwrap(),
            Partition::new(vec![2, 1]).unwrap(),
        ];
        v.sort();
        assert_eq!(v.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["{3}", "{2,1}", "{1,1,1}"]);
    }
}
