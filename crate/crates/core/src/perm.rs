//! Permutations of `{0..n-1}` and explicitly materialized permutation groups.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// A permutation stored as its image list: `self[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Wrap an image list, returning `None` unless it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint union action on `{0..n+m-1}`: `self` on the first block, `other` on the second.
    pub fn disjoint_union(&self, other: &Perm) -> Perm {
        let n = self.degree();
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&j| j + n));
        Perm(v)
    }

    /// Split a permutation preserving the blocks `0..n` and `n..` into its two parts.
    pub fn split(&self, n: usize) -> Option<(Perm, Perm)> {
        let (a, b) = self.0.split_at(n);
        if a.iter().any(|&j| j >= n) || b.iter().any(|&j| j < n) {
            return None;
        }
        Some((Perm(a.to_vec()), Perm(b.iter().map(|&j| j - n).collect())))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite permutation group with all elements listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: BTreeSet<Perm>,
}

impl PermGroup {
    /// Breadth-first closure of `generators` under composition. In a finite
    /// group this already contains all inverses.
    pub fn generate(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let id = Perm::identity(degree);
        let mut elements = BTreeSet::new();
        elements.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &generators {
                let h = s.compose(&g);
                if !elements.contains(&h) {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    elements.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(Self {
            degree,
            generators,
            elements,
        })
    }

    /// Wrap an explicit element set (assumed closed), e.g. a filtered subgroup.
    pub fn from_elements(degree: usize, generators: Vec<Perm>, elements: BTreeSet<Perm>) -> Self {
        Self {
            degree,
            generators,
            elements,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &Perm> {
        self.elements.iter()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.contains(p)
    }

    /// Orbit of a point under the generators, in BFS order.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit(self.degree, &self.generators, point)
    }

    /// Closure under composition and inverses, checked element by element.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse())
                && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }
}

/// Orbit of `point` under the group generated by `generators`, in BFS order.
pub fn orbit(degree: usize, generators: &[Perm], point: usize) -> Vec<usize> {
    let mut seen = alloc::vec![false; degree];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([point]);
    seen[point] = true;
    while let Some(p) = queue.pop_front() {
        order.push(p);
        for g in generators {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let a = Perm::from_images(alloc::vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(alloc::vec![1, 0, 2]).unwrap();
        // (a∘b)(0) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(Perm::from_images(alloc::vec![0, 0]).is_none());
    }

    #[test]
    fn symmetric_group_closure() {
        let t = Perm::from_images(alloc::vec![1, 0, 2, 3]).unwrap();
        let c = Perm::from_images(alloc::vec![1, 2, 3, 0]).unwrap();
        let g = PermGroup::generate(4, alloc::vec![t, c], 1000).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.is_closed());
    }

    #[test]
    fn cap_is_enforced() {
        let t = Perm::from_images(alloc::vec![1, 0, 2, 3]).unwrap();
        let c = Perm::from_images(alloc::vec![1, 2, 3, 0]).unwrap();
        assert_eq!(
            PermGroup::generate(4, alloc::vec![t, c], 10).unwrap_err(),
            GroupError::CapExceeded { cap: 10 }
        );
    }

    #[test]
    fn split_blocks() {
        let a = Perm::from_images(alloc::vec![1, 0]).unwrap();
        let b = Perm::from_images(alloc::vec![0, 2, 1]).unwrap();
        let u = a.disjoint_union(&b);
        assert_eq!(u.images(), &[1, 0, 2, 4, 3]);
        assert_eq!(u.split(2), Some((a, b)));
    }
}
