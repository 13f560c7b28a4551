//! Named axiom checks with witnesses, shared by the structure checkers.

use alloc::string::String;
use alloc::vec::Vec;

/// One axiom's outcome. A failure carries the basis indices where it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub witness: Option<Vec<usize>>,
    /// Whether every basis tuple was examined.
    pub exhaustive: bool,
    pub note: Option<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &'static str, witness: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck {
            name,
            witness,
            exhaustive: true,
            note: None,
        });
    }

    pub fn push_sampled(&mut self, name: &'static str, witness: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck {
            name,
            witness,
            exhaustive: false,
            note: None,
        });
    }

    pub fn note(&mut self, name: &'static str, note: String) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            c.note = Some(note);
        }
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True if the named check ran and passed.
    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(AxiomCheck::passed)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| !c.passed())
    }

    pub fn witness(&self, name: &str) -> Option<&[usize]> {
        self.get(name).and_then(|c| c.witness.as_deref())
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect()
    }
}

/// First index tuple in `0..n` of the given arity where `ok` is false.
pub(crate) fn find_tuple(
    n: usize,
    arity: usize,
    mut ok: impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if n == 0 {
        return None;
    }
    let mut idx = alloc::vec![0usize; arity];
    loop {
        if !ok(&idx) {
            return Some(idx);
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_search_order() {
        assert_eq!(find_tuple(3, 2, |t| t != [1, 2]), Some(alloc::vec![1, 2]));
        assert_eq!(find_tuple(2, 3, |_| true), None);
        assert_eq!(find_tuple(0, 3, |_| false), None);
        let mut count = 0;
        find_tuple(3, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 27);
    }
}
