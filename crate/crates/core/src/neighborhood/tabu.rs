//! Arc-indexed tabu lists.

use std::collections::HashMap;

use crate::instance::NodeId;

pub type Arc = (NodeId, NodeId);

/// Which list a move consults: merges share one, relocates the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TabuList {
    Merge,
    Relocate,
}

#[derive(Debug, Clone)]
pub struct TabuState {
    merges: HashMap<Arc, usize>,
    relocates: HashMap<Arc, usize>,
    tenure: usize,
    iteration: usize,
}

impl TabuState {
    pub fn new(tenure: usize) -> Self {
        Self {
            merges: HashMap::new(),
            relocates: HashMap::new(),
            tenure,
            iteration: 0,
        }
    }

    pub fn tenure(&self) -> usize {
        self.tenure
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn list(&self, which: TabuList) -> &HashMap<Arc, usize> {
        match which {
            TabuList::Merge => &self.merges,
            TabuList::Relocate => &self.relocates,
        }
    }

    pub fn is_tabu(&self, which: TabuList, arc: Arc) -> bool {
        self.list(which).get(&arc).is_some_and(|&exp| exp > self.iteration)
    }

    pub fn any_tabu(&self, which: TabuList, arcs: &[Arc]) -> bool {
        arcs.iter().any(|&a| self.is_tabu(which, a))
    }

    /// Forbids re-creating `arcs` for the next `tenure` iterations.
    pub fn record(&mut self, which: TabuList, arcs: &[Arc]) {
        let exp = self.iteration + self.tenure;
        let list = match which {
            TabuList::Merge => &mut self.merges,
            TabuList::Relocate => &mut self.relocates,
        };
        for &a in arcs {
            list.insert(a, exp);
        }
    }

    pub fn advance(&mut self) {
        self.iteration += 1;
        let now = self.iteration;
        if self.iteration % 64 == 0 {
            self.merges.retain(|_, e| *e > now);
            self.relocates.retain(|_, e| *e > now);
        }
    }

    pub fn clear(&mut self) {
        self.merges.clear();
        self.relocates.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expiry() {
        let mut t = TabuState::new(2);
        t.record(TabuList::Merge, &[(1, 2)]);
        assert!(t.is_tabu(TabuList::Merge, (1, 2)));
        assert!(!t.is_tabu(TabuList::Relocate, (1, 2)));
        assert!(!t.is_tabu(TabuList::Merge, (2, 1)));
        t.advance();
        assert!(t.is_tabu(TabuList::Merge, (1, 2)));
        t.advance();
        assert!(!t.is_tabu(TabuList::Merge, (1, 2)));
        t.record(TabuList::Relocate, &[(3, 4)]);
        t.clear();
        assert!(!t.any_tabu(TabuList::Relocate, &[(3, 4)]));
    }
}
