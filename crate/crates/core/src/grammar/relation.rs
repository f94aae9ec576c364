use std::collections::BTreeSet;

use super::{AugmentedGrammar, HeadRule, SymbolId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationVariant {
    /// `B ◇ A` iff some rule `A -> α B β` has head `B`.
    Full,
    /// As `Full`, restricted to rules whose head is leftmost.
    Left,
    /// As `Full`, restricted to rules whose head is rightmost.
    Right,
}

/// Reflexive-transitive closure of a head-corner base relation, materialized
/// as a dense matrix over all symbol ids. Reflexivity covers nonterminals only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadCornerRelation {
    variant: RelationVariant,
    size: usize,
    matrix: Vec<bool>,
}

impl HeadCornerRelation {
    pub fn compute(g: &AugmentedGrammar, variant: RelationVariant) -> Self {
        let mask: Vec<bool> = (0..g.num_symbols())
            .map(|i| g.is_nonterminal(SymbolId(i as u32)))
            .collect();
        Self::from_rules(g.num_symbols(), &mask, g.rules(), variant)
    }

    pub(crate) fn from_rules(
        size: usize,
        nonterminal: &[bool],
        rules: &[HeadRule],
        variant: RelationVariant,
    ) -> Self {
        let mut rel = HeadCornerRelation {
            variant,
            size,
            matrix: vec![false; size * size],
        };
        for (i, &nt) in nonterminal.iter().enumerate() {
            if nt {
                rel.matrix[i * size + i] = true;
            }
        }
        for (b, a) in base_pairs(nonterminal, rules, variant) {
            rel.matrix[b.index() * size + a.index()] = true;
        }
        rel.close();
        rel
    }

    /// Warshall's algorithm; idempotent on an already closed relation.
    pub fn close(&mut self) {
        let n = self.size;
        for k in 0..n {
            for i in 0..n {
                if !self.matrix[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if self.matrix[k * n + j] {
                        self.matrix[i * n + j] = true;
                    }
                }
            }
        }
    }

    /// `b ◇* a` (or the variant's analogue).
    pub fn contains(&self, b: SymbolId, a: SymbolId) -> bool {
        let (b, a) = (b.index(), a.index());
        b < self.size && a < self.size && self.matrix[b * self.size + a]
    }

    pub fn variant(&self) -> RelationVariant {
        self.variant
    }

    pub fn pairs(&self) -> BTreeSet<(SymbolId, SymbolId)> {
        let n = self.size;
        (0..n)
            .flat_map(|b| (0..n).map(move |a| (b, a)))
            .filter(|&(b, a)| self.matrix[b * n + a])
            .map(|(b, a)| (SymbolId(b as u32), SymbolId(a as u32)))
            .collect()
    }

    pub fn is_subset_of(&self, other: &HeadCornerRelation) -> bool {
        self.size == other.size
            && self
                .matrix
                .iter()
                .zip(&other.matrix)
                .all(|(&mine, &theirs)| !mine || theirs)
    }
}

fn base_pairs(
    nonterminal: &[bool],
    rules: &[HeadRule],
    variant: RelationVariant,
) -> Vec<(SymbolId, SymbolId)> {
    rules
        .iter()
        .filter(|r| match variant {
            RelationVariant::Full => true,
            RelationVariant::Left => r.head == 0,
            RelationVariant::Right => r.head + 1 == r.rhs.len(),
        })
        .map(|r| (r.head_symbol(), r.lhs))
        .filter(|(b, _)| nonterminal[b.index()])
        .collect()
}

/// A cycle `A ◇ … ◇ A`, listed from `A` downward through heads.
pub fn detect_head_recursion(g: &AugmentedGrammar) -> Option<Vec<SymbolId>> {
    let edges = g
        .rules()
        .iter()
        .filter(|r| g.is_nonterminal(r.head_symbol()))
        .map(|r| (r.lhs, r.head_symbol()));
    find_cycle(g.num_symbols(), edges)
}

/// A cycle of unit rules `A -> B -> … -> A`. Without empty right-hand sides
/// these are the only way to derive `A` from itself.
pub fn detect_cyclic(g: &AugmentedGrammar) -> Option<Vec<SymbolId>> {
    let edges = g
        .rules()
        .iter()
        .filter(|r| r.rhs.len() == 1 && g.is_nonterminal(r.rhs[0]))
        .map(|r| (r.lhs, r.rhs[0]));
    find_cycle(g.num_symbols(), edges)
}

fn find_cycle(
    size: usize,
    edges: impl Iterator<Item = (SymbolId, SymbolId)>,
) -> Option<Vec<SymbolId>> {
    let mut adj = vec![Vec::new(); size];
    for (from, to) in edges {
        if !adj[from.index()].contains(&to.index()) {
            adj[from.index()].push(to.index());
        }
    }
    // 0 = unvisited, 1 = on the current path, 2 = finished
    let mut color = vec![0u8; size];
    let mut path = Vec::new();
    for root in 0..size {
        if color[root] == 0 {
            if let Some(cycle) = dfs_cycle(root, &adj, &mut color, &mut path) {
                return Some(cycle.into_iter().map(|i| SymbolId(i as u32)).collect());
            }
        }
    }
    None
}

fn dfs_cycle(
    v: usize,
    adj: &[Vec<usize>],
    color: &mut [u8],
    path: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    color[v] = 1;
    path.push(v);
    for &w in &adj[v] {
        if color[w] == 1 {
            let from = path.iter().position(|&p| p == w).unwrap();
            return Some(path[from..].to_vec());
        }
        if color[w] == 0 {
            if let Some(c) = dfs_cycle(w, adj, color, path) {
                return Some(c);
            }
        }
    }
    path.pop();
    color[v] = 2;
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::HeadGrammar;

    fn aug(start: &str, rules: &[(&str, &[&str], usize)]) -> AugmentedGrammar {
        let g = HeadGrammar::new(start, rules.iter().map(|(l, r, h)| (*l, r.to_vec(), *h))).unwrap();
        AugmentedGrammar::new(&g)
    }

    fn id(g: &AugmentedGrammar, s: &str) -> SymbolId {
        g.symbols().get(s).unwrap()
    }

    #[test]
    fn full_and_left_relations() {
        let g = aug("S", &[("S", &["c", "A", "b"], 1), ("A", &["a"], 0)]);
        let full = HeadCornerRelation::compute(&g, RelationVariant::Full);
        let left = HeadCornerRelation::compute(&g, RelationVariant::Left);
        let (s, a) = (id(&g, "S"), id(&g, "A"));
        assert!(full.contains(a, s));
        assert!(full.contains(s, s) && full.contains(a, a));
        assert!(!full.contains(s, a));
        assert!(!left.contains(a, s));
        assert!(left.contains(a, a));
        // S' -> *⊥ S has a terminal head, so S' relates only to itself
        let sp = g.start_prime();
        assert!(!full.contains(s, sp));
        assert!(left.is_subset_of(&full));

        let g = aug("S", &[("S", &["A", "b"], 0), ("A", &["a"], 0)]);
        let left = HeadCornerRelation::compute(&g, RelationVariant::Left);
        assert!(left.contains(id(&g, "A"), id(&g, "S")));
    }

    #[test]
    fn right_variant_mirrors_left() {
        let g = aug("S", &[("S", &["b", "A"], 1), ("A", &["a"], 0)]);
        let right = HeadCornerRelation::compute(&g, RelationVariant::Right);
        let left = HeadCornerRelation::compute(&g, RelationVariant::Left);
        assert!(right.contains(id(&g, "A"), id(&g, "S")));
        assert!(!left.contains(id(&g, "A"), id(&g, "S")));
    }

    #[test]
    fn head_recursion_witness() {
        let g = aug("S", &[("S", &["a", "S", "b"], 1)]);
        assert_eq!(detect_head_recursion(&g), Some(vec![id(&g, "S")]));
        let g = aug("S", &[("S", &["c", "A", "b"], 1), ("A", &["a"], 0)]);
        assert_eq!(detect_head_recursion(&g), None);
    }

    #[test]
    fn unit_cycles() {
        let g = aug("S", &[("S", &["A"], 0), ("A", &["S"], 0)]);
        assert_eq!(detect_cyclic(&g), Some(vec![id(&g, "S"), id(&g, "A")]));
        let g = aug("S", &[("S", &["A", "A"], 0), ("A", &["a"], 0)]);
        assert_eq!(detect_cyclic(&g), None);
    }
}
