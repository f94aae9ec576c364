//! Head grammars: symbols, rules, validation, augmentation and the
//! head-corner relations.
//!
//! A symbol is a nonterminal iff it occurs as the left-hand side of some rule;
//! everything else is a terminal. Right-hand sides are never empty and carry
//! exactly one head, stored as an index into the right-hand side.

pub(crate) mod hg;
mod relation;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use hg::{parse_hg, write_hg, ParseError};
pub use relation::{detect_cyclic, detect_head_recursion, HeadCornerRelation, RelationVariant};

/// Name of the fresh terminal standing for the imaginary zeroth input symbol.
pub const BOTTOM: &str = "⊥";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interned symbol names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, SymbolId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> SymbolId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = SymbolId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (SymbolId(i as u32), n.as_str()))
    }

    /// `base` followed by as many primes as needed to avoid every existing name.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        name
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeadRule {
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
    pub head: usize,
}

impl HeadRule {
    pub fn new(lhs: SymbolId, rhs: Vec<SymbolId>, head: usize) -> Self {
        HeadRule { lhs, rhs, head }
    }

    pub fn head_symbol(&self) -> SymbolId {
        self.rhs[self.head]
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }
}

/// A violated grammar constraint, naming the offending rule where there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Some(r) => write!(f, "rule {}: {}", r + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid grammar: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidGrammar(pub Vec<Diagnostic>);

/// A context-free grammar with one head per rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadGrammar {
    symbols: SymbolTable,
    rules: Vec<HeadRule>,
    start: SymbolId,
}

impl HeadGrammar {
    /// Builds a grammar from `(lhs, rhs, head index)` triples and validates it.
    pub fn new<S: AsRef<str>>(
        start: &str,
        rules: impl IntoIterator<Item = (S, Vec<S>, usize)>,
    ) -> Result<Self, InvalidGrammar> {
        let mut symbols = SymbolTable::new();
        let start = symbols.intern(start);
        let rules = rules
            .into_iter()
            .map(|(lhs, rhs, head)| {
                let lhs = symbols.intern(lhs.as_ref());
                let rhs = rhs.iter().map(|s| symbols.intern(s.as_ref())).collect();
                HeadRule::new(lhs, rhs, head)
            })
            .collect();
        Self::from_parts(symbols, rules, start)
    }

    pub fn from_parts(
        symbols: SymbolTable,
        rules: Vec<HeadRule>,
        start: SymbolId,
    ) -> Result<Self, InvalidGrammar> {
        let g = HeadGrammar::from_parts_unchecked(symbols, rules, start);
        let diags = g.validate();
        if diags.is_empty() {
            Ok(g)
        } else {
            Err(InvalidGrammar(diags))
        }
    }

    pub fn from_parts_unchecked(symbols: SymbolTable, rules: Vec<HeadRule>, start: SymbolId) -> Self {
        HeadGrammar {
            symbols,
            rules,
            start,
        }
    }

    /// Every violated constraint; empty iff the grammar is well-formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        for (r, rule) in self.rules.iter().enumerate() {
            if rule.rhs.is_empty() {
                diags.push(Diagnostic {
                    rule: Some(r),
                    message: "empty right-hand side".into(),
                });
            } else if rule.head >= rule.rhs.len() {
                diags.push(Diagnostic {
                    rule: Some(r),
                    message: format!(
                        "head index {} out of range for right-hand side of length {}",
                        rule.head,
                        rule.rhs.len()
                    ),
                });
            }
            for &s in std::iter::once(&rule.lhs).chain(&rule.rhs) {
                if self.symbols.name(s) == BOTTOM {
                    diags.push(Diagnostic {
                        rule: Some(r),
                        message: format!("reserved symbol {BOTTOM} used"),
                    });
                }
            }
        }
        if !self.rules.iter().any(|r| r.lhs == self.start) {
            diags.push(Diagnostic {
                rule: None,
                message: format!("start symbol {} has no rules", self.symbols.name(self.start)),
            });
        }
        diags
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn rules(&self) -> &[HeadRule] {
        &self.rules
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn is_nonterminal(&self, s: SymbolId) -> bool {
        self.rules.iter().any(|r| r.lhs == s)
    }

    pub fn nonterminals(&self) -> Vec<SymbolId> {
        nonterminals_of(&self.symbols, &self.rules)
    }

    pub fn terminals(&self) -> Vec<SymbolId> {
        let nts = self.nonterminal_mask();
        self.symbols
            .iter()
            .map(|(id, _)| id)
            .filter(|id| !nts[id.index()] && self.rules.iter().any(|r| r.rhs.contains(id)))
            .collect()
    }

    pub(crate) fn nonterminal_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.symbols.len()];
        for r in &self.rules {
            mask[r.lhs.index()] = true;
        }
        mask
    }

    pub fn name(&self, s: SymbolId) -> &str {
        self.symbols.name(s)
    }

    /// Renders a rule with the head prefixed by `*`, as in the `.hg` format.
    pub fn render_rule(&self, rule: &HeadRule) -> String {
        let mut out = format!("{} ->", self.name(rule.lhs));
        for (i, &s) in rule.rhs.iter().enumerate() {
            out.push(' ');
            if i == rule.head {
                out.push('*');
            }
            out.push_str(self.name(s));
        }
        out
    }

    /// The grammar with head annotations dropped.
    pub fn to_cfg(&self) -> Cfg {
        Cfg::new(
            self.symbols.clone(),
            self.rules.iter().map(|r| (r.lhs, r.rhs.clone())).collect(),
            self.start,
        )
    }
}

fn nonterminals_of(symbols: &SymbolTable, rules: &[HeadRule]) -> Vec<SymbolId> {
    let mut seen = vec![false; symbols.len()];
    let mut out = Vec::new();
    for r in rules {
        if !seen[r.lhs.index()] {
            seen[r.lhs.index()] = true;
            out.push(r.lhs);
        }
    }
    out
}

/// `P†`: the grammar's rules plus `S' -> *⊥ S`, which is always rule 0.
#[derive(Clone, Debug)]
pub struct AugmentedGrammar {
    base: HeadGrammar,
    symbols: SymbolTable,
    rules: Vec<HeadRule>,
    start_prime: SymbolId,
    bottom: SymbolId,
    nonterminal: Vec<bool>,
}

impl AugmentedGrammar {
    pub fn new(base: &HeadGrammar) -> Self {
        let mut symbols = base.symbols.clone();
        let prime = symbols.fresh_name(&format!("{}'", base.name(base.start)));
        let start_prime = symbols.intern(&prime);
        let bottom_name = symbols.fresh_name(BOTTOM);
        let bottom = symbols.intern(&bottom_name);
        let mut rules = vec![HeadRule::new(start_prime, vec![bottom, base.start], 0)];
        rules.extend(base.rules.iter().cloned());
        let mut nonterminal = vec![false; symbols.len()];
        for r in &rules {
            nonterminal[r.lhs.index()] = true;
        }
        AugmentedGrammar {
            base: base.clone(),
            symbols,
            rules,
            start_prime,
            bottom,
            nonterminal,
        }
    }

    pub fn base(&self) -> &HeadGrammar {
        &self.base
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn rules(&self) -> &[HeadRule] {
        &self.rules
    }

    pub fn rule(&self, r: usize) -> &HeadRule {
        &self.rules[r]
    }

    pub fn start(&self) -> SymbolId {
        self.base.start
    }

    pub fn start_prime(&self) -> SymbolId {
        self.start_prime
    }

    pub fn bottom(&self) -> SymbolId {
        self.bottom
    }

    pub fn is_nonterminal(&self, s: SymbolId) -> bool {
        self.nonterminal[s.index()]
    }

    pub fn nonterminals(&self) -> Vec<SymbolId> {
        nonterminals_of(&self.symbols, &self.rules)
    }

    pub fn name(&self, s: SymbolId) -> &str {
        self.symbols.name(s)
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }
}

/// A plain context-free grammar; head annotations, where there were any, are gone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    pub symbols: SymbolTable,
    pub rules: Vec<(SymbolId, Vec<SymbolId>)>,
    pub start: SymbolId,
    nonterminal: Vec<bool>,
}

impl Cfg {
    pub fn new(symbols: SymbolTable, rules: Vec<(SymbolId, Vec<SymbolId>)>, start: SymbolId) -> Self {
        let mut nonterminal = vec![false; symbols.len()];
        for (lhs, _) in &rules {
            nonterminal[lhs.index()] = true;
        }
        Cfg {
            symbols,
            rules,
            start,
            nonterminal,
        }
    }

    pub fn is_nonterminal(&self, s: SymbolId) -> bool {
        self.nonterminal.get(s.index()).copied().unwrap_or(false)
    }

    pub fn terminals(&self) -> Vec<SymbolId> {
        let mut seen = vec![false; self.symbols.len()];
        let mut out = Vec::new();
        for (_, rhs) in &self.rules {
            for &s in rhs {
                if !self.is_nonterminal(s) && !seen[s.index()] {
                    seen[s.index()] = true;
                    out.push(s);
                }
            }
        }
        out.sort_by(|a, b| self.symbols.name(*a).cmp(self.symbols.name(*b)));
        out
    }
}
