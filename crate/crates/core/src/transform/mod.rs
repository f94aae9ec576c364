//! Generalized head grammars, whose right-hand sides are binary trees of
//! symbols, and the transformations between grammar classes:
//!
//! * [`tau_head`] turns a generalized head grammar into a plain head grammar
//!   by introducing one bracket nonterminal `[t]` per distinct proper subtree.
//! * [`tau_two`] brings a context-free grammar into two normal form using one
//!   bracket nonterminal per distinct proper suffix.
//! * [`embed`] maps a plain head grammar into the generalized class so the
//!   tree-based recognizer can run on it. This is a convention of this crate:
//!   left members form a chain processed right to left, right members a chain
//!   processed left to right.

mod ghg;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::grammar::{
    Cfg, Diagnostic, HeadGrammar, HeadRule, InvalidGrammar, SymbolId, SymbolTable, BOTTOM,
};

pub use ghg::{parse_ghg, parse_tree, write_ghg};

/// A binary tree of symbols; the root is the head of the fragment it covers.
/// Absent children are empty subtrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhsTree {
    pub root: SymbolId,
    pub left: Option<Box<RhsTree>>,
    pub right: Option<Box<RhsTree>>,
}

impl RhsTree {
    pub fn leaf(root: SymbolId) -> Self {
        RhsTree {
            root,
            left: None,
            right: None,
        }
    }

    pub fn node(left: Option<RhsTree>, root: SymbolId, right: Option<RhsTree>) -> Self {
        RhsTree {
            root,
            left: left.map(Box::new),
            right: right.map(Box::new),
        }
    }

    /// In-order yield: the flat right-hand side this tree stands for.
    pub fn yield_symbols(&self) -> Vec<SymbolId> {
        let mut out = Vec::new();
        self.collect_yield(&mut out);
        out
    }

    fn collect_yield(&self, out: &mut Vec<SymbolId>) {
        if let Some(l) = &self.left {
            l.collect_yield(out);
        }
        out.push(self.root);
        if let Some(r) = &self.right {
            r.collect_yield(out);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |t| t.size()) + self.right.as_ref().map_or(0, |t| t.size())
    }

    pub fn depth(&self) -> usize {
        1 + self
            .left
            .as_ref()
            .map_or(0, |t| t.depth())
            .max(self.right.as_ref().map_or(0, |t| t.depth()))
    }

    /// Every subtree except the tree itself, in preorder.
    pub fn proper_subtrees(&self) -> Vec<&RhsTree> {
        let mut out = Vec::new();
        for child in [&self.left, &self.right].into_iter().flatten() {
            out.push(&**child);
            out.extend(child.proper_subtrees());
        }
        out
    }

    /// Linear notation: `(α)X(β)` with empty subtrees omitted, e.g. `((c)A(b))s`.
    pub fn render(&self, symbols: &SymbolTable) -> String {
        let mut out = String::new();
        self.render_into(symbols, &mut out);
        out
    }

    fn render_into(&self, symbols: &SymbolTable, out: &mut String) {
        if let Some(l) = &self.left {
            out.push('(');
            l.render_into(symbols, out);
            out.push(')');
        }
        out.push_str(symbols.name(self.root));
        if let Some(r) = &self.right {
            out.push('(');
            r.render_into(symbols, out);
            out.push(')');
        }
    }

    /// The `.ghg` form: `(X)` or `(X left right)` with `()` for an empty child.
    pub fn to_ghg(&self, symbols: &SymbolTable) -> String {
        let mut out = String::new();
        self.ghg_into(symbols, &mut out);
        out
    }

    fn ghg_into(&self, symbols: &SymbolTable, out: &mut String) {
        out.push('(');
        out.push_str(symbols.name(self.root));
        if self.left.is_some() || self.right.is_some() {
            for child in [&self.left, &self.right] {
                out.push(' ');
                match child {
                    Some(t) => t.ghg_into(symbols, out),
                    None => out.push_str("()"),
                }
            }
        }
        out.push(')');
    }

    pub fn mirror(&self) -> RhsTree {
        RhsTree {
            root: self.root,
            left: self.right.as_ref().map(|t| Box::new(t.mirror())),
            right: self.left.as_ref().map(|t| Box::new(t.mirror())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenHeadRule {
    pub lhs: SymbolId,
    pub rhs: RhsTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenHeadGrammar {
    symbols: SymbolTable,
    rules: Vec<GenHeadRule>,
    start: SymbolId,
}

impl GenHeadGrammar {
    pub fn from_parts(
        symbols: SymbolTable,
        rules: Vec<GenHeadRule>,
        start: SymbolId,
    ) -> Result<Self, InvalidGrammar> {
        let g = GenHeadGrammar {
            symbols,
            rules,
            start,
        };
        let diags = g.validate();
        if diags.is_empty() {
            Ok(g)
        } else {
            Err(InvalidGrammar(diags))
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        for (r, rule) in self.rules.iter().enumerate() {
            let uses_bottom = std::iter::once(rule.lhs)
                .chain(rule.rhs.yield_symbols())
                .any(|s| self.symbols.name(s) == BOTTOM);
            if uses_bottom {
                diags.push(Diagnostic {
                    rule: Some(r),
                    message: format!("reserved symbol {BOTTOM} used"),
                });
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

    pub fn rules(&self) -> &[GenHeadRule] {
        &self.rules
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn name(&self, s: SymbolId) -> &str {
        self.symbols.name(s)
    }

    pub fn is_nonterminal(&self, s: SymbolId) -> bool {
        self.rules.iter().any(|r| r.lhs == s)
    }

    pub fn render_rule(&self, rule: &GenHeadRule) -> String {
        format!("{} → {}", self.name(rule.lhs), rule.rhs.render(&self.symbols))
    }

    /// The underlying context-free grammar (in-order yields of the trees).
    pub fn flatten(&self) -> Cfg {
        Cfg::new(
            self.symbols.clone(),
            self.rules
                .iter()
                .map(|r| (r.lhs, r.rhs.yield_symbols()))
                .collect(),
            self.start,
        )
    }
}

/// Bracket nonterminal display name for a tree.
pub fn bracket_name(tree: &RhsTree, symbols: &SymbolTable) -> String {
    format!("[{}]", tree.render(symbols))
}

/// The bracket nonterminal of every distinct proper subtree, in discovery
/// order, interned into a copy of the grammar's symbol table.
pub(crate) fn brackets(g: &GenHeadGrammar) -> (SymbolTable, HashMap<&RhsTree, SymbolId>, Vec<&RhsTree>) {
    let mut symbols = g.symbols.clone();
    let mut brackets: HashMap<&RhsTree, SymbolId> = HashMap::new();
    let mut order: Vec<&RhsTree> = Vec::new();
    for rule in &g.rules {
        for sub in rule.rhs.proper_subtrees() {
            if !brackets.contains_key(sub) {
                let name = symbols.fresh_name(&bracket_name(sub, &g.symbols));
                brackets.insert(sub, symbols.intern(&name));
                order.push(sub);
            }
        }
    }
    (symbols, brackets, order)
}

/// `A -> [α] *X [β]` per rule `A -> (α)X(β)`, and `[(α)X(β)] -> [α] *X [β]`
/// per distinct proper subtree, with `[ϵ]` members dropped.
pub fn tau_head(g: &GenHeadGrammar) -> HeadGrammar {
    let (symbols, brackets, order) = brackets(g);
    let expand = |t: &RhsTree| -> (Vec<SymbolId>, usize) {
        let mut rhs = Vec::with_capacity(3);
        if let Some(l) = &t.left {
            rhs.push(brackets[&**l]);
        }
        let head = rhs.len();
        rhs.push(t.root);
        if let Some(r) = &t.right {
            rhs.push(brackets[&**r]);
        }
        (rhs, head)
    };
    let mut rules = Vec::new();
    for rule in &g.rules {
        let (rhs, head) = expand(&rule.rhs);
        rules.push(HeadRule::new(rule.lhs, rhs, head));
    }
    for sub in order {
        let (rhs, head) = expand(sub);
        rules.push(HeadRule::new(brackets[sub], rhs, head));
    }
    HeadGrammar::from_parts(symbols, rules, g.start).expect("tau_head preserves validity")
}

/// `A -> X [α]` per rule `A -> X α`, and `[X α] -> X [α]` per distinct proper
/// suffix, with `[ϵ]` members dropped. Heads are placed on the first member.
pub fn tau_two(g: &Cfg) -> HeadGrammar {
    let mut symbols = g.symbols.clone();
    let single_chars = g.symbols.iter().all(|(_, n)| n.chars().count() == 1);
    let suffix_name = |suffix: &[SymbolId]| {
        let sep = if single_chars { "" } else { "." };
        let parts: Vec<&str> = suffix.iter().map(|&s| g.symbols.name(s)).collect();
        format!("[{}]", parts.join(sep))
    };
    let mut suffixes: HashMap<&[SymbolId], SymbolId> = HashMap::new();
    let mut order: Vec<&[SymbolId]> = Vec::new();
    for (_, rhs) in &g.rules {
        for start in 1..rhs.len() {
            let suffix = &rhs[start..];
            if !suffixes.contains_key(suffix) {
                let name = symbols.fresh_name(&suffix_name(suffix));
                suffixes.insert(suffix, symbols.intern(&name));
                order.push(suffix);
            }
        }
    }
    let split = |seq: &[SymbolId]| -> Vec<SymbolId> {
        let mut rhs = vec![seq[0]];
        if seq.len() > 1 {
            rhs.push(suffixes[&seq[1..]]);
        }
        rhs
    };
    let mut rules: Vec<HeadRule> = g
        .rules
        .iter()
        .map(|(lhs, rhs)| HeadRule::new(*lhs, split(rhs), 0))
        .collect();
    for suffix in order {
        rules.push(HeadRule::new(suffixes[suffix], split(suffix), 0));
    }
    HeadGrammar::from_parts(symbols, rules, g.start).expect("tau_two preserves validity")
}

/// Maps `A -> x1 … xk *X y1 … yl` to the tree with root `X`, left subtree the
/// chain `(…((x1)x2)…)xk` and right subtree the chain `y1(y2(…(yl)))`.
pub fn embed(g: &HeadGrammar) -> GenHeadGrammar {
    let rules = g
        .rules()
        .iter()
        .map(|r| {
            let left = r.rhs[..r.head]
                .iter()
                .fold(None, |acc, &s| Some(RhsTree::node(acc, s, None)));
            let right = r.rhs[r.head + 1..]
                .iter()
                .rev()
                .fold(None, |acc, &s| Some(RhsTree::node(None, s, acc)));
            GenHeadRule {
                lhs: r.lhs,
                rhs: RhsTree::node(left, r.head_symbol(), right),
            }
        })
        .collect();
    GenHeadGrammar::from_parts(g.symbols().clone(), rules, g.start()).expect("embedding preserves validity")
}

/// Human-readable listing of a head grammar, one rule per line.
pub fn describe(g: &HeadGrammar) -> String {
    let mut out = String::new();
    for r in g.rules() {
        let _ = writeln!(out, "{}", g.render_rule(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::write_hg;
    use std::collections::BTreeSet;

    pub(crate) const INFIX_GHG: &str = "start S\n\
        S -> (s (A (c) (b)) ())\n\
        S -> (s (A () (d)) ())\n\
        S -> (s (B) ())\n\
        A -> (a)\n\
        B -> (A () (b))\n";

    fn rule_set(g: &HeadGrammar) -> BTreeSet<String> {
        g.rules().iter().map(|r| g.render_rule(r)).collect()
    }

    #[test]
    fn tau_head_on_example_grammar() {
        let g = parse_ghg(INFIX_GHG).unwrap();
        let t = tau_head(&g);
        let expected: BTreeSet<String> = [
            "S -> [(c)A(b)] *s",
            "S -> [A(d)] *s",
            "S -> [B] *s",
            "[(c)A(b)] -> [c] *A [b]",
            "[c] -> *c",
            "[b] -> *b",
            "[A(d)] -> *A [d]",
            "[d] -> *d",
            "[B] -> *B",
            "B -> *A [b]",
            "A -> *a",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(rule_set(&t), expected);
        // the printed grammar re-parses to itself
        let printed = write_hg(&t);
        assert_eq!(write_hg(&crate::grammar::parse_hg(&printed).unwrap()), printed);
    }

    #[test]
    fn tau_head_leaf_rule() {
        let g = parse_ghg("start S\nS -> (a)\n").unwrap();
        let t = tau_head(&g);
        assert_eq!(rule_set(&t), BTreeSet::from(["S -> *a".to_string()]));
    }

    #[test]
    fn tau_head_is_deterministic() {
        let g = parse_ghg(INFIX_GHG).unwrap();
        assert_eq!(tau_head(&g), tau_head(&g));
    }

    #[test]
    fn tau_two_examples() {
        let g = HeadGrammar::new("S", [("S", vec!["a", "b", "c"], 1)]).unwrap();
        let t = tau_two(&g.to_cfg());
        let expected: BTreeSet<String> = ["S -> *a [bc]", "[bc] -> *b [c]", "[c] -> *c"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(rule_set(&t), expected);

        let g = HeadGrammar::new("S", [("S", vec!["a"], 0)]).unwrap();
        assert_eq!(rule_set(&tau_two(&g.to_cfg())), BTreeSet::from(["S -> *a".to_string()]));
    }

    #[test]
    fn tau_two_multichar_names_are_separated() {
        let g = HeadGrammar::new("S", [("S", vec!["x", "yy", "z"], 0)]).unwrap();
        let t = tau_two(&g.to_cfg());
        assert!(rule_set(&t).contains("[yy.z] -> *yy [z]"));
    }

    #[test]
    fn embed_examples() {
        let g = HeadGrammar::new(
            "S",
            [
                ("S", vec!["c", "A", "b"], 1),
                ("S", vec!["a"], 0),
                ("S", vec!["c", "d", "A"], 2),
                ("A", vec!["a"], 0),
            ],
        )
        .unwrap();
        let e = embed(&g);
        let ghg: Vec<String> = e.rules().iter().map(|r| r.rhs.to_ghg(e.symbols())).collect();
        assert_eq!(ghg[0], "(A (c) (b))");
        assert_eq!(ghg[1], "(a)");
        assert_eq!(ghg[2], "(A (d (c) ()) ())");
        assert_eq!(e.flatten(), g.to_cfg());
    }

    #[test]
    fn tree_helpers() {
        let g = parse_ghg(INFIX_GHG).unwrap();
        let t = &g.rules()[0].rhs;
        assert_eq!(t.render(g.symbols()), "((c)A(b))s");
        assert_eq!(t.size(), 4);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.proper_subtrees().len(), 3);
        assert_eq!(t.mirror().mirror(), *t);
        assert_eq!(g.rules()[1].rhs.render(g.symbols()), "(A(d))s");
    }
}
