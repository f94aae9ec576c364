//! Generalized head-infix recognition over grammars whose right-hand sides
//! are binary trees. Items carry sets of trees and rules; `closure` and the
//! `goto` family are computed on the fly from an interned tree table.

use std::collections::HashMap;
use std::rc::Rc;

use super::{mirror_pos, Clause, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{HeadGrammar, SymbolId, SymbolTable, BOTTOM};
use crate::transform::{bracket_name, brackets, embed, GenHeadGrammar, GenHeadRule, RhsTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeId(pub u32);

/// An element of an item set: a tree, or a rule by index (rule 0 is the
/// added start rule `S' → ⊥(S)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeOrRule {
    Tree(TreeId),
    Rule(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    root: SymbolId,
    left: Option<TreeId>,
    right: Option<TreeId>,
}

/// Every subtree of every right-hand side, and their mirror images, with
/// structurally equal trees sharing one id.
#[derive(Debug, Default)]
struct TreeTable {
    nodes: Vec<Node>,
    index: HashMap<Node, TreeId>,
    mirror: Vec<TreeId>,
}

impl TreeTable {
    fn intern_node(&mut self, node: Node) -> TreeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TreeId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn intern(&mut self, t: &RhsTree) -> TreeId {
        let left = t.left.as_ref().map(|l| self.intern(l));
        let right = t.right.as_ref().map(|r| self.intern(r));
        self.intern_node(Node { root: t.root, left, right })
    }

    fn lookup(&self, t: &RhsTree) -> Option<TreeId> {
        let left = match &t.left {
            Some(l) => Some(self.lookup(l)?),
            None => None,
        };
        let right = match &t.right {
            Some(r) => Some(self.lookup(r)?),
            None => None,
        };
        self.index.get(&Node { root: t.root, left, right }).copied()
    }

    /// Interns the mirror image of every tree; children always precede
    /// their parents, so their mirrors are known by the time they are needed.
    fn close_under_mirror(&mut self) {
        let mut mirror: Vec<Option<TreeId>> = vec![None; self.nodes.len()];
        let mut id = 0;
        while id < self.nodes.len() {
            if mirror.len() < self.nodes.len() {
                mirror.resize(self.nodes.len(), None);
            }
            if mirror[id].is_none() {
                let n = self.nodes[id];
                let m = self.intern_node(Node {
                    root: n.root,
                    left: n.right.map(|c| mirror[c.0 as usize].expect("child mirrored first")),
                    right: n.left.map(|c| mirror[c.0 as usize].expect("child mirrored first")),
                });
                mirror.resize(self.nodes.len(), None);
                mirror[id] = Some(m);
                mirror[m.0 as usize] = Some(TreeId(id as u32));
            }
            id += 1;
        }
        self.mirror = mirror.into_iter().map(|m| m.expect("all mirrored")).collect();
    }

    fn node(&self, t: TreeId) -> Node {
        self.nodes[t.0 as usize]
    }

    fn to_tree(&self, t: TreeId) -> RhsTree {
        let n = self.node(t);
        RhsTree::node(n.left.map(|l| self.to_tree(l)), n.root, n.right.map(|r| self.to_tree(r)))
    }
}

/// The grammar seen from one side: as is, or with every tree mirrored.
struct Side {
    table: Rc<TreeTable>,
    rhs: Vec<TreeId>,
    lhs: Vec<SymbolId>,
    by_lhs: HashMap<SymbolId, Vec<u32>>,
}

type Set = Vec<TreeOrRule>;

impl Side {
    fn node(&self, e: TreeOrRule) -> Node {
        match e {
            TreeOrRule::Tree(t) => self.table.node(t),
            TreeOrRule::Rule(r) => self.table.node(self.rhs[r as usize]),
        }
    }

    fn closure(&self, q: impl IntoIterator<Item = TreeOrRule>) -> Set {
        let mut out: Set = q.into_iter().collect();
        let mut work = out.clone();
        while let Some(e) = work.pop() {
            let root = self.node(e).root;
            for &r in self.by_lhs.get(&root).map_or(&[][..], |v| v) {
                let rule = TreeOrRule::Rule(r);
                if !out.contains(&rule) {
                    out.push(rule);
                    work.push(rule);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn goto(&self, q: &[TreeOrRule], x: SymbolId) -> Set {
        q.iter().copied().filter(|&e| self.node(e).root == x).collect()
    }

    fn goto_left(&self, q: &[TreeOrRule], alpha: Option<TreeId>) -> Set {
        q.iter().copied().filter(|&e| self.node(e).left == alpha).collect()
    }

    fn goto_right(&self, q: &[TreeOrRule], beta: Option<TreeId>) -> Set {
        q.iter().copied().filter(|&e| self.node(e).right == beta).collect()
    }

    fn left_set(&self, q: &[TreeOrRule]) -> Set {
        self.closure(q.iter().filter_map(|&e| self.node(e).left).map(TreeOrRule::Tree))
    }

    fn right_set(&self, q: &[TreeOrRule]) -> Set {
        self.closure(q.iter().filter_map(|&e| self.node(e).right).map(TreeOrRule::Tree))
    }
}

/// The four item shapes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GhiItem {
    /// `[i, k, Q, m, j]`: the heads of `Q` span `(k, m]`.
    Full { i: Pos, k: Pos, q: Set, m: Pos, j: Pos },
    /// `[k, Q, m, j]`: heads and left subtrees span `(k, m]`.
    RightOpen { k: Pos, q: Set, m: Pos, j: Pos },
    /// `[i, k, Q, m]`: heads and right subtrees span `(k, m]`.
    LeftOpen { i: Pos, k: Pos, q: Set, m: Pos },
    /// `[k, t, m]`: all of `t` spans `(k, m]`.
    Done { k: Pos, t: TreeOrRule, m: Pos },
}

impl GhiItem {
    fn mirror(&self, table: &TreeTable) -> Self {
        let me = |e: &TreeOrRule| match *e {
            TreeOrRule::Tree(t) => TreeOrRule::Tree(table.mirror[t.0 as usize]),
            rule => rule,
        };
        let mq = |q: &Set| {
            let mut out: Set = q.iter().map(me).collect();
            out.sort();
            out
        };
        let p = mirror_pos;
        match self {
            GhiItem::Full { i, k, q, m, j } => GhiItem::Full { i: p(*j), k: p(*m), q: mq(q), m: p(*k), j: p(*i) },
            GhiItem::RightOpen { k, q, m, j } => GhiItem::LeftOpen { i: p(*j), k: p(*m), q: mq(q), m: p(*k) },
            GhiItem::LeftOpen { i, k, q, m } => GhiItem::RightOpen { k: p(*m), q: mq(q), m: p(*k), j: p(*i) },
            GhiItem::Done { k, t, m } => GhiItem::Done { k: p(*m), t: me(t), m: p(*k) },
        }
    }

    /// The recognized span `(k, m]`.
    pub fn span(&self) -> (Pos, Pos) {
        match *self {
            GhiItem::Full { k, m, .. }
            | GhiItem::RightOpen { k, m, .. }
            | GhiItem::LeftOpen { k, m, .. }
            | GhiItem::Done { k, m, .. } => (k, m),
        }
    }
}

type GhiClause = Clause<Side, GhiItem>;

fn top(stack: &[GhiItem]) -> &GhiItem {
    stack.last().expect("stacks are never empty")
}

// [i, k, Q, m, j] ↦ [i, k, Q', m] where Q' = gotoright(Q, ϵ).
fn c1a(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    let GhiItem::Full { i, k, q, m, .. } = top(stack) else { return };
    let q = s.goto_right(q, None);
    if !q.is_empty() {
        out.push((1, vec![GhiItem::LeftOpen { i: *i, k: *k, q, m: *m }]));
    }
}

// [k, Q, m, j] ↦ [k, t, m] for t ∈ gotoright(Q, ϵ).
fn c1c(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    let GhiItem::RightOpen { k, q, m, .. } = top(stack) else { return };
    for t in s.goto_right(q, None) {
        out.push((1, vec![GhiItem::Done { k: *k, t, m: *m }]));
    }
}

/// Pushes `[m, p-1, goto(right(Q), a_p), p, j]` for every `m < p ≤ j`.
fn scan(s: &Side, q: &[TreeOrRule], m: Pos, j: Pos, input: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    let right = s.right_set(q);
    if right.is_empty() {
        return;
    }
    for p in m + 1..=j {
        let Some(a) = input.at(p) else { continue };
        let q = s.goto(&right, a);
        if !q.is_empty() {
            out.push((0, vec![GhiItem::Full { i: m, k: p - 1, q, m: p, j }]));
        }
    }
}

fn c2a(s: &Side, stack: &[GhiItem], input: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    if let GhiItem::Full { q, m, j, .. } = top(stack) {
        scan(s, q, *m, *j, input, out);
    }
}

fn c3a(s: &Side, stack: &[GhiItem], input: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    if let GhiItem::RightOpen { q, m, j, .. } = top(stack) {
        scan(s, q, *m, *j, input, out);
    }
}

// [i, k, Q, m, j][m, γ, m'] ↦ [i, k, Q', m'] where Q' = gotoright(Q, γ).
fn c4a(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    let [.., GhiItem::Full { i, k, q, m, .. }, GhiItem::Done { k: k2, t: TreeOrRule::Tree(g), m: m2 }] = stack else {
        return;
    };
    if m != k2 {
        return;
    }
    let q = s.goto_right(q, Some(*g));
    if !q.is_empty() {
        out.push((2, vec![GhiItem::LeftOpen { i: *i, k: *k, q, m: *m2 }]));
    }
}

// [k, Q, m, j][m, γ, m'] ↦ [k, t, m'] for t ∈ gotoright(Q, γ).
fn c5a(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    let [.., GhiItem::RightOpen { k, q, m, .. }, GhiItem::Done { k: k2, t: TreeOrRule::Tree(g), m: m2 }] = stack else {
        return;
    };
    if m != k2 {
        return;
    }
    for t in s.goto_right(q, Some(*g)) {
        out.push((2, vec![GhiItem::Done { k: *k, t, m: *m2 }]));
    }
}

/// `[k', A → γ, m']` on top of an item with set `q`, right edge `m` and
/// bound `j`: pushes `[m, k', goto(right(Q), A), m', j]` in its place.
fn attach(s: &Side, q: &[TreeOrRule], m: Pos, j: Pos, done: &GhiItem, out: &mut Vec<Step<GhiItem>>) {
    let GhiItem::Done { k: k2, t: TreeOrRule::Rule(r), m: m2 } = *done else { return };
    if m > k2 {
        return;
    }
    let q = s.goto(&s.right_set(q), s.lhs[r as usize]);
    if !q.is_empty() {
        out.push((1, vec![GhiItem::Full { i: m, k: k2, q, m: m2, j }]));
    }
}

fn c6a(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    if let [.., GhiItem::Full { q, m, j, .. }, done] = stack {
        attach(s, q, *m, *j, done, out);
    }
}

fn c7a(s: &Side, stack: &[GhiItem], _: InputView<'_>, out: &mut Vec<Step<GhiItem>>) {
    if let [.., GhiItem::RightOpen { q, m, j, .. }, done] = stack {
        attach(s, q, *m, *j, done, out);
    }
}

const CLAUSES: &[GhiClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a },
    Clause { label: "1c", mirror_label: Some("1d"), apply: c1c },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
    Clause { label: "5a", mirror_label: Some("5b"), apply: c5a },
    Clause { label: "6a", mirror_label: Some("6b"), apply: c6a },
    Clause { label: "7a", mirror_label: Some("7b"), apply: c7a },
];

const LABELS: &[&str] = &[
    "1a", "1b", "1c", "1d", "2a", "2b", "3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b", "7a", "7b",
];

/// Generalized head-infix recognizer.
pub struct Ghi {
    base: GenHeadGrammar,
    symbols: SymbolTable,
    rules: Vec<GenHeadRule>,
    start_prime: SymbolId,
    bottom: SymbolId,
    nonterminal: Vec<bool>,
    table: Rc<TreeTable>,
    sides: [Side; 2],
    /// Bracket names of the head transformation, for `yld`.
    bracket: HashMap<TreeId, String>,
}

impl Ghi {
    pub fn new(g: &GenHeadGrammar) -> Self {
        let mut symbols = g.symbols().clone();
        let prime = symbols.fresh_name(&format!("{}'", g.name(g.start())));
        let start_prime = symbols.intern(&prime);
        let bottom_name = symbols.fresh_name(BOTTOM);
        let bottom = symbols.intern(&bottom_name);
        let mut rules = vec![GenHeadRule {
            lhs: start_prime,
            rhs: RhsTree::node(None, bottom, Some(RhsTree::leaf(g.start()))),
        }];
        rules.extend(g.rules().iter().cloned());
        let mut nonterminal = vec![false; symbols.len()];
        for r in &rules {
            nonterminal[r.lhs.index()] = true;
        }

        let mut table = TreeTable::default();
        let rhs: Vec<TreeId> = rules.iter().map(|r| table.intern(&r.rhs)).collect();
        table.close_under_mirror();
        let table = Rc::new(table);

        let lhs: Vec<SymbolId> = rules.iter().map(|r| r.lhs).collect();
        let mut by_lhs: HashMap<SymbolId, Vec<u32>> = HashMap::new();
        for (idx, r) in rules.iter().enumerate() {
            by_lhs.entry(r.lhs).or_default().push(idx as u32);
        }
        let mirrored = rhs.iter().map(|t| table.mirror[t.0 as usize]).collect();
        let sides = [
            Side { table: table.clone(), rhs, lhs: lhs.clone(), by_lhs: by_lhs.clone() },
            Side { table: table.clone(), rhs: mirrored, lhs, by_lhs },
        ];

        let (names, ids, _) = brackets(g);
        let bracket = ids
            .into_iter()
            .filter_map(|(t, s)| table.lookup(t).map(|id| (id, names.name(s).to_string())))
            .collect();

        Ghi {
            base: g.clone(),
            symbols,
            rules,
            start_prime,
            bottom,
            nonterminal,
            table,
            sides,
            bracket,
        }
    }

    /// Runs on a plain head grammar through [`embed`].
    pub fn from_head_grammar(g: &HeadGrammar) -> Self {
        Self::new(&embed(g))
    }

    pub fn base(&self) -> &GenHeadGrammar {
        &self.base
    }

    /// Symbols of the grammar plus `S'` and `⊥`.
    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// The grammar's rules preceded by `S' → ⊥(S)`.
    pub fn rules(&self) -> &[GenHeadRule] {
        &self.rules
    }

    pub fn start_prime(&self) -> SymbolId {
        self.start_prime
    }

    pub fn bottom(&self) -> SymbolId {
        self.bottom
    }

    /// The element for a tree, if it is a subtree of some right-hand side.
    pub fn tree(&self, t: &RhsTree) -> Option<TreeOrRule> {
        self.table.lookup(t).map(TreeOrRule::Tree)
    }

    pub fn tree_id(&self, t: &RhsTree) -> Option<TreeId> {
        self.table.lookup(t)
    }

    pub fn to_tree(&self, t: TreeId) -> RhsTree {
        self.table.to_tree(t)
    }

    /// Positions negated and every tree replaced by its mirror image.
    pub fn mirror_item(&self, item: &GhiItem) -> GhiItem {
        item.mirror(&self.table)
    }

    pub fn closure(&self, q: &[TreeOrRule]) -> Vec<TreeOrRule> {
        self.sides[0].closure(q.iter().copied())
    }

    pub fn goto(&self, q: &[TreeOrRule], x: SymbolId) -> Vec<TreeOrRule> {
        self.sides[0].goto(q, x)
    }

    pub fn goto_left_tree(&self, q: &[TreeOrRule], alpha: Option<TreeId>) -> Vec<TreeOrRule> {
        self.sides[0].goto_left(q, alpha)
    }

    pub fn goto_right_tree(&self, q: &[TreeOrRule], beta: Option<TreeId>) -> Vec<TreeOrRule> {
        self.sides[0].goto_right(q, beta)
    }

    pub fn left_set(&self, q: &[TreeOrRule]) -> Vec<TreeOrRule> {
        self.sides[0].left_set(q)
    }

    pub fn right_set(&self, q: &[TreeOrRule]) -> Vec<TreeOrRule> {
        self.sides[0].right_set(q)
    }

    fn bracket_of(&self, t: TreeId) -> String {
        self.bracket
            .get(&t)
            .cloned()
            .unwrap_or_else(|| bracket_name(&self.table.to_tree(t), &self.symbols))
    }

    /// What an item stands for in the head-transformed grammar: `X`, `[α]X`,
    /// `X[β]` or `[α]X[β]`, with empty brackets left out.
    pub fn yld(&self, item: &GhiItem) -> Result<Vec<String>, String> {
        let s = &self.sides[0];
        let (elems, with_left, with_right): (&[TreeOrRule], bool, bool) = match item {
            GhiItem::Full { q, .. } => (q, false, false),
            GhiItem::RightOpen { q, .. } => (q, true, false),
            GhiItem::LeftOpen { q, .. } => (q, false, true),
            GhiItem::Done { t, .. } => (std::slice::from_ref(t), true, true),
        };
        let mut result: Option<Vec<String>> = None;
        for &e in elems {
            let n = s.node(e);
            let mut y = Vec::new();
            if with_left {
                y.extend(n.left.map(|l| self.bracket_of(l)));
            }
            y.push(self.symbols.name(n.root).to_string());
            if with_right {
                y.extend(n.right.map(|r| self.bracket_of(r)));
            }
            match &result {
                None => result = Some(y),
                Some(prev) if *prev != y => {
                    return Err(format!("inconsistent yield {} vs {}", prev.join(" "), y.join(" ")))
                }
                Some(_) => {}
            }
        }
        result.ok_or_else(|| "empty item set".to_string())
    }

    pub fn render_element(&self, e: TreeOrRule) -> String {
        match e {
            TreeOrRule::Tree(t) => self.table.to_tree(t).render(&self.symbols),
            TreeOrRule::Rule(r) => {
                let rule = &self.rules[r as usize];
                format!("{} → {}", self.symbols.name(rule.lhs), rule.rhs.render(&self.symbols))
            }
        }
    }

    pub fn render_set(&self, q: &[TreeOrRule]) -> String {
        let parts: Vec<String> = q.iter().map(|&e| self.render_element(e)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl Automaton for Ghi {
    type Item = GhiItem;

    fn name(&self) -> &'static str {
        "ghi"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        LABELS
    }

    fn init(&self, n: usize) -> GhiItem {
        GhiItem::RightOpen { k: -1, q: vec![TreeOrRule::Rule(0)], m: 0, j: n as Pos }
    }

    fn fin(&self, n: usize) -> GhiItem {
        GhiItem::Done { k: -1, t: TreeOrRule::Rule(0), m: n as Pos }
    }

    fn successors(&self, stack: &[GhiItem], input: &Input, out: &mut Vec<Transition<GhiItem>>) {
        let table = &self.table;
        super::expand(CLAUSES, &self.sides, stack, input, |it| it.mirror(table), out);
    }

    fn recognized_span(&self, item: &GhiItem) -> Option<(Pos, Pos)> {
        Some(item.span())
    }

    fn check_item(&self, item: &GhiItem, _n: usize) -> Result<(), String> {
        let ok = match item {
            GhiItem::Full { i, k, m, j, .. } => i <= k && k < m && m <= j,
            GhiItem::RightOpen { k, m, j, .. } => k < m && m <= j,
            GhiItem::LeftOpen { i, k, m, .. } => i <= k && k < m,
            GhiItem::Done { k, m, .. } => k < m,
        };
        if !ok {
            return Err(format!("positions out of order in {}", self.render(item)));
        }
        if let GhiItem::Full { q, .. } | GhiItem::RightOpen { q, .. } | GhiItem::LeftOpen { q, .. } = item {
            if q.is_empty() || !q.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("item set malformed in {}", self.render(item)));
            }
        }
        self.yld(item).map(|_| ())
    }

    fn render(&self, item: &GhiItem) -> String {
        match item {
            GhiItem::Full { i, k, q, m, j } => format!("[{i}, {k}, {}, {m}, {j}]", self.render_set(q)),
            GhiItem::RightOpen { k, q, m, j } => format!("[{k}, {}, {m}, {j}]", self.render_set(q)),
            GhiItem::LeftOpen { i, k, q, m } => format!("[{i}, {k}, {}, {m}]", self.render_set(q)),
            GhiItem::Done { k, t, m } => format!("[{k}, {}, {m}]", self.render_element(*t)),
        }
    }

    fn encode(&self, tokens: &[String]) -> Input {
        Input::encode(&self.symbols, self.bottom, tokens, |s| !self.nonterminal[s.index()])
    }

    fn grammar_size(&self) -> usize {
        self.rules.len() + self.nonterminal.iter().filter(|&&b| b).count()
    }

    // A head with neither subtree is shown finishing in one row.
    fn merge_rows(&self, before: &[GhiItem], first: &str, second: &str) -> bool {
        matches!(before.last(), Some(GhiItem::Full { i, k, m, j, .. }) if i == k && m == j)
            && matches!(first, "1a" | "1b")
            && matches!(second, "1c" | "1d")
    }
}
