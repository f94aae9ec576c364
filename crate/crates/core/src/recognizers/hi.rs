//! Head-infix recognition with item sets. Each item carries a set of doubly
//! dotted rules, computed by `goto` functions over the grammar, and the stack
//! below an item holds the rest of every chain it belongs to.

use std::rc::Rc;

use super::{encode_for, expand, grammar_size, mirror_pos, Clause, DottedRule, Oriented, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{AugmentedGrammar, HeadGrammar, SymbolId};

/// `[i, k, Q, m, j]` with `Q` a non-empty sorted set of dotted rules.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetOfRulesItem {
    pub i: Pos,
    pub k: Pos,
    pub q: Vec<DottedRule>,
    pub m: Pos,
    pub j: Pos,
}

impl SetOfRulesItem {
    pub fn mirror(&self) -> Self {
        let mut q: Vec<DottedRule> = self.q.iter().map(|d| d.mirror()).collect();
        q.sort();
        SetOfRulesItem {
            i: mirror_pos(self.j),
            k: mirror_pos(self.m),
            q,
            m: mirror_pos(self.k),
            j: mirror_pos(self.i),
        }
    }
}

/// Nonterminals right of the second dot in some member of `q`.
fn expected(o: &Oriented, q: &[DottedRule]) -> Vec<SymbolId> {
    let mut out = Vec::new();
    for d in q {
        if let Some(b) = d.next_right(&o.rules[d.rule as usize]) {
            if o.is_nonterminal(b) && !out.contains(&b) {
                out.push(b);
            }
        }
    }
    out
}

/// `{C → η • X • θ | C ◇* B, A → α • γ • B β ∈ q}`
fn goto1(o: &Oriented, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
    let goals = expected(o, q);
    let mut out: Vec<DottedRule> = o
        .rules_with_head(x)
        .iter()
        .filter(|&&r| goals.iter().any(|&b| o.hc.contains(o.rules[r].lhs, b)))
        .map(|&r| DottedRule::at_head(r, &o.rules[r]))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `{C → • X • θ | C ∠* B, A → α • γ • B β ∈ q} ∪ {A → α • γ X • β | A → α • γ • X β ∈ q}`
fn goto2(o: &Oriented, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
    let goals = expected(o, q);
    let mut out: Vec<DottedRule> = o
        .rules_with_head(x)
        .iter()
        .filter(|&&r| o.rules[r].head == 0 && goals.iter().any(|&b| o.near.contains(o.rules[r].lhs, b)))
        .map(|&r| DottedRule::at_head(r, &o.rules[r]))
        .collect();
    out.extend(
        q.iter()
            .filter(|d| d.next_right(&o.rules[d.rule as usize]) == Some(x))
            .map(|d| d.advance()),
    );
    out.sort();
    out.dedup();
    out
}

type HiClause = Clause<Oriented, SetOfRulesItem>;

fn top(stack: &[SetOfRulesItem]) -> &SetOfRulesItem {
    stack.last().expect("stacks are never empty")
}

// [i, k, Q, m, j] ↦ [...][m, p-1, Q', p, j] where Q' = goto1(Q, a_p), p > m+1.
fn c1a(o: &Oriented, stack: &[SetOfRulesItem], input: InputView<'_>, out: &mut Vec<Step<SetOfRulesItem>>) {
    let d = top(stack);
    for p in d.m + 2..=d.j {
        let Some(a) = input.at(p) else { continue };
        if o.is_nonterminal(a) {
            continue;
        }
        let q = goto1(o, &d.q, a);
        if !q.is_empty() {
            out.push((0, vec![SetOfRulesItem { i: d.m, k: p - 1, q, m: p, j: d.j }]));
        }
    }
}

// [i, k, Q, m, j] ↦ [...][i, k, Q', m+1, j] where Q' = goto2(Q, a_{m+1}).
fn c2a(o: &Oriented, stack: &[SetOfRulesItem], input: InputView<'_>, out: &mut Vec<Step<SetOfRulesItem>>) {
    let d = top(stack);
    if d.m >= d.j {
        return;
    }
    let Some(a) = input.at(d.m + 1) else { return };
    if o.is_nonterminal(a) {
        return;
    }
    let q = goto2(o, &d.q, a);
    if !q.is_empty() {
        out.push((0, vec![SetOfRulesItem { i: d.i, k: d.k, q, m: d.m + 1, j: d.j }]));
    }
}

/// For each completed `B → X₁…X_r` in the top item, the context item under
/// its `r` chain items, the left-hand side, and `r`.
fn reductions<'s>(o: &Oriented, stack: &'s [SetOfRulesItem]) -> Vec<(&'s SetOfRulesItem, SymbolId, usize)> {
    let t = top(stack);
    let mut out: Vec<(&SetOfRulesItem, SymbolId, usize)> = Vec::new();
    for d in t.q.iter().filter(|d| d.is_complete()) {
        let rule = &o.rules[d.rule as usize];
        let r = rule.rhs.len();
        if stack.len() < r + 1 || out.iter().any(|&(_, b, n)| b == rule.lhs && n == r) {
            continue;
        }
        let chain = &stack[stack.len() - r..];
        debug_assert!(
            chain.iter().all(|c| c.i == t.i && c.j == t.j),
            "chain items disagree on their outer span"
        );
        out.push((&stack[stack.len() - 1 - r], rule.lhs, r));
    }
    out
}

// [i, k, Q, m, j] I₁…I_{r-1} [i', k', Q', m', j'] ↦ [i, k, Q, m, j][i', k', Q'', m', j']
// where B → X₁…X_r • ∈ Q', m < k', Q'' = goto1(Q, B).
fn c3a(o: &Oriented, stack: &[SetOfRulesItem], _: InputView<'_>, out: &mut Vec<Step<SetOfRulesItem>>) {
    let t = top(stack);
    for (ctx, b, r) in reductions(o, stack) {
        if ctx.m < t.k {
            let q = goto1(o, &ctx.q, b);
            if !q.is_empty() {
                out.push((r, vec![SetOfRulesItem { q, ..t.clone() }]));
            }
        }
    }
}

// Same shape, where m = k' or k = k', giving [i, k, Q, m, j][i, k, Q'', m', j].
fn c4a(o: &Oriented, stack: &[SetOfRulesItem], _: InputView<'_>, out: &mut Vec<Step<SetOfRulesItem>>) {
    let t = top(stack);
    for (ctx, b, r) in reductions(o, stack) {
        if ctx.m == t.k || ctx.k == t.k {
            let q = goto2(o, &ctx.q, b);
            if !q.is_empty() {
                out.push((r, vec![SetOfRulesItem { i: ctx.i, k: ctx.k, q, m: t.m, j: ctx.j }]));
            }
        }
    }
}

const CLAUSES: &[HiClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const LABELS: &[&str] = &["1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"];

/// Head-infix recognizer over sets of dotted rules.
pub struct Hi {
    grammar: Rc<AugmentedGrammar>,
    sides: [Oriented; 2],
}

impl Hi {
    pub fn new(g: &HeadGrammar) -> Self {
        Self::from_augmented(Rc::new(AugmentedGrammar::new(g)))
    }

    pub fn from_augmented(grammar: Rc<AugmentedGrammar>) -> Self {
        let sides = [Oriented::new(&grammar, false), Oriented::new(&grammar, true)];
        Hi { grammar, sides }
    }

    pub fn grammar(&self) -> &AugmentedGrammar {
        &self.grammar
    }

    fn on_left(&self, q: &[DottedRule], x: SymbolId, f: fn(&Oriented, &[DottedRule], SymbolId) -> Vec<DottedRule>) -> Vec<DottedRule> {
        let mirrored: Vec<DottedRule> = q.iter().map(|d| d.mirror()).collect();
        let mut out: Vec<DottedRule> = f(&self.sides[1], &mirrored, x).into_iter().map(|d| d.mirror()).collect();
        out.sort();
        out
    }

    pub fn goto_right1(&self, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
        goto1(&self.sides[0], q, x)
    }

    pub fn goto_right2(&self, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
        goto2(&self.sides[0], q, x)
    }

    pub fn goto_left1(&self, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
        self.on_left(q, x, goto1)
    }

    pub fn goto_left2(&self, q: &[DottedRule], x: SymbolId) -> Vec<DottedRule> {
        self.on_left(q, x, goto2)
    }

    fn item(&self, rule: DottedRule, m: Pos, n: usize) -> SetOfRulesItem {
        SetOfRulesItem { i: -1, k: -1, q: vec![rule], m, j: n as Pos }
    }
}

impl Automaton for Hi {
    type Item = SetOfRulesItem;

    fn name(&self) -> &'static str {
        "hi"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        LABELS
    }

    fn init(&self, n: usize) -> SetOfRulesItem {
        self.item(DottedRule { rule: 0, before: 0, after: 1 }, 0, n)
    }

    fn fin(&self, n: usize) -> SetOfRulesItem {
        self.item(DottedRule { rule: 0, before: 0, after: 0 }, n as Pos, n)
    }

    // The finished start rule always sits on top of the initial item, which
    // no clause ever removes.
    fn accepts(&self, stack: &[SetOfRulesItem], n: usize) -> bool {
        let done = DottedRule { rule: 0, before: 0, after: 0 };
        match stack {
            [only] => *only == self.fin(n),
            [first, t] => {
                *first == self.init(n)
                    && (t.i, t.k, t.m, t.j) == (-1, -1, n as Pos, n as Pos)
                    && t.q.contains(&done)
            }
            _ => false,
        }
    }

    fn successors(&self, stack: &[SetOfRulesItem], input: &Input, out: &mut Vec<Transition<SetOfRulesItem>>) {
        expand(CLAUSES, &self.sides, stack, input, SetOfRulesItem::mirror, out);
    }

    fn recognized_span(&self, item: &SetOfRulesItem) -> Option<(Pos, Pos)> {
        Some((item.k, item.m))
    }

    fn check_item(&self, item: &SetOfRulesItem, _n: usize) -> Result<(), String> {
        if !(item.i <= item.k && item.k < item.m && item.m <= item.j) {
            return Err(format!("positions out of order in {item:?}"));
        }
        if item.q.is_empty() || !item.q.windows(2).all(|w| w[0] < w[1]) {
            return Err(format!("rule set malformed in {item:?}"));
        }
        if item.q.iter().any(|d| !d.well_formed(self.grammar.rule(d.rule as usize))) {
            return Err(format!("dots misplaced in {item:?}"));
        }
        Ok(())
    }

    fn render(&self, item: &SetOfRulesItem) -> String {
        let q: Vec<String> = item.q.iter().map(|d| d.render(&self.grammar)).collect();
        format!("[{}, {}, {{{}}}, {}, {}]", item.i, item.k, q.join(", "), item.m, item.j)
    }

    fn encode(&self, tokens: &[String]) -> Input {
        encode_for(&self.grammar, tokens)
    }

    fn grammar_size(&self) -> usize {
        grammar_size(&self.grammar)
    }
}
