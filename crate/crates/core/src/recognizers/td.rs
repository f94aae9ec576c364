//! Top-down head-driven recognition: predict the head of a goal, then grow
//! outwards from it.

use std::rc::Rc;

use super::{encode_for, expand, grammar_size, labels_of, mirror_pos, Clause, DottedRule, Oriented, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{AugmentedGrammar, HeadGrammar, SymbolId};

/// `[i, k, A → α • γ • β, m, j]`: `γ` recognized in `(k, m]`, and the whole
/// rule must fit in `(i, j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DottedItem {
    pub i: Pos,
    pub k: Pos,
    pub rule: DottedRule,
    pub m: Pos,
    pub j: Pos,
}

impl DottedItem {
    pub fn mirror(&self) -> Self {
        DottedItem {
            i: mirror_pos(self.j),
            k: mirror_pos(self.m),
            rule: self.rule.mirror(),
            m: mirror_pos(self.k),
            j: mirror_pos(self.i),
        }
    }

    pub(crate) fn check(&self, g: &AugmentedGrammar) -> Result<(), String> {
        if !(self.i <= self.k && self.k < self.m && self.m <= self.j) {
            return Err(format!("positions out of order in {self:?}"));
        }
        match g.rules().get(self.rule.rule as usize) {
            Some(r) if self.rule.well_formed(r) => Ok(()),
            _ => Err(format!("dots misplaced in {self:?}")),
        }
    }

    pub(crate) fn render(&self, g: &AugmentedGrammar) -> String {
        format!(
            "[{}, {}, {}, {}, {}]",
            self.i,
            self.k,
            self.rule.render(g),
            self.m,
            self.j
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TdItem {
    /// `[i, A, j]`: find an `A` somewhere in `(i, j]`.
    Goal { i: Pos, sym: SymbolId, j: Pos },
    Dotted(DottedItem),
}

impl TdItem {
    pub fn mirror(&self) -> Self {
        match *self {
            TdItem::Goal { i, sym, j } => TdItem::Goal {
                i: mirror_pos(j),
                sym,
                j: mirror_pos(i),
            },
            TdItem::Dotted(d) => TdItem::Dotted(d.mirror()),
        }
    }
}

pub(crate) fn init_item(n: usize) -> DottedItem {
    DottedItem {
        i: -1,
        k: -1,
        rule: DottedRule { rule: 0, before: 0, after: 1 },
        m: 0,
        j: n as Pos,
    }
}

pub(crate) fn fin_item(n: usize) -> DottedItem {
    DottedItem {
        i: -1,
        k: -1,
        rule: DottedRule { rule: 0, before: 0, after: 0 },
        m: n as Pos,
        j: n as Pos,
    }
}

/// The dotted-item clause shared with head-corner recognition: scan a
/// terminal right of the second dot.
pub(crate) fn scan_right(o: &Oriented, d: &DottedItem, input: InputView<'_>) -> Option<DottedItem> {
    let next = d.rule.next_right(&o.rules[d.rule.rule as usize])?;
    if o.is_nonterminal(next) || d.m >= d.j || input.at(d.m + 1) != Some(next) {
        return None;
    }
    Some(DottedItem {
        rule: d.rule.advance(),
        m: d.m + 1,
        ..*d
    })
}

/// Shared completion: `d` expects `B` right of the dot and `c` is a complete
/// `B` item starting at `d`'s right edge.
pub(crate) fn complete_right(o: &Oriented, d: &DottedItem, c: &DottedItem) -> Option<DottedItem> {
    if !c.rule.is_complete() || d.m != c.k {
        return None;
    }
    let b = o.rules[c.rule.rule as usize].lhs;
    if d.rule.next_right(&o.rules[d.rule.rule as usize]) != Some(b) {
        return None;
    }
    Some(DottedItem {
        rule: d.rule.advance(),
        m: c.m,
        ..*d
    })
}

type TdClause = Clause<Oriented, TdItem>;

fn top(stack: &[TdItem]) -> &TdItem {
    stack.last().expect("stacks are never empty")
}

// [i, A, j] ↦ [i, A, j][i, B, j] for A → α B̲ β.
fn c0(o: &Oriented, stack: &[TdItem], _: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let &TdItem::Goal { i, sym, j } = top(stack) else { return };
    let mut seen = Vec::new();
    for r in o.rules.iter().filter(|r| r.lhs == sym) {
        let b = r.head_symbol();
        if o.is_nonterminal(b) && !seen.contains(&b) {
            seen.push(b);
            out.push((0, vec![TdItem::Goal { i, sym: b, j }]));
        }
    }
}

// [i, k, A → α•γ•Bβ, m, j] ↦ [...][m, B, j]
fn c0a(o: &Oriented, stack: &[TdItem], _: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let TdItem::Dotted(d) = top(stack) else { return };
    let Some(b) = d.rule.next_right(&o.rules[d.rule.rule as usize]) else { return };
    if o.is_nonterminal(b) && d.m < d.j {
        out.push((0, vec![TdItem::Goal { i: d.m, sym: b, j: d.j }]));
    }
}

// [i, A, j] ↦ [i, k-1, A → α•a•β, k, j] where a = a_k.
fn c1(o: &Oriented, stack: &[TdItem], input: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let &TdItem::Goal { i, sym, j } = top(stack) else { return };
    for k in i + 1..=j {
        let Some(a) = input.at(k) else { continue };
        for &r in o.rules_with_head(a) {
            let rule = &o.rules[r];
            if rule.lhs == sym && !o.is_nonterminal(a) {
                let item = DottedItem { i, k: k - 1, rule: DottedRule::at_head(r, rule), m: k, j };
                out.push((1, vec![TdItem::Dotted(item)]));
            }
        }
    }
}

fn c2a(o: &Oriented, stack: &[TdItem], input: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let TdItem::Dotted(d) = top(stack) else { return };
    if let Some(next) = scan_right(o, d, input) {
        out.push((1, vec![TdItem::Dotted(next)]));
    }
}

// [i, A, j][i, k, B → •δ•, m, j] ↦ [i, k, A → α•B•β, m, j] for A → α B̲ β.
fn c3(o: &Oriented, stack: &[TdItem], _: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let [.., TdItem::Goal { i, sym, j }, TdItem::Dotted(c)] = stack else { return };
    if !c.rule.is_complete() {
        return;
    }
    debug_assert!(c.i == *i && c.j == *j, "goal and completed item disagree");
    let b = o.rules[c.rule.rule as usize].lhs;
    for &r in o.rules_with_head(b) {
        let rule = &o.rules[r];
        if rule.lhs == *sym {
            let item = DottedItem { i: *i, k: c.k, rule: DottedRule::at_head(r, rule), m: c.m, j: *j };
            out.push((2, vec![TdItem::Dotted(item)]));
        }
    }
}

fn c4a(o: &Oriented, stack: &[TdItem], _: InputView<'_>, out: &mut Vec<Step<TdItem>>) {
    let [.., TdItem::Dotted(d), TdItem::Dotted(c)] = stack else { return };
    if let Some(next) = complete_right(o, d, c) {
        out.push((2, vec![TdItem::Dotted(next)]));
    }
}

const CLAUSES: &[TdClause] = &[
    Clause { label: "0", mirror_label: None, apply: c0 },
    Clause { label: "0a", mirror_label: Some("0b"), apply: c0a },
    Clause { label: "1", mirror_label: None, apply: c1 },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3", mirror_label: None, apply: c3 },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const LABELS: &[&str] = &["0", "0a", "0b", "1", "2a", "2b", "3", "4a", "4b"];

/// Top-down head-driven recognizer. Loops on head-recursive grammars unless
/// the engine's limits cut it off.
pub struct Td {
    grammar: Rc<AugmentedGrammar>,
    sides: [Oriented; 2],
}

impl Td {
    pub fn new(g: &HeadGrammar) -> Self {
        Self::from_augmented(Rc::new(AugmentedGrammar::new(g)))
    }

    pub fn from_augmented(grammar: Rc<AugmentedGrammar>) -> Self {
        let sides = [Oriented::new(&grammar, false), Oriented::new(&grammar, true)];
        Td { grammar, sides }
    }

    pub fn grammar(&self) -> &AugmentedGrammar {
        &self.grammar
    }
}

impl Automaton for Td {
    type Item = TdItem;

    fn name(&self) -> &'static str {
        "td"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        debug_assert_eq!(labels_of(CLAUSES), LABELS);
        LABELS
    }

    fn init(&self, n: usize) -> TdItem {
        TdItem::Dotted(init_item(n))
    }

    fn fin(&self, n: usize) -> TdItem {
        TdItem::Dotted(fin_item(n))
    }

    fn successors(&self, stack: &[TdItem], input: &Input, out: &mut Vec<Transition<TdItem>>) {
        expand(CLAUSES, &self.sides, stack, input, TdItem::mirror, out);
    }

    fn recognized_span(&self, item: &TdItem) -> Option<(Pos, Pos)> {
        match item {
            TdItem::Goal { .. } => None,
            TdItem::Dotted(d) => Some((d.k, d.m)),
        }
    }

    fn check_item(&self, item: &TdItem, _n: usize) -> Result<(), String> {
        match item {
            TdItem::Goal { i, j, .. } if i < j => Ok(()),
            TdItem::Goal { .. } => Err(format!("empty goal span in {item:?}")),
            TdItem::Dotted(d) => d.check(&self.grammar),
        }
    }

    fn render(&self, item: &TdItem) -> String {
        match item {
            TdItem::Goal { i, sym, j } => format!("[{}, {}, {}]", i, self.grammar.name(*sym), j),
            TdItem::Dotted(d) => d.render(&self.grammar),
        }
    }

    fn encode(&self, tokens: &[String]) -> Input {
        encode_for(&self.grammar, tokens)
    }

    fn grammar_size(&self) -> usize {
        grammar_size(&self.grammar)
    }
}
