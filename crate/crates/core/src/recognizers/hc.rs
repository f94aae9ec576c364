//! Head-corner recognition: start from a lexical head anywhere in the
//! remaining span and climb through head corners.

use std::rc::Rc;

use super::td::{complete_right, fin_item, init_item, scan_right, DottedItem};
use super::{encode_for, expand, grammar_size, Clause, DottedRule, Oriented, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{AugmentedGrammar, HeadGrammar};

type HcClause = Clause<Oriented, DottedItem>;

fn top(stack: &[DottedItem]) -> &DottedItem {
    stack.last().expect("stacks are never empty")
}

fn predict(o: &Oriented, stack: &[DottedItem], input: InputView<'_>, out: &mut Vec<Step<DottedItem>>, filter: bool) {
    let d = top(stack);
    let Some(b) = d.rule.next_right(&o.rules[d.rule.rule as usize]) else { return };
    if !o.is_nonterminal(b) {
        return;
    }
    for p in d.m + 1..=d.j {
        let Some(a) = input.at(p) else { continue };
        if o.is_nonterminal(a) {
            continue;
        }
        for &r in o.rules_with_head(a) {
            let rule = &o.rules[r];
            if !filter || o.hc.contains(rule.lhs, b) {
                let item = DottedItem { i: d.m, k: p - 1, rule: DottedRule::at_head(r, rule), m: p, j: d.j };
                out.push((0, vec![item]));
            }
        }
    }
}

// [i, k, A → α•γ•Bβ, m, j] ↦ [...][m, p-1, C → η•a•θ, p, j] where a = a_p, C ◇* B.
fn c1a(o: &Oriented, stack: &[DottedItem], input: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    predict(o, stack, input, out, true)
}

fn c1a_unfiltered(o: &Oriented, stack: &[DottedItem], input: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    predict(o, stack, input, out, false)
}

fn c2a(o: &Oriented, stack: &[DottedItem], input: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    if let Some(next) = scan_right(o, top(stack), input) {
        out.push((1, vec![next]));
    }
}

// [.., A → α•γ•Aβ ..m..][m, k', B → •δ•, m', j'] ↦ [..][m, k', C → η•B•θ, m', j'] where C ◇* A.
fn climb(o: &Oriented, stack: &[DottedItem], out: &mut Vec<Step<DottedItem>>, filter: bool) {
    let [.., d, c] = stack else { return };
    if !c.rule.is_complete() || d.m != c.i {
        return;
    }
    let Some(a) = d.rule.next_right(&o.rules[d.rule.rule as usize]) else { return };
    if !o.is_nonterminal(a) {
        return;
    }
    debug_assert_eq!(d.j, c.j);
    let b = o.rules[c.rule.rule as usize].lhs;
    for &r in o.rules_with_head(b) {
        let rule = &o.rules[r];
        if !filter || o.hc.contains(rule.lhs, a) {
            out.push((1, vec![DottedItem { rule: DottedRule::at_head(r, rule), ..*c }]));
        }
    }
}

fn c3a(o: &Oriented, stack: &[DottedItem], _: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    climb(o, stack, out, true)
}

fn c3a_unfiltered(o: &Oriented, stack: &[DottedItem], _: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    climb(o, stack, out, false)
}

fn c4a(o: &Oriented, stack: &[DottedItem], _: InputView<'_>, out: &mut Vec<Step<DottedItem>>) {
    let [.., d, c] = stack else { return };
    if let Some(next) = complete_right(o, d, c) {
        out.push((2, vec![next]));
    }
}

const CLAUSES: &[HcClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const UNFILTERED: &[HcClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a_unfiltered },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a_unfiltered },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const LABELS: &[&str] = &["1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"];

/// Head-corner recognizer.
pub struct Hc {
    grammar: Rc<AugmentedGrammar>,
    sides: [Oriented; 2],
    clauses: &'static [HcClause],
}

impl Hc {
    pub fn new(g: &HeadGrammar) -> Self {
        Self::from_augmented(Rc::new(AugmentedGrammar::new(g)))
    }

    pub fn from_augmented(grammar: Rc<AugmentedGrammar>) -> Self {
        let sides = [Oriented::new(&grammar, false), Oriented::new(&grammar, true)];
        Hc { grammar, sides, clauses: CLAUSES }
    }

    /// A deliberately broken variant that ignores the head-corner relation
    /// when predicting and climbing. It over-accepts; used to check that the
    /// test oracles notice.
    #[doc(hidden)]
    pub fn without_head_corner_filter(g: &HeadGrammar) -> Self {
        Hc { clauses: UNFILTERED, ..Self::new(g) }
    }

    pub fn grammar(&self) -> &AugmentedGrammar {
        &self.grammar
    }
}

impl Automaton for Hc {
    type Item = DottedItem;

    fn name(&self) -> &'static str {
        "hc"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        LABELS
    }

    fn init(&self, n: usize) -> DottedItem {
        init_item(n)
    }

    fn fin(&self, n: usize) -> DottedItem {
        fin_item(n)
    }

    fn successors(&self, stack: &[DottedItem], input: &Input, out: &mut Vec<Transition<DottedItem>>) {
        expand(self.clauses, &self.sides, stack, input, DottedItem::mirror, out);
    }

    fn recognized_span(&self, item: &DottedItem) -> Option<(Pos, Pos)> {
        Some((item.k, item.m))
    }

    fn check_item(&self, item: &DottedItem, _n: usize) -> Result<(), String> {
        item.check(&self.grammar)
    }

    fn render(&self, item: &DottedItem) -> String {
        item.render(&self.grammar)
    }

    fn encode(&self, tokens: &[String]) -> Input {
        encode_for(&self.grammar, tokens)
    }

    fn grammar_size(&self) -> usize {
        grammar_size(&self.grammar)
    }
}
