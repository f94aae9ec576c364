//! Extended head-infix recognition: one item stands for a whole set of
//! left-hand sides sharing the recognized infix.

use std::rc::Rc;

use super::{encode_for, expand, grammar_size, mirror_pos, render_set, render_symbols, Clause, Oriented, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{AugmentedGrammar, HeadGrammar, SymbolId};

/// `[i, k, Δ → γ, m, j]` with `Δ` a non-empty sorted set of nonterminals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetItem {
    pub i: Pos,
    pub k: Pos,
    pub lhs: Vec<SymbolId>,
    pub gamma: Vec<SymbolId>,
    pub m: Pos,
    pub j: Pos,
}

impl SetItem {
    pub fn mirror(&self) -> Self {
        SetItem {
            i: mirror_pos(self.j),
            k: mirror_pos(self.m),
            lhs: self.lhs.clone(),
            gamma: self.gamma.iter().rev().copied().collect(),
            m: mirror_pos(self.k),
            j: mirror_pos(self.i),
        }
    }
}

type EhiClause = Clause<Oriented, SetItem>;

fn top(stack: &[SetItem]) -> &SetItem {
    stack.last().expect("stacks are never empty")
}

/// Nonterminals following `γ` for some member of `Δ`.
fn goals(o: &Oriented, d: &SetItem) -> Vec<SymbolId> {
    let mut out = Vec::new();
    for &a in &d.lhs {
        for &b in o.next_after(a, &d.gamma) {
            if o.is_nonterminal(b) && !out.contains(&b) {
                out.push(b);
            }
        }
    }
    out
}

/// `{C | C → ηXθ, C ◇* B for some B in goals}`, sorted.
fn climb_set(o: &Oriented, x: SymbolId, goals: &[SymbolId]) -> Vec<SymbolId> {
    let mut set: Vec<SymbolId> = o
        .lhs_with_head(x)
        .iter()
        .copied()
        .filter(|&c| goals.iter().any(|&b| o.hc.contains(c, b)))
        .collect();
    set.sort();
    set
}

/// `{A ∈ Δ | A → αγXβ}`.
fn extend_set(o: &Oriented, d: &SetItem, x: SymbolId) -> Vec<SymbolId> {
    d.lhs
        .iter()
        .copied()
        .filter(|&a| o.next_after(a, &d.gamma).contains(&x))
        .collect()
}

fn c1a(o: &Oriented, stack: &[SetItem], input: InputView<'_>, out: &mut Vec<Step<SetItem>>) {
    let d = top(stack);
    let goals = goals(o, d);
    if goals.is_empty() {
        return;
    }
    for p in d.m + 1..=d.j {
        let Some(a) = input.at(p) else { continue };
        if o.is_nonterminal(a) {
            continue;
        }
        let lhs = climb_set(o, a, &goals);
        if !lhs.is_empty() {
            out.push((0, vec![SetItem { i: d.m, k: p - 1, lhs, gamma: vec![a], m: p, j: d.j }]));
        }
    }
}

fn c2a(o: &Oriented, stack: &[SetItem], input: InputView<'_>, out: &mut Vec<Step<SetItem>>) {
    let d = top(stack);
    if d.m >= d.j {
        return;
    }
    let Some(a) = input.at(d.m + 1) else { return };
    if o.is_nonterminal(a) {
        return;
    }
    let lhs = extend_set(o, d, a);
    if lhs.is_empty() {
        return;
    }
    let mut gamma = d.gamma.clone();
    gamma.push(a);
    out.push((1, vec![SetItem { i: d.i, k: d.k, lhs, gamma, m: d.m + 1, j: d.j }]));
}

/// Members of `Δ` for which `γ` is a whole right-hand side.
fn completed(o: &Oriented, c: &SetItem) -> Vec<SymbolId> {
    c.lhs.iter().copied().filter(|&b| o.is_full(b, &c.gamma)).collect()
}

fn c3a(o: &Oriented, stack: &[SetItem], _: InputView<'_>, out: &mut Vec<Step<SetItem>>) {
    let [.., d, c] = stack else { return };
    if d.m != c.i {
        return;
    }
    debug_assert_eq!(d.j, c.j);
    let goals = goals(o, d);
    for b in completed(o, c) {
        let lhs = climb_set(o, b, &goals);
        if !lhs.is_empty() {
            out.push((1, vec![SetItem { i: c.i, k: c.k, lhs, gamma: vec![b], m: c.m, j: c.j }]));
        }
    }
}

fn c4a(o: &Oriented, stack: &[SetItem], _: InputView<'_>, out: &mut Vec<Step<SetItem>>) {
    let [.., d, c] = stack else { return };
    if d.m != c.k {
        return;
    }
    for b in completed(o, c) {
        let lhs = extend_set(o, d, b);
        if !lhs.is_empty() {
            let mut gamma = d.gamma.clone();
            gamma.push(b);
            out.push((2, vec![SetItem { i: d.i, k: d.k, lhs, gamma, m: c.m, j: d.j }]));
        }
    }
}

const CLAUSES: &[EhiClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const LABELS: &[&str] = &["1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"];

/// Extended head-infix recognizer.
pub struct Ehi {
    grammar: Rc<AugmentedGrammar>,
    sides: [Oriented; 2],
}

impl Ehi {
    pub fn new(g: &HeadGrammar) -> Self {
        Self::from_augmented(Rc::new(AugmentedGrammar::new(g)))
    }

    pub fn from_augmented(grammar: Rc<AugmentedGrammar>) -> Self {
        let sides = [Oriented::new(&grammar, false), Oriented::new(&grammar, true)];
        Ehi { grammar, sides }
    }

    pub fn grammar(&self) -> &AugmentedGrammar {
        &self.grammar
    }
}

impl Automaton for Ehi {
    type Item = SetItem;

    fn name(&self) -> &'static str {
        "ehi"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        LABELS
    }

    fn init(&self, n: usize) -> SetItem {
        SetItem {
            i: -1,
            k: -1,
            lhs: vec![self.grammar.start_prime()],
            gamma: vec![self.grammar.bottom()],
            m: 0,
            j: n as Pos,
        }
    }

    fn fin(&self, n: usize) -> SetItem {
        SetItem {
            i: -1,
            k: -1,
            lhs: vec![self.grammar.start_prime()],
            gamma: vec![self.grammar.bottom(), self.grammar.start()],
            m: n as Pos,
            j: n as Pos,
        }
    }

    fn successors(&self, stack: &[SetItem], input: &Input, out: &mut Vec<Transition<SetItem>>) {
        expand(CLAUSES, &self.sides, stack, input, SetItem::mirror, out);
    }

    fn recognized_span(&self, item: &SetItem) -> Option<(Pos, Pos)> {
        Some((item.k, item.m))
    }

    fn check_item(&self, item: &SetItem, _n: usize) -> Result<(), String> {
        if !(item.i <= item.k && item.k < item.m && item.m <= item.j) {
            return Err(format!("positions out of order in {item:?}"));
        }
        if item.lhs.is_empty() || !item.lhs.windows(2).all(|w| w[0] < w[1]) {
            return Err(format!("left-hand side set malformed in {item:?}"));
        }
        if let Some(a) = item.lhs.iter().find(|&&a| !self.sides[0].is_infix(a, &item.gamma)) {
            return Err(format!("{} has no rule with this infix: {item:?}", self.grammar.name(*a)));
        }
        Ok(())
    }

    fn render(&self, item: &SetItem) -> String {
        format!(
            "[{}, {}, {} → {}, {}, {}]",
            item.i,
            item.k,
            render_set(&self.grammar, &item.lhs),
            render_symbols(&self.grammar, &item.gamma),
            item.m,
            item.j
        )
    }

    fn encode(&self, tokens: &[String]) -> Input {
        encode_for(&self.grammar, tokens)
    }

    fn grammar_size(&self) -> usize {
        grammar_size(&self.grammar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{replay, run, RunOptions, Verdict};
    use crate::grammar::parse_hg;

    fn words(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn merges_left_hand_sides() {
        let g = parse_hg("start S\nS -> *A b\nS -> *B c\nA -> *a\nB -> *a\n").unwrap();
        let ehi = Ehi::new(&g);
        let input = ehi.encode(&words("ac"));
        let r = run(&ehi, &input, &RunOptions::default());
        assert_eq!(r.verdict, Verdict::Accept);
        let trace = r.trace.unwrap();
        replay(&ehi, &input, &trace).unwrap();
        assert_eq!(ehi.render(&trace.steps[0].stack[1]), "[0, 0, {A, B} → a, 1, 2]");
        let r = run(&ehi, &ehi.encode(&words("aa")), &RunOptions::default());
        assert_eq!(r.verdict, Verdict::Reject);
    }
}
