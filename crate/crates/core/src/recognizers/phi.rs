//! Predictive head-infix recognition. Items keep only the recognized infix of
//! a rule, so rules sharing a head-containing infix share items.

use std::rc::Rc;

use super::{encode_for, expand, grammar_size, mirror_pos, render_symbols, Clause, Oriented, Step};
use crate::engine::{Automaton, Input, InputView, Pos, Transition};
use crate::grammar::{AugmentedGrammar, HeadGrammar, SymbolId};

/// `[i, k, A → γ, m, j]`: `γ` is a head-containing infix of some rule for `A`
/// recognized in `(k, m]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfixItem {
    pub i: Pos,
    pub k: Pos,
    pub lhs: SymbolId,
    pub gamma: Vec<SymbolId>,
    pub m: Pos,
    pub j: Pos,
}

impl InfixItem {
    pub fn mirror(&self) -> Self {
        InfixItem {
            i: mirror_pos(self.j),
            k: mirror_pos(self.m),
            lhs: self.lhs,
            gamma: self.gamma.iter().rev().copied().collect(),
            m: mirror_pos(self.k),
            j: mirror_pos(self.i),
        }
    }
}

type PhiClause = Clause<Oriented, InfixItem>;

fn top(stack: &[InfixItem]) -> &InfixItem {
    stack.last().expect("stacks are never empty")
}

// [i, k, A → γ, m, j] ↦ [...][m, p-1, C → a, p, j] where a = a_p, C ◇* B, A → αγBβ.
fn c1a(o: &Oriented, stack: &[InfixItem], input: InputView<'_>, out: &mut Vec<Step<InfixItem>>) {
    let d = top(stack);
    let goals: Vec<SymbolId> = o
        .next_after(d.lhs, &d.gamma)
        .iter()
        .copied()
        .filter(|&b| o.is_nonterminal(b))
        .collect();
    if goals.is_empty() {
        return;
    }
    for p in d.m + 1..=d.j {
        let Some(a) = input.at(p) else { continue };
        if o.is_nonterminal(a) {
            continue;
        }
        for &c in o.lhs_with_head(a) {
            if goals.iter().any(|&b| o.hc.contains(c, b)) {
                let item = InfixItem { i: d.m, k: p - 1, lhs: c, gamma: vec![a], m: p, j: d.j };
                out.push((0, vec![item]));
            }
        }
    }
}

// [i, k, A → γ, m, j] ↦ [i, k, A → γa, m+1, j] where a = a_{m+1}.
fn c2a(o: &Oriented, stack: &[InfixItem], input: InputView<'_>, out: &mut Vec<Step<InfixItem>>) {
    let d = top(stack);
    if d.m >= d.j {
        return;
    }
    let Some(a) = input.at(d.m + 1) else { return };
    if o.is_nonterminal(a) || !o.next_after(d.lhs, &d.gamma).contains(&a) {
        return;
    }
    let mut gamma = d.gamma.clone();
    gamma.push(a);
    out.push((1, vec![InfixItem { gamma, m: d.m + 1, ..d.clone() }]));
}

// [.., D → γ ..m..][m, k', B → δ, m', j'] ↦ [..][m, k', C → B, m', j']
// where B → δ is a rule, C ◇* A and D → αγAβ.
fn c3a(o: &Oriented, stack: &[InfixItem], _: InputView<'_>, out: &mut Vec<Step<InfixItem>>) {
    let [.., d, c] = stack else { return };
    if d.m != c.i || !o.is_full(c.lhs, &c.gamma) {
        return;
    }
    debug_assert_eq!(d.j, c.j);
    let goals: Vec<SymbolId> = o
        .next_after(d.lhs, &d.gamma)
        .iter()
        .copied()
        .filter(|&a| o.is_nonterminal(a))
        .collect();
    for &up in o.lhs_with_head(c.lhs) {
        if goals.iter().any(|&a| o.hc.contains(up, a)) {
            out.push((1, vec![InfixItem { lhs: up, gamma: vec![c.lhs], ..c.clone() }]));
        }
    }
}

// [i, k, A → γ, m, j][m, k', B → δ, m', j'] ↦ [i, k, A → γB, m', j]
// where B → δ is a rule and k' = m.
fn c4a(o: &Oriented, stack: &[InfixItem], _: InputView<'_>, out: &mut Vec<Step<InfixItem>>) {
    let [.., d, c] = stack else { return };
    if d.m != c.k || !o.is_full(c.lhs, &c.gamma) || !o.next_after(d.lhs, &d.gamma).contains(&c.lhs) {
        return;
    }
    let mut gamma = d.gamma.clone();
    gamma.push(c.lhs);
    out.push((2, vec![InfixItem { gamma, m: c.m, ..d.clone() }]));
}

const CLAUSES: &[PhiClause] = &[
    Clause { label: "1a", mirror_label: Some("1b"), apply: c1a },
    Clause { label: "2a", mirror_label: Some("2b"), apply: c2a },
    Clause { label: "3a", mirror_label: Some("3b"), apply: c3a },
    Clause { label: "4a", mirror_label: Some("4b"), apply: c4a },
];

const LABELS: &[&str] = &["1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"];

/// Predictive head-infix recognizer.
pub struct Phi {
    grammar: Rc<AugmentedGrammar>,
    sides: [Oriented; 2],
}

impl Phi {
    pub fn new(g: &HeadGrammar) -> Self {
        Self::from_augmented(Rc::new(AugmentedGrammar::new(g)))
    }

    pub fn from_augmented(grammar: Rc<AugmentedGrammar>) -> Self {
        let sides = [Oriented::new(&grammar, false), Oriented::new(&grammar, true)];
        Phi { grammar, sides }
    }

    pub fn grammar(&self) -> &AugmentedGrammar {
        &self.grammar
    }
}

impl Automaton for Phi {
    type Item = InfixItem;

    fn name(&self) -> &'static str {
        "phi"
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        LABELS
    }

    fn init(&self, n: usize) -> InfixItem {
        InfixItem {
            i: -1,
            k: -1,
            lhs: self.grammar.start_prime(),
            gamma: vec![self.grammar.bottom()],
            m: 0,
            j: n as Pos,
        }
    }

    fn fin(&self, n: usize) -> InfixItem {
        InfixItem {
            i: -1,
            k: -1,
            lhs: self.grammar.start_prime(),
            gamma: vec![self.grammar.bottom(), self.grammar.start()],
            m: n as Pos,
            j: n as Pos,
        }
    }

    fn successors(&self, stack: &[InfixItem], input: &Input, out: &mut Vec<Transition<InfixItem>>) {
        expand(CLAUSES, &self.sides, stack, input, InfixItem::mirror, out);
    }

    fn recognized_span(&self, item: &InfixItem) -> Option<(Pos, Pos)> {
        Some((item.k, item.m))
    }

    fn check_item(&self, item: &InfixItem, _n: usize) -> Result<(), String> {
        if !(item.i <= item.k && item.k < item.m && item.m <= item.j) {
            return Err(format!("positions out of order in {item:?}"));
        }
        if !self.sides[0].is_infix(item.lhs, &item.gamma) {
            return Err(format!("not a head-containing infix: {item:?}"));
        }
        Ok(())
    }

    fn render(&self, item: &InfixItem) -> String {
        format!(
            "[{}, {}, {} → {}, {}, {}]",
            item.i,
            item.k,
            self.grammar.name(item.lhs),
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
    fn shared_infixes() {
        let g = parse_hg("start S\nS -> c *A b\nS -> c *A d\nA -> *a\nA -> *A a\n").unwrap();
        let phi = Phi::new(&g);
        for (w, ok) in [("cab", true), ("caad", true), ("cb", false), ("cabd", false)] {
            let input = phi.encode(&words(w));
            let r = run(&phi, &input, &RunOptions::default());
            assert_eq!(r.verdict == Verdict::Accept, ok, "{w}");
            if ok {
                replay(&phi, &input, r.trace.as_ref().unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn mirror_reverses_infix() {
        let item = InfixItem { i: 0, k: 1, lhs: SymbolId(0), gamma: vec![SymbolId(1), SymbolId(2)], m: 3, j: 4 };
        assert_eq!(item.mirror().gamma, vec![SymbolId(2), SymbolId(1)]);
        assert_eq!(item.mirror().mirror(), item);
    }
}
