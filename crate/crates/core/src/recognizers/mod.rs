//! Head-driven recognizers compiled into stack automata.
//!
//! Every algorithm lists its "a" clauses, which look to the right of the
//! recognized part of a rule. The "b" clauses are never written out: they are
//! the "a" clauses run on the mirror image of the stack, against the grammar
//! with every right-hand side reversed and the input read backwards, and the
//! resulting items are mirrored back. Mirroring maps a position `p` to `-p`,
//! so a span `(k, m]` becomes `(-m, -k]`.

pub mod ehi;
pub mod ghi;
pub mod hc;
pub mod hi;
pub mod phi;
pub mod td;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{
    replay, run, trace_dump, trace_rows, Automaton, EngineError, Input, InputView, Pos, RunOptions, RunStats,
    TraceDump, TraceRow, Transition, Verdict,
};
use crate::grammar::{AugmentedGrammar, HeadCornerRelation, HeadGrammar, HeadRule, RelationVariant, SymbolId};
use crate::transform::GenHeadGrammar;

pub use ehi::Ehi;
pub use ghi::Ghi;
pub use hc::Hc;
pub use hi::Hi;
pub use phi::Phi;
pub use td::Td;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Td,
    Hc,
    Phi,
    Ehi,
    Hi,
    Ghi,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Td,
        Algorithm::Hc,
        Algorithm::Phi,
        Algorithm::Ehi,
        Algorithm::Hi,
        Algorithm::Ghi,
    ];

    /// The recognizers that run directly on plain head grammars.
    pub const PLAIN: [Algorithm; 5] = [
        Algorithm::Td,
        Algorithm::Hc,
        Algorithm::Phi,
        Algorithm::Ehi,
        Algorithm::Hi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Td => "td",
            Algorithm::Hc => "hc",
            Algorithm::Phi => "phi",
            Algorithm::Ehi => "ehi",
            Algorithm::Hi => "hi",
            Algorithm::Ghi => "ghi",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected td, hc, phi, ehi, hi or ghi)"))
    }
}

/// A run with its items already rendered, so results of different
/// recognizers can be handled alike.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: RunStats,
    pub trace: Option<TraceDump>,
    pub rows: Option<Vec<TraceRow>>,
}

/// Object-safe view of an [`Automaton`].
pub trait Recognizer {
    fn algorithm(&self) -> Algorithm;

    fn clause_labels(&self) -> &'static [&'static str];

    fn run_tokens(&self, tokens: &[String], opts: &RunOptions) -> Outcome;

    /// Runs and, on acceptance, checks that the trace replays.
    fn run_checked(&self, tokens: &[String], opts: &RunOptions) -> Result<Outcome, EngineError>;
}

struct Dyn<A> {
    algorithm: Algorithm,
    automaton: A,
}

impl<A: Automaton> Dyn<A> {
    fn outcome(&self, r: crate::engine::RunResult<A::Item>) -> Outcome {
        let a = &self.automaton;
        Outcome {
            verdict: r.verdict,
            rows: r.trace.as_ref().map(|t| trace_rows(a, t)),
            trace: r.trace.as_ref().map(|t| trace_dump(a, t)),
            stats: r.stats,
        }
    }
}

impl<A: Automaton> Recognizer for Dyn<A> {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    fn clause_labels(&self) -> &'static [&'static str] {
        self.automaton.clause_labels()
    }

    fn run_tokens(&self, tokens: &[String], opts: &RunOptions) -> Outcome {
        let input = self.automaton.encode(tokens);
        self.outcome(run(&self.automaton, &input, opts))
    }

    fn run_checked(&self, tokens: &[String], opts: &RunOptions) -> Result<Outcome, EngineError> {
        let input = self.automaton.encode(tokens);
        let r = run(&self.automaton, &input, opts);
        if let Some(t) = &r.trace {
            replay(&self.automaton, &input, t)?;
        }
        Ok(self.outcome(r))
    }
}

/// Builds `alg` for a plain head grammar; GHI runs on its embedding.
pub fn build(alg: Algorithm, g: &HeadGrammar) -> Box<dyn Recognizer> {
    fn wrap<A: Automaton + 'static>(algorithm: Algorithm, automaton: A) -> Box<dyn Recognizer> {
        Box::new(Dyn { algorithm, automaton })
    }
    match alg {
        Algorithm::Td => wrap(alg, Td::new(g)),
        Algorithm::Hc => wrap(alg, Hc::new(g)),
        Algorithm::Phi => wrap(alg, Phi::new(g)),
        Algorithm::Ehi => wrap(alg, Ehi::new(g)),
        Algorithm::Hi => wrap(alg, Hi::new(g)),
        Algorithm::Ghi => wrap(alg, Ghi::from_head_grammar(g)),
    }
}

pub fn build_generalized(g: &GenHeadGrammar) -> Box<dyn Recognizer> {
    Box::new(Dyn { algorithm: Algorithm::Ghi, automaton: Ghi::new(g) })
}

pub(crate) fn mirror_pos(p: Pos) -> Pos {
    -p
}

/// A rule with two dots around a head-containing infix: `A -> α • γ • β`.
/// Stored as the rule index and the lengths of `α` and `β`, so mirroring is a
/// swap of the two lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DottedRule {
    pub rule: u32,
    pub before: u8,
    pub after: u8,
}

impl DottedRule {
    /// `A -> α • X • β` around the head of `rule`.
    pub fn at_head(rule: usize, r: &HeadRule) -> Self {
        DottedRule {
            rule: rule as u32,
            before: r.head as u8,
            after: (r.rhs.len() - r.head - 1) as u8,
        }
    }

    pub fn mirror(self) -> Self {
        DottedRule {
            rule: self.rule,
            before: self.after,
            after: self.before,
        }
    }

    pub fn is_complete(self) -> bool {
        self.before == 0 && self.after == 0
    }

    /// The member right after the second dot.
    pub fn next_right(self, r: &HeadRule) -> Option<SymbolId> {
        if self.after == 0 {
            None
        } else {
            Some(r.rhs[r.rhs.len() - self.after as usize])
        }
    }

    /// Moves the second dot one member to the right.
    pub fn advance(self) -> Self {
        DottedRule {
            after: self.after - 1,
            ..self
        }
    }

    pub fn well_formed(self, r: &HeadRule) -> bool {
        let end = r.rhs.len() as isize - self.after as isize;
        (self.before as usize) <= r.head && (r.head as isize) < end
    }

    pub fn render(self, g: &AugmentedGrammar) -> String {
        let r = g.rule(self.rule as usize);
        let end = r.rhs.len() - self.after as usize;
        let mut out = format!("{} →", g.name(r.lhs));
        for (i, &s) in r.rhs.iter().enumerate() {
            if i == self.before as usize {
                out.push_str(" •");
            }
            out.push(' ');
            out.push_str(g.name(s));
            if i + 1 == end {
                out.push_str(" •");
            }
        }
        out
    }
}

/// The augmented grammar viewed in one direction: as is, or with every
/// right-hand side reversed. Clauses written for the right-hand side of a
/// rule work on the left-hand side when given the reversed view.
pub(crate) struct Oriented {
    pub rules: Vec<HeadRule>,
    pub nonterminal: Vec<bool>,
    /// `◇*`, the same in both directions.
    pub hc: HeadCornerRelation,
    /// `∠*` of this view: head is the first member.
    pub near: HeadCornerRelation,
    /// Rules by head symbol.
    pub by_head: HashMap<SymbolId, Vec<usize>>,
    /// Left-hand sides of rules, by head symbol, without repetition.
    pub lhs_by_head: HashMap<SymbolId, Vec<SymbolId>>,
    /// For each head-containing infix `γ` of a rule for `A`, the members that
    /// follow `γ` in some such rule.
    pub next_after: HashMap<(SymbolId, Vec<SymbolId>), Vec<SymbolId>>,
    /// `(A, γ)` where `A -> γ` is a rule.
    pub full: HashSet<(SymbolId, Vec<SymbolId>)>,
}

impl Oriented {
    pub(crate) fn new(g: &AugmentedGrammar, mirrored: bool) -> Self {
        let rules: Vec<HeadRule> = g
            .rules()
            .iter()
            .map(|r| {
                if mirrored {
                    let mut rhs = r.rhs.clone();
                    rhs.reverse();
                    HeadRule::new(r.lhs, rhs, r.rhs.len() - 1 - r.head)
                } else {
                    r.clone()
                }
            })
            .collect();
        let nonterminal: Vec<bool> = (0..g.num_symbols())
            .map(|i| g.is_nonterminal(SymbolId(i as u32)))
            .collect();
        let hc = HeadCornerRelation::from_rules(
            g.num_symbols(),
            &nonterminal,
            &rules,
            RelationVariant::Full,
        );
        let near = HeadCornerRelation::from_rules(
            g.num_symbols(),
            &nonterminal,
            &rules,
            RelationVariant::Left,
        );
        let mut by_head: HashMap<SymbolId, Vec<usize>> = HashMap::new();
        let mut lhs_by_head: HashMap<SymbolId, Vec<SymbolId>> = HashMap::new();
        let mut next_after: HashMap<(SymbolId, Vec<SymbolId>), Vec<SymbolId>> = HashMap::new();
        let mut full = HashSet::new();
        for (idx, r) in rules.iter().enumerate() {
            by_head.entry(r.head_symbol()).or_default().push(idx);
            let lhss = lhs_by_head.entry(r.head_symbol()).or_default();
            if !lhss.contains(&r.lhs) {
                lhss.push(r.lhs);
            }
            full.insert((r.lhs, r.rhs.clone()));
            for from in 0..=r.head {
                for to in r.head + 1..=r.rhs.len() {
                    let entry = next_after
                        .entry((r.lhs, r.rhs[from..to].to_vec()))
                        .or_default();
                    if let Some(&next) = r.rhs.get(to) {
                        if !entry.contains(&next) {
                            entry.push(next);
                        }
                    }
                }
            }
        }
        Oriented {
            rules,
            nonterminal,
            hc,
            near,
            by_head,
            lhs_by_head,
            next_after,
            full,
        }
    }

    pub(crate) fn is_nonterminal(&self, s: SymbolId) -> bool {
        self.nonterminal[s.index()]
    }

    pub(crate) fn rules_with_head(&self, s: SymbolId) -> &[usize] {
        self.by_head.get(&s).map_or(&[], |v| v)
    }

    pub(crate) fn lhs_with_head(&self, s: SymbolId) -> &[SymbolId] {
        self.lhs_by_head.get(&s).map_or(&[], |v| v)
    }

    /// Members following the head-containing infix `gamma` in rules for `lhs`.
    pub(crate) fn next_after(&self, lhs: SymbolId, gamma: &[SymbolId]) -> &[SymbolId] {
        self.next_after
            .get(&(lhs, gamma.to_vec()))
            .map_or(&[], |v| v)
    }

    pub(crate) fn is_infix(&self, lhs: SymbolId, gamma: &[SymbolId]) -> bool {
        self.next_after.contains_key(&(lhs, gamma.to_vec()))
    }

    pub(crate) fn is_full(&self, lhs: SymbolId, gamma: &[SymbolId]) -> bool {
        self.full.contains(&(lhs, gamma.to_vec()))
    }
}

/// Result of one clause on one side: items to pop, items to push.
pub(crate) type Step<I> = (usize, Vec<I>);

pub(crate) struct Clause<C, I> {
    pub label: &'static str,
    /// Label of the mirrored clause, if the clause has one.
    pub mirror_label: Option<&'static str>,
    pub apply: fn(&C, &[I], InputView<'_>, &mut Vec<Step<I>>),
}

/// Applies `clauses` in order; a sided clause's mirror runs right after it.
pub(crate) fn expand<C, I: Clone>(
    clauses: &[Clause<C, I>],
    sides: &[C; 2],
    stack: &[I],
    input: &Input,
    mirror: impl Fn(&I) -> I,
    out: &mut Vec<Transition<I>>,
) {
    let mut mirrored: Option<Vec<I>> = None;
    let mut buf = Vec::new();
    for c in clauses {
        (c.apply)(&sides[0], stack, InputView::new(input, false), &mut buf);
        out.extend(buf.drain(..).map(|(pop, push)| Transition {
            label: c.label,
            pop,
            push,
        }));
        if let Some(label) = c.mirror_label {
            let ms = mirrored.get_or_insert_with(|| stack.iter().map(&mirror).collect());
            (c.apply)(&sides[1], ms, InputView::new(input, true), &mut buf);
            out.extend(buf.drain(..).map(|(pop, push)| Transition {
                label,
                pop,
                push: push.iter().map(&mirror).collect(),
            }));
        }
    }
}

pub(crate) fn labels_of<C, I>(clauses: &[Clause<C, I>]) -> Vec<&'static str> {
    clauses
        .iter()
        .flat_map(|c| std::iter::once(c.label).chain(c.mirror_label))
        .collect()
}

pub(crate) fn grammar_size(g: &AugmentedGrammar) -> usize {
    g.rules().len() + g.nonterminals().len()
}

pub(crate) fn encode_for(g: &AugmentedGrammar, tokens: &[String]) -> Input {
    Input::encode(g.symbols(), g.bottom(), tokens, |s| !g.is_nonterminal(s))
}

pub(crate) fn render_symbols(g: &AugmentedGrammar, syms: &[SymbolId]) -> String {
    syms.iter().map(|&s| g.name(s)).collect::<Vec<_>>().join(" ")
}

pub(crate) fn render_set(g: &AugmentedGrammar, syms: &[SymbolId]) -> String {
    format!("{{{}}}", syms.iter().map(|&s| g.name(s)).collect::<Vec<_>>().join(", "))
}
