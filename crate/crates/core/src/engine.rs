//! Nondeterministic stack automata and an exhaustive depth-first search over
//! their configurations.
//!
//! A configuration is a stack of items, bottom first. Each clause inspects the
//! top of the stack (and the input) and replaces the top few items by others.
//! The input is accepted when a stack satisfying [`Automaton::accepts`] is
//! reachable from `[Init(n)]`; for all automata except HI that is exactly the
//! one-item stack `[Fin(n)]`.
//!
//! Search is depth-first with clauses tried in their listed order and
//! positions ascending, so traces are reproducible. Two configurations with
//! equal stacks have equal futures (clauses only look at the stack, the input
//! and positions stored in items), so a stack already seen is never expanded
//! again.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::grammar::{SymbolId, SymbolTable};

/// An input position. `⊥` occupies `(-1, 0]`; `a_p` occupies `(p-1, p]`.
pub type Pos = i32;

/// Input string `a_1 … a_n` with `a_0 = ⊥`. Tokens that are not terminals of
/// the grammar are stored as `None` and never match anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Input {
    symbols: Vec<Option<SymbolId>>,
}

impl Input {
    pub fn new(bottom: SymbolId, tokens: impl IntoIterator<Item = Option<SymbolId>>) -> Self {
        let mut symbols = vec![Some(bottom)];
        symbols.extend(tokens);
        Input { symbols }
    }

    /// Looks tokens up in `symbols`, keeping only those accepted by `is_terminal`.
    pub fn encode<S: AsRef<str>>(
        symbols: &SymbolTable,
        bottom: SymbolId,
        tokens: &[S],
        is_terminal: impl Fn(SymbolId) -> bool,
    ) -> Self {
        Input::new(
            bottom,
            tokens.iter().map(|t| {
                symbols
                    .get(t.as_ref())
                    .filter(|&s| s != bottom && is_terminal(s))
            }),
        )
    }

    /// The length `n` of the input proper.
    pub fn len(&self) -> usize {
        self.symbols.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `a_p`, for `0 ≤ p ≤ n`.
    pub fn at(&self, p: Pos) -> Option<SymbolId> {
        if p < 0 {
            return None;
        }
        self.symbols.get(p as usize).copied().flatten()
    }

    pub fn n(&self) -> Pos {
        self.len() as Pos
    }
}

/// The input as seen by a clause: either as is, or mirrored so that position
/// `p` reads `a_{1-p}`.
#[derive(Clone, Copy)]
pub(crate) struct InputView<'a> {
    input: &'a Input,
    mirrored: bool,
}

impl<'a> InputView<'a> {
    pub(crate) fn new(input: &'a Input, mirrored: bool) -> Self {
        InputView { input, mirrored }
    }

    pub(crate) fn at(&self, p: Pos) -> Option<SymbolId> {
        if self.mirrored {
            self.input.at(1 - p)
        } else {
            self.input.at(p)
        }
    }
}

/// One clause application: pop `pop` items, then push `push`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<I> {
    pub label: &'static str,
    pub pop: usize,
    pub push: Vec<I>,
}

impl<I: Clone> Transition<I> {
    pub fn apply(&self, stack: &[I]) -> Vec<I> {
        let keep = stack.len() - self.pop;
        let mut out = Vec::with_capacity(keep + self.push.len());
        out.extend_from_slice(&stack[..keep]);
        out.extend(self.push.iter().cloned());
        out
    }
}

pub trait Automaton {
    type Item: Clone + Eq + Hash + Debug;

    fn name(&self) -> &'static str;

    /// Clause labels in the order they are tried.
    fn clause_labels(&self) -> &'static [&'static str];

    fn init(&self, n: usize) -> Self::Item;

    fn fin(&self, n: usize) -> Self::Item;

    fn accepts(&self, stack: &[Self::Item], n: usize) -> bool {
        stack.len() == 1 && stack[0] == self.fin(n)
    }

    /// Every clause application possible on `stack`, in search order.
    fn successors(&self, stack: &[Self::Item], input: &Input, out: &mut Vec<Transition<Self::Item>>);

    /// The span `(k, m]` of input already recognized by the item, if any.
    fn recognized_span(&self, item: &Self::Item) -> Option<(Pos, Pos)>;

    /// Item well-formedness; checked on every pushed item in debug builds.
    fn check_item(&self, _item: &Self::Item, _n: usize) -> Result<(), String> {
        Ok(())
    }

    fn render(&self, item: &Self::Item) -> String;

    /// Encodes input tokens against the automaton's grammar.
    fn encode(&self, tokens: &[String]) -> Input;

    /// Number of rules plus number of nonterminals, used for the default depth bound.
    fn grammar_size(&self) -> usize;

    /// Whether two consecutive steps are shown as one row in a trace table.
    fn merge_rows(&self, _before: &[Self::Item], _first: &str, _second: &str) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accept,
    Reject,
    ResourceLimit,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub max_steps: usize,
    /// `None` selects `16·(n+2)·grammar_size`.
    pub max_depth: Option<usize>,
    pub prune_duplicates: bool,
    /// Stop at the first accepting configuration; otherwise the whole
    /// reachable space is explored (useful for measuring search size).
    pub stop_at_accept: bool,
    /// Collect the distinct per-configuration consulted position sets.
    pub track_consulted: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_steps: 1_000_000,
            max_depth: None,
            prune_duplicates: true,
            stop_at_accept: true,
            track_consulted: false,
        }
    }
}

impl RunOptions {
    pub fn exhaustive() -> Self {
        RunOptions {
            stop_at_accept: false,
            ..Default::default()
        }
    }
}

pub fn default_max_depth(n: usize, grammar_size: usize) -> usize {
    16 * (n + 2) * grammar_size
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub configurations_explored: usize,
    pub clause_applications: usize,
    pub max_stack_depth: usize,
    pub duplicates_pruned: usize,
    pub depth_cutoffs: usize,
    /// Input positions (1-based) covered by a recognized span in some explored
    /// configuration.
    pub consulted_positions: BTreeSet<usize>,
    /// Distinct sets of consulted positions, one per explored configuration;
    /// filled only with [`RunOptions::track_consulted`].
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub consulted_sets: Vec<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep<I> {
    pub label: &'static str,
    pub stack: Vec<I>,
}

/// Clause applications leading from `[Init(n)]` to an accepting stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<I> {
    pub initial: Vec<I>,
    pub steps: Vec<TraceStep<I>>,
}

impl<I> Trace<I> {
    pub fn labels(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.label).collect()
    }

    pub fn stacks(&self) -> impl Iterator<Item = &Vec<I>> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.stack))
    }
}

#[derive(Clone, Debug)]
pub struct RunResult<I> {
    pub verdict: Verdict,
    pub stats: RunStats,
    pub trace: Option<Trace<I>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("no accepting trace: verdict was {0:?}")]
    NotAccepted(Verdict),
    #[error("trace does not replay at step {step}: {reason}")]
    Replay { step: usize, reason: String },
}

impl<I> RunResult<I> {
    pub fn accepting_trace(&self) -> Result<&Trace<I>, EngineError> {
        match (&self.trace, self.verdict) {
            (Some(t), Verdict::Accept) => Ok(t),
            _ => Err(EngineError::NotAccepted(self.verdict)),
        }
    }
}

struct Node<I> {
    stack: Rc<[I]>,
    parent: usize,
    label: &'static str,
}

fn consulted<A: Automaton>(a: &A, stack: &[A::Item], n: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for item in stack {
        if let Some((k, m)) = a.recognized_span(item) {
            for p in (k + 1).max(1)..=m {
                if (p as usize) <= n {
                    out.insert(p as usize);
                }
            }
        }
    }
    out
}

pub fn run<A: Automaton>(a: &A, input: &Input, opts: &RunOptions) -> RunResult<A::Item> {
    let n = input.len();
    let max_depth = opts
        .max_depth
        .unwrap_or_else(|| default_max_depth(n, a.grammar_size()));
    let mut stats = RunStats::default();
    let mut consulted_sets = BTreeSet::new();
    let init: Rc<[A::Item]> = Rc::from(vec![a.init(n)]);
    let mut visited: HashSet<Rc<[A::Item]>> = HashSet::new();
    visited.insert(init.clone());
    let mut nodes = vec![Node {
        stack: init,
        parent: usize::MAX,
        label: "",
    }];
    let mut work = vec![0usize];
    let mut accepted: Option<usize> = None;
    let mut out_of_steps = false;
    let mut transitions = Vec::new();

    'search: while let Some(idx) = work.pop() {
        let stack = nodes[idx].stack.clone();
        stats.configurations_explored += 1;
        stats.max_stack_depth = stats.max_stack_depth.max(stack.len());
        let here = consulted(a, &stack, n);
        stats.consulted_positions.extend(here.iter().copied());
        if opts.track_consulted {
            consulted_sets.insert(here);
        }
        if a.accepts(&stack, n) {
            accepted.get_or_insert(idx);
            if opts.stop_at_accept {
                break;
            }
        }
        transitions.clear();
        a.successors(&stack, input, &mut transitions);
        let first_child = nodes.len();
        for t in transitions.drain(..) {
            stats.clause_applications += 1;
            if stats.clause_applications > opts.max_steps {
                out_of_steps = true;
                break 'search;
            }
            if cfg!(debug_assertions) {
                for item in &t.push {
                    if let Err(e) = a.check_item(item, n) {
                        panic!("{} clause {} produced ill-formed item {}: {e}", a.name(), t.label, a.render(item));
                    }
                }
            }
            let next: Rc<[A::Item]> = Rc::from(t.apply(&stack));
            if next.len() > max_depth {
                stats.depth_cutoffs += 1;
                continue;
            }
            if opts.prune_duplicates && !visited.insert(next.clone()) {
                stats.duplicates_pruned += 1;
                continue;
            }
            nodes.push(Node {
                stack: next,
                parent: idx,
                label: t.label,
            });
        }
        // first successor is expanded first
        work.extend((first_child..nodes.len()).rev());
    }

    stats.consulted_sets = consulted_sets.into_iter().collect();
    let verdict = if accepted.is_some() {
        Verdict::Accept
    } else if out_of_steps || stats.depth_cutoffs > 0 {
        Verdict::ResourceLimit
    } else {
        Verdict::Reject
    };
    let trace = accepted.map(|mut idx| {
        let mut steps = Vec::new();
        while idx != 0 {
            let node = &nodes[idx];
            steps.push(TraceStep {
                label: node.label,
                stack: node.stack.to_vec(),
            });
            idx = node.parent;
        }
        steps.reverse();
        Trace {
            initial: nodes[0].stack.to_vec(),
            steps,
        }
    });
    RunResult {
        verdict,
        stats,
        trace,
    }
}

/// Re-applies the trace's clauses from `[Init(n)]`, checking every listed
/// stack and that the last one is accepting.
pub fn replay<A: Automaton>(a: &A, input: &Input, trace: &Trace<A::Item>) -> Result<(), EngineError> {
    let n = input.len();
    if trace.initial != vec![a.init(n)] {
        return Err(EngineError::Replay {
            step: 0,
            reason: "trace does not start at Init(n)".into(),
        });
    }
    let mut current = trace.initial.clone();
    let mut transitions = Vec::new();
    for (i, step) in trace.steps.iter().enumerate() {
        transitions.clear();
        a.successors(&current, input, &mut transitions);
        let ok = transitions
            .iter()
            .any(|t| t.label == step.label && t.apply(&current) == step.stack);
        if !ok {
            return Err(EngineError::Replay {
                step: i + 1,
                reason: format!("no application of clause {} yields the listed stack", step.label),
            });
        }
        current = step.stack.clone();
    }
    if !a.accepts(&current, n) {
        return Err(EngineError::Replay {
            step: trace.steps.len(),
            reason: "final stack is not accepting".into(),
        });
    }
    Ok(())
}

pub fn render_stack<A: Automaton>(a: &A, stack: &[A::Item]) -> String {
    stack.iter().map(|i| a.render(i)).collect::<Vec<_>>().join(" ")
}

/// One row of a trace table; `clause` is empty for the initial stack.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub stack: String,
    pub clause: String,
}

/// Table rows in the style of a printed derivation: the initial stack, then
/// one row per step, with steps merged where the automaton asks for it.
pub fn trace_rows<A: Automaton>(a: &A, trace: &Trace<A::Item>) -> Vec<TraceRow> {
    let mut rows = vec![TraceRow {
        stack: render_stack(a, &trace.initial),
        clause: String::new(),
    }];
    let mut before: &[A::Item] = &trace.initial;
    let mut i = 0;
    while i < trace.steps.len() {
        let step = &trace.steps[i];
        if let Some(next) = trace.steps.get(i + 1) {
            if a.merge_rows(before, step.label, next.label) {
                rows.push(TraceRow {
                    stack: render_stack(a, &next.stack),
                    clause: format!("{}, {}", step.label, next.label),
                });
                before = &next.stack;
                i += 2;
                continue;
            }
        }
        rows.push(TraceRow {
            stack: render_stack(a, &step.stack),
            clause: step.label.to_string(),
        });
        before = &step.stack;
        i += 1;
    }
    rows
}

pub fn format_table(rows: &[TraceRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.stack.chars().count())
        .chain(std::iter::once("Stack".len()))
        .max()
        .unwrap_or(0);
    let mut out = format!("{:<width$} | Clause\n", "Stack");
    for r in rows {
        let pad = width - r.stack.chars().count();
        out.push_str(&r.stack);
        out.push_str(&" ".repeat(pad));
        out.push_str(" | ");
        out.push_str(&r.clause);
        out.push('\n');
    }
    out
}

/// Machine-readable trace: one record per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub label: String,
    pub stack: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDump {
    pub initial: Vec<String>,
    pub steps: Vec<TraceRecord>,
}

pub fn trace_dump<A: Automaton>(a: &A, trace: &Trace<A::Item>) -> TraceDump {
    TraceDump {
        initial: trace.initial.iter().map(|i| a.render(i)).collect(),
        steps: trace
            .steps
            .iter()
            .map(|s| TraceRecord {
                label: s.label.to_string(),
                stack: s.stack.iter().map(|i| a.render(i)).collect(),
            })
            .collect(),
    }
}
