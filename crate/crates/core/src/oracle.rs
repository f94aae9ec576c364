//! Ground truth that ignores heads: a chart recognizer, bounded language
//! enumeration, useless-symbol detection and the correct subsequence check.

use std::collections::{BTreeSet, HashSet};

use crate::grammar::{Cfg, HeadGrammar, SymbolId};
use crate::transform::{tau_head, GenHeadGrammar};

/// Anything with an underlying context-free grammar.
pub trait Language {
    fn cfg(&self) -> Cfg;
}

impl Language for Cfg {
    fn cfg(&self) -> Cfg {
        self.clone()
    }
}

impl Language for HeadGrammar {
    fn cfg(&self) -> Cfg {
        self.to_cfg()
    }
}

/// Generalized grammars go through the head transformation first.
impl Language for GenHeadGrammar {
    fn cfg(&self) -> Cfg {
        tau_head(self).to_cfg()
    }
}

/// A chart of derivable nonterminals per span.
pub struct Chart {
    n: usize,
    cells: Vec<Vec<bool>>,
}

impl Chart {
    /// Whether `a` derives `a_{i+1} … a_j`.
    pub fn derives(&self, a: SymbolId, i: usize, j: usize) -> bool {
        self.cells[i * (self.n + 1) + j][a.index()]
    }
}

fn tokens_to_ids(g: &Cfg, tokens: &[impl AsRef<str>]) -> Vec<Option<SymbolId>> {
    tokens
        .iter()
        .map(|t| g.symbols.get(t.as_ref()).filter(|&s| !g.is_nonterminal(s)))
        .collect()
}

pub fn chart(g: &Cfg, tokens: &[impl AsRef<str>]) -> Chart {
    let input = tokens_to_ids(g, tokens);
    let n = input.len();
    let nsym = g.symbols.len();
    let mut chart = Chart { n, cells: vec![vec![false; nsym]; (n + 1) * (n + 1)] };
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            // unit rules make a cell depend on itself; iterate to a fixpoint
            loop {
                let mut changed = false;
                for (lhs, rhs) in &g.rules {
                    if !chart.derives(*lhs, i, j) && covers(g, &chart, &input, rhs, i, j) {
                        chart.cells[i * (n + 1) + j][lhs.index()] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    chart
}

fn symbol_derives(g: &Cfg, chart: &Chart, input: &[Option<SymbolId>], x: SymbolId, i: usize, j: usize) -> bool {
    if g.is_nonterminal(x) {
        chart.derives(x, i, j)
    } else {
        j == i + 1 && input[i] == Some(x)
    }
}

/// Whether `rhs` derives exactly `a_{i+1} … a_j`.
fn covers(g: &Cfg, chart: &Chart, input: &[Option<SymbolId>], rhs: &[SymbolId], i: usize, j: usize) -> bool {
    if rhs.len() > j - i {
        return false;
    }
    let mut reach = vec![false; j + 1];
    reach[i] = true;
    for (idx, &x) in rhs.iter().enumerate() {
        let last = idx + 1 == rhs.len();
        let mut next = vec![false; j + 1];
        for p in i..j {
            if !reach[p] {
                continue;
            }
            if last {
                if symbol_derives(g, chart, input, x, p, j) {
                    return true;
                }
            } else {
                // leave room for the remaining members
                let limit = j - (rhs.len() - idx - 1);
                for q in p + 1..=limit {
                    if symbol_derives(g, chart, input, x, p, q) {
                        next[q] = true;
                    }
                }
            }
        }
        reach = next;
    }
    false
}

pub fn recognize(g: &impl Language, tokens: &[impl AsRef<str>]) -> bool {
    recognize_cfg(&g.cfg(), tokens)
}

pub fn recognize_cfg(g: &Cfg, tokens: &[impl AsRef<str>]) -> bool {
    if tokens.is_empty() {
        return false;
    }
    chart(g, tokens).derives(g.start, 0, tokens.len())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration exceeded {cap} strings")]
    FrontierCap { cap: usize },
}

pub const DEFAULT_CAP: usize = 500_000;

/// All strings of `L(g)` with at most `max_len` tokens, in lexicographic order.
pub fn enumerate(g: &impl Language, max_len: usize) -> Result<BTreeSet<Vec<String>>, OracleError> {
    enumerate_with_cap(&g.cfg(), max_len, DEFAULT_CAP)
}

pub fn enumerate_with_cap(g: &Cfg, max_len: usize, cap: usize) -> Result<BTreeSet<Vec<String>>, OracleError> {
    let sets = languages(g, max_len, cap)?;
    Ok(sets[g.start.index()]
        .iter()
        .map(|w| w.iter().map(|&s| g.symbols.name(s).to_string()).collect())
        .collect())
}

/// Bottom-up: the strings up to `max_len` derivable from every symbol.
fn languages(g: &Cfg, max_len: usize, cap: usize) -> Result<Vec<HashSet<Vec<SymbolId>>>, OracleError> {
    let mut sets: Vec<HashSet<Vec<SymbolId>>> = vec![HashSet::new(); g.symbols.len()];
    for i in 0..g.symbols.len() {
        let s = SymbolId(i as u32);
        if !g.is_nonterminal(s) && max_len >= 1 {
            sets[i].insert(vec![s]);
        }
    }
    let mut total: usize = sets.iter().map(HashSet::len).sum();
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.rules {
            let mut found = Vec::new();
            concat(&sets, rhs, max_len, &mut Vec::new(), &mut found);
            for w in found {
                if sets[lhs.index()].insert(w) {
                    changed = true;
                    total += 1;
                    if total > cap {
                        return Err(OracleError::FrontierCap { cap });
                    }
                }
            }
        }
        if !changed {
            return Ok(sets);
        }
    }
}

fn concat(
    sets: &[HashSet<Vec<SymbolId>>],
    rhs: &[SymbolId],
    max_len: usize,
    prefix: &mut Vec<SymbolId>,
    out: &mut Vec<Vec<SymbolId>>,
) {
    let Some((&x, rest)) = rhs.split_first() else {
        out.push(prefix.clone());
        return;
    };
    for w in &sets[x.index()] {
        if prefix.len() + w.len() + rest.len() > max_len {
            continue;
        }
        let keep = prefix.len();
        prefix.extend_from_slice(w);
        concat(sets, rest, max_len, prefix, out);
        prefix.truncate(keep);
    }
}

fn productive(g: &Cfg) -> Vec<bool> {
    let mut prod: Vec<bool> = (0..g.symbols.len())
        .map(|i| !g.is_nonterminal(SymbolId(i as u32)))
        .collect();
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.rules {
            if !prod[lhs.index()] && rhs.iter().all(|s| prod[s.index()]) {
                prod[lhs.index()] = true;
                changed = true;
            }
        }
        if !changed {
            return prod;
        }
    }
}

/// Nonterminals that are unproductive or unreachable from the start symbol
/// through rules made only of productive symbols.
pub fn useless_symbols(g: &Cfg) -> Vec<SymbolId> {
    let prod = productive(g);
    let mut reach = vec![false; g.symbols.len()];
    if prod[g.start.index()] {
        reach[g.start.index()] = true;
        let mut work = vec![g.start];
        while let Some(a) = work.pop() {
            for (lhs, rhs) in &g.rules {
                if *lhs != a || !rhs.iter().all(|s| prod[s.index()]) {
                    continue;
                }
                for &s in rhs {
                    if !reach[s.index()] {
                        reach[s.index()] = true;
                        work.push(s);
                    }
                }
            }
        }
    }
    let mut out: Vec<SymbolId> = Vec::new();
    for (lhs, rhs) in &g.rules {
        for &s in std::iter::once(lhs).chain(rhs) {
            if !(prod[s.index()] && reach[s.index()]) && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsequenceVerdict {
    /// A string of at most the bound contains the consulted symbols in order.
    Holds,
    /// No string of the language contains them in order.
    Violated,
    /// Some string does, but it is longer than the bound.
    Inconclusive,
}

/// Checks that the tokens at `consulted` positions (1-based, in input
/// order) form a subsequence of some string in `L(g)`.
pub fn check_subsequence_property(
    g: &impl Language,
    tokens: &[impl AsRef<str>],
    consulted: &BTreeSet<usize>,
    max_len: usize,
) -> Result<SubsequenceVerdict, OracleError> {
    let cfg = g.cfg();
    let word: Vec<&str> = consulted.iter().map(|&p| tokens[p - 1].as_ref()).collect();
    let strings = enumerate_with_cap(&cfg, max_len, DEFAULT_CAP)?;
    Ok(subsequence_verdict(&cfg, &strings, &word))
}

/// As [`check_subsequence_property`], against a precomputed enumeration.
pub fn subsequence_verdict(g: &Cfg, strings: &BTreeSet<Vec<String>>, word: &[&str]) -> SubsequenceVerdict {
    if word.is_empty() && !strings.is_empty() {
        return SubsequenceVerdict::Holds;
    }
    if strings.iter().any(|s| is_subsequence(word, s)) {
        return SubsequenceVerdict::Holds;
    }
    if contains_supersequence(g, word) {
        SubsequenceVerdict::Inconclusive
    } else {
        SubsequenceVerdict::Violated
    }
}

pub fn is_subsequence(word: &[&str], s: &[String]) -> bool {
    let mut it = s.iter();
    word.iter().all(|w| it.any(|t| t == w))
}

/// Whether some string of `L(g)`, of any length, has `word` as a
/// subsequence: emptiness of the product of `g` with the automaton that
/// matches `word` greedily.
pub fn contains_supersequence(g: &Cfg, word: &[&str]) -> bool {
    let states = word.len() + 1;
    let nsym = g.symbols.len();
    // live[s][p][q]: symbol s can take the matcher from state p to state q
    let idx = |s: usize, p: usize, q: usize| (s * states + p) * states + q;
    let mut live = vec![false; nsym * states * states];
    for s in 0..nsym {
        let sym = SymbolId(s as u32);
        if g.is_nonterminal(sym) {
            continue;
        }
        let name = g.symbols.name(sym);
        for p in 0..states {
            let q = if p < word.len() && word[p] == name { p + 1 } else { p };
            live[idx(s, p, q)] = true;
        }
    }
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.rules {
            for p in 0..states {
                let mut reach = vec![false; states];
                reach[p] = true;
                for x in rhs {
                    let mut next = vec![false; states];
                    for (r, _) in reach.iter().enumerate().filter(|(_, &on)| on) {
                        for (q, slot) in next.iter_mut().enumerate() {
                            if live[idx(x.index(), r, q)] {
                                *slot = true;
                            }
                        }
                    }
                    reach = next;
                }
                for (q, _) in reach.iter().enumerate().filter(|(_, &on)| on) {
                    let k = idx(lhs.index(), p, q);
                    if !live[k] {
                        live[k] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    live[idx(g.start.index(), 0, word.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_hg;
    use crate::transform::parse_ghg;

    const INFIX_GHG: &str = "start S\n\
        S -> (s (A (c) (b)) ())\n\
        S -> (s (A () (d)) ())\n\
        S -> (s (B) ())\n\
        A -> (a)\n\
        B -> (A () (b))\n";

    fn words(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn example_language() {
        let g = parse_ghg(INFIX_GHG).unwrap();
        assert!(recognize(&g, &words("c a b s")));
        assert!(!recognize(&g, &words("s")));
        assert!(!recognize(&g, &Vec::<String>::new()));
        let lang = enumerate(&g, 4).unwrap();
        let show: Vec<String> = lang.iter().map(|w| w.join(" ")).collect();
        assert_eq!(show, ["a b s", "a d s", "c a b s"]);
    }

    #[test]
    fn unit_cycles_terminate() {
        let g = parse_hg("start S\nS -> *A\nA -> *S\nA -> *a\n").unwrap();
        assert!(recognize(&g, &["a"]));
        assert!(!recognize(&g, &["a", "a"]));
    }

    #[test]
    fn enumeration_agrees_with_chart() {
        let g = parse_hg("start S\nS -> a *S b\nS -> *S S\nS -> *c\n").unwrap();
        let lang = enumerate(&g, 5).unwrap();
        let alphabet = ["a", "b", "c"];
        let mut inputs: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..5 {
            let longer: Vec<Vec<&str>> = inputs
                .iter()
                .filter(|w| w.len() < 5)
                .flat_map(|w| alphabet.iter().map(move |a| [w.clone(), vec![*a]].concat()))
                .collect();
            inputs.extend(longer);
            inputs.sort();
            inputs.dedup();
        }
        for w in inputs {
            let owned: Vec<String> = w.iter().map(|s| s.to_string()).collect();
            assert_eq!(lang.contains(&owned), recognize(&g, &w), "{w:?}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let g = parse_hg("start S\nS -> *a\nS -> *b\nS -> *S S\n").unwrap();
        assert_eq!(
            enumerate_with_cap(&g.to_cfg(), 12, 100),
            Err(OracleError::FrontierCap { cap: 100 })
        );
    }

    #[test]
    fn useless() {
        let g = parse_hg("start S\nS -> *a\nS -> *B\nB -> *B a\nC -> *a\n").unwrap();
        let names: Vec<&str> = useless_symbols(&g.to_cfg()).iter().map(|&s| g.name(s)).collect();
        assert_eq!(names, ["B", "C"]);
        let g = parse_hg("start S\nS -> c *A b\nA -> *a\n").unwrap();
        assert!(useless_symbols(&g.to_cfg()).is_empty());
    }

    #[test]
    fn subsequence_verdicts() {
        let g = parse_hg("start S\nS -> c *A b\nA -> *a\n").unwrap();
        let cfg = g.to_cfg();
        let lang = enumerate(&g, 3).unwrap();
        assert_eq!(subsequence_verdict(&cfg, &lang, &[]), SubsequenceVerdict::Holds);
        assert_eq!(subsequence_verdict(&cfg, &lang, &["c", "b"]), SubsequenceVerdict::Holds);
        assert_eq!(subsequence_verdict(&cfg, &lang, &["b", "c"]), SubsequenceVerdict::Violated);
        assert_eq!(subsequence_verdict(&cfg, &lang, &["d"]), SubsequenceVerdict::Violated);
        let g = parse_hg("start S\nS -> a *S\nS -> *b\n").unwrap();
        let lang = enumerate(&g, 2).unwrap();
        assert_eq!(
            subsequence_verdict(&g.to_cfg(), &lang, &["a", "a", "b"]),
            SubsequenceVerdict::Inconclusive
        );
        let consulted = BTreeSet::from([1, 3]);
        assert_eq!(
            check_subsequence_property(&g, &["a", "x", "b"], &consulted, 3).unwrap(),
            SubsequenceVerdict::Holds
        );
    }
}
