//! Seeded random grammars and exhaustive input lists for differential tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grammar::{HeadGrammar, HeadRule, SymbolTable};
use crate::transform::{GenHeadGrammar, GenHeadRule, RhsTree};

const NONTERMINALS: [&str; 4] = ["S", "A", "B", "C"];

#[derive(Clone, Debug)]
pub struct Params {
    pub max_nonterminals: usize,
    pub max_rules: usize,
    pub max_rhs: usize,
    pub alphabet: Vec<String>,
    /// Chance that a right-hand side member is a terminal.
    pub terminal_bias: f64,
    /// Maximum tree depth, for generalized grammars.
    pub max_depth: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            max_nonterminals: 4,
            max_rules: 8,
            max_rhs: 3,
            alphabet: vec!["a".into(), "b".into()],
            terminal_bias: 0.5,
            max_depth: 3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Left-hand sides: every chosen nonterminal gets at least one rule.
fn lhs_plan(rng: &mut impl Rng, p: &Params) -> (usize, Vec<usize>) {
    let nts = rng.gen_range(1..=p.max_nonterminals.min(NONTERMINALS.len()));
    let rules = rng.gen_range(nts..=p.max_rules.max(nts));
    let mut lhs: Vec<usize> = (0..nts).collect();
    lhs.extend((nts..rules).map(|_| rng.gen_range(0..nts)));
    (nts, lhs)
}

fn pick(rng: &mut impl Rng, p: &Params, nts: usize) -> String {
    if rng.gen_bool(p.terminal_bias) {
        p.alphabet[rng.gen_range(0..p.alphabet.len())].clone()
    } else {
        NONTERMINALS[rng.gen_range(0..nts)].to_string()
    }
}

pub fn head_grammar(rng: &mut impl Rng, p: &Params) -> HeadGrammar {
    let (nts, lhs) = lhs_plan(rng, p);
    let mut symbols = SymbolTable::new();
    let start = symbols.intern("S");
    let mut rules = Vec::new();
    for a in lhs {
        let len = rng.gen_range(1..=p.max_rhs);
        let rhs = (0..len).map(|_| symbols.intern(&pick(rng, p, nts))).collect();
        let head = rng.gen_range(0..len);
        rules.push(HeadRule::new(symbols.intern(NONTERMINALS[a]), rhs, head));
    }
    HeadGrammar::from_parts(symbols, rules, start).expect("generated grammars are valid")
}

fn tree(rng: &mut impl Rng, p: &Params, nts: usize, symbols: &mut SymbolTable, depth: usize) -> RhsTree {
    let root = symbols.intern(&pick(rng, p, nts));
    if depth <= 1 {
        return RhsTree::leaf(root);
    }
    let left = rng.gen_bool(0.4).then(|| tree(rng, p, nts, symbols, depth - 1));
    let right = rng.gen_bool(0.4).then(|| tree(rng, p, nts, symbols, depth - 1));
    RhsTree::node(left, root, right)
}

pub fn gen_head_grammar(rng: &mut impl Rng, p: &Params) -> GenHeadGrammar {
    let (nts, lhs) = lhs_plan(rng, p);
    let mut symbols = SymbolTable::new();
    let start = symbols.intern("S");
    let mut rules = Vec::new();
    for a in lhs {
        let depth = rng.gen_range(1..=p.max_depth);
        let rhs = tree(rng, p, nts, &mut symbols, depth);
        rules.push(GenHeadRule { lhs: symbols.intern(NONTERMINALS[a]), rhs });
    }
    GenHeadGrammar::from_parts(symbols, rules, start).expect("generated grammars are valid")
}

/// `count` head grammars; grammar `i` depends only on `seed + i`.
pub fn head_corpus(seed: u64, count: usize, p: &Params) -> Vec<HeadGrammar> {
    (0..count as u64)
        .map(|i| head_grammar(&mut rng(seed.wrapping_add(i)), p))
        .collect()
}

pub fn gen_head_corpus(seed: u64, count: usize, p: &Params) -> Vec<GenHeadGrammar> {
    (0..count as u64)
        .map(|i| gen_head_grammar(&mut rng(seed.wrapping_add(i)), p))
        .collect()
}

/// Every string over `alphabet` of length `1..=max_len`, shortest first.
pub fn all_inputs(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.clone());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
