#![allow(dead_code)]

use std::collections::HashSet;
use std::rc::Rc;

use headdrive::engine::{Automaton, Transition};
use headdrive::grammar::{parse_hg, HeadGrammar};
use headdrive::random::{gen_head_corpus, head_corpus, Params};
use headdrive::transform::{parse_ghg, GenHeadGrammar};

pub mod props;

pub const SEED: u64 = 1;

pub const INFIX_GHG: &str = "start S\n\
    S -> (s (A (c) (b)) ())\n\
    S -> (s (A () (d)) ())\n\
    S -> (s (B) ())\n\
    A -> (a)\n\
    B -> (A () (b))\n";

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn hg(src: &str) -> HeadGrammar {
    parse_hg(src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

pub fn infix_ghg() -> GenHeadGrammar {
    parse_ghg(INFIX_GHG).unwrap()
}

pub fn corpus(count: usize) -> Vec<HeadGrammar> {
    head_corpus(SEED, count, &Params::default())
}

pub fn gen_corpus(count: usize) -> Vec<GenHeadGrammar> {
    gen_head_corpus(SEED, count, &Params::default())
}

/// Grammars in which at least two rules share a head-containing infix, each
/// with inputs from its language.
pub fn common_infix_family() -> Vec<(HeadGrammar, Vec<Vec<String>>)> {
    let family: [(&str, &[&str]); 7] = [
        ("start S\nS -> c *A b\nS -> c *A d\nA -> *a\n", &["c a b", "c a d"]),
        ("start S\nS -> *a b\nS -> *a c\n", &["a b", "a c"]),
        ("start S\nS -> A *b c\nS -> A *b d\nA -> *a\n", &["a b c", "a b d"]),
        ("start S\nS -> x *A y\nS -> x *A z\nA -> *a\nA -> *b\n", &["x a y", "x b z"]),
        ("start S\nS -> c *A b\nS -> c *A d\nS -> e *A b\nA -> *a\n", &["c a b", "c a d", "e a b"]),
        ("start S\nS -> *A b\nS -> *A c\nA -> a *B\nB -> *b\n", &["a b b", "a b c"]),
        ("start S\nS -> *A b\nS -> *B c\nS -> *B b\nA -> *a\nB -> *a\n", &["a b", "a c"]),
    ];
    family
        .iter()
        .map(|(src, inputs)| (hg(src), inputs.iter().map(|w| words(w)).collect()))
        .collect()
}

pub fn head_recursive() -> Vec<HeadGrammar> {
    [
        "start S\nS -> *S a\nS -> *a\n",
        "start S\nS -> *A b\nA -> *S a\nA -> *a\n",
        "start S\nS -> c *S\nS -> *S c\nS -> *b\n",
    ]
    .iter()
    .map(|s| hg(s))
    .collect()
}

pub fn cyclic() -> Vec<HeadGrammar> {
    [
        "start S\nS -> *A\nA -> *S\nA -> *a\n",
        "start S\nS -> *S\nS -> *a b\n",
        "start S\nS -> *A b\nA -> *B\nB -> *A\nB -> *a\n",
    ]
    .iter()
    .map(|s| hg(s))
    .collect()
}

/// Depth-first walk over the configurations reachable from `[Init(n)]`,
/// calling `visit` on each until `limit` configurations have been seen.
pub fn explore<A: Automaton>(
    a: &A,
    tokens: &[String],
    limit: usize,
    mut visit: impl FnMut(&[A::Item]) -> Result<(), String>,
) -> Result<usize, String> {
    let input = a.encode(tokens);
    let init: Rc<[A::Item]> = Rc::from(vec![a.init(tokens.len())]);
    let mut seen: HashSet<Rc<[A::Item]>> = HashSet::new();
    seen.insert(init.clone());
    let mut todo = vec![init];
    let mut out: Vec<Transition<A::Item>> = Vec::new();
    while let Some(stack) = todo.pop() {
        visit(&stack)?;
        if seen.len() >= limit {
            break;
        }
        out.clear();
        a.successors(&stack, &input, &mut out);
        for t in &out {
            let next: Rc<[A::Item]> = Rc::from(t.apply(&stack));
            if seen.insert(next.clone()) {
                todo.push(next);
            }
        }
    }
    Ok(seen.len())
}
