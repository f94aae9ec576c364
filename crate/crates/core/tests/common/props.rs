//! Property checks shared by the proptest suites and the acceptance runner.

use std::collections::BTreeSet;

use headdrive::engine::{replay, run, Automaton, RunOptions, Verdict};
use headdrive::grammar::{
    detect_head_recursion, AugmentedGrammar, HeadCornerRelation, HeadGrammar, RelationVariant,
};
use headdrive::random::{gen_head_grammar, head_grammar, rng, Params};
use headdrive::recognizers::ghi::{GhiItem, TreeOrRule};
use headdrive::recognizers::{Ehi, Ghi, Hc, Hi, Phi, Td};
use headdrive::transform::GenHeadGrammar;
use rand::Rng;

use super::explore;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

/// Runs `$body` once per recognizer, with `$a` bound to it. TD is left out
/// on head-recursive grammars, where it need not terminate.
macro_rules! each_recognizer {
    ($g:expr, $a:ident => $body:block) => {{
        let g: &HeadGrammar = $g;
        if detect_head_recursion(&AugmentedGrammar::new(g)).is_none() {
            let $a = &Td::new(g);
            $body
        }
        { let $a = &Hc::new(g); $body }
        { let $a = &Phi::new(g); $body }
        { let $a = &Ehi::new(g); $body }
        { let $a = &Hi::new(g); $body }
        { let $a = &Ghi::from_head_grammar(g); $body }
    }};
}

pub fn grammar(seed: u64) -> HeadGrammar {
    head_grammar(&mut rng(seed), &Params::default())
}

pub fn gen_grammar(seed: u64) -> GenHeadGrammar {
    gen_head_grammar(&mut rng(seed), &Params::default())
}

/// A mask and a short input over `{a, b}`, both derived from `seed`.
pub fn sample(seed: u64) -> (u64, u64, Vec<String>) {
    let mut r = rng(seed ^ 0x5eed);
    let len = r.gen_range(1..=4);
    let w = (0..len).map(|_| if r.gen_bool(0.5) { "a" } else { "b" }.to_string()).collect();
    (r.gen(), r.gen(), w)
}

/// Every tree and rule element of a GHI automaton, in sorted order.
fn elements(ghi: &Ghi) -> Vec<TreeOrRule> {
    let mut out: Vec<TreeOrRule> = (0..ghi.rules().len() as u32).map(TreeOrRule::Rule).collect();
    for r in ghi.rules() {
        out.extend(ghi.tree(&r.rhs));
        out.extend(r.rhs.proper_subtrees().into_iter().filter_map(|t| ghi.tree(t)));
    }
    out.sort();
    out.dedup();
    out
}

fn pick(all: &[TreeOrRule], mask: u64) -> Vec<TreeOrRule> {
    all.iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

fn subset(a: &[TreeOrRule], b: &[TreeOrRule]) -> bool {
    a.iter().all(|e| b.contains(e))
}

pub fn closure_idempotent(seed: u64, mask: u64) -> Check {
    let ghi = Ghi::new(&gen_grammar(seed));
    let q = pick(&elements(&ghi), mask);
    let c = ghi.closure(&q);
    ensure!(ghi.closure(&c) == c, "closure not idempotent on {}", ghi.render_set(&q));
    ensure!(subset(&q, &c), "closure lost elements of {}", ghi.render_set(&q));
    Ok(())
}

pub fn closure_monotone(seed: u64, m1: u64, m2: u64) -> Check {
    let ghi = Ghi::new(&gen_grammar(seed));
    let all = elements(&ghi);
    let small = pick(&all, m1 & m2);
    let big = pick(&all, m1);
    ensure!(
        subset(&ghi.closure(&small), &ghi.closure(&big)),
        "closure not monotone: {} vs {}",
        ghi.render_set(&small),
        ghi.render_set(&big)
    );
    Ok(())
}

pub fn goto_subset(seed: u64, mask: u64) -> Check {
    let ghi = Ghi::new(&gen_grammar(seed));
    let all = elements(&ghi);
    let q = ghi.closure(&pick(&all, mask));
    for (x, name) in ghi.symbols().iter() {
        ensure!(subset(&ghi.goto(&q, x), &q), "goto(Q, {name}) not a subset");
    }
    let trees = all
        .iter()
        .filter_map(|e| match e {
            TreeOrRule::Tree(t) => Some(Some(*t)),
            TreeOrRule::Rule(_) => None,
        })
        .chain(std::iter::once(None));
    for t in trees {
        ensure!(subset(&ghi.goto_left_tree(&q, t), &q), "gotoleft not a subset");
        ensure!(subset(&ghi.goto_right_tree(&q, t), &q), "gotoright not a subset");
    }
    Ok(())
}

pub fn child_sets_closed(seed: u64, mask: u64) -> Check {
    let ghi = Ghi::new(&gen_grammar(seed));
    let q = pick(&elements(&ghi), mask);
    let left = ghi.left_set(&q);
    let right = ghi.right_set(&q);
    ensure!(ghi.closure(&left) == left, "left set not closed");
    ensure!(ghi.closure(&right) == right, "right set not closed");
    Ok(())
}

pub fn relation_closure(seed: u64) -> Check {
    let g = AugmentedGrammar::new(&grammar(seed));
    for variant in [RelationVariant::Full, RelationVariant::Left, RelationVariant::Right] {
        let rel = HeadCornerRelation::compute(&g, variant);
        for a in g.nonterminals() {
            ensure!(rel.contains(a, a), "{variant:?} not reflexive at {}", g.name(a));
        }
        let pairs = rel.pairs();
        for &(b, a) in &pairs {
            for &(c, b2) in &pairs {
                ensure!(b2 != b || rel.contains(c, a), "{variant:?} not transitive");
            }
        }
        let mut again = rel.clone();
        again.close();
        ensure!(again == rel, "{variant:?} changed when closed again");
    }
    Ok(())
}

pub fn relation_base(seed: u64) -> Check {
    let g = AugmentedGrammar::new(&grammar(seed));
    let full = HeadCornerRelation::compute(&g, RelationVariant::Full);
    let left = HeadCornerRelation::compute(&g, RelationVariant::Left);
    let right = HeadCornerRelation::compute(&g, RelationVariant::Right);
    ensure!(left.is_subset_of(&full), "left relation exceeds full");
    ensure!(right.is_subset_of(&full), "right relation exceeds full");
    for r in g.rules() {
        let h = r.head_symbol();
        if !g.is_nonterminal(h) {
            continue;
        }
        ensure!(full.contains(h, r.lhs), "missing base pair");
        ensure!(r.head != 0 || left.contains(h, r.lhs), "missing left base pair");
        ensure!(r.head + 1 != r.rhs.len() || right.contains(h, r.lhs), "missing right base pair");
    }
    Ok(())
}

pub fn items_well_formed(seed: u64, w: &[String]) -> Check {
    let g = grammar(seed);
    let n = w.len();
    each_recognizer!(&g, a => {
        explore(a, w, 5_000, |stack| stack.iter().try_for_each(|it| a.check_item(it, n)))
            .map_err(|e| format!("{}: {e}", a.name()))?;
    });
    Ok(())
}

/// GHI items are well formed and the spans on any stack never overlap.
pub fn ghi_items_well_formed(seed: u64, w: &[String]) -> Check {
    let ghi = Ghi::new(&gen_grammar(seed));
    let n = w.len();
    explore(&ghi, w, 5_000, |stack: &[GhiItem]| {
        for it in stack {
            ghi.check_item(it, n)?;
        }
        let mut spans: Vec<_> = stack.iter().map(|it| it.span()).collect();
        spans.sort();
        match spans.windows(2).find(|p| p[0].1 > p[1].0) {
            Some(p) => Err(format!("overlapping spans {p:?}")),
            None => Ok(()),
        }
    })?;
    Ok(())
}

pub fn traces_replay(seed: u64, w: &[String]) -> Check {
    let g = grammar(seed);
    each_recognizer!(&g, a => {
        let input = a.encode(w);
        let r = run(a, &input, &RunOptions::default());
        match r.accepting_trace() {
            Ok(t) => {
                replay(a, &input, t).map_err(|e| format!("{}: {e}", a.name()))?;
                ensure!(a.accepts(t.stacks().last().unwrap(), w.len()), "{}: trace ends unaccepted", a.name());
            }
            Err(_) => ensure!(r.verdict != Verdict::Accept, "{}: accept without trace", a.name()),
        }
    });
    let ghi = Ghi::new(&gen_grammar(seed));
    let input = ghi.encode(w);
    if let Ok(t) = run(&ghi, &input, &RunOptions::default()).accepting_trace() {
        replay(&ghi, &input, t).map_err(|e| format!("ghi: {e}"))?;
    }
    Ok(())
}

fn involutive<A: Automaton>(a: &A, w: &[String], mirror: impl Fn(&A::Item) -> A::Item) -> Check {
    explore(a, w, 2_000, |stack| match stack.iter().find(|it| mirror(&mirror(it)) != **it) {
        Some(it) => Err(format!("{}: {}", a.name(), a.render(it))),
        None => Ok(()),
    })?;
    Ok(())
}

pub fn mirror_involution(seed: u64, w: &[String]) -> Check {
    let g = grammar(seed);
    if detect_head_recursion(&AugmentedGrammar::new(&g)).is_none() {
        involutive(&Td::new(&g), w, |i| i.mirror())?;
    }
    involutive(&Hc::new(&g), w, |i| i.mirror())?;
    involutive(&Phi::new(&g), w, |i| i.mirror())?;
    involutive(&Ehi::new(&g), w, |i| i.mirror())?;
    involutive(&Hi::new(&g), w, |i| i.mirror())?;
    let gg = gen_grammar(seed);
    let ghi = Ghi::new(&gg);
    involutive(&ghi, w, |i| ghi.mirror_item(i))?;
    for r in gg.rules() {
        ensure!(r.rhs.mirror().mirror() == r.rhs, "tree mirror not involutive");
    }
    Ok(())
}

pub fn pruning_safety(seed: u64, w: &[String]) -> Check {
    let g = grammar(seed);
    let unpruned = RunOptions { prune_duplicates: false, max_steps: 20_000, ..RunOptions::default() };
    each_recognizer!(&g, a => {
        let input = a.encode(w);
        let with = run(a, &input, &RunOptions::default()).verdict;
        let without = run(a, &input, &unpruned).verdict;
        ensure!(
            with == without || with == Verdict::ResourceLimit || without == Verdict::ResourceLimit,
            "{}: {with:?} with pruning, {without:?} without",
            a.name()
        );
    });
    Ok(())
}

/// Positions covered by recognized spans only accumulate along an accepting
/// trace, stay within the run's consulted set and end up covering the input.
pub fn consulted_monotone(seed: u64, w: &[String]) -> Check {
    let g = grammar(seed);
    each_recognizer!(&g, a => {
        let r = run(a, &a.encode(w), &RunOptions::default());
        if let Some(t) = &r.trace {
            let mut seen = BTreeSet::new();
            let mut last = 0;
            for stack in t.stacks() {
                for it in stack {
                    if let Some((k, m)) = a.recognized_span(it) {
                        seen.extend(((k + 1).max(1)..=m).map(|p| p as usize));
                    }
                }
                ensure!(seen.len() >= last, "{}: shrank", a.name());
                last = seen.len();
                ensure!(seen.is_subset(&r.stats.consulted_positions), "{}: escaped run set", a.name());
            }
            ensure!(seen == (1..=w.len()).collect(), "{}: input not covered", a.name());
        }
    });
    Ok(())
}

/// Named groups for the acceptance runner, each checked on one seed.
pub const GROUPS: &[(&str, fn(u64) -> Check)] = &[
    ("closure idempotence", |s| {
        let (m1, m2, _) = sample(s);
        closure_idempotent(s, m1)?;
        closure_monotone(s, m1, m2)
    }),
    ("goto subset", |s| {
        let (m, _, _) = sample(s);
        goto_subset(s, m)?;
        child_sets_closed(s, m)
    }),
    ("relation closure laws", |s| {
        relation_closure(s)?;
        relation_base(s)
    }),
    ("item well-formedness", |s| {
        let (_, _, w) = sample(s);
        items_well_formed(s, &w)?;
        ghi_items_well_formed(s, &w)
    }),
    ("trace replay", |s| traces_replay(s, &sample(s).2)),
    ("mirror involution", |s| mirror_involution(s, &sample(s).2)),
    ("pruning safety", |s| pruning_safety(s, &sample(s).2)),
    ("consulted-set monotonicity", |s| consulted_monotone(s, &sample(s).2)),
];
