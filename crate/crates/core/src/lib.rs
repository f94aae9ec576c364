//! Head-driven parsing: head grammars, their transformations, and a family
//! of recognizers compiled into nondeterministic stack automata.

pub mod engine;
pub mod grammar;
pub mod recognizers;
pub mod transform;
pub mod oracle;
pub mod random;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grammars.md")]
    mod grammars {}
    #[doc = include_str!("../../../book/src/recognizers.md")]
    mod recognizers {}
    #[doc = include_str!("../../../book/src/generalized.md")]
    mod generalized {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
