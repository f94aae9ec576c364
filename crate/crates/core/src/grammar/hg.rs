//! The `.hg` head grammar format.
//!
//! ```text
//! # comment
//! start S
//! S -> c *A b
//! A -> *a
//! ```
//!
//! Symbols match `[A-Za-z0-9_']+`. Bracketed names such as `[(c)A(b)]`, as
//! produced by the grammar transformations, are accepted as single symbols.

use super::{HeadGrammar, HeadRule, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Checks a symbol token: plain, or a balanced bracketed name.
pub(crate) fn valid_symbol(tok: &str) -> bool {
    if tok.starts_with('[') {
        let mut depth = 0i32;
        for (i, c) in tok.char_indices() {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 && i + 1 != tok.len() {
                        return false;
                    }
                }
                '(' | ')' | '.' => {}
                c if is_symbol_char(c) => {}
                _ => return false,
            }
            if depth < 0 {
                return false;
            }
        }
        depth == 0 && tok.len() > 2
    } else {
        !tok.is_empty() && tok.chars().all(is_symbol_char)
    }
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping any `#` comment.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

/// Parses the `start` header; returns the start symbol name.
pub(crate) fn parse_start<'a>(lineno: usize, toks: &[(usize, &'a str)]) -> Result<&'a str, ParseError> {
    match toks {
        [(_, "start"), (col, sym)] => {
            if valid_symbol(sym) {
                Ok(sym)
            } else {
                Err(ParseError::new(lineno, *col, format!("invalid symbol {sym:?}")))
            }
        }
        [(col, _), ..] => Err(ParseError::new(lineno, *col, "expected `start <Symbol>`")),
        [] => unreachable!("blank lines are skipped"),
    }
}

pub fn parse_hg(src: &str) -> Result<HeadGrammar, ParseError> {
    let mut symbols = SymbolTable::new();
    let mut start = None;
    let mut rules = Vec::new();
    let mut rule_lines = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if start.is_none() {
            start = Some(symbols.intern(parse_start(lineno, &toks)?));
            continue;
        }
        let (lcol, lhs) = toks[0];
        if !valid_symbol(lhs) {
            return Err(ParseError::new(lineno, lcol, format!("invalid symbol {lhs:?}")));
        }
        match toks.get(1) {
            Some((_, "->")) => {}
            Some((col, _)) => return Err(ParseError::new(lineno, *col, "expected `->`")),
            None => {
                return Err(ParseError::new(lineno, lcol + lhs.chars().count(), "expected `->`"))
            }
        }
        let mut rhs = Vec::new();
        let mut head = None;
        for &(col, tok) in &toks[2..] {
            let (is_head, name) = match tok.strip_prefix('*') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            if !valid_symbol(name) {
                return Err(ParseError::new(lineno, col, format!("invalid symbol {name:?}")));
            }
            if is_head {
                if head.is_some() {
                    return Err(ParseError::new(lineno, col, "multiple heads"));
                }
                head = Some(rhs.len());
            }
            rhs.push(symbols.intern(name));
        }
        if rhs.is_empty() {
            return Err(ParseError::new(lineno, lcol, "empty right-hand side"));
        }
        let Some(head) = head else {
            return Err(ParseError::new(lineno, lcol, "no head marked with `*`"));
        };
        let lhs = symbols.intern(lhs);
        rules.push(HeadRule::new(lhs, rhs, head));
        rule_lines.push(lineno);
    }
    let Some(start) = start else {
        return Err(ParseError::new(1, 1, "missing `start <Symbol>` line"));
    };
    HeadGrammar::from_parts(symbols, rules, start).map_err(|e| {
        let d = &e.0[0];
        let line = d.rule.map(|r| rule_lines[r]).unwrap_or(1);
        ParseError::new(line, 1, d.message.clone())
    })
}

pub fn write_hg(g: &HeadGrammar) -> String {
    let mut out = format!("start {}\n", g.name(g.start()));
    for r in g.rules() {
        out.push_str(&g.render_rule(r));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let src = "# tiny\nstart S\n\nS -> c *A b  # trailing\nA -> *a\n";
        let g = parse_hg(src).unwrap();
        assert_eq!(g.rules().len(), 2);
        assert_eq!(g.rules()[0].head, 1);
        let printed = write_hg(&g);
        assert_eq!(printed, "start S\nS -> c *A b\nA -> *a\n");
        assert_eq!(parse_hg(&printed).unwrap(), g);
    }

    #[test]
    fn multiple_heads_rejected() {
        let err = parse_hg("start S\nS -> *a *b\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 9));
        assert_eq!(err.message, "multiple heads");
    }

    #[test]
    fn missing_head_and_bad_tokens() {
        assert_eq!(parse_hg("start S\nS -> a b\n").unwrap_err().message, "no head marked with `*`");
        let err = parse_hg("start S\nS -> *a b-c\n").unwrap_err();
        assert_eq!(err.column, 9);
        assert_eq!(parse_hg("start S\nS -> \n").unwrap_err().message, "empty right-hand side");
        assert!(parse_hg("S -> *a\n").is_err());
        assert!(parse_hg("").is_err());
    }

    #[test]
    fn start_without_rules_rejected() {
        let err = parse_hg("start T\nS -> *a\n").unwrap_err();
        assert!(err.message.contains("no rules"));
    }

    #[test]
    fn bracket_symbols() {
        assert!(valid_symbol("[(c)A(b)]"));
        assert!(valid_symbol("[b.c]"));
        assert!(!valid_symbol("[a]b"));
        assert!(!valid_symbol("[]"));
        assert!(!valid_symbol("⊥"));
        let g = parse_hg("start S\nS -> [(c)A(b)] *s\n[(c)A(b)] -> *c\n").unwrap();
        assert!(g.is_nonterminal(g.symbols().get("[(c)A(b)]").unwrap()));
    }
}
