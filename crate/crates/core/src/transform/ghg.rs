//! The `.ghg` generalized head grammar format.
//!
//! ```text
//! start S
//! S -> (s (A (c) (b)) ())
//! A -> (a)
//! ```

use super::{GenHeadGrammar, GenHeadRule, RhsTree};
use crate::grammar::hg::{is_symbol_char, parse_start, tokens, valid_symbol};
use crate::grammar::{ParseError, SymbolTable};

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Sym(&'a str),
}

fn lex(line: usize, offset: usize, src: &str) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let col = offset + src[..i].chars().count();
        match c {
            '(' => out.push((col, Tok::Open)),
            ')' => out.push((col, Tok::Close)),
            c if c.is_whitespace() => {}
            c if is_symbol_char(c) => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if !is_symbol_char(d) {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                out.push((col, Tok::Sym(&src[i..end])));
            }
            other => {
                return Err(ParseError::new(line, col, format!("unexpected character {other:?}")))
            }
        }
    }
    Ok(out)
}

struct TreeParser<'t, 'a> {
    line: usize,
    end_col: usize,
    toks: &'t [(usize, Tok<'a>)],
    pos: usize,
}

impl<'t, 'a> TreeParser<'t, 'a> {
    fn err(&self, message: &str) -> ParseError {
        let col = self.toks.get(self.pos).map_or(self.end_col, |t| t.0);
        ParseError::new(self.line, col, message)
    }

    fn expect(&mut self, want: Tok<'_>, message: &str) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some((_, t)) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(message)),
        }
    }

    // tree := `(` Sym `)` | `(` Sym child child `)`
    fn tree(&mut self, symbols: &mut SymbolTable) -> Result<RhsTree, ParseError> {
        self.expect(Tok::Open, "expected `(`")?;
        let root = match self.toks.get(self.pos) {
            Some((_, Tok::Sym(s))) => {
                self.pos += 1;
                symbols.intern(s)
            }
            _ => return Err(self.err("expected a symbol")),
        };
        if let Some((_, Tok::Close)) = self.toks.get(self.pos) {
            self.pos += 1;
            return Ok(RhsTree::leaf(root));
        }
        let left = self.child(symbols)?;
        let right = self.child(symbols)?;
        self.expect(Tok::Close, "expected `)`")?;
        Ok(RhsTree::node(left, root, right))
    }

    // child := tree | `()`
    fn child(&mut self, symbols: &mut SymbolTable) -> Result<Option<RhsTree>, ParseError> {
        if let (Some((_, Tok::Open)), Some((_, Tok::Close))) =
            (self.toks.get(self.pos), self.toks.get(self.pos + 1))
        {
            self.pos += 2;
            return Ok(None);
        }
        self.tree(symbols).map(Some)
    }
}

/// Parses a single tree in `.ghg` syntax, interning its symbols.
pub fn parse_tree(symbols: &mut SymbolTable, src: &str) -> Result<RhsTree, ParseError> {
    let toks = lex(1, 1, src)?;
    let mut p = TreeParser {
        line: 1,
        end_col: src.chars().count() + 1,
        toks: &toks,
        pos: 0,
    };
    let t = p.tree(symbols)?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input after tree"));
    }
    Ok(t)
}

pub fn parse_ghg(src: &str) -> Result<GenHeadGrammar, ParseError> {
    let mut symbols = SymbolTable::new();
    let mut start = None;
    let mut rules = Vec::new();
    let mut rule_lines = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if start.is_none() {
            start = Some(symbols.intern(parse_start(lineno, &toks)?));
            continue;
        }
        let (lcol, lhs) = toks[0];
        if !valid_symbol(lhs) || lhs.starts_with('[') {
            return Err(ParseError::new(lineno, lcol, format!("invalid symbol {lhs:?}")));
        }
        let Some(arrow) = line.find("->") else {
            return Err(ParseError::new(lineno, lcol + lhs.chars().count(), "expected `->`"));
        };
        if toks.get(1).map(|t| t.1.starts_with("->")) != Some(true) {
            return Err(ParseError::new(lineno, toks.get(1).map_or(lcol, |t| t.0), "expected `->`"));
        }
        let body = &line[arrow + 2..];
        let body_col = line[..arrow + 2].chars().count() + 1;
        let ltoks = lex(lineno, body_col, body)?;
        if ltoks.is_empty() {
            return Err(ParseError::new(lineno, body_col, "empty right-hand side"));
        }
        let mut p = TreeParser {
            line: lineno,
            end_col: line.chars().count() + 1,
            toks: &ltoks,
            pos: 0,
        };
        let lhs = symbols.intern(lhs);
        let rhs = p.tree(&mut symbols)?;
        if p.pos != ltoks.len() {
            return Err(p.err("trailing input after tree"));
        }
        rules.push(GenHeadRule { lhs, rhs });
        rule_lines.push(lineno);
    }
    let Some(start) = start else {
        return Err(ParseError::new(1, 1, "missing `start <Symbol>` line"));
    };
    GenHeadGrammar::from_parts(symbols, rules, start).map_err(|e| {
        let d = &e.0[0];
        ParseError::new(d.rule.map(|r| rule_lines[r]).unwrap_or(1), 1, d.message.clone())
    })
}

pub fn write_ghg(g: &GenHeadGrammar) -> String {
    let mut out = format!("start {}\n", g.name(g.start()));
    for r in g.rules() {
        out.push_str(&format!("{} -> {}\n", g.name(r.lhs), r.rhs.to_ghg(g.symbols())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_rule() {
        let g = parse_ghg("start S\nS -> (s (A (c) (b)) ())\nA -> (a)\n").unwrap();
        assert_eq!(g.rules().len(), 2);
        assert_eq!(g.rules()[0].rhs.render(g.symbols()), "((c)A(b))s");
        assert_eq!(parse_ghg(&write_ghg(&g)).unwrap(), g);
    }

    #[test]
    fn reports_positions() {
        let err = parse_ghg("start S\nS -> (s (a) \n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.message, "expected `(`");
        let err = parse_ghg("start S\nS -> (s) (b)\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 10));
        let err = parse_ghg("start S\nS -> (s $)\n").unwrap_err();
        assert_eq!(err.column, 9);
        assert!(parse_ghg("start S\nS -> \n").is_err());
        assert!(parse_ghg("start S\nS (a)\n").is_err());
    }

    #[test]
    fn tree_parsing() {
        let mut syms = SymbolTable::new();
        let t = parse_tree(&mut syms, "(A (d (c) ()) ())").unwrap();
        assert_eq!(t.render(&syms), "((c)d)A");
        assert!(parse_tree(&mut syms, "(A (b)").is_err());
    }
}
