use std::fs;
use std::path::Path;

use headdrive::grammar::{parse_hg, HeadGrammar};
use headdrive::transform::{parse_ghg, GenHeadGrammar};

use crate::CliError;

pub enum Loaded {
    Plain(HeadGrammar),
    Generalized(GenHeadGrammar),
}

/// Reads a `.ghg` file as a generalized grammar and anything else as `.hg`.
pub fn grammar(path: &Path) -> Result<Loaded, CliError> {
    let src =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let at =
        |e: headdrive::grammar::ParseError| CliError::Grammar(format!("{}:{e}", path.display()));
    if path.extension().is_some_and(|x| x == "ghg") {
        parse_ghg(&src).map(Loaded::Generalized).map_err(at)
    } else {
        parse_hg(&src).map(Loaded::Plain).map_err(at)
    }
}

pub fn tokens(input: &str, chars: bool) -> Vec<String> {
    if chars {
        input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect()
    } else {
        input.split_whitespace().map(String::from).collect()
    }
}

pub fn id(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |f| f.to_string_lossy().into_owned(),
    )
}
