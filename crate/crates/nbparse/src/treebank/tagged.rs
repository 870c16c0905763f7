//! One sentence per line, tokens written `form_POS`.

use crate::error::{Error, Result};
use crate::treebank::Token;

/// Splits one line into tokens at the last underscore of each
/// whitespace-separated item. `line` is the 1-based number used in errors.
pub fn read_tagged_line(text: &str, line: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut rest = text;
    let mut offset = 0;
    while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
        let len = rest[start..]
            .find(char::is_whitespace)
            .unwrap_or(rest.len() - start);
        let item = &rest[start..start + len];
        let column = text[..offset + start].chars().count() + 1;
        let fail = |message: String| Error::Parse {
            line,
            column,
            message,
        };
        let (form, pos) = item
            .rsplit_once('_')
            .ok_or_else(|| fail(format!("token {item:?} has no _POS suffix")))?;
        if form.is_empty() || pos.is_empty() {
            return Err(fail(format!("token {item:?} needs both a form and a tag")));
        }
        if item.contains(['(', ')']) {
            return Err(fail(format!(
                "token {item:?} contains a bracket; use -LRB- / -RRB-"
            )));
        }
        out.push(Token::new(form, pos));
        offset += start + len;
        rest = &rest[start + len..];
    }
    Ok(out)
}

/// Every non-blank line of `text`, with its 1-based line number.
pub fn read_tagged(text: &str) -> Result<Vec<(usize, Vec<Token>)>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let tokens = read_tagged_line(l, i + 1)?;
        if !tokens.is_empty() {
            out.push((i + 1, tokens));
        }
    }
    Ok(out)
}

pub fn write_tagged(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| format!("{}_{}", t.form, t.pos))
        .collect::<Vec<_>>()
        .join(" ")
}
