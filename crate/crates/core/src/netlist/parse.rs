use crate::constants::PLANCK;
use crate::error::{Error, Result};

use super::{Branch, BranchKind, CircuitGraph, DEFAULT_GROUND};

fn suffix_scale(c: char) -> Option<f64> {
    Some(match c {
        'f' => 1e-15,
        'p' => 1e-12,
        'n' => 1e-9,
        'u' | 'µ' => 1e-6,
        'm' => 1e-3,
        'k' => 1e3,
        'M' => 1e6,
        'G' => 1e9,
        'T' => 1e12,
        _ => return None,
    })
}

/// Parses an SI number with an optional engineering suffix
/// (`f p n u m k M G T`), e.g. `10p`, `1.5e-9`, `5G`.
pub fn parse_value(token: &str) -> Option<f64> {
    let token = token.trim();
    let last = token.chars().last()?;
    let (number, scale) = match suffix_scale(last) {
        Some(s) => (&token[..token.len() - last.len_utf8()], s),
        None => (token, 1.0),
    };
    let v: f64 = number.parse().ok()?;
    let v = v * scale;
    v.is_finite().then_some(v)
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

/// Parses the line-oriented netlist grammar:
///
/// ```text
/// # comment
/// GROUND <node>
/// <name> <nodeA> <nodeB> <value>[suffix] [offset=<value>[suffix]]
/// ```
///
/// The first letter of `name` selects the element (C, L or J). Josephson
/// values are E_J in joules, written bare, as `Ej=<joules>`, or as
/// `f=<hertz>` meaning E_J/h.
pub fn parse_netlist(text: &str) -> Result<CircuitGraph> {
    let mut ground: Option<String> = None;
    let mut branches: Vec<Branch> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens[0].eq_ignore_ascii_case("GROUND") {
            if tokens.len() != 2 {
                return Err(syntax(line_no, "GROUND takes exactly one node"));
            }
            if ground.is_some() {
                return Err(syntax(line_no, "ground declared twice"));
            }
            ground = Some(tokens[1].to_string());
            continue;
        }

        let name = tokens[0];
        let kind = name
            .chars()
            .next()
            .and_then(BranchKind::from_prefix)
            .ok_or_else(|| Error::UnknownElement { line: line_no, name: name.to_string() })?;
        if tokens.len() < 4 {
            return Err(syntax(line_no, format!("`{name}` needs two nodes and a value")));
        }
        if tokens.len() > 5 {
            return Err(syntax(line_no, format!("unexpected token `{}`", tokens[5])));
        }
        let value_tok = tokens[3];
        let value = match kind {
            BranchKind::Josephson => {
                if let Some(v) = strip_key(value_tok, "Ej") {
                    parse_value(v)
                } else if let Some(v) = strip_key(value_tok, "f") {
                    parse_value(v).map(|hz| hz * PLANCK)
                } else {
                    parse_value(value_tok)
                }
            }
            _ => parse_value(value_tok),
        }
        .ok_or_else(|| syntax(line_no, format!("cannot read value `{value_tok}`")))?;
        if value <= 0.0 {
            return Err(Error::NonPositiveValue { line: line_no, name: name.to_string(), value });
        }

        let offset = match tokens.get(4) {
            None => 0.0,
            Some(tok) => {
                let v = strip_key(tok, "offset").ok_or_else(|| syntax(line_no, format!("unexpected token `{tok}`")))?;
                parse_value(v).ok_or_else(|| syntax(line_no, format!("cannot read offset `{v}`")))?
            }
        };

        if tokens[1] == tokens[2] {
            return Err(syntax(line_no, format!("`{name}` connects node `{}` to itself", tokens[1])));
        }
        if branches.iter().any(|b| b.name == name) {
            return Err(Error::DuplicateBranch { line: line_no, name: name.to_string() });
        }
        branches.push(Branch::new(name, kind, tokens[1], tokens[2], value).with_offset(offset));
    }

    if branches.is_empty() {
        return Err(Error::EmptyNetlist);
    }
    CircuitGraph::new(branches, ground.unwrap_or_else(|| DEFAULT_GROUND.to_string()))
}

fn strip_key<'a>(token: &'a str, key: &str) -> Option<&'a str> {
    let (k, v) = token.split_once('=')?;
    k.eq_ignore_ascii_case(key).then_some(v)
}
