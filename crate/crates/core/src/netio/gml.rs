//! Minimal GML: `graph [ node [ id N ] edge [ source A target B ] ]`.
//!
//! Other keys are skipped. Edge direction is discarded and repeated edges
//! collapse into one.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, Topology};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Number(String),
    Str(String),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                out.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                out.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => {
                            return Err(Error::Parse {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                out.push((Token::Str(s), start));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '.') {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Token::Number(s), line));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Token::Key(s), line));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Value {
    Number(String),
    Str,
    List(Vec<Entry>),
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.1)
    }

    /// Parses `key value` pairs until `]` (nested) or end of input (top level).
    fn list(&mut self, nested: bool) -> Result<Vec<Entry>> {
        let mut entries = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
                if nested {
                    return Err(Error::Parse {
                        line: self.last_line(),
                        message: "missing ']'".into(),
                    });
                }
                return Ok(entries);
            };
            self.pos += 1;
            let key = match tok {
                Token::Close if nested => return Ok(entries),
                Token::Key(k) => k,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected a key, found {other:?}"),
                    })
                }
            };
            let Some((tok, vline)) = self.tokens.get(self.pos).cloned() else {
                return Err(Error::Parse {
                    line,
                    message: format!("key '{key}' has no value"),
                });
            };
            self.pos += 1;
            let value = match tok {
                Token::Number(n) => Value::Number(n),
                Token::Str(_) => Value::Str,
                Token::Open => Value::List(self.list(true)?),
                other => {
                    return Err(Error::Parse {
                        line: vline,
                        message: format!("expected a value for '{key}', found {other:?}"),
                    })
                }
            };
            entries.push(Entry { key, value, line });
        }
    }
}

fn int_field(entries: &[Entry], key: &str, owner_line: usize) -> Result<i64> {
    let entry = entries.iter().find(|e| e.key == key).ok_or_else(|| Error::Parse {
        line: owner_line,
        message: format!("missing '{key}'"),
    })?;
    match &entry.value {
        Value::Number(s) => s.parse().map_err(|_| Error::Parse {
            line: entry.line,
            message: format!("'{key}' must be an integer, got '{s}'"),
        }),
        _ => Err(Error::Parse {
            line: entry.line,
            message: format!("'{key}' must be an integer"),
        }),
    }
}

/// Parses GML text. Node ids are mapped to `0..N` in order of appearance.
pub fn parse_gml(text: &str) -> Result<Topology> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let top = parser.list(false)?;
    let graph = top
        .iter()
        .find(|e| e.key == "graph")
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "no 'graph' list".into(),
        })?;
    let Value::List(items) = &graph.value else {
        return Err(Error::Parse {
            line: graph.line,
            message: "'graph' must be a list".into(),
        });
    };

    let mut ids = HashMap::new();
    for item in items.iter().filter(|e| e.key == "node") {
        let Value::List(fields) = &item.value else {
            return Err(Error::Parse { line: item.line, message: "'node' must be a list".into() });
        };
        let id = int_field(fields, "id", item.line)?;
        let next = ids.len();
        if ids.insert(id, next).is_some() {
            return Err(Error::Format(format!("duplicate node id {id} (line {})", item.line)));
        }
    }
    let mut g = Topology::new(ids.len());
    for item in items.iter().filter(|e| e.key == "edge") {
        let Value::List(fields) = &item.value else {
            return Err(Error::Parse { line: item.line, message: "'edge' must be a list".into() });
        };
        let endpoint = |key: &str| -> Result<usize> {
            let id = int_field(fields, key, item.line)?;
            ids.get(&id).copied().ok_or_else(|| {
                Error::Format(format!("edge at line {} references unknown node {id}", item.line))
            })
        };
        let (a, b) = (endpoint("source")?, endpoint("target")?);
        if a == b {
            return Err(Error::Format(format!("self-loop at line {}", item.line)));
        }
        let e = Edge::new(a, b);
        if !g.has_edge(e) {
            g.add_edge(e)?;
        }
    }
    Ok(g)
}

pub fn read_gml(path: impl AsRef<Path>) -> Result<Topology> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gml(&text)
}

pub fn to_gml(g: &Topology) -> String {
    let mut out = String::from("graph [\n  directed 0\n");
    for i in 0..g.node_count() {
        let _ = writeln!(out, "  node [ id {i} ]");
    }
    let mut edges: Vec<Edge> = g.edges().to_vec();
    edges.sort();
    for e in edges {
        let _ = writeln!(out, "  edge [ source {} target {} ]", e.lo(), e.hi());
    }
    out.push_str("]\n");
    out
}

pub fn write_gml(g: &Topology, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_gml(g)).map_err(|e| Error::io(path, e))
}
