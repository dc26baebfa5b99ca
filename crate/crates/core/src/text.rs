//! Textual grammar for forests, the interchange format of the crate.
//!
//! ```text
//! forest := item ("," item)*          (empty input is the empty forest)
//! item   := tree | "(" tree ("," tree)* ")"
//! tree   := ("b" | "x" | INT) ("[" tree ("," tree)* "]")?
//! ```
//!
//! Integers are liana labels (label 0 is accepted and renumbered). A
//! parenthesized list is an aroma whose tree roots form a directed cycle
//! `t1 -> t2 -> ... -> tk -> t1`; a single tree in parentheses carries a
//! self-loop on its root. Input is whitespace-insensitive; canonical output
//! is whitespace-free and re-parses to an equal key.

use crate::error::{ForestError, Result};
use crate::forest::{validate, Deco, Forest, RawForest};

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    raw: RawForest,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            raw: RawForest::default(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(ForestError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    /// Parses a tree, returns the index of its root vertex.
    fn tree(&mut self) -> Result<usize> {
        let deco = match self.peek() {
            Some(b'b') => {
                self.pos += 1;
                Deco::Black
            }
            Some(b'x') => {
                self.pos += 1;
                Deco::Grafted
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .map_or(false, |b| b.is_ascii_digit())
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let label: u32 = text
                    .parse()
                    .map_err(|_| ForestError::Syntax {
                        pos: start,
                        msg: "liana label out of range".to_string(),
                    })?;
                // label 0 is legal on input; shift so internal labels are >= 1
                Deco::Liana(label + 1)
            }
            _ => return self.err("expected 'b', 'x' or a liana label"),
        };
        let v = self.raw.decos.len();
        self.raw.decos.push(deco);
        if self.peek() == Some(b'[') {
            self.pos += 1;
            loop {
                let c = self.tree()?;
                self.raw.edges.push((c, v));
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ']'"),
                }
            }
        }
        Ok(v)
    }

    fn item(&mut self) -> Result<()> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut roots = Vec::new();
            loop {
                roots.push(self.tree()?);
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ')'"),
                }
            }
            // cycle t1 -> t2 -> ... -> tk -> t1
            let k = roots.len();
            for i in 0..k {
                self.raw.edges.push((roots[i], roots[(i + 1) % k]));
            }
            Ok(())
        } else {
            self.tree().map(|_| ())
        }
    }

    fn forest(&mut self) -> Result<RawForest> {
        if self.peek().is_none() {
            return Ok(std::mem::take(&mut self.raw));
        }
        loop {
            self.item()?;
            match self.peek() {
                None => break,
                Some(b',') => {
                    self.pos += 1;
                }
                _ => return self.err("expected ',' or end of input"),
            }
        }
        Ok(std::mem::take(&mut self.raw))
    }
}

/// Parses text into a canonical forest. The empty string is the empty forest.
pub fn parse(text: &str) -> Result<Forest> {
    let mut p = Parser::new(text);
    let raw = p.forest()?;
    validate(&raw)
}

/// Canonical text; re-parses to an equal key. The empty forest prints as "".
pub fn print_canonical(f: &Forest) -> String {
    f.key().to_string()
}

pub fn print_latex(f: &Forest) -> String {
    format!("\\forest{{{}}}", f.key())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::sigma;

    #[test]
    fn parses_exotic_tree() {
        let f = parse("b[1,b[1,b[2]],2]").unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f.count_liana_ends(), 4);
        assert_eq!(f.count_black(), 3);
    }

    #[test]
    fn parses_aroma_with_grafted_leaf() {
        let f = parse("(b[b]),b[b[x]]").unwrap();
        assert_eq!(f.key(), "(b[b]),b[b[x]]");
        assert_eq!(f.len(), 5);
        assert_eq!(f.cycle_count(), 1);
    }

    #[test]
    fn rejects_grafted_with_child() {
        assert!(matches!(
            parse("x[b]"),
            Err(ForestError::DecoratedVertexHasChild { .. })
        ));
    }

    #[test]
    fn rejects_pure_aroma() {
        assert!(matches!(parse("(b)"), Err(ForestError::PureAromaForest)));
    }

    #[test]
    fn rejects_unpaired_liana() {
        assert!(matches!(
            parse("b[1]"),
            Err(ForestError::LianaMultiplicityNot2 { .. })
        ));
    }

    #[test]
    fn empty_forest_round_trip() {
        let f = parse("").unwrap();
        assert!(f.is_empty());
        assert_eq!(print_canonical(&f), "");
    }

    #[test]
    fn label_zero_accepted_and_renumbered() {
        let a = parse("b[0,0]").unwrap();
        let b = parse("b[1,1]").unwrap();
        assert_eq!(a.key(), b.key());
        assert_eq!(a.key(), "b[1,1]");
    }

    #[test]
    fn canonical_relabeling() {
        let f = parse("b[2,1,b[2,1]]").unwrap();
        assert_eq!(f.key(), "b[1,2,b[1,2]]");
        let g = parse("b[1,2,b[1,2]]").unwrap();
        assert_eq!(f.key(), g.key());
    }

    #[test]
    fn exotic_equivalence_from_display() {
        let a = parse("(b[b[3],1,1]),b[b[2],b[2,3]]").unwrap();
        let b = parse("(b[b[2],3,3]),b[b[1],b[1,2]]").unwrap();
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse(" b [ x , b ] , x ").unwrap();
        let b = parse("b[x,b],x").unwrap();
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn syntax_error_position() {
        match parse("b[x,") {
            Err(ForestError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn singleton_and_sigma_examples() {
        assert_eq!(parse("b").unwrap().key(), "b");
        assert_eq!(sigma(&parse("b[1,1,2,2]").unwrap()), 8);
        assert_eq!(sigma(&parse("b[x,x,x,x]").unwrap()), 24);
        assert_eq!(sigma(&parse("b[x,x,b[x,b]]").unwrap()), 2);
        assert_eq!(sigma(&parse("1,b[1,2,b[2]]").unwrap()), 1);
        assert_eq!(sigma(&parse("(b[1,1,2]),2").unwrap()), 2);
    }
}
