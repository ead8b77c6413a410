//! The plain-text poset document format.
//!
//! ```text
//! # bridge components
//! elements: L R S
//! L < S
//! R < S
//! ```
//!
//! The first meaningful line lists the elements; every following line is a
//! cover pair `lower < upper`. `#` starts a comment. Tokens are separated by
//! whitespace; identifiers may not contain whitespace, `<` or `#`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ident::canonical_cmp;
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetDocument {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn check_ident(line: usize, token: &str) -> Result<()> {
    if token.contains('<') {
        return Err(parse_err(
            line,
            format!("identifier `{token}` contains `<`"),
        ));
    }
    Ok(())
}

impl PosetDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut elements: Option<Vec<String>> = None;
        let mut covers = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            match &elements {
                None => {
                    let rest = content
                        .trim_start()
                        .strip_prefix("elements:")
                        .ok_or_else(|| parse_err(line, "expected `elements:` header"))?;
                    let ids: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    if ids.is_empty() {
                        return Err(parse_err(line, "element list is empty"));
                    }
                    for id in &ids {
                        check_ident(line, id)?;
                    }
                    elements = Some(ids);
                }
                Some(_) => match tokens.as_slice() {
                    [lower, "<", upper] => {
                        check_ident(line, lower)?;
                        check_ident(line, upper)?;
                        covers.push((lower.to_string(), upper.to_string()));
                    }
                    _ => {
                        return Err(parse_err(
                            line,
                            format!("expected `lower < upper`, found `{}`", content.trim()),
                        ))
                    }
                },
            }
        }
        let elements = elements.ok_or_else(|| parse_err(0, "missing `elements:` header"))?;
        Ok(PosetDocument { elements, covers })
    }

    pub fn from_poset(poset: &Poset) -> Self {
        PosetDocument {
            elements: poset.ids().to_vec(),
            covers: poset
                .covers()
                .iter()
                .map(|&(a, b)| (poset.id(a).to_string(), poset.id(b).to_string()))
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Poset::from_covers(
            self.elements.iter().cloned(),
            self.covers.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }

    /// Sorted elements and cover pairs, duplicates removed.
    pub fn canonical(&self) -> Self {
        let mut elements = self.elements.clone();
        elements.sort_by(|a, b| canonical_cmp(a, b));
        elements.dedup();
        let mut covers = self.covers.clone();
        covers.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then_with(|| canonical_cmp(&a.1, &b.1)));
        covers.dedup();
        PosetDocument { elements, covers }
    }
}

impl fmt::Display for PosetDocument {
    /// Writes the canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        writeln!(f, "elements: {}", c.elements.join(" "))?;
        for (a, b) in &c.covers {
            writeln!(f, "{a} < {b}")?;
        }
        Ok(())
    }
}
