use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::Exponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Grevlex,
    Lex,
    Grlex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
        })
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grevlex" => Ok(OrderKind::Grevlex),
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::Grlex),
            other => Err(Error::parse(0, format!("unknown monomial order {other:?}"))),
        }
    }
}

/// A monomial order together with a variable priority: `priority[0]` is
/// the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// Natural priority `x1 > x2 > ... > xn`.
    pub fn new(kind: OrderKind, dim: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..dim).collect(),
        }
    }

    pub fn grevlex(dim: usize) -> Self {
        Self::new(OrderKind::Grevlex, dim)
    }

    pub fn lex(dim: usize) -> Self {
        Self::new(OrderKind::Lex, dim)
    }

    pub fn grlex(dim: usize) -> Self {
        Self::new(OrderKind::Grlex, dim)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &p in &priority {
            if p >= priority.len() || seen[p] {
                return Err(Error::Domain(format!(
                    "variable priority {priority:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        let (a, b) = (a.coords(), b.coords());
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::Grlex => a
                .iter()
                .sum::<u32>()
                .cmp(&b.iter().sum())
                .then_with(|| self.lex_cmp(a, b)),
            OrderKind::Grevlex => a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| {
                // Last differing variable (least significant first): the smaller
                // exponent wins.
                for &v in self.priority.iter().rev() {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn lex_cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for &v in &self.priority {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}
