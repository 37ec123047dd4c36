use std::collections::HashMap;
use std::fmt;

use super::{AlgebraError, ParseError, Polynomial, Word};

/// Index of a variable in its declaring algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The named generators of a free algebra, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    lookup: HashMap<String, Var>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Algebra {
    pub fn new<I, S>(names: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Algebra {
            names: Vec::new(),
            lookup: HashMap::new(),
        };
        for name in names {
            out.push(name.into())?;
        }
        Ok(out)
    }

    /// Appends a fresh variable and returns its handle.
    pub fn push(&mut self, name: String) -> Result<Var, AlgebraError> {
        if !is_identifier(&name) {
            return Err(AlgebraError::InvalidName(name));
        }
        if self.lookup.contains_key(&name) {
            return Err(AlgebraError::DuplicateVariable(name));
        }
        let var = Var(self.names.len() as u32);
        self.lookup.insert(name.clone(), var);
        self.names.push(name);
        Ok(var)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn var(&self, name: &str) -> Result<Var, AlgebraError> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len() as u32).map(Var)
    }

    /// The polynomial consisting of a single variable.
    pub fn gen(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        Ok(Polynomial::from(self.var(name)?))
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial, ParseError> {
        super::parse::parse_polynomial(src, self)
    }

    /// Parses a word such as `a*b^2*c` or `1`.
    pub fn parse_word(&self, src: &str) -> Result<Word, ParseError> {
        super::parse::parse_word(src, self)
    }

    /// Rejects polynomials mentioning variables this algebra does not declare.
    pub fn check(&self, p: &Polynomial) -> Result<(), AlgebraError> {
        for t in p.terms() {
            if let Some(v) = t.word.letters().iter().find(|v| v.index() >= self.len()) {
                return Err(AlgebraError::ForeignVariable(v.0));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Free algebra on {} generators ({})", self.len(), self.names.join(", "))
    }
}
