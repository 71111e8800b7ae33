//! Words, finite presentations, the integral free group ring and Fox
//! derivatives.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{split_statements, Statement};

/// A word in the generators: `(generator index, ±1)` letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<(usize, i32)>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    /// Builds a word from letters with arbitrary nonzero exponents, expanding
    /// powers and reducing freely.
    pub fn from_powers(letters: &[(usize, i32)]) -> Self {
        let mut v = Vec::new();
        for &(g, e) in letters {
            let s = e.signum();
            for _ in 0..e.unsigned_abs() {
                v.push((g, s));
            }
        }
        Word(v).reduce()
    }

    pub fn letters(&self) -> &[(usize, i32)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cancels adjacent `g g^-1` pairs until none remain.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<(usize, i32)> = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !(w[0].0 == w[1].0 && w[0].1 == -w[1].1))
    }

    /// Reduced product.
    pub fn mul(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduce()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::new();
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v).reduce()
    }

    /// Prefix of the first `n` letters (unreduced slice of this word).
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &(g, e) in &self.0 {
            v[g] += e as i64;
        }
        v
    }

    /// Text such as `a b^-1 a`, using `names` for generators.
    pub fn format(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let (g, e) = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == (g, e) {
                j += 1;
            }
            let k = (j - i) as i32 * e;
            parts.push(if k == 1 { names[g].clone() } else { format!("{}^{k}", names[g]) });
            i = j;
        }
        parts.join(" ")
    }
}

/// Element of the integral group ring of the free group: reduced word -> coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement(BTreeMap<Word, i64>);

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_terms([(w, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(w.reduce(), c);
        }
        x
    }

    fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        match self.0.get_mut(&w) {
            Some(x) => {
                *x += c;
                if *x == 0 {
                    self.0.remove(&w);
                }
            }
            None => {
                self.0.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.0 {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        GroupRingElement(self.0.iter().map(|(w, &c)| (w.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, &a) in &self.0 {
            for (v, &b) in &other.0 {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (w, &c) in &self.0 {
            let body = w.format(names);
            if s.is_empty() {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            match (c.abs(), w.is_empty()) {
                (1, _) => s.push_str(&body),
                (k, true) => s.push_str(&k.to_string()),
                (k, false) => s.push_str(&format!("{k}*({body})")),
            }
        }
        s
    }
}

/// Fox derivative of `w` with respect to generator `g`, in the free group ring.
pub fn fox_derivative(w: &Word, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (j, &(h, e)) in w.0.iter().enumerate() {
        if h != g {
            continue;
        }
        if e > 0 {
            out.add_term(w.prefix(j).reduce(), 1);
        } else {
            out.add_term(w.prefix(j + 1).reduce(), -1);
        }
    }
    out
}

/// A finite presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// Named sub-words, already expanded wherever they were used.
    pub abbreviations: Vec<(String, Word)>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators.iter().map(Word::reduce).collect();
        Presentation { generators, relators, abbreviations: Vec::new() }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// `#generators - #relators`.
    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    /// Parses a word in this presentation's generators and abbreviations.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.parse_word_at(text, (1, 1))
    }

    pub(crate) fn parse_word_at(&self, text: &str, origin: (usize, usize)) -> Result<Word> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let at = offset + text[offset..].find(tok).unwrap();
            offset = at + tok.len();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i32 = e.parse().map_err(|_| {
                        let (l, c) = crate::ring::expr::locate(text, at, origin);
                        Error::parse(l, c, format!("bad exponent in `{tok}`"))
                    })?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let base = if let Some(g) = self.generator_index(name) {
                Word::generator(g)
            } else if let Some((_, w)) = self.abbreviations.iter().find(|(n, _)| n == name) {
                w.clone()
            } else if name.chars().all(|c| c.is_alphanumeric() || c == '_') && !name.is_empty() {
                return Err(Error::UndeclaredGenerator(name.to_string()));
            } else {
                let (l, c) = crate::ring::expr::locate(text, at, origin);
                return Err(Error::parse(l, c, format!("bad letter `{tok}`")));
            };
            letters.extend_from_slice(&base.pow(exp).0);
        }
        Ok(Word(letters).reduce())
    }

    /// Handles a `gens`, `let` or `rel` statement; returns `false` for
    /// any other keyword.
    pub(crate) fn apply_statement(&mut self, st: &Statement) -> Result<bool> {
        let (kw, rest, origin) = st.split_keyword();
        match kw {
            "gens" => {
                for name in rest.split_whitespace() {
                    if self.generators.iter().any(|g| g == name) {
                        return Err(Error::parse(origin.0, origin.1, format!("generator `{name}` declared twice")));
                    }
                    if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(Error::parse(origin.0, origin.1, format!("bad generator name `{name}`")));
                    }
                    self.generators.push(name.to_string());
                }
            }
            "let" => {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(origin.0, origin.1, "expected `let <name> = <word>`"))?;
                let name = name.trim();
                if name.is_empty() || self.generator_index(name).is_some() {
                    return Err(Error::parse(origin.0, origin.1, format!("bad abbreviation name `{name}`")));
                }
                if body.split_whitespace().any(|t| t.split('^').next() == Some(name)) {
                    return Err(Error::CyclicAbbreviation(name.to_string()));
                }
                let body_at = rest.find('=').unwrap() + 1;
                let w = self.parse_word_at(&rest[body_at..], crate::ring::expr::locate(rest, body_at, origin))?;
                self.abbreviations.retain(|(n, _)| n != name);
                self.abbreviations.push((name.to_string(), w));
            }
            "rel" => {
                let w = self.parse_word_at(rest, origin)?;
                self.relators.push(w);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn format(&self) -> String {
        let mut s = format!("gens {};\n", self.generators.join(" "));
        for (n, w) in &self.abbreviations {
            s.push_str(&format!("let {n} = {};\n", w.format(&self.generators)));
        }
        for r in &self.relators {
            s.push_str(&format!("rel {};\n", r.format(&self.generators)));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Parses the `gens` / `let` / `rel` grammar.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Presentation::default();
    for st in split_statements(text) {
        if !p.apply_statement(&st)? {
            let (kw, _, _) = st.split_keyword();
            return Err(Error::parse(st.origin.0, st.origin.1, format!("unknown statement `{kw}`")));
        }
    }
    Ok(p)
}
