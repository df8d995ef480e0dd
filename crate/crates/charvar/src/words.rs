//! Free-group words, group presentations, and mod-2 homological bookkeeping.
//!
//! Words are stored letter-by-letter with exponents +1/-1 and kept freely
//! reduced at all times. Generator indices are 0-based; generator names live
//! on the [`Presentation`] and matter only for parsing and printing.
//!
//! The subgroup generated by all squares contains the commutator subgroup,
//! so a word lies in it exactly when its exponent vector mod 2 falls in the
//! span of the relators' exponent vectors. That membership test is
//! [`in_gamma_squared`]; it is all the word-problem machinery this crate
//! ever needs.

pub mod gf2;

use gf2::{F2Matrix, F2Vector};
use std::fmt;
use thiserror::Error;

/// A single letter: a generator index with exponent +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

// Positive letters sort before their inverses so that canonical forms of
// positive words stay positive.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.gen, -self.exp).cmp(&(other.gen, -other.exp))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word in a free group.
///
/// The empty word is the identity. All constructors reduce, so no adjacent
/// pair `g g^-1` or `g^-1 g` ever survives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The empty (identity) word.
    pub fn empty() -> Self {
        Word::default()
    }

    /// The one-letter word for generator `gen`.
    pub fn generator(gen: usize) -> Self {
        Word {
            letters: vec![Letter::new(gen, 1)],
        }
    }

    /// Builds a word from letters, freely reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            match reduced.last() {
                Some(&top) if top.cancels(l) => {
                    reduced.pop();
                }
                _ => reduced.push(l),
            }
        }
        Word { letters: reduced }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters carrying exponent -1.
    pub fn inverse_letter_count(&self) -> usize {
        self.letters.iter().filter(|l| l.exp < 0).count()
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// True if every exponent is +1.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.exp > 0)
    }

    /// True if no generator index occurs twice (in either sign).
    pub fn is_square_free(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.letters.iter().all(|l| seen.insert(l.gen))
    }

    /// Concatenation `self * other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// The inverse word: letters reversed, exponents flipped.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cyclic rotation starting at position `k` (no-op on the empty word).
    pub fn rotated(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::empty();
        }
        let n = self.letters.len();
        let k = k % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        // A rotation of a cyclically reduced word is freely reduced, but a
        // rotation of a merely freely reduced word may not be.
        Word::from_letters(letters)
    }

    /// Removes matching first/last letters until the word is cyclically
    /// reduced. Trace-like functions are blind to this conjugation.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.clone();
        while letters.len() >= 2 && letters[0].cancels(*letters.last().unwrap()) {
            letters.pop();
            letters.remove(0);
        }
        Word { letters }
    }
}

/// The commutator `u v u^-1 v^-1`, freely reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.concat(v).concat(&u.inverse()).concat(&v.inverse())
}

/// A finite presentation: generator names plus relator words.
///
/// The group is free exactly when `relators` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Free group on the given generator names.
    pub fn free(names: &[&str]) -> Result<Self, ParseError> {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    /// Free group of rank `n` on names `a, b, c, ...`.
    pub fn free_of_rank(n: usize) -> Self {
        let names = default_names(n);
        Presentation {
            names,
            relators: Vec::new(),
        }
    }

    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, ParseError> {
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !is_valid_name(name) {
                return Err(ParseError::InvalidGeneratorName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(ParseError::DuplicateGeneratorName(name.clone()));
            }
        }
        let rank = names.len();
        for r in &relators {
            if r.is_empty() {
                return Err(ParseError::EmptyRelator);
            }
            if let Some(g) = r.max_generator() {
                if g >= rank {
                    return Err(ParseError::GeneratorOutOfRange { index: g, rank });
                }
            }
        }
        Ok(Presentation { names, relators })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let names: Vec<&str> = self.names.iter().map(|s| s.as_str()).collect();
        parse_word(text, &names)
    }

    /// Canonical word printing: runs combined, `^-1` for inverses, `*` separators.
    pub fn format_word(&self, w: &Word) -> String {
        format_word(w, &self.names)
    }

    /// Parses the presentation text format:
    ///
    /// ```text
    /// gens: a b c
    /// rel: a*b*a^-1*b^-1
    /// ```
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if names.is_some() {
                    return Err(ParseError::UnexpectedLine(line.to_string()));
                }
                names = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let names = names.as_ref().ok_or(ParseError::MissingGensLine)?;
                let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                let w = parse_word(rest, &name_refs)?;
                if w.is_empty() {
                    return Err(ParseError::EmptyRelator);
                }
                relators.push(w);
            } else {
                return Err(ParseError::UnexpectedLine(line.to_string()));
            }
        }
        let names = names.ok_or(ParseError::MissingGensLine)?;
        Presentation::new(names, relators)
    }

    /// Prints the text format; `parse` of the output reproduces `self`.
    pub fn print(&self) -> String {
        let mut out = format!("gens: {}\n", self.names.join(" "));
        for r in &self.relators {
            out.push_str(&format!("rel: {}\n", self.format_word(r)));
        }
        out
    }

    /// Exponent-sum matrix of the relators mod 2: entry `(i, j)` is the
    /// exponent sum of generator `i` in relator `j`.
    pub fn relator_exponent_matrix(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rank(), self.relators.len());
        for (j, r) in self.relators.iter().enumerate() {
            let v = exponent_vector_mod2(r, self);
            for i in 0..self.rank() {
                m.set(i, j, v.get(i));
            }
        }
        m
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print())
    }
}

/// Component `i` is the exponent sum of generator `i` in `w`, mod 2.
pub fn exponent_vector_mod2(w: &Word, p: &Presentation) -> F2Vector {
    let mut v = F2Vector::zeros(p.rank());
    for l in w.letters() {
        v.flip(l.gen);
    }
    v
}

/// Membership in the subgroup generated by squares: true iff the exponent
/// vector of `w` mod 2 lies in the span of the relators' exponent vectors,
/// i.e. `w` maps to zero in the mod-2 abelianization.
pub fn in_gamma_squared(w: &Word, p: &Presentation) -> bool {
    let v = exponent_vector_mod2(w, p);
    p.relator_exponent_matrix().solve(&v).is_some()
}

/// Errors from parsing words, presentations, or generator name lists.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent `{0}`")]
    MalformedExponent(String),
    #[error("unexpected character `{0}` in word")]
    UnexpectedCharacter(char),
    #[error("unbalanced brackets in word")]
    UnbalancedBracket,
    #[error("empty relator")]
    EmptyRelator,
    #[error("missing `gens:` line")]
    MissingGensLine,
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGeneratorName(String),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("unexpected line `{0}` in presentation")]
    UnexpectedLine(String),
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Default generator names `a, b, ..., z`, then `g26, g27, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

/// Parses a word over the given generator names.
///
/// Grammar: `word := term* ; term := atom ('^' int)? ; atom := name |
/// '[' word ',' word ']'`, with `*` or whitespace separators. Empty input
/// is the identity word. The bracket form is the commutator `[u, v]`.
pub fn parse_word(text: &str, names: &[&str]) -> Result<Word, ParseError> {
    let mut parser = WordParser {
        chars: text.chars().collect(),
        pos: 0,
        names,
    };
    let w = parser.parse_sequence(/*stop_at:*/ None)?;
    parser.skip_separators();
    if parser.pos != parser.chars.len() {
        return Err(ParseError::UnexpectedCharacter(parser.chars[parser.pos]));
    }
    Ok(w)
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [&'a str],
}

impl WordParser<'_> {
    fn skip_separators(&mut self) {
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_whitespace() || c == '*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_sequence(&mut self, stop_at: Option<&[char]>) -> Result<Word, ParseError> {
        let mut w = Word::empty();
        loop {
            self.skip_separators();
            match self.peek() {
                None => break,
                Some(c) if stop_at.is_some_and(|s| s.contains(&c)) => break,
                Some(_) => {
                    let term = self.parse_term()?;
                    w = w.concat(&term);
                }
            }
        }
        Ok(w)
    }

    fn parse_term(&mut self) -> Result<Word, ParseError> {
        let atom = self.parse_atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.parse_int()?;
            Ok(atom.pow(k))
        } else {
            Ok(atom)
        }
    }

    fn parse_atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.parse_sequence(Some(&[',', ']']))?;
                if self.peek() != Some(',') {
                    return Err(ParseError::UnbalancedBracket);
                }
                self.pos += 1;
                let v = self.parse_sequence(Some(&[']']))?;
                if self.peek() != Some(']') {
                    return Err(ParseError::UnbalancedBracket);
                }
                self.pos += 1;
                Ok(commutator(&u, &v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Word::generator(i)),
                    None => Err(ParseError::UnknownGenerator(name)),
                }
            }
            Some(c) => Err(ParseError::UnexpectedCharacter(c)),
            None => Err(ParseError::UnbalancedBracket),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| ParseError::MalformedExponent(text))
    }
}

/// Canonical word printing: maximal runs of one generator are combined into
/// `name` or `name^k`, joined by `*`. The empty word prints as the empty
/// string. Parsing the output reproduces the word.
pub fn format_word(w: &Word, names: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    let letters = w.letters();
    while i < letters.len() {
        let l = letters[i];
        let mut j = i + 1;
        // Free reduction guarantees a run of one generator has constant sign.
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let count = (j - i) as i64 * i64::from(l.exp);
        let name = &names[l.gen];
        if count == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{count}"));
        }
        i = j;
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names2() -> Vec<&'static str> {
        vec!["a", "b"]
    }

    fn w(text: &str) -> Word {
        parse_word(text, &names2()).unwrap()
    }

    #[test]
    fn parse_basic() {
        let word = w("a*b^-1");
        assert_eq!(
            word.letters(),
            &[Letter::new(0, 1), Letter::new(1, -1)]
        );
    }

    #[test]
    fn parse_cancels() {
        assert!(w("a*a^-1").is_empty());
    }

    #[test]
    fn parse_exponent_expansion() {
        assert_eq!(
            w("b^3").letters(),
            &[Letter::new(1, 1), Letter::new(1, 1), Letter::new(1, 1)]
        );
    }

    #[test]
    fn parse_whitespace_separator() {
        assert_eq!(w("a b^-1"), w("a*b^-1"));
    }

    #[test]
    fn parse_empty_is_identity() {
        assert!(w("").is_empty());
        assert!(w("   ").is_empty());
    }

    #[test]
    fn parse_commutator_bracket() {
        assert_eq!(w("[a,b]"), commutator(&w("a"), &w("b")));
        assert_eq!(w("[a,b]^-1"), commutator(&w("b"), &w("a")));
        assert_eq!(w("[a*b, b]"), commutator(&w("a*b"), &w("b")));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_word("c", &names2()),
            Err(ParseError::UnknownGenerator("c".into()))
        );
        assert!(matches!(
            parse_word("a^x", &names2()),
            Err(ParseError::MalformedExponent(_))
        ));
        assert!(matches!(
            parse_word("[a,b", &names2()),
            Err(ParseError::UnbalancedBracket)
        ));
    }

    #[test]
    fn concat_and_inverse() {
        assert_eq!(w("a*b").concat(&w("b^-1")), w("a"));
        assert_eq!(w("a*b").inverse(), w("b^-1*a^-1"));
        assert_eq!(Word::empty().concat(&w("a*b")), w("a*b"));
        assert!(w("a*b").concat(&w("a*b").inverse()).is_empty());
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&w("a"), &w("b")), w("a*b*a^-1*b^-1"));
        assert!(commutator(&w("a"), &w("a")).is_empty());
        // [ab, b] reduces to a b a^-1 b^-1.
        assert_eq!(commutator(&w("a*b"), &w("b")), w("a*b*a^-1*b^-1"));
    }

    #[test]
    fn exponent_vectors() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        let v = exponent_vector_mod2(&commutator(&w("a"), &w("b")), &p);
        assert_eq!(v.to_bits(), vec![0, 0]);
        let v = exponent_vector_mod2(&w("a*b^2"), &p);
        assert_eq!(v.to_bits(), vec![1, 0]);
    }

    #[test]
    fn gamma_squared_membership() {
        let free2 = Presentation::free(&["a", "b"]).unwrap();
        assert!(in_gamma_squared(&commutator(&w("a"), &w("b")), &free2));
        assert!(!in_gamma_squared(&w("a"), &free2));

        // <a | a> is trivial, so everything is in the square subgroup.
        let trivial =
            Presentation::new(vec!["a".into()], vec![Word::generator(0)]).unwrap();
        assert!(in_gamma_squared(&Word::generator(0), &trivial));
    }

    #[test]
    fn presentation_round_trip() {
        let text = "gens: a b\nrel: a*b*a^-1*b^-1\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.print(), text);
        assert_eq!(Presentation::parse(&p.print()).unwrap(), p);
    }

    #[test]
    fn presentation_rejects_empty_relator() {
        assert_eq!(
            Presentation::parse("gens: a\nrel: a*a^-1\n"),
            Err(ParseError::EmptyRelator)
        );
    }

    #[test]
    fn word_format_round_trip() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        for text in ["a*b^-1", "b^3", "a^-2*b*a", ""] {
            let word = p.parse_word(text).unwrap();
            let printed = p.format_word(&word);
            assert_eq!(p.parse_word(&printed).unwrap(), word);
        }
    }

    /// Naive reduction oracle: scan repeatedly until no adjacent pair cancels.
    fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
        let mut cur: Vec<Letter> = letters.to_vec();
        loop {
            let mut next: Vec<Letter> = Vec::with_capacity(cur.len());
            let mut i = 0;
            let mut changed = false;
            while i < cur.len() {
                if i + 1 < cur.len() && cur[i].cancels(cur[i + 1]) {
                    i += 2;
                    changed = true;
                } else {
                    next.push(cur[i]);
                    i += 1;
                }
            }
            cur = next;
            if !changed {
                return cur;
            }
        }
    }

    fn arb_letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            (0usize..3, prop::bool::ANY).prop_map(|(g, s)| Letter::new(g, if s { 1 } else { -1 })),
            0..40,
        )
    }

    proptest! {
        #[test]
        fn reduction_matches_naive_oracle(letters in arb_letters()) {
            let fast = Word::from_letters(letters.iter().copied());
            let slow = naive_reduce(&letters);
            prop_assert_eq!(fast.letters(), slow.as_slice());
        }

        #[test]
        fn concat_inverse_is_identity(letters in arb_letters()) {
            let word = Word::from_letters(letters.iter().copied());
            prop_assert!(word.concat(&word.inverse()).is_empty());
        }

        #[test]
        fn commutator_exponent_vector_vanishes(u in arb_letters(), v in arb_letters()) {
            let p = Presentation::free(&["a", "b", "c"]).unwrap();
            let c = commutator(
                &Word::from_letters(u.iter().copied()),
                &Word::from_letters(v.iter().copied()),
            );
            prop_assert!(exponent_vector_mod2(&c, &p).is_zero());
        }

        #[test]
        fn gamma_squared_multiplicative(u in arb_letters(), v in arb_letters(), g in arb_letters()) {
            let p = Presentation::free(&["a", "b", "c"]).unwrap();
            let u = Word::from_letters(u.iter().copied());
            let v = Word::from_letters(v.iter().copied());
            let g = Word::from_letters(g.iter().copied());
            if in_gamma_squared(&u, &p) && in_gamma_squared(&v, &p) {
                prop_assert!(in_gamma_squared(&u.concat(&v), &p));
            }
            if in_gamma_squared(&u, &p) {
                prop_assert!(in_gamma_squared(&u.inverse(), &p));
                let conj = g.concat(&u).concat(&g.inverse());
                prop_assert!(in_gamma_squared(&conj, &p));
            }
        }
    }
}
