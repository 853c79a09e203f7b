//! Free-group words: signed generator letters, free reduction, parsing,
//! rendering, and simple (left-normed) commutators.
//!
//! Words are always stored freely reduced, so syntactic equality of the
//! letter sequences is a sound equality test in the free group. The
//! commutator convention throughout the crate is `[x, y] = x y x^-1 y^-1`.

use std::fmt;

use crate::error::{Error, Result};

/// Sign of a letter: the generator itself or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A single signed generator occurrence. Generator ids are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    gen: u32,
    sign: Sign,
}

impl Letter {
    pub fn new(gen: u32, sign: Sign) -> Self {
        assert!(gen >= 1, "generator ids are 1-based");
        Letter { gen, sign }
    }

    pub fn gen(&self) -> u32 {
        self.gen
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen,
            sign: self.sign.flip(),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word over a fixed alphabet `{1, .., alphabet}`.
///
/// The alphabet size may be zero, in which case only the empty word
/// exists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet: usize,
}

impl Word {
    /// The empty word over the given alphabet.
    pub fn empty(alphabet: usize) -> Self {
        Word {
            letters: Vec::new(),
            alphabet,
        }
    }

    /// A single generator `id` (1-based).
    pub fn generator(id: u32, alphabet: usize) -> Result<Self> {
        Word::from_letters(vec![Letter::new(id, Sign::Pos)], alphabet)
    }

    /// Build a word from raw letters, freely reducing and validating the
    /// alphabet bound.
    pub fn from_letters(letters: Vec<Letter>, alphabet: usize) -> Result<Self> {
        let mut reduced: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if l.gen as usize > alphabet {
                return Err(Error::GeneratorOutOfRange {
                    id: l.gen,
                    alphabet,
                });
            }
            push_reduced(&mut reduced, l);
        }
        Ok(Word {
            letters: reduced,
            alphabet,
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Freely reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            letters,
            alphabet: self.alphabet,
        })
    }

    /// Group inverse: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
            alphabet: self.alphabet,
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.alphabet);
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base).expect("same alphabet");
        }
        out
    }

    /// Canonical text form; parses back to the same word. Generators are
    /// rendered with the given prefix character (`t` or `m`).
    pub fn render(&self, prefix: char) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let mut parts = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match l.sign {
                Sign::Pos => parts.push(format!("{prefix}{}", l.gen)),
                Sign::Neg => parts.push(format!("{prefix}{}'", l.gen)),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('t'))
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last().is_some_and(|last| last.cancels(&l)) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

/// Left-normed simple commutator `[[..[[w1,w2],w3]..],wk]` with the
/// convention `[x, y] = x y x^-1 y^-1`. A single word is returned as is.
pub fn simple_commutator(words: &[Word]) -> Result<Word> {
    let first = words
        .first()
        .ok_or_else(|| Error::InvalidArgument("commutator of empty sequence".into()))?;
    let mut acc = first.clone();
    for w in &words[1..] {
        acc = commutator(&acc, w)?;
    }
    Ok(acc)
}

/// Two-argument commutator `x y x^-1 y^-1`.
pub fn commutator(x: &Word, y: &Word) -> Result<Word> {
    x.concat(y)?.concat(&x.inverse())?.concat(&y.inverse())
}

// ---------------------------------------------------------------------
// Parsing
//
// Grammar (ASCII):
//   word      := term*
//   term      := atom postfix*
//   atom      := generator | 'e' | '(' word ')' | '[' word (',' word)* ']'
//   postfix   := '\'' | '^' signed-integer
//   generator := ('t' | 'm') digits
// Whitespace-separated juxtaposition is the group product; brackets form
// the left-normed simple commutator.
// ---------------------------------------------------------------------

/// Parse a word in the grammar above over `{1, .., alphabet}`.
pub fn parse_word(text: &str, alphabet: usize) -> Result<Word> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    p.skip_ws();
    let w = p.parse_sequence(&[])?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    alphabet: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    /// Parse a product of terms until one of `stop` (or end of input).
    fn parse_sequence(&mut self, stop: &[u8]) -> Result<Word> {
        let mut acc = Word::empty(self.alphabet);
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b) if stop.contains(&b) => break,
                Some(_) => {
                    let term = self.parse_term()?;
                    acc = acc.concat(&term)?;
                }
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Word> {
        let mut w = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(b'\'') => {
                    self.pos += 1;
                    w = w.inverse();
                }
                Some(b'^') => {
                    self.pos += 1;
                    let e = self.parse_signed_int()?;
                    w = w.pow(e);
                }
                _ => break,
            }
        }
        Ok(w)
    }

    fn parse_atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b't') | Some(b'm') => {
                self.pos += 1;
                let id = self.parse_uint()?;
                if id == 0 {
                    return Err(self.err("generator indices are 1-based"));
                }
                if id as usize > self.alphabet {
                    return Err(Error::GeneratorOutOfRange {
                        id,
                        alphabet: self.alphabet,
                    });
                }
                Ok(Word::from_letters(
                    vec![Letter::new(id, Sign::Pos)],
                    self.alphabet,
                )?)
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(Word::empty(self.alphabet))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_sequence(b")")?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut args = vec![self.parse_sequence(b",]")?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.parse_sequence(b",]")?);
                }
                if self.peek() != Some(b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                simple_commutator(&args)
            }
            Some(_) => Err(self.err("expected a generator, 'e', '(' or '['")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a decimal index"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "index too large".to_string(),
            })
    }

    fn parse_signed_int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.parse_uint()? as i64;
        Ok(if neg { -v } else { v })
    }
}
