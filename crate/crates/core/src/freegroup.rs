//! Reduced words in a free group on meridian generators `m_1 .. m_n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator `m_j` raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, sign: i8) -> Self {
        Letter { generator, inverse: sign < 0 }
    }

    pub fn sign(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word over `rank` generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity(rank: usize) -> Self {
        GroupWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, j: usize, sign: i8) -> Result<Self> {
        GroupWord::from_letters(rank, vec![Letter::new(j, sign)])
    }

    /// Builds a word from letters, reducing as it goes.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut w = GroupWord::identity(rank);
        for l in letters {
            if l.generator == 0 || l.generator > rank {
                return Err(Error::GeneratorOutOfRange(l.generator, rank));
            }
            w.push(l);
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        match self.letters.last() {
            Some(last) if last.cancels(&l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn is_identity(&self) -> bool {
        self.is_empty()
    }

    fn same_rank(&self, other: &GroupWord) -> Result<()> {
        if self.rank != other.rank {
            Err(Error::RankMismatch(self.rank, other.rank))
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, other: &GroupWord) -> Result<GroupWord> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `by · self · by⁻¹`.
    pub fn conjugate(&self, by: &GroupWord) -> Result<GroupWord> {
        by.multiply(self)?.multiply(&by.inverse())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
        a.multiply(b)?.multiply(&a.inverse())?.multiply(&b.inverse())
    }

    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            for &l in &base.letters {
                out.push(l);
            }
        }
        out
    }

    /// Signed exponent sum of generator `j`.
    pub fn exponent_sum(&self, j: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == j)
            .map(|l| l.sign() as i64)
            .sum()
    }

    pub fn mentions(&self, j: usize) -> bool {
        self.letters.iter().any(|l| l.generator == j)
    }

    /// Parses the `"1 2 -1 -2"` text form.
    pub fn parse(rank: usize, text: &str) -> Result<GroupWord> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))?;
            if v == 0 {
                return Err(Error::Parse("letter 0 is not a generator".into()));
            }
            letters.push(Letter::new(v.unsigned_abs() as usize, v.signum() as i8));
        }
        GroupWord::from_letters(rank, letters)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| (l.generator as i64 * l.sign() as i64).to_string())
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let v: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad letter {s:?}")))?;
        if v == 0 {
            return Err(Error::Parse("letter 0 is not a generator".into()));
        }
        Ok(Letter::new(v.unsigned_abs() as usize, v.signum() as i8))
    }
}

/// Right-normed bracket `[g_1, [g_2, [..., g_r]...]]`.
pub fn iterated_commutator(rank: usize, generators: &[Letter]) -> Result<GroupWord> {
    let (last, init) = generators
        .split_last()
        .ok_or_else(|| Error::InvalidParameters("iterated commutator of nothing".into()))?;
    let mut acc = GroupWord::from_letters(rank, [*last])?;
    for &g in init.iter().rev() {
        let head = GroupWord::from_letters(rank, [g])?;
        acc = GroupWord::commutator(&head, &acc)?;
    }
    Ok(acc)
}
