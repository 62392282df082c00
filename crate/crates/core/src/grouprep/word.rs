use std::fmt;

use super::GroupError;

/// A word in the generators: `(generator index, nonzero exponent)` letters with
/// adjacent letters on distinct generators. No relations are applied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    /// Builds a word, merging adjacent letters on the same generator.
    pub fn new(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(g: usize) -> Self {
        Word { letters: vec![(g, 1)] }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Renumbers generators by `offset`, for words moved into a direct product.
    pub fn shifted(&self, offset: usize) -> Word {
        Word {
            letters: self.letters.iter().map(|&(g, e)| (g + offset, e)).collect(),
        }
    }

    pub fn check_range(&self, generators: usize) -> Result<(), GroupError> {
        match self.max_generator() {
            Some(g) if g >= generators => Err(GroupError::IndexOutOfRange {
                index: g,
                generators,
            }),
            _ => Ok(()),
        }
    }

    /// Parses words like `abab`, `x1 x2^-1`, `b^2` by greedy longest match
    /// against the generator names. `1` or the empty string is the empty word.
    pub fn parse(s: &str, names: &[String]) -> Result<Word, GroupError> {
        let s = s.trim();
        if s.is_empty() || s == "1" || s == "e" && !names.iter().any(|n| n == "e") {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut rest = s;
        loop {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == '*' || c == '.');
            if rest.is_empty() {
                break;
            }
            let best = names
                .iter()
                .enumerate()
                .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            let Some((g, name)) = best else {
                return Err(GroupError::WordParse {
                    word: s.to_string(),
                    reason: format!("no generator matches at '{rest}'"),
                });
            };
            rest = &rest[name.len()..];
            let mut exp = 1i64;
            if let Some(after) = rest.strip_prefix('^') {
                let end = after
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
                    .map_or(after.len(), |(i, _)| i);
                exp = after[..end].parse().map_err(|_| GroupError::WordParse {
                    word: s.to_string(),
                    reason: format!("bad exponent '{}'", &after[..end]),
                })?;
                rest = &after[end..];
            }
            letters.push((g, exp));
        }
        Ok(Word::new(letters))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let multi = self.names.iter().any(|n| n.chars().count() > 1);
        for (i, &(g, e)) in self.word.letters.iter().enumerate() {
            if multi && i > 0 {
                write!(f, " ")?;
            }
            let name = self.names.get(g).map_or_else(|| format!("g{g}"), |n| n.clone());
            // expand small positive powers so Garside words read naturally
            if (2..=3).contains(&e) && !multi {
                for _ in 0..e {
                    write!(f, "{name}")?;
                }
            } else if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_display() {
        let n = names(&["a", "b", "c"]);
        let w = Word::parse("abab", &n).unwrap();
        assert_eq!(w.letters(), &[(0, 1), (1, 1), (0, 1), (1, 1)]);
        assert_eq!(w.display(&n).to_string(), "abab");
        let w = Word::parse("b^2 a^-1", &n).unwrap();
        assert_eq!(w.letters(), &[(1, 2), (0, -1)]);
        let m = names(&["x1", "y1", "x2", "y2"]);
        let w = Word::parse("x1x2", &m).unwrap();
        assert_eq!(w.letters(), &[(0, 1), (2, 1)]);
        assert_eq!(w.display(&m).to_string(), "x1 x2");
        assert!(Word::parse("q", &n).is_err());
        assert!(Word::parse("1", &n).unwrap().is_empty());
    }

    #[test]
    fn adjacent_letters_merge() {
        let w = Word::new([(0, 1), (0, -1)]);
        assert!(w.is_empty());
        let w = Word::new([(0, 1), (1, 2), (1, -2), (0, 1)]);
        assert_eq!(w.letters(), &[(0, 2)]);
        assert_eq!(Word::generator(1).pow(-2).letters(), &[(1, -2)]);
    }

    #[test]
    fn range_check() {
        assert!(Word::generator(3).check_range(3).is_err());
        assert!(Word::generator(2).check_range(3).is_ok());
    }
}
