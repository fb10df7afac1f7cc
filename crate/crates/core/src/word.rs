//! Freely reduced words and group presentations.

use serde::Serialize;
use std::fmt;

/// A letter is a generator index with exponent +-1.
pub type Letter = (u32, i8);

/// Freely reduced word over a presentation's generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn generator(g: u32) -> FreeWord {
        FreeWord { letters: vec![(g, 1)] }
    }

    /// Build from letters, reducing cancelling adjacent pairs.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for (g, e) in letters {
            debug_assert!(e == 1 || e == -1);
            if let Some(&(lg, le)) = out.last() {
                if lg == g && le == -e {
                    out.pop();
                    continue;
                }
            }
            out.push((g, e));
        }
        FreeWord { letters: out }
    }

    /// Build from syllables (generator, integer exponent).
    pub fn from_syllables(syllables: &[(u32, i32)]) -> FreeWord {
        let mut letters = Vec::new();
        for &(g, e) in syllables {
            let sign: i8 = if e < 0 { -1 } else { 1 };
            for _ in 0..e.unsigned_abs() {
                letters.push((g, sign));
            }
        }
        FreeWord::from_letters(letters)
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

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn contains_generator(&self, g: u32) -> bool {
        self.letters.iter().any(|&(x, _)| x == g)
    }

    pub fn occurrences(&self, g: u32) -> usize {
        self.letters.iter().filter(|&&(x, _)| x == g).count()
    }

    /// Substitute a word for a generator.
    pub fn substitute(&self, g: u32, replacement: &FreeWord) -> FreeWord {
        let mut letters = Vec::new();
        for &(x, e) in &self.letters {
            if x == g {
                let rep = if e == 1 { replacement.clone() } else { replacement.inverse() };
                letters.extend(rep.letters.iter().copied());
            } else {
                letters.push((x, e));
            }
        }
        FreeWord::from_letters(letters)
    }

    /// Apply a generator renumbering.
    pub fn remap(&self, map: &dyn Fn(u32) -> u32) -> FreeWord {
        FreeWord { letters: self.letters.iter().map(|&(g, e)| (map(g), e)).collect() }
    }

    /// Cyclically reduced form (used when deduplicating relators).
    pub fn cyclic_reduction(&self) -> FreeWord {
        let mut w = self.letters.clone();
        while w.len() >= 2 {
            let (first, last) = (w[0], w[w.len() - 1]);
            if first.0 == last.0 && first.1 == -last.1 {
                w.remove(0);
                w.pop();
            } else {
                break;
            }
        }
        FreeWord { letters: w }
    }

    pub fn render(&self, names: &dyn Fn(u32) -> String) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let (g, e) = self.letters[i];
            let mut run = 0i32;
            while i < self.letters.len() && self.letters[i] == (g, e) {
                run += 1;
                i += 1;
            }
            let exp = run * e as i32;
            if exp == 1 {
                parts.push(names(g));
            } else {
                parts.push(format!("{}^{}", names(g), exp));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|g| format!("x{g}")))
    }
}

/// Where a presentation generator came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GenOrigin {
    /// generator `index` of the vertex group at `vertex`
    Vertex { vertex: usize, index: usize },
    /// stable letter of the non-tree edge `edge`
    StableLetter { edge: usize },
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub origin: GenOrigin,
}

/// A finite presentation with an orientation character on the generators.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<FreeWord>,
    /// w(generator) in {+1, -1}
    pub character: Vec<i8>,
}

impl Presentation {
    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn name_of(&self, g: u32) -> String {
        self.generators[g as usize].name.clone()
    }

    /// w of a word: product of the character over its letters.
    pub fn character_of(&self, w: &FreeWord) -> i8 {
        let mut c = 1i8;
        for &(g, _) in w.letters() {
            c *= self.character[g as usize];
        }
        c
    }

    /// The character must evaluate to +1 on every relator.
    pub fn character_consistent(&self) -> bool {
        self.relators.iter().all(|r| self.character_of(r) == 1)
    }

    pub fn is_orientable(&self) -> bool {
        self.character.iter().all(|&c| c == 1)
    }

    pub fn render(&self) -> String {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let rel: Vec<String> =
            self.relators.iter().map(|r| r.render(&|g| names[g as usize].clone())).collect();
        format!("<{} | {}>", names.join(", "), rel.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = FreeWord::from_letters([(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(w.letters(), &[(2, 1)]);
        let w = FreeWord::from_syllables(&[(0, 3), (0, -3)]);
        assert!(w.is_empty());
    }

    #[test]
    fn inverse_and_concat() {
        let w = FreeWord::from_syllables(&[(0, 2), (1, -1)]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.inverse().letters(), &[(1, 1), (0, -1), (0, -1)]);
    }

    #[test]
    fn substitution() {
        // r = x y x^-1, substitute x := z^2
        let r = FreeWord::from_syllables(&[(0, 1), (1, 1), (0, -1)]);
        let z2 = FreeWord::from_syllables(&[(2, 2)]);
        let s = r.substitute(0, &z2);
        assert_eq!(s, FreeWord::from_syllables(&[(2, 2), (1, 1), (2, -2)]));
    }

    #[test]
    fn rendering() {
        let w = FreeWord::from_syllables(&[(0, 2), (1, -1), (0, 1)]);
        assert_eq!(w.render(&|g| ["a", "b"][g as usize].to_string()), "a^2*b^-1*a");
        assert_eq!(FreeWord::identity().render(&|_| "a".into()), "1");
    }

    #[test]
    fn cyclic_reduction() {
        let w = FreeWord::from_syllables(&[(0, -1), (1, 1), (0, 1)]);
        assert_eq!(w.cyclic_reduction(), FreeWord::from_syllables(&[(1, 1)]));
    }
}
