//! Cyclic words and primitive-class enumeration.
//!
//! Periodic itineraries are words over a small alphabet read cyclically.
//! Enumeration is generic over the successor constraint, so the same
//! machinery serves group letters (a letter may not be followed by its
//! inverse) and billiard labels (a letter may not repeat).

use std::fmt;

/// Cyclic word over letters `0..alphabet`, stored as the lexicographically
/// minimal rotation so that equal classes compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<u8>,
}

impl CyclicWord {
    /// Canonicalizes `letters` to its minimal rotation. Panics on empty input.
    pub fn new(letters: &[u8]) -> Self {
        assert!(!letters.is_empty(), "cyclic word must be nonempty");
        let n = letters.len();
        let mut best = 0usize;
        for start in 1..n {
            for k in 0..n {
                let a = letters[(start + k) % n];
                let b = letters[(best + k) % n];
                if a != b {
                    if a < b {
                        best = start;
                    }
                    break;
                }
            }
        }
        let rotated = (0..n).map(|k| letters[(best + k) % n]).collect();
        CyclicWord { letters: rotated }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when the word is not a proper power of a shorter cyclic word.
    pub fn is_primitive(&self) -> bool {
        let n = self.letters.len();
        'period: for d in 1..n {
            if n % d != 0 {
                continue;
            }
            for k in d..n {
                if self.letters[k] != self.letters[k - d] {
                    continue 'period;
                }
            }
            return false;
        }
        true
    }

    /// The `r`-fold concatenation of this word.
    pub fn power(&self, r: usize) -> CyclicWord {
        assert!(r >= 1);
        let mut letters = Vec::with_capacity(self.letters.len() * r);
        for _ in 0..r {
            letters.extend_from_slice(&self.letters);
        }
        CyclicWord { letters }
    }

    /// Renders with the given label map, e.g. `"abA"` or `"ABC"`.
    pub fn render(&self, label: impl Fn(u8) -> char) -> String {
        self.letters.iter().map(|&l| label(l)).collect()
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({:?})", self.letters)
    }
}

/// Enumeration aborted because more than `cap` classes were produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCapExceeded {
    pub cap: usize,
}

impl fmt::Display for ClassCapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "more than {} primitive classes requested", self.cap)
    }
}

impl std::error::Error for ClassCapExceeded {}

/// Enumerates every primitive cyclic class of length `1..=max_len` whose
/// consecutive letters (including the wrap from last to first) satisfy
/// `allowed`. Returned words are canonical and sorted by (length, letters);
/// the order is deterministic and independent of call context.
pub fn primitive_classes(
    alphabet: u8,
    max_len: usize,
    cap: usize,
    allowed: impl Fn(u8, u8) -> bool + Copy,
) -> Result<Vec<CyclicWord>, ClassCapExceeded> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(max_len);
    for first in 0..alphabet {
        stack.push(first);
        descend(alphabet, max_len, cap, allowed, &mut stack, &mut out)?;
        stack.pop();
    }
    out.sort_unstable_by(|a, b| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
    Ok(out)
}

fn descend(
    alphabet: u8,
    max_len: usize,
    cap: usize,
    allowed: impl Fn(u8, u8) -> bool + Copy,
    stack: &mut Vec<u8>,
    out: &mut Vec<CyclicWord>,
) -> Result<(), ClassCapExceeded> {
    let first = stack[0];
    let last = *stack.last().unwrap();
    if allowed(last, first) {
        let word = CyclicWord::new(stack);
        // The canonical representative starts with the minimal letter, so
        // emitting only words already in canonical form visits each class once.
        if word.letters() == stack.as_slice() && word.is_primitive() {
            if out.len() == cap {
                return Err(ClassCapExceeded { cap });
            }
            out.push(word);
        }
    }
    if stack.len() == max_len {
        return Ok(());
    }
    for next in first..alphabet {
        // Letters below the first can never appear in a canonical word.
        if allowed(last, next) {
            stack.push(next);
            descend(alphabet, max_len, cap, allowed, stack, out)?;
            stack.pop();
        }
    }
    Ok(())
}
