//! The binary sieve over the nonnegative integers.
//!
//! The sieve splits a sequence by position parity: members on even positions
//! go to a child whose name gains an `E` on the left, members on odd positions
//! to a child gaining an `O`, and positions renumber from zero on each side.
//! Subsequences whose name starts with the prefix `EO` are *fixed* — the sieve
//! is never applied to them again. Every positive integer lands in exactly one
//! fixed subsequence, each of which is an arithmetic progression:
//!
//! * odd numbers: `EO_kO` with formula `2^(k+2) p + 2^(k+1) - 1`,
//! * even numbers: `EO_lE_mE` with formula `2^(m+l+2) p + 2^(m+1)(2^l - 1)`.
//!
//! [`classify`] computes a number's coordinates `(k, p)` or `(m, l, p)` in
//! this decomposition, [`ResidueClass::value`] inverts it exactly, and
//! [`sieve_oracle`] re-derives the same names by literally simulating the
//! position-parity extraction, as an independent check on the closed forms.
//!
//! Zero is the one number that never reaches a fixed subsequence (its name
//! would grow `E`s forever); it gets the distinguished [`ResidueClass::Zero`].

use crate::Natural;
use num_traits::{One, Zero as NumZero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    E,
    O,
}

/// A node of the sieve tree. The empty letter sequence is the root `N0`;
/// every other node is named by the letters accumulated on the way down,
/// leftmost letter last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubseqName {
    letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("subsequence names contain only the letters E and O")]
pub struct BadName;

impl SubseqName {
    pub fn root() -> Self {
        SubseqName {
            letters: Vec::new(),
        }
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        SubseqName { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    /// Fixed means the sieve stops here: the name starts with `EO`.
    pub fn is_fixed(&self) -> bool {
        matches!(self.letters.as_slice(), [Letter::E, Letter::O, ..])
    }

    /// Name of the child holding this node's even (left) or odd (right)
    /// positions; the new letter is concatenated on the left.
    pub fn child(&self, letter: Letter) -> SubseqName {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        SubseqName { letters }
    }

    /// The arithmetic progression `stride * p + offset` of this node, obtained
    /// by walking the letters right to left starting from the identity `p`:
    /// an `O` substitutes `p <- 2p + 1`, an `E` substitutes `p <- 2p`.
    pub fn to_form(&self) -> LinearForm {
        let mut stride = Natural::one();
        let mut offset = Natural::zero();
        for letter in self.letters.iter().rev() {
            if let Letter::O = letter {
                offset += &stride;
            }
            stride <<= 1u32;
        }
        LinearForm { stride, offset }
    }
}

impl fmt::Display for SubseqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return write!(f, "N0");
        }
        for letter in &self.letters {
            f.write_str(match letter {
                Letter::E => "E",
                Letter::O => "O",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SubseqName {
    type Err = BadName;

    fn from_str(s: &str) -> Result<Self, BadName> {
        if s == "N0" {
            return Ok(SubseqName::root());
        }
        s.chars()
            .map(|c| match c {
                'E' => Ok(Letter::E),
                'O' => Ok(Letter::O),
                _ => Err(BadName),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SubseqName::new)
    }
}

/// The arithmetic progression `stride * p + offset` of a sieve node. The
/// stride is 2 to the number of letters in the owning name, and the offset is
/// the subsequence's initial member (its value at position `p = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub stride: Natural,
    pub offset: Natural,
}

impl LinearForm {
    pub fn at(&self, p: &Natural) -> Natural {
        &self.stride * p + &self.offset
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stride.is_one() {
            write!(f, "p")?;
        } else {
            write!(f, "{}p", self.stride)?;
        }
        if !self.offset.is_zero() {
            write!(f, " + {}", self.offset)?;
        }
        Ok(())
    }
}

/// A number's coordinates in the fixed-subsequence decomposition.
///
/// `Odd(k, p)` stands for `2^(k+2) p + 2^(k+1) - 1` (always odd),
/// `Even(m, l, p)` for `2^(m+l+2) p + 2^(m+1)(2^l - 1)` (always even and
/// positive, `l >= 1`). `Zero` is zero's distinguished class; no finite name
/// exists for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResidueClass {
    Zero,
    Odd { k: u64, p: Natural },
    Even { m: u64, l: u64, p: Natural },
}

impl ResidueClass {
    pub fn odd(k: u64, p: impl Into<Natural>) -> Self {
        ResidueClass::Odd { k, p: p.into() }
    }

    /// Panics if `l == 0`; the even classes start at `l = 1`.
    pub fn even(m: u64, l: u64, p: impl Into<Natural>) -> Self {
        assert!(l >= 1, "even residue classes require l >= 1");
        ResidueClass::Even { m, l, p: p.into() }
    }

    /// The number these coordinates stand for; exact inverse of [`classify`].
    pub fn value(&self) -> Natural {
        match self {
            ResidueClass::Zero => Natural::zero(),
            ResidueClass::Odd { k, p } => (p << (k + 2)) + ((Natural::one() << (k + 1)) - 1u32),
            ResidueClass::Even { m, l, p } => {
                (p << (m + l + 2)) + (((Natural::one() << l) - 1u32) << (m + 1))
            }
        }
    }

    /// Letters of the fixed subsequence: `E O^(k+1)` for odd classes,
    /// `E O^l E^(m+1)` for even ones. Zero has no fixed name.
    pub fn name(&self) -> Option<SubseqName> {
        match self {
            ResidueClass::Zero => None,
            ResidueClass::Odd { k, .. } => {
                let mut letters = vec![Letter::E];
                letters.extend(std::iter::repeat_n(Letter::O, *k as usize + 1));
                Some(SubseqName::new(letters))
            }
            ResidueClass::Even { m, l, .. } => {
                let mut letters = vec![Letter::E];
                letters.extend(std::iter::repeat_n(Letter::O, *l as usize));
                letters.extend(std::iter::repeat_n(Letter::E, *m as usize + 1));
                Some(SubseqName::new(letters))
            }
        }
    }

    /// Inline-subscript rendering of the fixed name: `EO` and `EO2O` for odd
    /// classes, `EOE`, `EO3E`, `EOE1E` for even ones. Zero has none.
    pub fn render_name(&self) -> Option<String> {
        match self {
            ResidueClass::Zero => None,
            ResidueClass::Odd { k: 0, .. } => Some("EO".to_string()),
            ResidueClass::Odd { k, .. } => Some(format!("EO{k}O")),
            ResidueClass::Even { m, l, .. } => {
                let mut s = String::from("EO");
                if *l >= 2 {
                    s.push_str(&l.to_string());
                }
                if *m >= 1 {
                    s.push('E');
                    s.push_str(&m.to_string());
                }
                s.push('E');
                Some(s)
            }
        }
    }

    /// The fixed subsequence's arithmetic progression. Zero has none.
    pub fn form(&self) -> Option<LinearForm> {
        self.name().map(|n| n.to_form())
    }

    /// Coordinates as printed in trace descriptors: `(k=0, p=2)` or
    /// `(m=0, l=3, p=0)`.
    pub fn coords(&self) -> String {
        match self {
            ResidueClass::Zero => "(l=0, p=0, m=\u{221e})".to_string(),
            ResidueClass::Odd { k, p } => format!("(k={k}, p={p})"),
            ResidueClass::Even { m, l, p } => format!("(m={m}, l={l}, p={p})"),
        }
    }
}

/// Total order of the reordered integers: every even fixed subsequence comes
/// before zero, zero before every odd one. Among odd classes, smaller `k`
/// first; among even classes, larger `m` first, then larger `l` first. Ties
/// within a class are broken by position `p` ascending.
impl Ord for ResidueClass {
    fn cmp(&self, other: &Self) -> Ordering {
        fn group(c: &ResidueClass) -> u8 {
            match c {
                ResidueClass::Even { .. } => 0,
                ResidueClass::Zero => 1,
                ResidueClass::Odd { .. } => 2,
            }
        }
        group(self)
            .cmp(&group(other))
            .then_with(|| match (self, other) {
                (ResidueClass::Odd { k: ka, p: pa }, ResidueClass::Odd { k: kb, p: pb }) => {
                    ka.cmp(kb).then_with(|| pa.cmp(pb))
                }
                (
                    ResidueClass::Even {
                        m: ma,
                        l: la,
                        p: pa,
                    },
                    ResidueClass::Even {
                        m: mb,
                        l: lb,
                        p: pb,
                    },
                ) => mb.cmp(ma).then_with(|| lb.cmp(la)).then_with(|| pa.cmp(pb)),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for ResidueClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coordinates of `n` in the fixed-subsequence decomposition.
///
/// Odd branch: repeatedly subtract one and halve until the result is even or
/// zero (the stopping number); `k` is one less than the repetition count and
/// `p` is half the stopping number. Even branch: halve `m + 1` times down to
/// the odd part; an odd part of one means `n = 2^(m+1)` (so `l = 1, p = 0`),
/// otherwise the odd branch of the odd part gives `l` (its repetition count)
/// and `p`.
pub fn classify(n: &Natural) -> ResidueClass {
    if n.is_zero() {
        return ResidueClass::Zero;
    }
    if n.bit(0) {
        let (k, p) = odd_coords(n);
        ResidueClass::Odd { k, p }
    } else {
        let halvings = n.trailing_zeros().expect("nonzero");
        let odd_part = n >> halvings;
        let m = halvings - 1;
        if odd_part.is_one() {
            ResidueClass::Even {
                m,
                l: 1,
                p: Natural::zero(),
            }
        } else {
            let (k, p) = odd_coords(&odd_part);
            ResidueClass::Even { m, l: k + 1, p }
        }
    }
}

/// `(k, p)` for an odd `n >= 1`: the subtract-one-halve loop of the odd
/// branch. The stopping number may be zero (for the Mersenne numbers).
fn odd_coords(n: &Natural) -> (u64, Natural) {
    debug_assert!(n.bit(0));
    let mut x = (n - 1u32) >> 1u32;
    let mut repetitions = 1u64;
    while x.bit(0) {
        x = (x - 1u32) >> 1u32;
        repetitions += 1;
    }
    (repetitions - 1, x >> 1u32)
}

/// True when `a` and `b` lie in the same fixed subsequence, i.e. their classes
/// agree on everything but position.
pub fn equivalent(a: &Natural, b: &Natural) -> bool {
    match (classify(a), classify(b)) {
        (ResidueClass::Zero, ResidueClass::Zero) => true,
        (ResidueClass::Odd { k: ka, .. }, ResidueClass::Odd { k: kb, .. }) => ka == kb,
        (ResidueClass::Even { m: ma, l: la, .. }, ResidueClass::Even { m: mb, l: lb, .. }) => {
            ma == mb && la == lb
        }
        _ => false,
    }
}

/// See the [`Ord`] impl on [`ResidueClass`]; provided as a named operation so
/// call sites read like the reordering chain.
pub fn compare(a: &ResidueClass, b: &ResidueClass) -> Ordering {
    a.cmp(b)
}

/// Result of simulating the sieve on the prefix `0..=limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveOracle {
    /// Numbers that reached a fixed subsequence within the depth budget.
    pub resolved: BTreeMap<u64, SubseqName>,
    /// Numbers still in unfixed subsequences when the budget ran out
    /// (zero never resolves).
    pub unresolved: Vec<u64>,
}

/// Literal simulation of the sieve: split `0..=limit` by position parity,
/// recurse on unfixed children, record the terminal name of every number
/// whose subsequence becomes fixed within `depth` applications.
pub fn sieve_oracle(limit: u64, depth: u32) -> SieveOracle {
    fn go(members: Vec<u64>, name: SubseqName, budget: u32, out: &mut SieveOracle) {
        if members.is_empty() {
            return;
        }
        if name.is_fixed() {
            for n in members {
                out.resolved.insert(n, name.clone());
            }
            return;
        }
        if budget == 0 {
            out.unresolved.extend(members);
            return;
        }
        let (evens, odds): (Vec<u64>, Vec<u64>) = {
            let mut evens = Vec::with_capacity(members.len() / 2 + 1);
            let mut odds = Vec::with_capacity(members.len() / 2);
            for (pos, n) in members.into_iter().enumerate() {
                if pos % 2 == 0 {
                    evens.push(n);
                } else {
                    odds.push(n);
                }
            }
            (evens, odds)
        };
        go(evens, name.child(Letter::E), budget - 1, out);
        go(odds, name.child(Letter::O), budget - 1, out);
    }

    let mut out = SieveOracle {
        resolved: BTreeMap::new(),
        unresolved: Vec::new(),
    };
    go((0..=limit).collect(), SubseqName::root(), depth, &mut out);
    out.unresolved.sort_unstable();
    out
}

/// The appendix-style descriptor `NAME : formula : (coords) : n` with the
/// trailing value rendered in the given radix. Zero prints as the CLI's
/// special line since it has no fixed name.
pub fn descriptor(n: &Natural, radix: u32) -> String {
    let class = classify(n);
    match (class.render_name(), class.form()) {
        (Some(name), Some(form)) => {
            format!(
                "{} : {} : {} : {}",
                name,
                form,
                class.coords(),
                n.to_str_radix(radix)
            )
        }
        _ => "ZERO (EE\u{221e}E)".to_string(),
    }
}
