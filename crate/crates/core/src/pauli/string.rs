use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Widest register a `PauliString` can describe.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Power of `i`: the phase `i^k` with `k` in 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// `(re, im)` of the phase as small integers.
    pub fn as_pair(self) -> (i8, i8) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

/// Tensor product of single-qubit Paulis stored as x/z bitmasks.
///
/// The operator is `i^{|x & z|} X^x Z^z`, so a qubit with both bits set is a
/// plain `Y`. Qubit `k` lives in bit `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n: n as u8, x: 0, z: 0 }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        assert!(x & !mask(n) == 0 && z & !mask(n) == 0, "mask exceeds {n} qubits");
        Self { n: n as u8, x, z }
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        Self::identity(n).with(qubit, letter)
    }

    /// Product of the given letters on distinct qubits.
    pub fn from_sites(n: usize, sites: &[(usize, Letter)]) -> Self {
        sites.iter().fold(Self::identity(n), |p, &(k, l)| p.with(k, l))
    }

    pub fn with(mut self, qubit: usize, letter: Letter) -> Self {
        assert!(qubit < self.n(), "qubit {qubit} out of range");
        let (x, z) = letter.bits();
        let bit = 1u64 << qubit;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
        self
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Matrix element: `P|b> = phase(b) |b ^ x>`.
    pub fn apply_phase(&self, b: u64) -> Phase {
        let sign = ((b & self.z).count_ones() as i64) * 2;
        Phase::from_power(self.y_count() as i64 + sign)
    }

    /// Sort key: letters from qubit 0 down, I < X < Y < Z.
    fn sort_key(&self) -> u128 {
        let mut key = 0u128;
        for k in 0..self.n() {
            let code = match self.letter(k) {
                Letter::I => 0u128,
                Letter::X => 1,
                Letter::Y => 2,
                Letter::Z => 3,
            };
            key = (key << 2) | code;
        }
        key
    }

    pub fn word(&self) -> String {
        (0..self.n()).map(|k| self.letter(k).as_char()).collect()
    }

    pub fn parse(word: &str) -> Result<Self> {
        let n = word.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::Parameter(format!("word longer than {MAX_QUBITS} letters")));
        }
        let mut p = Self::identity(n);
        for (k, c) in word.chars().enumerate() {
            let l = Letter::from_char(c)
                .ok_or_else(|| Error::Parameter(format!("bad pauli letter {c:?}")))?;
            p = p.with(k, l);
        }
        Ok(p)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Product `a·b = phase · product`, with the phase tracked exactly.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<(Phase, PauliString)> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n(), found: b.n() });
    }
    Ok(mul_unchecked(a, b))
}

pub(crate) fn mul_unchecked(a: &PauliString, b: &PauliString) -> (Phase, PauliString) {
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    // Moving Z^{z_a} past X^{x_b} costs (-1)^{|z_a & x_b|}.
    let k = a.y_count() as i64 + b.y_count() as i64 - (x & z).count_ones() as i64
        + 2 * (a.z & b.x).count_ones() as i64;
    (Phase::from_power(k), PauliString { n: a.n, x, z })
}
