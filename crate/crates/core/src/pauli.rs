//! Phase-free Pauli algebra over the symplectic GF(2) representation.
//!
//! A [`PauliString`] packs its X and Z components into one machine word each,
//! which caps the qubit count at 64. That covers every code and ancilla block
//! this crate deals with.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An n-qubit Pauli operator with its overall phase dropped.
///
/// Bit `q` of `x` (resp. `z`) is the X (resp. Z) component on qubit `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n, x: 0, z: 0 }
    }

    /// Builds from raw component words; bits at or above `n` are discarded.
    pub fn from_words(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString {
            n,
            x: x & mask(n),
            z: z & mask(n),
        }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut out = Self::identity(n);
        out.set(qubit, p);
        out
    }

    /// Same letter on every qubit of `support`.
    pub fn uniform(n: usize, support: &[usize], p: Pauli) -> Self {
        let mut out = Self::identity(n);
        for &q in support {
            out.set(q, p);
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        assert!(qubit < self.n, "qubit {qubit} out of range for {} qubits", self.n);
        Pauli::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, p: Pauli) {
        assert!(qubit < self.n, "qubit {qubit} out of range for {} qubits", self.n);
        let (x, z) = p.bits();
        let bit = 1u64 << qubit;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let occupied = self.x | self.z;
        (0..self.n).filter(move |q| (occupied >> q) & 1 == 1)
    }

    fn check_dim(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Product up to phase: component-wise XOR.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dim(other)?;
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// True iff the symplectic inner product vanishes.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.anticommutes_unchecked(other) == 0)
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> u32 {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1
    }

    /// Keeps only the first `n` qubits.
    pub fn truncate(&self, n: usize) -> PauliString {
        PauliString::from_words(n.min(self.n), self.x, self.z)
    }

    /// Embeds into a larger register, leaving the extra qubits as identity.
    pub fn extend(&self, n: usize) -> PauliString {
        assert!(n >= self.n);
        PauliString::from_words(n, self.x, self.z)
    }

    /// Picks out the listed qubits, in order, as a new operator.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out
    }

    /// Ordering used for deterministic tie-breaking: weight first, then the
    /// rendered string.
    pub fn canonical_cmp(&self, other: &PauliString) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::ParsePauli(s.to_string()));
        }
        let mut out = PauliString::identity(n);
        for (q, c) in s.chars().enumerate() {
            let p = Pauli::from_char(c).ok_or_else(|| Error::ParsePauli(s.to_string()))?;
            out.set(q, p);
        }
        Ok(out)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fixed-width bit-vector of at most 64 bits. Bit 0 is the first bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Bits {
    len: u8,
    value: u64,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= 64, "bit-vectors are limited to 64 bits");
        Bits {
            len: len as u8,
            value: 0,
        }
    }

    pub fn from_value(len: usize, value: u64) -> Self {
        assert!(len <= 64, "bit-vectors are limited to 64 bits");
        Bits {
            len: len as u8,
            value: value & mask(len),
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Bits::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit {i} out of range");
        (self.value >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len(), "bit {i} out of range");
        if b {
            self.value |= 1 << i;
        } else {
            self.value &= !(1 << i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "bit-vector length mismatch");
        Bits {
            len: self.len,
            value: self.value ^ other.value,
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Bits) -> Bits {
        let len = self.len() + other.len();
        assert!(len <= 64, "bit-vectors are limited to 64 bits");
        Bits {
            len: len as u8,
            value: self.value | (other.value << self.len()),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    /// Lower-case hex of the packed value, bit 0 in the least significant
    /// position, zero-padded to `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4).max(1);
        format!("{:0width$x}", self.value, width = digits)
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Bits> {
        if len > 64 {
            return Err(Error::UnsupportedSize(format!("{len}-bit key")));
        }
        let value = u64::from_str_radix(s, 16).map_err(|_| Error::ParsePauli(s.to_string()))?;
        if value & !mask(len) != 0 {
            return Err(Error::ParsePauli(format!("{s} exceeds {len} bits")));
        }
        Ok(Bits::from_value(len, value))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = Error;

    /// Parses the `Display` form: one `0`/`1` character per bit, bit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        if s.len() > 64 {
            return Err(Error::UnsupportedSize(format!("{}-bit string", s.len())));
        }
        let mut out = Bits::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => return Err(Error::ParsePauli(s.to_string())),
            }
        }
        Ok(out)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

/// Outcome of classifying a residual data error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LogicalClass {
    Identity,
    Logical,
    Detectable,
}

fn check_code_dim(p: &PauliString, code: &StabilizerCode) -> Result<()> {
    if p.num_qubits() != code.n() {
        return Err(Error::Dimension {
            expected: code.n(),
            found: p.num_qubits(),
        });
    }
    Ok(())
}

/// Bit `i` is set iff `error` anticommutes with generator `i`.
pub fn syndrome_of(error: &PauliString, code: &StabilizerCode) -> Result<Bits> {
    check_code_dim(error, code)?;
    Ok(syndrome_unchecked(error, code))
}

pub(crate) fn syndrome_unchecked(error: &PauliString, code: &StabilizerCode) -> Bits {
    let mut value = 0u64;
    for (i, g) in code.generators().iter().enumerate() {
        value |= (error.anticommutes_unchecked(g) as u64) << i;
    }
    Bits::from_value(code.generators().len(), value)
}

/// Membership in the stabilizer group via the commutation criterion; relies
/// on the code carrying a complete set of logical representatives.
pub fn in_stabilizer_group(p: &PauliString, code: &StabilizerCode) -> Result<bool> {
    check_code_dim(p, code)?;
    Ok(in_group_unchecked(p, code))
}

pub(crate) fn in_group_unchecked(p: &PauliString, code: &StabilizerCode) -> bool {
    code.generators()
        .iter()
        .chain(code.logical_x())
        .chain(code.logical_z())
        .all(|g| p.anticommutes_unchecked(g) == 0)
}

pub fn logical_class(residual: &PauliString, code: &StabilizerCode) -> Result<LogicalClass> {
    check_code_dim(residual, code)?;
    Ok(classify_unchecked(residual, code))
}

pub(crate) fn classify_unchecked(residual: &PauliString, code: &StabilizerCode) -> LogicalClass {
    if !syndrome_unchecked(residual, code).is_zero() {
        LogicalClass::Detectable
    } else if in_group_unchecked(residual, code) {
        LogicalClass::Identity
    } else {
        LogicalClass::Logical
    }
}
