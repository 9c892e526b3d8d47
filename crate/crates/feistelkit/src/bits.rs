//! Fixed-width bit strings and the block/key/half-block value types.
//!
//! All types use FIPS bit numbering: bit 1 is the most significant bit of
//! byte 0, bits are counted left to right. Hex I/O is uppercase on output
//! and case-insensitive on input.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitParseError {
    #[error("expected {expected} {kind} digits, found {found}")]
    BadLength {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid {kind} digit {found:?}")]
    BadDigit { kind: &'static str, found: char },
    #[error("value does not fit in {width} bits")]
    Overflow { width: u8 },
}

/// A bit string of 1..=64 bits. Bit `i` (1-based, as in the permutation
/// tables) is the `i`-th bit counting from the most significant end.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    value: u64,
    width: u8,
}

impl BitString {
    pub fn new(value: u64, width: u8) -> Self {
        assert!((1..=64).contains(&width), "width out of range: {width}");
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1 << width) - 1
        };
        Self {
            value: value & mask,
            width,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> u8 {
        self.width
    }

    /// 1-based bit access from the most significant end.
    pub fn bit(self, i: u8) -> u64 {
        assert!(
            i >= 1 && i <= self.width,
            "bit index {i} out of 1..={}",
            self.width
        );
        (self.value >> (self.width - i)) & 1
    }

    pub fn xor(self, other: Self) -> Self {
        assert_eq!(self.width, other.width, "xor of unequal widths");
        Self::new(self.value ^ other.value, self.width)
    }

    /// Concatenates `self` (high bits) with `other` (low bits).
    pub fn concat(self, other: Self) -> Self {
        let width = self.width + other.width;
        assert!(width <= 64, "concatenation exceeds 64 bits");
        Self::new((self.value << other.width) | other.value, width)
    }

    pub fn to_binary(self) -> String {
        (1..=self.width)
            .map(|i| if self.bit(i) == 1 { '1' } else { '0' })
            .collect()
    }

    /// Binary rendering with a space every `group` bits, e.g. the
    /// eight 6-bit groups used for 48-bit round values.
    pub fn grouped_binary(self, group: usize) -> String {
        let s = self.to_binary();
        s.as_bytes()
            .chunks(group)
            .map(|c| std::str::from_utf8(c).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a binary string; the width is the string length.
    pub fn from_binary(s: &str) -> Result<Self, BitParseError> {
        if s.is_empty() || s.len() > 64 {
            return Err(BitParseError::BadLength {
                kind: "binary",
                expected: 64,
                found: s.len(),
            });
        }
        let mut value = 0u64;
        for ch in s.chars() {
            value = (value << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(BitParseError::BadDigit {
                            kind: "binary",
                            found: other,
                        })
                    }
                };
        }
        Ok(Self::new(value, s.len() as u8))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}, width={})", self.to_binary(), self.width)
    }
}

fn parse_hex_exact(s: &str, digits: usize) -> Result<u64, BitParseError> {
    if s.len() != digits {
        return Err(BitParseError::BadLength {
            kind: "hex",
            expected: digits,
            found: s.len(),
        });
    }
    let mut value = 0u64;
    for ch in s.chars() {
        let d = ch.to_digit(16).ok_or(BitParseError::BadDigit {
            kind: "hex",
            found: ch,
        })?;
        value = (value << 4) | u64::from(d);
    }
    Ok(value)
}

macro_rules! block_like {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub struct $name(u64);

        impl $name {
            pub const ZERO: Self = Self(0);

            pub fn new(value: u64) -> Self {
                Self(value)
            }

            pub fn value(self) -> u64 {
                self.0
            }

            pub fn from_bytes(bytes: [u8; 8]) -> Self {
                Self(u64::from_be_bytes(bytes))
            }

            pub fn to_bytes(self) -> [u8; 8] {
                self.0.to_be_bytes()
            }

            /// Exactly 16 hex digits, case-insensitive.
            pub fn from_hex(s: &str) -> Result<Self, BitParseError> {
                parse_hex_exact(s, 16).map(Self)
            }

            pub fn to_hex(self) -> String {
                format!("{:016X}", self.0)
            }

            pub fn bits(self) -> BitString {
                BitString::new(self.0, 64)
            }

            pub fn from_bits(bits: BitString) -> Self {
                assert_eq!(bits.width(), 64);
                Self(bits.value())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.to_hex())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.to_hex())
            }
        }

        impl FromStr for $name {
            type Err = BitParseError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::from_hex(s)
            }
        }

        impl std::ops::Not for $name {
            type Output = Self;

            fn not(self) -> Self {
                Self(!self.0)
            }
        }

        impl std::ops::BitXor for $name {
            type Output = Self;

            fn bitxor(self, rhs: Self) -> Self {
                Self(self.0 ^ rhs.0)
            }
        }
    };
}

block_like!(
    Block64,
    "One 64-bit cipher block. Bit 1 is the MSB of the first byte."
);
block_like!(
    Key64,
    "A 64-bit key. Bits 8, 16, ..., 64 are parity positions and carry no cryptographic weight."
);

impl Block64 {
    pub fn halves(self) -> (Half32, Half32) {
        (
            Half32::new((self.0 >> 32) as u32),
            Half32::new(self.0 as u32),
        )
    }

    pub fn from_halves(left: Half32, right: Half32) -> Self {
        Self((u64::from(left.value()) << 32) | u64::from(right.value()))
    }
}

impl Key64 {
    /// Advisory check that every key byte has odd parity (the DES key
    /// convention). Never enforced by the cipher itself.
    pub fn has_odd_parity(self) -> bool {
        self.to_bytes().iter().all(|b| b.count_ones() % 2 == 1)
    }

    /// Returns the key with each byte's low bit adjusted for odd parity.
    pub fn with_odd_parity(self) -> Self {
        let mut bytes = self.to_bytes();
        for b in &mut bytes {
            if b.count_ones() % 2 == 0 {
                *b ^= 1;
            }
        }
        Self::from_bytes(bytes)
    }
}

/// One 32-bit half block (L or R).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Half32(u32);

impl Half32 {
    pub const ZERO: Self = Self(0);

    pub fn new(value: u32) -> Self {
        Self(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn from_hex(s: &str) -> Result<Self, BitParseError> {
        parse_hex_exact(s, 8).map(|v| Self(v as u32))
    }

    pub fn to_hex(self) -> String {
        format!("{:08X}", self.0)
    }

    pub fn bits(self) -> BitString {
        BitString::new(u64::from(self.0), 32)
    }

    pub fn from_bits(bits: BitString) -> Self {
        assert_eq!(bits.width(), 32);
        Self(bits.value() as u32)
    }
}

impl fmt::Display for Half32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Half32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Half32({})", self.to_hex())
    }
}

impl std::ops::BitXor for Half32 {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

/// A 48-bit string (expanded half block, round key, key-mix output).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bits48(u64);

impl Bits48 {
    pub const ZERO: Self = Self(0);
    const MASK: u64 = (1 << 48) - 1;

    pub fn new(value: u64) -> Self {
        Self(value & Self::MASK)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn bits(self) -> BitString {
        BitString::new(self.0, 48)
    }

    pub fn from_bits(bits: BitString) -> Self {
        assert_eq!(bits.width(), 48);
        Self(bits.value())
    }
}

impl fmt::Display for Bits48 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits().to_binary())
    }
}

impl fmt::Debug for Bits48 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits48({})", self.bits().grouped_binary(6))
    }
}

impl std::ops::BitXor for Bits48 {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_indexing_is_one_based_from_msb() {
        let b = BitString::from_binary("10110").unwrap();
        assert_eq!(b.width(), 5);
        assert_eq!(b.bit(1), 1);
        assert_eq!(b.bit(2), 0);
        assert_eq!(b.bit(5), 0);
        assert_eq!(b.value(), 0b10110);
    }

    #[test]
    fn block_hex_round_trips() {
        let block = Block64::from_hex("0123456789abcdef").unwrap();
        assert_eq!(block.to_hex(), "0123456789ABCDEF");
        assert_eq!(Block64::from_hex(&block.to_hex()).unwrap(), block);
        // bit 1 of M = 0123...EF is 0, the last bit is 1
        assert_eq!(block.bits().bit(1), 0);
        assert_eq!(block.bits().bit(64), 1);
    }

    #[test]
    fn block_hex_rejects_bad_input() {
        assert!(matches!(
            Block64::from_hex("0123"),
            Err(BitParseError::BadLength { found: 4, .. })
        ));
        assert!(matches!(
            Block64::from_hex("0123456789ABCDEG"),
            Err(BitParseError::BadDigit { found: 'G', .. })
        ));
    }

    #[test]
    fn block_bytes_msb_first() {
        let block = Block64::from_bytes([0x01, 0x23, 0x45, 0x67, 0x89, 0xAB, 0xCD, 0xEF]);
        assert_eq!(block.to_hex(), "0123456789ABCDEF");
    }

    #[test]
    fn halves_split_and_rejoin() {
        let block = Block64::from_hex("CC00CCFFF0AAF0AA").unwrap();
        let (l, r) = block.halves();
        assert_eq!(l.to_hex(), "CC00CCFF");
        assert_eq!(r.to_hex(), "F0AAF0AA");
        assert_eq!(Block64::from_halves(l, r), block);
    }

    #[test]
    fn grouped_binary_formats() {
        let b = BitString::new(0b011110_100001, 12);
        assert_eq!(b.grouped_binary(6), "011110 100001");
        assert_eq!(b.grouped_binary(4), "0111 1010 0001");
    }

    #[test]
    fn key_parity() {
        // the worked-example key has odd parity in every byte
        let key = Key64::from_hex("133457799BBCDFF1").unwrap();
        assert!(key.has_odd_parity());
        let bad = Key64::from_hex("0000000000000000").unwrap();
        assert!(!bad.has_odd_parity());
        assert_eq!(bad.with_odd_parity().to_hex(), "0101010101010101");
        assert!(key.with_odd_parity() == key);
    }
}
