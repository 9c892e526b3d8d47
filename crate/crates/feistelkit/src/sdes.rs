//! Simplified DES: 8-bit blocks, a 10-bit key, two rounds. Small enough
//! to sweep the whole plaintext and key space, which is what the
//! brute-force demonstration does.
//!
//! Keys and blocks parse from exact-width binary strings ("1010000010")
//! or from hex; output helpers mirror both formats.

use crate::bits::{BitParseError, BitString};
use crate::tables::{self, permute};

/// A 10-bit SDES key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SdesKey10(u16);

impl SdesKey10 {
    pub const MAX: u16 = 0x3FF;

    pub fn new(value: u16) -> Self {
        assert!(value <= Self::MAX, "SDES key must fit in 10 bits");
        Self(value)
    }

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn bits(self) -> BitString {
        BitString::new(u64::from(self.0), 10)
    }

    pub fn from_binary(s: &str) -> Result<Self, BitParseError> {
        parse_exact_binary(s, 10).map(|v| Self(v as u16))
    }

    pub fn from_hex(s: &str) -> Result<Self, BitParseError> {
        parse_bounded_hex(s, 3, u64::from(Self::MAX), 10).map(|v| Self(v as u16))
    }

    pub fn to_binary(self) -> String {
        self.bits().to_binary()
    }

    pub fn to_hex(self) -> String {
        format!("{:03X}", self.0)
    }

    /// All 1024 keys in ascending order.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..=Self::MAX).map(Self)
    }
}

/// An 8-bit SDES block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdesBlock8(u8);

impl SdesBlock8 {
    pub fn new(value: u8) -> Self {
        Self(value)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn bits(self) -> BitString {
        BitString::new(u64::from(self.0), 8)
    }

    pub fn from_binary(s: &str) -> Result<Self, BitParseError> {
        parse_exact_binary(s, 8).map(|v| Self(v as u8))
    }

    pub fn from_hex(s: &str) -> Result<Self, BitParseError> {
        parse_bounded_hex(s, 2, 0xFF, 8).map(|v| Self(v as u8))
    }

    pub fn to_binary(self) -> String {
        self.bits().to_binary()
    }

    pub fn to_hex(self) -> String {
        format!("{:02X}", self.0)
    }
}

fn parse_exact_binary(s: &str, width: usize) -> Result<u64, BitParseError> {
    if s.len() != width {
        return Err(BitParseError::BadLength {
            kind: "binary",
            expected: width,
            found: s.len(),
        });
    }
    Ok(BitString::from_binary(s)?.value())
}

fn parse_bounded_hex(
    s: &str,
    max_digits: usize,
    max: u64,
    width: u8,
) -> Result<u64, BitParseError> {
    if s.is_empty() || s.len() > max_digits {
        return Err(BitParseError::BadLength {
            kind: "hex",
            expected: max_digits,
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
    if value > max {
        return Err(BitParseError::Overflow { width });
    }
    Ok(value)
}

/// The two 8-bit round keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SdesSubkeys {
    pub k1: u8,
    pub k2: u8,
}

/// K1 = P8(LS1(P10(key))), K2 = P8(LS3(P10(key))); the shifts act on
/// the two 5-bit halves independently.
pub fn key_schedule(key: SdesKey10) -> SdesSubkeys {
    let p10 = permute(key.bits(), &tables::SDES_P10).expect("P10 takes 10 bits");
    let mut c = ((p10.value() >> 5) & 0x1F) as u8;
    let mut d = (p10.value() & 0x1F) as u8;
    let mut subkeys = [0u8; 2];
    for (i, &shift) in tables::SDES_SHIFTS.iter().enumerate() {
        c = rotl5(c, shift);
        d = rotl5(d, shift);
        let cd = BitString::new((u64::from(c) << 5) | u64::from(d), 10);
        subkeys[i] = permute(cd, &tables::SDES_P8)
            .expect("P8 takes 10 bits")
            .value() as u8;
    }
    SdesSubkeys {
        k1: subkeys[0],
        k2: subkeys[1],
    }
}

fn rotl5(x: u8, n: u8) -> u8 {
    ((x << n) | (x >> (5 - n))) & 0x1F
}

/// Round function on a 4-bit half: expand to 8, XOR the subkey, run
/// S0/S1 (row = b1 b4, column = b2 b3), then P4.
fn round_f(r: u8, subkey: u8) -> u8 {
    let expanded = permute(BitString::new(u64::from(r), 4), &tables::SDES_EP)
        .expect("E/P takes 4 bits")
        .value() as u8;
    let mixed = expanded ^ subkey;
    let lookup = |sbox: &[[u8; 4]; 4], four: u8| {
        let row = (((four >> 2) & 0b10) | (four & 1)) as usize;
        let col = ((four >> 1) & 0b11) as usize;
        sbox[row][col]
    };
    let s0 = lookup(&tables::SDES_SBOXES[0], (mixed >> 4) & 0xF);
    let s1 = lookup(&tables::SDES_SBOXES[1], mixed & 0xF);
    permute(
        BitString::new(u64::from((s0 << 2) | s1), 4),
        &tables::SDES_P4,
    )
    .expect("P4 takes 4 bits")
    .value() as u8
}

fn feistel(block: u8, subkey: u8) -> u8 {
    let (l, r) = (block >> 4, block & 0xF);
    ((l ^ round_f(r, subkey)) << 4) | r
}

fn swap_halves(block: u8) -> u8 {
    block.rotate_right(4)
}

fn crypt(block: SdesBlock8, first: u8, second: u8) -> SdesBlock8 {
    let ip = permute(block.bits(), &tables::SDES_IP)
        .expect("IP8 takes 8 bits")
        .value() as u8;
    let x = feistel(swap_halves(feistel(ip, first)), second);
    let out = permute(BitString::new(u64::from(x), 8), &tables::SDES_IP_INV)
        .expect("IP8^-1 takes 8 bits")
        .value() as u8;
    SdesBlock8(out)
}

/// IP8, round with K1, swap, round with K2, inverse IP8.
pub fn encrypt(block: SdesBlock8, key: SdesKey10) -> SdesBlock8 {
    let sk = key_schedule(key);
    crypt(block, sk.k1, sk.k2)
}

/// The same structure with the subkeys in reverse order.
pub fn decrypt(block: SdesBlock8, key: SdesKey10) -> SdesBlock8 {
    let sk = key_schedule(key);
    crypt(block, sk.k2, sk.k1)
}

/// Sweeps all 1024 keys and returns, in ascending order, every key that
/// encrypts each given plaintext to its paired ciphertext. With no
/// pairs every key is vacuously consistent.
pub fn brute_force(pairs: &[(SdesBlock8, SdesBlock8)]) -> Vec<SdesKey10> {
    SdesKey10::all()
        .filter(|&key| pairs.iter().all(|&(pt, ct)| encrypt(pt, key) == ct))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_schedule_zero_key() {
        let sk = key_schedule(SdesKey10::new(0));
        assert_eq!((sk.k1, sk.k2), (0, 0));
    }

    #[test]
    fn key_schedule_pinned_vector() {
        // hand-executed through the adopted tables before the build
        let sk = key_schedule(SdesKey10::from_binary("1010000010").unwrap());
        assert_eq!(format!("{:08b}", sk.k1), "10100100");
        assert_eq!(format!("{:08b}", sk.k2), "01000011");
    }

    #[test]
    fn subkey_pairs_are_distinct_for_all_keys() {
        // exhaustive census, pinned from the enumeration oracle: the
        // adopted table set yields 1024 distinct (k1, k2) pairs
        let mut seen = std::collections::HashSet::new();
        for key in SdesKey10::all() {
            let sk = key_schedule(key);
            seen.insert((sk.k1, sk.k2));
        }
        assert_eq!(seen.len(), 1024);
    }

    #[test]
    fn encrypt_pinned_triples() {
        // hand-computed through the adopted tables before the build
        let key = SdesKey10::from_binary("1010000010").unwrap();
        let pt = SdesBlock8::from_binary("10111101").unwrap();
        let ct = encrypt(pt, key);
        assert_eq!(ct.to_binary(), "01110101");
        assert_eq!(decrypt(ct, key), pt);

        let key2 = SdesKey10::from_binary("1110001110").unwrap();
        let pt2 = SdesBlock8::from_binary("01010101").unwrap();
        assert_eq!(encrypt(pt2, key2).to_binary(), "01110000");
    }

    #[test]
    fn exhaustive_involution() {
        for key in SdesKey10::all() {
            for pt in 0..=u8::MAX {
                let block = SdesBlock8::new(pt);
                assert_eq!(decrypt(encrypt(block, key), key), block);
            }
        }
    }

    #[test]
    fn wrong_key_decryption_differs_somewhere() {
        // decryption tables of all 1024 keys are pairwise distinct, so
        // any wrong key mismatches on at least one of the 256 blocks
        let mut tables = std::collections::HashSet::new();
        for key in SdesKey10::all() {
            let mut table = [0u8; 256];
            for pt in 0..=u8::MAX {
                table[pt as usize] = decrypt(SdesBlock8::new(pt), key).value();
            }
            assert!(tables.insert(table), "duplicate decryption table");
        }
    }

    #[test]
    fn brute_force_finds_the_key() {
        let key = SdesKey10::from_binary("1010000010").unwrap();
        let pt = SdesBlock8::from_binary("10111101").unwrap();
        let pairs = [(pt, encrypt(pt, key))];
        let found = brute_force(&pairs);
        assert!(found.contains(&key));
        // candidate count for this single pair, pinned by the
        // enumeration oracle
        assert_eq!(found.len(), 4);
        assert!(found.windows(2).all(|w| w[0] < w[1]), "ascending order");
    }

    #[test]
    fn four_pairs_identify_the_subkey_class() {
        let key = SdesKey10::new(0b1010000010);
        let plaintexts = [165u8, 77, 202, 24];
        let pairs: Vec<_> = plaintexts
            .iter()
            .map(|&p| (SdesBlock8::new(p), encrypt(SdesBlock8::new(p), key)))
            .collect();
        let found = brute_force(&pairs);
        // exhaustive oracle: the consistent keys are exactly those
        // sharing the true key's subkey pair
        let target = key_schedule(key);
        let sharing: Vec<_> = SdesKey10::all()
            .filter(|&k| key_schedule(k) == target)
            .collect();
        assert_eq!(found, sharing);
        assert_eq!(found, vec![key]);
    }

    #[test]
    fn brute_force_is_sound_and_complete() {
        let key = SdesKey10::new(0x155);
        let pairs: Vec<_> = (0..6u8)
            .map(|i| {
                let pt = SdesBlock8::new(i.wrapping_mul(47).wrapping_add(3));
                (pt, encrypt(pt, key))
            })
            .collect();
        let found = brute_force(&pairs);
        // completeness: every key outside the returned set is
        // inconsistent with at least one pair
        for k in SdesKey10::all() {
            let consistent = pairs.iter().all(|&(pt, ct)| encrypt(pt, k) == ct);
            assert_eq!(consistent, found.contains(&k));
        }
    }

    #[test]
    fn empty_pairs_mean_every_key() {
        assert_eq!(brute_force(&[]).len(), 1024);
    }

    #[test]
    fn parsing_both_formats() {
        assert_eq!(
            SdesKey10::from_binary("1010000010").unwrap().value(),
            0b1010000010
        );
        assert_eq!(SdesKey10::from_hex("282").unwrap().value(), 0x282);
        assert_eq!(
            SdesKey10::from_hex("282").unwrap().to_binary(),
            "1010000010"
        );
        assert!(SdesKey10::from_hex("FFF").is_err(), "over 10 bits");
        assert!(SdesKey10::from_binary("101").is_err(), "wrong width");
        assert_eq!(SdesBlock8::from_hex("BD").unwrap().to_binary(), "10111101");
        assert_eq!(SdesBlock8::from_binary("10111101").unwrap().to_hex(), "BD");
    }
}
