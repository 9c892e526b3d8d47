//! The DES block primitive: initial/final permutations, the round
//! function (expansion, key mixing, S-box layer, straight permutation),
//! the 16-round Feistel iteration, and the key schedule.
//!
//! Everything here is a pure function of immutable inputs; a
//! [`KeySchedule`] can be shared freely across threads.
//!
//! This implementation is table-driven and is **not** constant-time;
//! lookups may leak timing. Do not use it where side channels matter.

use thiserror::Error;

use crate::bits::{BitString, Bits48, Block64, Half32, Key64};
use crate::tables::{self, permute};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("round counter is already 16; no further rounds exist")]
pub struct RoundOverflow;

/// Applies the initial permutation IP.
pub fn initial_permutation(block: Block64) -> Block64 {
    Block64::from_bits(permute(block.bits(), &tables::IP).expect("IP takes 64 bits"))
}

/// Applies the final permutation, the exact inverse of IP.
pub fn final_permutation(block: Block64) -> Block64 {
    Block64::from_bits(permute(block.bits(), &tables::FP).expect("FP takes 64 bits"))
}

/// Expands a 32-bit half to 48 bits, duplicating 16 of its bits.
pub fn expand(half: Half32) -> Bits48 {
    Bits48::from_bits(permute(half.bits(), &tables::E).expect("E takes 32 bits"))
}

/// XORs the expanded half block with the round subkey.
pub fn key_mix(expanded: Bits48, subkey: Subkey48) -> Bits48 {
    expanded ^ subkey.bits()
}

/// Runs the eight S-boxes over a 48-bit value. Chunk i (bits b1..b6)
/// addresses S-box i at row 2*b1 + b6, column b2 b3 b4 b5; the 4-bit
/// outputs concatenate in order.
pub fn sbox_layer(mixed: Bits48) -> Half32 {
    let v = mixed.value();
    let mut out = 0u32;
    for (i, sbox) in tables::SBOXES.iter().enumerate() {
        let chunk = ((v >> (42 - 6 * i)) & 0x3F) as u8;
        out = (out << 4) | u32::from(sbox.lookup(chunk));
    }
    Half32::new(out)
}

/// The DES round function f(R, K) = P(S(E(R) ^ K)).
pub fn feistel_f(r: Half32, k: Subkey48) -> Half32 {
    let substituted = sbox_layer(key_mix(expand(r), k));
    Half32::from_bits(permute(substituted.bits(), &tables::P).expect("P takes 32 bits"))
}

/// The (L, R) halves between rounds. Round 0 is the IP output split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundState {
    pub l: Half32,
    pub r: Half32,
    pub round: u8,
}

impl RoundState {
    pub fn initial(block: Block64) -> Self {
        let (l, r) = initial_permutation(block).halves();
        Self { l, r, round: 0 }
    }
}

/// One Feistel round: L' = R, R' = L ^ f(R, K).
pub fn round_step(state: RoundState, k: Subkey48) -> Result<RoundState, RoundOverflow> {
    if state.round >= 16 {
        return Err(RoundOverflow);
    }
    let (l, r) = advance(state.l, state.r, k);
    Ok(RoundState {
        l,
        r,
        round: state.round + 1,
    })
}

#[inline]
fn advance(l: Half32, r: Half32, k: Subkey48) -> (Half32, Half32) {
    (r, l ^ feistel_f(r, k))
}

/// One 48-bit round key together with its round number (1..=16).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subkey48 {
    bits: Bits48,
    round: u8,
}

impl Subkey48 {
    pub fn bits(self) -> Bits48 {
        self.bits
    }

    pub fn round(self) -> u8 {
        self.round
    }
}

/// The C and D key-schedule registers after `round_index` rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CdPair {
    c: u32,
    d: u32,
    round_index: u8,
}

impl CdPair {
    pub fn c(self) -> BitString {
        BitString::new(u64::from(self.c), 28)
    }

    pub fn d(self) -> BitString {
        BitString::new(u64::from(self.d), 28)
    }

    pub fn round_index(self) -> u8 {
        self.round_index
    }
}

fn rotl28(x: u32, n: u8) -> u32 {
    debug_assert!(n < 28);
    ((x << n) | (x >> (28 - n))) & 0x0FFF_FFFF
}

/// The sixteen round keys plus the full C/D register history.
///
/// Immutable once built; encrypt/decrypt may share one schedule across
/// any number of threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySchedule {
    subkeys: [Subkey48; 16],
    cd_history: [CdPair; 17],
}

impl KeySchedule {
    pub fn new(key: Key64) -> Self {
        key_schedule(key)
    }

    pub fn subkeys(&self) -> &[Subkey48; 16] {
        &self.subkeys
    }

    pub fn cd_history(&self) -> &[CdPair; 17] {
        &self.cd_history
    }

    pub(crate) fn from_parts(subkeys: [Subkey48; 16], cd_history: [CdPair; 17]) -> Self {
        Self {
            subkeys,
            cd_history,
        }
    }

    pub(crate) fn subkey_from_raw(bits: Bits48, round: u8) -> Subkey48 {
        Subkey48 { bits, round }
    }

    pub(crate) fn cd_from_raw(c: u32, d: u32, round_index: u8) -> CdPair {
        CdPair { c, d, round_index }
    }
}

/// Derives K1..K16: PC-1 splits the key into C0/D0, each round rotates
/// both registers left and compresses C‖D through PC-2. Parity bits are
/// dropped by PC-1 and never checked here.
pub fn key_schedule(key: Key64) -> KeySchedule {
    let permuted = permute(key.bits(), &tables::PC1).expect("PC-1 takes 64 bits");
    let mut c = (permuted.value() >> 28) as u32;
    let mut d = (permuted.value() & 0x0FFF_FFFF) as u32;

    let mut cd_history = [CdPair::default(); 17];
    cd_history[0] = CdPair {
        c,
        d,
        round_index: 0,
    };
    let mut subkeys = [Subkey48 {
        bits: Bits48::ZERO,
        round: 0,
    }; 16];

    for (i, &shift) in tables::ROUND_SHIFTS.iter().enumerate() {
        c = rotl28(c, shift);
        d = rotl28(d, shift);
        let round = (i + 1) as u8;
        cd_history[i + 1] = CdPair {
            c,
            d,
            round_index: round,
        };
        let cd = BitString::new((u64::from(c) << 28) | u64::from(d), 56);
        let bits = Bits48::from_bits(permute(cd, &tables::PC2).expect("PC-2 takes 56 bits"));
        subkeys[i] = Subkey48 { bits, round };
    }

    KeySchedule {
        subkeys,
        cd_history,
    }
}

fn crypt_block(block: Block64, subkeys: impl Iterator<Item = Subkey48>) -> Block64 {
    let (mut l, mut r) = initial_permutation(block).halves();
    for k in subkeys {
        let next = advance(l, r, k);
        l = next.0;
        r = next.1;
    }
    // the final swap: the preoutput is R16 || L16
    final_permutation(Block64::from_halves(r, l))
}

/// Encrypts one block: IP, sixteen rounds with K1..K16, swap, FP.
pub fn encrypt_block(block: Block64, ks: &KeySchedule) -> Block64 {
    crypt_block(block, ks.subkeys.iter().copied())
}

/// Decrypts one block: the same datapath with subkeys K16..K1.
pub fn decrypt_block(block: Block64, ks: &KeySchedule) -> Block64 {
    crypt_block(block, ks.subkeys.iter().rev().copied())
}

/// Advisory classification of the degenerate DES keys. Never blocks
/// encryption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakKeyClass {
    /// Not one of the 16 degenerate keys.
    None,
    /// One of the 4 weak keys: all 16 subkeys are identical, so
    /// encryption is its own inverse.
    Weak,
    /// One of the 12 semi-weak keys: the schedule collapses to two
    /// alternating subkeys.
    SemiWeak,
}

#[derive(PartialEq)]
enum RegisterPattern {
    Constant,
    Alternating,
    Other,
}

fn register_pattern(x: u32) -> RegisterPattern {
    if rotl28(x, 1) == x {
        RegisterPattern::Constant
    } else if rotl28(x, 2) == x {
        RegisterPattern::Alternating
    } else {
        RegisterPattern::Other
    }
}

/// Flags the 4 weak and 12 semi-weak DES keys by the rotation symmetry
/// of the C0/D0 registers (parity bits are irrelevant, so every
/// parity-variant of a degenerate key is flagged too).
pub fn weak_key_class(key: Key64) -> WeakKeyClass {
    let ks = key_schedule(key);
    let cd0 = ks.cd_history[0];
    use RegisterPattern::*;
    match (
        register_pattern(cd0.c().value() as u32),
        register_pattern(cd0.d().value() as u32),
    ) {
        (Constant, Constant) => WeakKeyClass::Weak,
        (Other, _) | (_, Other) => WeakKeyClass::None,
        _ => WeakKeyClass::SemiWeak,
    }
}
