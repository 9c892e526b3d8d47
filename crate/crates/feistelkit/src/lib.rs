//! A symmetric block-cipher toolkit: DES, Triple-DES (EDE) and
//! Simplified DES, the five NIST modes of operation, a per-round trace
//! emitter, and a known-answer-test harness.
//!
//! The DES tables are the canonical FIPS 46-3 set, kept as data
//! ([`tables`]) so their structural invariants can be verified at
//! startup or in tests. All cipher state ([`des::KeySchedule`],
//! [`tdea::TripleKeySchedule`]) is immutable after construction and the
//! block operations are pure, so everything can be shared across
//! threads.
//!
//! Not hardened against side channels: table lookups are data-dependent
//! and may leak timing. This is a study and interoperability tool, not
//! a place to keep secrets.

pub mod bits;
pub mod des;
pub mod kat;
pub mod modes;
pub mod sdes;
pub mod tables;
pub mod tdea;
pub mod trace;

pub use bits::{BitString, Bits48, Block64, Half32, Key64};
pub use des::{
    decrypt_block, encrypt_block, key_schedule, weak_key_class, KeySchedule, WeakKeyClass,
};
pub use modes::{decrypt_message, encrypt_message, Mode, ModeConfig, Padding};
pub use tdea::{ede_decrypt, ede_encrypt, KeyingOption, TripleKeySchedule};

/// A 64-bit block primitive the modes of operation can drive. The
/// stream modes only ever call the encrypt direction.
pub trait BlockCipher {
    fn encrypt_block(&self, block: Block64) -> Block64;
    fn decrypt_block(&self, block: Block64) -> Block64;
}

impl BlockCipher for KeySchedule {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        des::encrypt_block(block, self)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        des::decrypt_block(block, self)
    }
}

impl BlockCipher for TripleKeySchedule {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        tdea::ede_encrypt(block, self)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        tdea::ede_decrypt(block, self)
    }
}
