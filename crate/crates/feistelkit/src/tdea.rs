//! Triple-DES (TDEA) in the EDE composition, with the three standard
//! keying options. One-key TDEA collapses to single DES, which keeps
//! backward compatibility with plain-DES peers.

use crate::bits::{Block64, Key64};
use crate::des::{decrypt_block, encrypt_block, key_schedule, KeySchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyingOption {
    /// Three independent keys.
    ThreeKey,
    /// k3 = k1.
    TwoKey,
    /// k1 = k2 = k3; equivalent to single DES.
    OneKey,
}

/// The three DES schedules of a TDEA key bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleKeySchedule {
    ks1: KeySchedule,
    ks2: KeySchedule,
    ks3: KeySchedule,
    keying_option: KeyingOption,
}

impl TripleKeySchedule {
    /// Builds a schedule from three keys; the keying option is derived
    /// from which keys coincide, so it always matches the sources.
    pub fn from_keys(k1: Key64, k2: Key64, k3: Key64) -> Self {
        let keying_option = if k1 == k2 && k2 == k3 {
            KeyingOption::OneKey
        } else if k1 == k3 {
            KeyingOption::TwoKey
        } else {
            KeyingOption::ThreeKey
        };
        Self {
            ks1: key_schedule(k1),
            ks2: key_schedule(k2),
            ks3: key_schedule(k3),
            keying_option,
        }
    }

    pub fn one_key(k: Key64) -> Self {
        Self::from_keys(k, k, k)
    }

    pub fn two_key(k1: Key64, k2: Key64) -> Self {
        Self::from_keys(k1, k2, k1)
    }

    pub fn keying_option(&self) -> KeyingOption {
        self.keying_option
    }
}

/// EDE encryption: E_k3(D_k2(E_k1(x))).
pub fn ede_encrypt(block: Block64, tks: &TripleKeySchedule) -> Block64 {
    encrypt_block(
        decrypt_block(encrypt_block(block, &tks.ks1), &tks.ks2),
        &tks.ks3,
    )
}

/// EDE decryption: D_k1(E_k2(D_k3(x))), the exact inverse of
/// [`ede_encrypt`].
pub fn ede_decrypt(block: Block64, tks: &TripleKeySchedule) -> Block64 {
    decrypt_block(
        encrypt_block(decrypt_block(block, &tks.ks3), &tks.ks2),
        &tks.ks1,
    )
}
