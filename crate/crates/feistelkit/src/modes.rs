//! The five NIST modes of operation over any 64-bit block primitive,
//! plus bit padding (append a 1 bit, then 0 bits to the block boundary).
//!
//! ECB and CBC are block modes and pad by default; CFB (64-bit
//! feedback), OFB and CTR are stream modes that truncate the final
//! keystream block and never pad. The IV is caller-supplied.
//!
//! Distinct messages under one key schedule may be processed in
//! parallel; the feedback state within a single message is sequential.

use thiserror::Error;

use crate::bits::Block64;
use crate::BlockCipher;

pub const BLOCK_BYTES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModeError {
    #[error("{mode} requires an IV")]
    MissingIv { mode: &'static str },
    #[error("ECB does not take an IV")]
    UnexpectedIv,
    #[error("message length {len} is not a multiple of {BLOCK_BYTES} bytes")]
    Misaligned { len: usize },
    #[error("malformed padding: no 0x80 marker before a non-zero byte")]
    MalformedPadding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ecb,
    Cbc,
    Cfb,
    Ofb,
    Ctr,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ecb => "ECB",
            Mode::Cbc => "CBC",
            Mode::Cfb => "CFB",
            Mode::Ofb => "OFB",
            Mode::Ctr => "CTR",
        }
    }

    pub fn needs_iv(self) -> bool {
        !matches!(self, Mode::Ecb)
    }

    /// Stream modes truncate the keystream to the message tail and
    /// never pad.
    pub fn is_stream(self) -> bool {
        matches!(self, Mode::Cfb | Mode::Ofb | Mode::Ctr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Padding {
    /// Append 0x80 then zero bytes to the next block boundary.
    Bit,
    /// No padding; ECB/CBC then require block-aligned messages.
    None,
}

/// A validated mode configuration: the IV is present exactly when the
/// mode requires one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeConfig {
    mode: Mode,
    iv: Option<Block64>,
    padding: Padding,
}

impl ModeConfig {
    pub fn new(mode: Mode, iv: Option<Block64>, padding: Padding) -> Result<Self, ModeError> {
        match (mode.needs_iv(), iv) {
            (true, None) => Err(ModeError::MissingIv { mode: mode.name() }),
            (false, Some(_)) => Err(ModeError::UnexpectedIv),
            _ => Ok(Self { mode, iv, padding }),
        }
    }

    pub fn ecb(padding: Padding) -> Self {
        Self {
            mode: Mode::Ecb,
            iv: None,
            padding,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn iv(&self) -> Option<Block64> {
        self.iv
    }

    pub fn padding(&self) -> Padding {
        self.padding
    }
}

/// Appends 0x80 then zero bytes until the length is a multiple of 8.
/// Always appends at least one byte (a full block for aligned input).
pub fn pad(msg: &[u8]) -> Vec<u8> {
    let mut out = msg.to_vec();
    out.push(0x80);
    while !out.len().is_multiple_of(BLOCK_BYTES) {
        out.push(0x00);
    }
    out
}

/// Strips the trailing zero bytes and the 0x80 marker; the inverse of
/// [`pad`].
pub fn unpad(msg: &[u8]) -> Result<Vec<u8>, ModeError> {
    let mut end = msg.len();
    while end > 0 && msg[end - 1] == 0x00 {
        end -= 1;
    }
    if end == 0 || msg[end - 1] != 0x80 {
        return Err(ModeError::MalformedPadding);
    }
    Ok(msg[..end - 1].to_vec())
}

fn require_aligned(len: usize) -> Result<(), ModeError> {
    if !len.is_multiple_of(BLOCK_BYTES) {
        return Err(ModeError::Misaligned { len });
    }
    Ok(())
}

fn to_block(chunk: &[u8]) -> Block64 {
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(chunk);
    Block64::from_bytes(bytes)
}

fn xor_with_keystream(chunk: &[u8], keystream: Block64) -> Vec<u8> {
    chunk
        .iter()
        .zip(keystream.to_bytes())
        .map(|(m, k)| m ^ k)
        .collect()
}

/// 32-bit nonce and 32-bit big-endian counter forming a CTR input
/// block. The counter wraps modulo 2^32, which a single message only
/// reaches after 2^32 blocks (32 GiB).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtrBlock {
    nonce: u32,
    counter: u32,
}

impl CtrBlock {
    /// Splits the IV: high word is the nonce, low word the initial
    /// counter.
    pub fn from_iv(iv: Block64) -> Self {
        Self {
            nonce: (iv.value() >> 32) as u32,
            counter: iv.value() as u32,
        }
    }

    pub fn block(self) -> Block64 {
        Block64::new((u64::from(self.nonce) << 32) | u64::from(self.counter))
    }

    pub fn increment(&mut self) {
        self.counter = self.counter.wrapping_add(1);
    }
}

/// Encrypts a message of any length under the configured mode.
pub fn encrypt_message<C: BlockCipher + ?Sized>(
    msg: &[u8],
    cfg: &ModeConfig,
    cipher: &C,
) -> Result<Vec<u8>, ModeError> {
    match cfg.mode {
        Mode::Ecb | Mode::Cbc => {
            let data = match cfg.padding {
                Padding::Bit => pad(msg),
                Padding::None => {
                    require_aligned(msg.len())?;
                    msg.to_vec()
                }
            };
            let mut out = Vec::with_capacity(data.len());
            let mut feedback = cfg.iv.unwrap_or(Block64::ZERO);
            for chunk in data.chunks(BLOCK_BYTES) {
                let block = to_block(chunk);
                let ct = match cfg.mode {
                    Mode::Ecb => cipher.encrypt_block(block),
                    _ => {
                        let ct = cipher.encrypt_block(block ^ feedback);
                        feedback = ct;
                        ct
                    }
                };
                out.extend_from_slice(&ct.to_bytes());
            }
            Ok(out)
        }
        Mode::Cfb => {
            let mut out = Vec::with_capacity(msg.len());
            let mut feedback = cfg.iv.expect("CFB config carries an IV");
            for chunk in msg.chunks(BLOCK_BYTES) {
                let ct = xor_with_keystream(chunk, cipher.encrypt_block(feedback));
                if chunk.len() == BLOCK_BYTES {
                    feedback = to_block(&ct);
                }
                out.extend_from_slice(&ct);
            }
            Ok(out)
        }
        Mode::Ofb => {
            let mut out = Vec::with_capacity(msg.len());
            let mut output_block = cfg.iv.expect("OFB config carries an IV");
            for chunk in msg.chunks(BLOCK_BYTES) {
                output_block = cipher.encrypt_block(output_block);
                out.extend_from_slice(&xor_with_keystream(chunk, output_block));
            }
            Ok(out)
        }
        Mode::Ctr => {
            let mut out = Vec::with_capacity(msg.len());
            let mut ctr = CtrBlock::from_iv(cfg.iv.expect("CTR config carries an IV"));
            for chunk in msg.chunks(BLOCK_BYTES) {
                out.extend_from_slice(&xor_with_keystream(
                    chunk,
                    cipher.encrypt_block(ctr.block()),
                ));
                ctr.increment();
            }
            Ok(out)
        }
    }
}

/// Inverts [`encrypt_message`] under the same configuration. The
/// stream modes use only the encryption direction of the primitive.
pub fn decrypt_message<C: BlockCipher + ?Sized>(
    msg: &[u8],
    cfg: &ModeConfig,
    cipher: &C,
) -> Result<Vec<u8>, ModeError> {
    match cfg.mode {
        Mode::Ecb | Mode::Cbc => {
            require_aligned(msg.len())?;
            let mut out = Vec::with_capacity(msg.len());
            let mut feedback = cfg.iv.unwrap_or(Block64::ZERO);
            for chunk in msg.chunks(BLOCK_BYTES) {
                let block = to_block(chunk);
                let pt = match cfg.mode {
                    Mode::Ecb => cipher.decrypt_block(block),
                    _ => {
                        let pt = cipher.decrypt_block(block) ^ feedback;
                        feedback = block;
                        pt
                    }
                };
                out.extend_from_slice(&pt.to_bytes());
            }
            match cfg.padding {
                Padding::Bit => unpad(&out),
                Padding::None => Ok(out),
            }
        }
        Mode::Cfb => {
            let mut out = Vec::with_capacity(msg.len());
            let mut feedback = cfg.iv.expect("CFB config carries an IV");
            for chunk in msg.chunks(BLOCK_BYTES) {
                out.extend_from_slice(&xor_with_keystream(chunk, cipher.encrypt_block(feedback)));
                if chunk.len() == BLOCK_BYTES {
                    feedback = to_block(chunk);
                }
            }
            Ok(out)
        }
        // OFB and CTR keystreams do not depend on the data direction
        Mode::Ofb | Mode::Ctr => encrypt_message(msg, cfg, cipher),
    }
}
