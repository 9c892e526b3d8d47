//! The DES and SDES tables, kept as data so their structural invariants
//! can be checked at startup or test time rather than baked into code.
//!
//! DES tables are the canonical FIPS 46-3 set. SDES tables are the
//! standard educational (Schaefer) set.

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table {table}: expected {expected}-bit input, got {actual} bits")]
    WidthMismatch {
        table: &'static str,
        expected: u8,
        actual: u8,
    },
    #[error("table {table} is invalid: {reason}")]
    InvalidTable { table: &'static str, reason: String },
    #[error("S-box {index} row {row} is not a permutation of 0..=15")]
    BadSboxRow { index: u8, row: usize },
    #[error("SDES S{index} contains a value outside 0..=3")]
    BadSdesSbox { index: u8 },
}

/// How a table is allowed to treat its source indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Every source index used exactly once; output width = input width.
    Bijective,
    /// Fewer outputs than inputs; all source indices distinct.
    Compression,
    /// More outputs than inputs; sources appear once or twice, with
    /// exactly (output - input) of them appearing twice.
    Expansion,
}

/// An ordered list of 1-based source-bit indices defining a
/// permutation, compression, or expansion.
pub struct PermutationTable {
    name: &'static str,
    input_width: u8,
    entries: &'static [u8],
    kind: TableKind,
}

impl PermutationTable {
    pub const fn new(
        name: &'static str,
        input_width: u8,
        entries: &'static [u8],
        kind: TableKind,
    ) -> Self {
        Self {
            name,
            input_width,
            entries,
            kind,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn input_width(&self) -> u8 {
        self.input_width
    }

    pub fn output_width(&self) -> u8 {
        self.entries.len() as u8
    }

    pub fn entries(&self) -> &'static [u8] {
        self.entries
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    /// Checks the structural invariants for this table's kind.
    pub fn validate(&self) -> Result<(), TableError> {
        let invalid = |reason: String| TableError::InvalidTable {
            table: self.name,
            reason,
        };
        if self.entries.is_empty() || self.entries.len() > 64 || self.input_width > 64 {
            return Err(invalid("width out of range".into()));
        }
        let mut counts = [0usize; 65];
        for &e in self.entries {
            if e < 1 || e > self.input_width {
                return Err(invalid(format!(
                    "entry {e} outside 1..={}",
                    self.input_width
                )));
            }
            counts[e as usize] += 1;
        }
        let used = &counts[1..=self.input_width as usize];
        match self.kind {
            TableKind::Bijective => {
                if self.output_width() != self.input_width {
                    return Err(invalid("bijective table must preserve width".into()));
                }
                if used.iter().any(|&c| c != 1) {
                    return Err(invalid("entries are not a permutation of the input".into()));
                }
            }
            TableKind::Compression => {
                if self.output_width() >= self.input_width {
                    return Err(invalid("compression table must shrink the input".into()));
                }
                if used.iter().any(|&c| c > 1) {
                    return Err(invalid("compression entries must be distinct".into()));
                }
            }
            TableKind::Expansion => {
                if self.output_width() <= self.input_width {
                    return Err(invalid("expansion table must grow the input".into()));
                }
                if used.iter().any(|&c| c == 0 || c > 2) {
                    return Err(invalid("each source must appear once or twice".into()));
                }
                let doubled = used.iter().filter(|&&c| c == 2).count();
                let expected = (self.output_width() - self.input_width) as usize;
                if doubled != expected {
                    return Err(invalid(format!(
                        "{doubled} sources appear twice, expected {expected}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Applies `table` to `input`: output bit i is input bit `entries[i]`.
pub fn permute(input: BitString, table: &PermutationTable) -> Result<BitString, TableError> {
    if input.width() != table.input_width {
        return Err(TableError::WidthMismatch {
            table: table.name,
            expected: table.input_width,
            actual: input.width(),
        });
    }
    let mut value = 0u64;
    for &src in table.entries {
        value = (value << 1) | input.bit(src);
    }
    Ok(BitString::new(value, table.output_width()))
}

pub static IP: PermutationTable = PermutationTable::new(
    "IP",
    64,
    &[
        58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4, //
        62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8, //
        57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3, //
        61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7,
    ],
    TableKind::Bijective,
);

pub static FP: PermutationTable = PermutationTable::new(
    "FP",
    64,
    &[
        40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31, //
        38, 6, 46, 14, 54, 22, 62, 30, 37, 5, 45, 13, 53, 21, 61, 29, //
        36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27, //
        34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9, 49, 17, 57, 25,
    ],
    TableKind::Bijective,
);

pub static E: PermutationTable = PermutationTable::new(
    "E",
    32,
    &[
        32, 1, 2, 3, 4, 5, 4, 5, 6, 7, 8, 9, 8, 9, 10, 11, //
        12, 13, 12, 13, 14, 15, 16, 17, 16, 17, 18, 19, 20, 21, 20, 21, //
        22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1,
    ],
    TableKind::Expansion,
);

pub static P: PermutationTable = PermutationTable::new(
    "P",
    32,
    &[
        16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10, //
        2, 8, 24, 14, 32, 27, 3, 9, 19, 13, 30, 6, 22, 11, 4, 25,
    ],
    TableKind::Bijective,
);

pub static PC1: PermutationTable = PermutationTable::new(
    "PC-1",
    64,
    &[
        57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18, 10, 2, //
        59, 51, 43, 35, 27, 19, 11, 3, 60, 52, 44, 36, 63, 55, 47, 39, //
        31, 23, 15, 7, 62, 54, 46, 38, 30, 22, 14, 6, 61, 53, 45, 37, //
        29, 21, 13, 5, 28, 20, 12, 4,
    ],
    TableKind::Compression,
);

pub static PC2: PermutationTable = PermutationTable::new(
    "PC-2",
    56,
    &[
        14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10, 23, 19, 12, 4, //
        26, 8, 16, 7, 27, 20, 13, 2, 41, 52, 31, 37, 47, 55, 30, 40, //
        51, 45, 33, 48, 44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32,
    ],
    TableKind::Compression,
);

/// Left-rotation amounts for the 16 key-schedule rounds; they sum to 28,
/// so C16 = C0 and D16 = D0.
pub const ROUND_SHIFTS: [u8; 16] = [1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1];

/// One DES S-box: a 4-row by 16-column table of 4-bit values, addressed
/// by a 6-bit chunk (row = outer bits, column = inner bits).
pub struct SBox {
    pub index: u8,
    pub table: [[u8; 16]; 4],
}

impl SBox {
    /// Looks up a 6-bit value: row = 2*b1 + b6, column = b2 b3 b4 b5.
    pub fn lookup(&self, six: u8) -> u8 {
        let row = (((six >> 4) & 0b10) | (six & 1)) as usize;
        let col = ((six >> 1) & 0b1111) as usize;
        self.table[row][col]
    }

    pub fn validate(&self) -> Result<(), TableError> {
        for (row_idx, row) in self.table.iter().enumerate() {
            let mut seen = [false; 16];
            for &v in row {
                if v > 15 || seen[v as usize] {
                    return Err(TableError::BadSboxRow {
                        index: self.index,
                        row: row_idx,
                    });
                }
                seen[v as usize] = true;
            }
        }
        Ok(())
    }
}

pub static SBOXES: [SBox; 8] = [
    SBox {
        index: 1,
        table: [
            [14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7],
            [0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8],
            [4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0],
            [15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13],
        ],
    },
    SBox {
        index: 2,
        table: [
            [15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10],
            [3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5],
            [0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15],
            [13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9],
        ],
    },
    SBox {
        index: 3,
        table: [
            [10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8],
            [13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1],
            [13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7],
            [1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12],
        ],
    },
    SBox {
        index: 4,
        table: [
            [7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15],
            [13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9],
            [10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4],
            [3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14],
        ],
    },
    SBox {
        index: 5,
        table: [
            [2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9],
            [14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6],
            [4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14],
            [11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3],
        ],
    },
    SBox {
        index: 6,
        table: [
            [12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11],
            [10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8],
            [9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6],
            [4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13],
        ],
    },
    SBox {
        index: 7,
        table: [
            [4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1],
            [13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6],
            [1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2],
            [6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12],
        ],
    },
    SBox {
        index: 8,
        table: [
            [13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7],
            [1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2],
            [7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8],
            [2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11],
        ],
    },
];

// SDES (Schaefer) tables.

pub static SDES_P10: PermutationTable = PermutationTable::new(
    "P10",
    10,
    &[3, 5, 2, 7, 4, 10, 1, 9, 8, 6],
    TableKind::Bijective,
);

pub static SDES_P8: PermutationTable =
    PermutationTable::new("P8", 10, &[6, 3, 7, 4, 8, 5, 10, 9], TableKind::Compression);

pub static SDES_IP: PermutationTable =
    PermutationTable::new("IP8", 8, &[2, 6, 3, 1, 4, 8, 5, 7], TableKind::Bijective);

pub static SDES_IP_INV: PermutationTable =
    PermutationTable::new("IP8^-1", 8, &[4, 1, 3, 5, 7, 2, 8, 6], TableKind::Bijective);

pub static SDES_EP: PermutationTable =
    PermutationTable::new("E/P", 4, &[4, 1, 2, 3, 2, 3, 4, 1], TableKind::Expansion);

pub static SDES_P4: PermutationTable =
    PermutationTable::new("P4", 4, &[2, 4, 3, 1], TableKind::Bijective);

pub const SDES_SHIFTS: [u8; 2] = [1, 2];

/// The standard SDES S-boxes. Unlike the DES S-boxes, their rows are not
/// all permutations (S0 row 3 and S1 row 2 repeat a value); only the
/// 0..=3 range is a structural invariant here.
pub static SDES_SBOXES: [[[u8; 4]; 4]; 2] = [
    [[1, 0, 3, 2], [3, 2, 1, 0], [0, 2, 1, 3], [3, 1, 3, 2]],
    [[0, 1, 2, 3], [2, 0, 1, 3], [3, 0, 1, 0], [2, 1, 0, 3]],
];

fn validate_sdes_sboxes() -> Result<(), TableError> {
    for (i, sbox) in SDES_SBOXES.iter().enumerate() {
        if sbox.iter().flatten().any(|&v| v > 3) {
            return Err(TableError::BadSdesSbox { index: i as u8 });
        }
    }
    Ok(())
}

/// Checks every shipped table against its structural invariants.
pub fn validate_all() -> Result<(), TableError> {
    for table in [
        &IP,
        &FP,
        &E,
        &P,
        &PC1,
        &PC2,
        &SDES_P10,
        &SDES_P8,
        &SDES_IP,
        &SDES_IP_INV,
        &SDES_EP,
        &SDES_P4,
    ] {
        table.validate()?;
    }
    for sbox in &SBOXES {
        sbox.validate()?;
    }
    validate_sdes_sboxes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_shipped_tables_validate() {
        validate_all().unwrap();
    }

    #[test]
    fn expansion_duplicates_sixteen_sources() {
        let mut counts = [0u8; 33];
        for &e in E.entries() {
            counts[e as usize] += 1;
        }
        assert_eq!(counts[1..].iter().filter(|&&c| c == 2).count(), 16);
        assert_eq!(counts[1..].iter().filter(|&&c| c == 1).count(), 16);
    }

    #[test]
    fn fp_inverts_ip_by_index_composition() {
        // composing the index maps must give the identity permutation
        for i in 0..64usize {
            let through_ip = IP.entries()[i] as usize; // output i+1 <- input IP[i]
            assert_eq!(FP.entries()[through_ip - 1] as usize, i + 1);
        }
    }

    #[test]
    fn sdes_ip_inverse_composes_to_identity() {
        for i in 0..8usize {
            let through = SDES_IP.entries()[i] as usize;
            assert_eq!(SDES_IP_INV.entries()[through - 1] as usize, i + 1);
        }
    }

    #[test]
    fn permute_rejects_width_mismatch() {
        let half = BitString::new(0, 32);
        let err = permute(half, &IP).unwrap_err();
        assert_eq!(
            err,
            TableError::WidthMismatch {
                table: "IP",
                expected: 64,
                actual: 32
            }
        );
    }

    #[test]
    fn permute_identity_table_is_identity() {
        static IDENTITY8: PermutationTable = PermutationTable::new(
            "identity",
            8,
            &[1, 2, 3, 4, 5, 6, 7, 8],
            TableKind::Bijective,
        );
        for v in [0u64, 0x5A, 0xFF, 0x81] {
            let input = BitString::new(v, 8);
            assert_eq!(permute(input, &IDENTITY8).unwrap(), input);
        }
    }

    #[test]
    fn validate_catches_broken_tables() {
        static OUT_OF_RANGE: PermutationTable =
            PermutationTable::new("bad", 4, &[1, 2, 5, 4], TableKind::Bijective);
        assert!(OUT_OF_RANGE.validate().is_err());

        static NOT_BIJECTIVE: PermutationTable =
            PermutationTable::new("bad", 4, &[1, 2, 2, 4], TableKind::Bijective);
        assert!(NOT_BIJECTIVE.validate().is_err());

        static DUP_COMPRESSION: PermutationTable =
            PermutationTable::new("bad", 8, &[1, 1, 3], TableKind::Compression);
        assert!(DUP_COMPRESSION.validate().is_err());

        static WRONG_EXPANSION: PermutationTable =
            PermutationTable::new("bad", 4, &[1, 1, 1, 2, 3, 4], TableKind::Expansion);
        assert!(WRONG_EXPANSION.validate().is_err());

        let sbox = SBox {
            index: 1,
            table: [[0; 16]; 4],
        };
        assert!(sbox.validate().is_err());
    }
}
