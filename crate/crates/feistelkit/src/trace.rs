//! Instrumented DES encryption that records every intermediate value,
//! plus two renderers: a text layout that groups bits the way the
//! worked examples print them (48-bit values as eight 6-bit groups,
//! 32-bit values as eight 4-bit groups, 28-bit registers unbroken), and
//! a line-oriented `field=VALUE` machine format that round-trips
//! through [`parse_trace`].
//!
//! The machine field list is frozen; see docs/trace-format.md.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::{BitString, Bits48, Block64, Half32, Key64};
use crate::des::{
    expand, final_permutation, initial_permutation, key_mix, key_schedule, CdPair, KeySchedule,
    Subkey48,
};
use crate::tables::{self, permute};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("trace parse error at line {line}: {msg}")]
pub struct TraceParseError {
    pub line: usize,
    pub msg: String,
}

/// Every intermediate value of one Feistel round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub round: u8,
    pub l_in: Half32,
    pub r_in: Half32,
    pub subkey: Subkey48,
    pub expanded: Bits48,
    pub mixed: Bits48,
    pub sbox_out: Half32,
    pub f_out: Half32,
    pub l_out: Half32,
    pub r_out: Half32,
}

/// A complete encryption trace: input, key schedule history, all 16
/// rounds, the swapped preoutput R16‖L16 and the ciphertext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullTrace {
    pub input: Block64,
    pub key: Key64,
    pub ip_out: Block64,
    pub rounds: Vec<TraceRecord>,
    pub preoutput: Block64,
    pub ciphertext: Block64,
    pub key_trace: KeySchedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Machine,
}

/// Runs the encryption datapath while capturing every stage. The final
/// ciphertext always equals what [`crate::des::encrypt_block`] produces
/// for the same inputs.
pub fn trace_encrypt(block: Block64, key: Key64) -> FullTrace {
    let key_trace = key_schedule(key);
    let ip_out = initial_permutation(block);
    let (mut l, mut r) = ip_out.halves();

    let mut rounds = Vec::with_capacity(16);
    for &subkey in key_trace.subkeys() {
        let expanded = expand(r);
        let mixed = key_mix(expanded, subkey);
        let sbox_out = crate::des::sbox_layer(mixed);
        let f_out =
            Half32::from_bits(permute(sbox_out.bits(), &tables::P).expect("P takes 32 bits"));
        let (l_out, r_out) = (r, l ^ f_out);
        rounds.push(TraceRecord {
            round: subkey.round(),
            l_in: l,
            r_in: r,
            subkey,
            expanded,
            mixed,
            sbox_out,
            f_out,
            l_out,
            r_out,
        });
        l = l_out;
        r = r_out;
    }

    let preoutput = Block64::from_halves(r, l);
    FullTrace {
        input: block,
        key,
        ip_out,
        rounds,
        preoutput,
        ciphertext: final_permutation(preoutput),
        key_trace,
    }
}

/// Renders a trace. Output is deterministic: equal traces render to
/// identical bytes.
pub fn render_trace(trace: &FullTrace, format: TraceFormat) -> String {
    match format {
        TraceFormat::Text => render_text(trace),
        TraceFormat::Machine => render_machine(trace),
    }
}

fn g4(h: Half32) -> String {
    h.bits().grouped_binary(4)
}

fn g6(b: Bits48) -> String {
    b.bits().grouped_binary(6)
}

fn render_text(trace: &FullTrace) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "M   = {}", trace.input);
    let _ = writeln!(w, "K   = {}", trace.key);
    let _ = writeln!(w, "IP  = {}", trace.ip_out.bits().grouped_binary(4));
    let (l0, r0) = trace.ip_out.halves();
    let _ = writeln!(w, "L0  = {}", g4(l0));
    let _ = writeln!(w, "R0  = {}", g4(r0));
    let _ = writeln!(w);
    for cd in trace.key_trace.cd_history() {
        let n = cd.round_index();
        let _ = writeln!(w, "C{n:<2} = {}", cd.c().to_binary());
        let _ = writeln!(w, "D{n:<2} = {}", cd.d().to_binary());
    }
    let _ = writeln!(w);
    for sk in trace.key_trace.subkeys() {
        let _ = writeln!(w, "K{:<2} = {}", sk.round(), g6(sk.bits()));
    }
    for rec in &trace.rounds {
        let n = rec.round;
        let p = n - 1;
        let _ = writeln!(w);
        let _ = writeln!(w, "Round {n}");
        let _ = writeln!(w, "  L{p:<2}         = {}", g4(rec.l_in));
        let _ = writeln!(w, "  R{p:<2}         = {}", g4(rec.r_in));
        let _ = writeln!(w, "  K{n:<2}         = {}", g6(rec.subkey.bits()));
        let _ = writeln!(w, "  E(R{p})      = {}", g6(rec.expanded));
        let _ = writeln!(w, "  K{n}+E(R{p})   = {}", g6(rec.mixed));
        let _ = writeln!(w, "  S-output    = {}", g4(rec.sbox_out));
        let _ = writeln!(w, "  f           = {}", g4(rec.f_out));
        let _ = writeln!(w, "  L{n:<2}         = {}", g4(rec.l_out));
        let _ = writeln!(w, "  R{n:<2}         = {}", g4(rec.r_out));
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "R16L16 = {}", trace.preoutput.bits().grouped_binary(4));
    let _ = writeln!(w, "IP^-1  = {}", trace.ciphertext.bits().grouped_binary(4));
    let _ = writeln!(w, "C      = {}", trace.ciphertext);
    out
}

fn render_machine(trace: &FullTrace) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "input={}", trace.input.bits());
    let _ = writeln!(w, "key={}", trace.key.bits());
    let _ = writeln!(w, "ip={}", trace.ip_out.bits());
    for cd in trace.key_trace.cd_history() {
        let n = cd.round_index();
        let _ = writeln!(w, "key.cd.{n}.c={}", cd.c());
        let _ = writeln!(w, "key.cd.{n}.d={}", cd.d());
    }
    for sk in trace.key_trace.subkeys() {
        let _ = writeln!(w, "key.subkey.{}={}", sk.round(), sk.bits().bits());
    }
    for rec in &trace.rounds {
        let n = rec.round;
        let _ = writeln!(w, "round.{n}.l_in={}", rec.l_in.bits());
        let _ = writeln!(w, "round.{n}.r_in={}", rec.r_in.bits());
        let _ = writeln!(w, "round.{n}.subkey={}", rec.subkey.bits().bits());
        let _ = writeln!(w, "round.{n}.expanded={}", rec.expanded.bits());
        let _ = writeln!(w, "round.{n}.mixed={}", rec.mixed.bits());
        let _ = writeln!(w, "round.{n}.sbox={}", rec.sbox_out.bits());
        let _ = writeln!(w, "round.{n}.f={}", rec.f_out.bits());
        let _ = writeln!(w, "round.{n}.l_out={}", rec.l_out.bits());
        let _ = writeln!(w, "round.{n}.r_out={}", rec.r_out.bits());
    }
    let _ = writeln!(w, "preoutput={}", trace.preoutput.bits());
    let _ = writeln!(w, "ciphertext={}", trace.ciphertext.bits());
    out
}

struct FieldReader<'a> {
    fields: std::collections::HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> FieldReader<'a> {
    fn take(&mut self, name: &str) -> Result<(usize, &'a str), TraceParseError> {
        self.fields.remove(name).ok_or_else(|| TraceParseError {
            line: 0,
            msg: format!("missing field {name}"),
        })
    }

    fn bits(&mut self, name: &str, width: u8) -> Result<BitString, TraceParseError> {
        let (line, raw) = self.take(name)?;
        let bits = BitString::from_binary(raw).map_err(|e| TraceParseError {
            line,
            msg: format!("{name}: {e}"),
        })?;
        if bits.width() != width {
            return Err(TraceParseError {
                line,
                msg: format!("{name}: expected {width} bits, found {}", bits.width()),
            });
        }
        Ok(bits)
    }

    fn block(&mut self, name: &str) -> Result<Block64, TraceParseError> {
        Ok(Block64::from_bits(self.bits(name, 64)?))
    }

    fn half(&mut self, name: &str) -> Result<Half32, TraceParseError> {
        Ok(Half32::from_bits(self.bits(name, 32)?))
    }

    fn bits48(&mut self, name: &str) -> Result<Bits48, TraceParseError> {
        Ok(Bits48::from_bits(self.bits(name, 48)?))
    }
}

/// Parses the machine-readable rendering back into an equal
/// [`FullTrace`].
pub fn parse_trace(input: &str) -> Result<FullTrace, TraceParseError> {
    let mut fields = std::collections::HashMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or_else(|| TraceParseError {
            line: line_no,
            msg: "expected field=VALUE".into(),
        })?;
        if fields.insert(name, (line_no, value)).is_some() {
            return Err(TraceParseError {
                line: line_no,
                msg: format!("duplicate field {name}"),
            });
        }
    }
    let mut reader = FieldReader { fields };

    let input_block = reader.block("input")?;
    let key = Key64::from_bits(reader.bits("key", 64)?);
    let ip_out = reader.block("ip")?;

    let mut cd_history = [CdPair::default(); 17];
    for n in 0..=16u8 {
        let c = reader.bits(&format!("key.cd.{n}.c"), 28)?.value() as u32;
        let d = reader.bits(&format!("key.cd.{n}.d"), 28)?.value() as u32;
        cd_history[n as usize] = KeySchedule::cd_from_raw(c, d, n);
    }
    let mut subkeys = [KeySchedule::subkey_from_raw(Bits48::ZERO, 0); 16];
    for n in 1..=16u8 {
        let bits = reader.bits48(&format!("key.subkey.{n}"))?;
        subkeys[n as usize - 1] = KeySchedule::subkey_from_raw(bits, n);
    }
    let key_trace = KeySchedule::from_parts(subkeys, cd_history);

    let mut rounds = Vec::with_capacity(16);
    for n in 1..=16u8 {
        let p = |f: &str| format!("round.{n}.{f}");
        rounds.push(TraceRecord {
            round: n,
            l_in: reader.half(&p("l_in"))?,
            r_in: reader.half(&p("r_in"))?,
            subkey: KeySchedule::subkey_from_raw(reader.bits48(&p("subkey"))?, n),
            expanded: reader.bits48(&p("expanded"))?,
            mixed: reader.bits48(&p("mixed"))?,
            sbox_out: reader.half(&p("sbox"))?,
            f_out: reader.half(&p("f"))?,
            l_out: reader.half(&p("l_out"))?,
            r_out: reader.half(&p("r_out"))?,
        });
    }

    let preoutput = reader.block("preoutput")?;
    let ciphertext = reader.block("ciphertext")?;

    if let Some(name) = reader.fields.keys().next() {
        let (line, _) = reader.fields[name];
        return Err(TraceParseError {
            line,
            msg: format!("unknown field {name}"),
        });
    }

    Ok(FullTrace {
        input: input_block,
        key,
        ip_out,
        rounds,
        preoutput,
        ciphertext,
        key_trace,
    })
}
