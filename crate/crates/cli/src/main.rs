//! Command-line front end: encrypt/decrypt files or hex strings, derive
//! keys, dump per-round traces, run KAT suites, drive the SDES demos,
//! and measure software throughput.
//!
//! Exit status: 0 on success, 1 on cryptographic or validation
//! failure, 2 on usage errors.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, RngCore};

use feistelkit::bits::{Block64, Key64};
use feistelkit::kat::{load_vectors, run_vectors};
use feistelkit::modes::{decrypt_message, encrypt_message, Mode, ModeConfig, Padding};
use feistelkit::sdes::{self, SdesBlock8, SdesKey10};
use feistelkit::tdea::TripleKeySchedule;
use feistelkit::trace::{render_trace, trace_encrypt, TraceFormat};
use feistelkit::{key_schedule, weak_key_class, BlockCipher, WeakKeyClass};

#[derive(Parser)]
#[command(
    name = "feistelkit",
    version,
    about = "DES/3DES/SDES block-cipher toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a file, hex string, or stdin
    Encrypt(CryptArgs),
    /// Decrypt a file, hex string, or stdin
    Decrypt(CryptArgs),
    /// Generate a random key with valid (odd) parity
    Keygen {
        #[arg(long, value_enum, default_value_t = Algo::Des)]
        algo: Algo,
    },
    /// Print every intermediate value of one block encryption
    Trace {
        /// 16 hex digits
        #[arg(long, env = "FEISTELKIT_KEY", hide_env_values = true)]
        key: String,
        /// 16 hex digits
        #[arg(long)]
        block: String,
        #[arg(long, value_enum, default_value_t = TraceFormatArg::Text)]
        format: TraceFormatArg,
    },
    /// Run a known-answer-test vector file
    Kat {
        #[arg(long)]
        file: PathBuf,
    },
    /// Simplified DES demos (binary-string or short-hex arguments)
    Sdes {
        #[command(subcommand)]
        command: SdesCommand,
    },
    /// Measure software encryption throughput
    Bench {
        #[arg(long, value_enum, default_value_t = Algo::Des)]
        algo: Algo,
        #[arg(long, value_enum, default_value_t = ModeArg::Ecb)]
        mode: ModeArg,
        /// message size to encrypt
        #[arg(long, default_value_t = 4 * 1024 * 1024)]
        bytes: usize,
    },
}

#[derive(Args)]
struct CryptArgs {
    #[arg(long, value_enum, default_value_t = Algo::Des)]
    algo: Algo,
    #[arg(long, value_enum, default_value_t = ModeArg::Ecb)]
    mode: ModeArg,
    /// 16 hex digits for DES; 16, 32 or 48 for 3DES (one/two/three-key)
    #[arg(long, env = "FEISTELKIT_KEY", hide_env_values = true)]
    key: String,
    /// 16 hex digits; required for every mode except ECB
    #[arg(long)]
    iv: Option<String>,
    #[arg(long, value_enum, default_value_t = PadArg::Bit)]
    pad: PadArg,
    /// input path, or `-` for stdin
    #[arg(long = "in", default_value = "-", conflicts_with = "hex")]
    input: String,
    /// output path, or `-` for stdout
    #[arg(long, default_value = "-")]
    out: String,
    /// treat this hex string as the input and emit hex output
    #[arg(long)]
    hex: Option<String>,
}

#[derive(Subcommand)]
enum SdesCommand {
    Encrypt {
        /// 10 binary digits or up to 3 hex digits
        #[arg(long)]
        key: String,
        /// 8 binary digits or up to 2 hex digits
        #[arg(long)]
        block: String,
    },
    Decrypt {
        #[arg(long)]
        key: String,
        #[arg(long)]
        block: String,
    },
    /// Exhaustive key search from plaintext/ciphertext pairs
    Crack {
        /// PT:CT pair; repeatable
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Des,
    #[value(name = "3des")]
    Tdes,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ecb,
    Cbc,
    Cfb,
    Ofb,
    Ctr,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Ecb => Mode::Ecb,
            ModeArg::Cbc => Mode::Cbc,
            ModeArg::Cfb => Mode::Cfb,
            ModeArg::Ofb => Mode::Ofb,
            ModeArg::Ctr => Mode::Ctr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PadArg {
    Bit,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormatArg {
    Text,
    Machine,
}

/// Usage errors exit 2 before any input is touched; run errors exit 1.
enum CliError {
    Usage(String),
    Run(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn run(msg: impl Into<String>) -> Self {
        CliError::Run(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // the tables are data; check their structural invariants up front
    if let Err(e) = feistelkit::tables::validate_all() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Encrypt(args) => crypt(args, true),
        Command::Decrypt(args) => crypt(args, false),
        Command::Keygen { algo } => keygen(algo),
        Command::Trace { key, block, format } => run_trace(&key, &block, format),
        Command::Kat { file } => run_kat(&file),
        Command::Sdes { command } => run_sdes(command),
        Command::Bench { algo, mode, bytes } => bench(algo, mode, bytes),
    }
}

fn parse_des_key(hex: &str) -> Result<Key64, CliError> {
    Key64::from_hex(hex).map_err(|e| CliError::usage(format!("--key: {e}")))
}

/// Maps key length onto the keying option: 16 digits = one-key,
/// 32 = two-key, 48 = three-key.
fn parse_tdes_key(hex: &str) -> Result<TripleKeySchedule, CliError> {
    let part = |i: usize| parse_des_key(&hex[i * 16..(i + 1) * 16]);
    match hex.len() {
        16 => Ok(TripleKeySchedule::one_key(parse_des_key(hex)?)),
        32 => Ok(TripleKeySchedule::two_key(part(0)?, part(1)?)),
        48 => Ok(TripleKeySchedule::from_keys(part(0)?, part(1)?, part(2)?)),
        n => Err(CliError::usage(format!(
            "--key: 3DES keys are 16, 32 or 48 hex digits, got {n}"
        ))),
    }
}

fn warn_weak(key: Key64) {
    match weak_key_class(key) {
        WeakKeyClass::Weak => eprintln!("warning: {key} is a weak DES key"),
        WeakKeyClass::SemiWeak => eprintln!("warning: {key} is a semi-weak DES key"),
        WeakKeyClass::None => {}
    }
}

fn build_cipher(algo: Algo, key_hex: &str) -> Result<Box<dyn BlockCipher>, CliError> {
    match algo {
        Algo::Des => {
            let key = parse_des_key(key_hex)?;
            warn_weak(key);
            Ok(Box::new(key_schedule(key)))
        }
        Algo::Tdes => {
            let tks = parse_tdes_key(key_hex)?;
            for i in 0..key_hex.len() / 16 {
                warn_weak(parse_des_key(&key_hex[i * 16..(i + 1) * 16])?);
            }
            Ok(Box::new(tks))
        }
    }
}

fn crypt(args: CryptArgs, encrypting: bool) -> Result<(), CliError> {
    let mode = Mode::from(args.mode);
    let iv = match (&args.iv, mode.needs_iv()) {
        (Some(hex), true) => {
            Some(Block64::from_hex(hex).map_err(|e| CliError::usage(format!("--iv: {e}")))?)
        }
        (None, true) => {
            return Err(CliError::usage(format!(
                "--iv is required for {} mode",
                mode.name()
            )))
        }
        (Some(_), false) => return Err(CliError::usage("--iv is not used in ECB mode")),
        (None, false) => None,
    };
    let padding = match args.pad {
        PadArg::Bit => Padding::Bit,
        PadArg::None => Padding::None,
    };
    let cipher = build_cipher(args.algo, &args.key)?;
    let cfg = ModeConfig::new(mode, iv, padding).map_err(|e| CliError::usage(e.to_string()))?;

    let (data, hex_io) = read_input(&args)?;
    let result = if encrypting {
        encrypt_message(&data, &cfg, cipher.as_ref())
    } else {
        decrypt_message(&data, &cfg, cipher.as_ref())
    }
    .map_err(|e| CliError::run(e.to_string()))?;

    write_output(&args.out, &result, hex_io)
}

/// Returns the input bytes and whether hex I/O was requested.
fn read_input(args: &CryptArgs) -> Result<(Vec<u8>, bool), CliError> {
    if let Some(hex_str) = &args.hex {
        let decoded = hex::decode(hex_str).map_err(|e| CliError::usage(format!("--hex: {e}")))?;
        return Ok((decoded, true));
    }
    let mut data = Vec::new();
    if args.input == "-" {
        std::io::stdin()
            .read_to_end(&mut data)
            .map_err(|e| CliError::run(format!("reading stdin: {e}")))?;
    } else {
        data = std::fs::read(&args.input)
            .map_err(|e| CliError::run(format!("reading {}: {e}", args.input)))?;
    }
    Ok((data, false))
}

fn write_output(out: &str, data: &[u8], hex_io: bool) -> Result<(), CliError> {
    let rendered;
    let bytes: &[u8] = if hex_io {
        rendered = format!("{}\n", hex::encode_upper(data));
        rendered.as_bytes()
    } else {
        data
    };
    if out == "-" {
        std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::run(format!("writing stdout: {e}")))?;
        return Ok(());
    }
    // write to a temporary and rename so failures leave no partial file
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::run(format!("creating temporary file: {e}")))?;
    tmp.write_all(bytes)
        .map_err(|e| CliError::run(format!("writing {out}: {e}")))?;
    tmp.persist(path)
        .map_err(|e| CliError::run(format!("renaming into {out}: {e}")))?;
    Ok(())
}

fn keygen(algo: Algo) -> Result<(), CliError> {
    let mut rng = rand::rng();
    let keys = match algo {
        Algo::Des => 1,
        Algo::Tdes => 3,
    };
    let mut out = String::new();
    for _ in 0..keys {
        let key = Key64::new(rng.random()).with_odd_parity();
        warn_weak(key);
        out.push_str(&key.to_hex());
    }
    println!("{out}");
    Ok(())
}

fn run_trace(key_hex: &str, block_hex: &str, format: TraceFormatArg) -> Result<(), CliError> {
    let key = parse_des_key(key_hex)?;
    let block =
        Block64::from_hex(block_hex).map_err(|e| CliError::usage(format!("--block: {e}")))?;
    let trace = trace_encrypt(block, key);
    let format = match format {
        TraceFormatArg::Text => TraceFormat::Text,
        TraceFormatArg::Machine => TraceFormat::Machine,
    };
    print!("{}", render_trace(&trace, format));
    Ok(())
}

fn run_kat(file: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::run(format!("reading {}: {e}", file.display())))?;
    let vectors = load_vectors(&text).map_err(|e| CliError::run(e.to_string()))?;
    let report = run_vectors(&vectors);
    print!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::run(format!(
            "{} vector(s) failed",
            report.failed_count()
        )))
    }
}

/// SDES arguments accept exact-width binary or short hex; outputs
/// mirror the input format.
#[derive(Clone, Copy, PartialEq)]
enum SdesFormat {
    Binary,
    Hex,
}

fn parse_sdes_key(s: &str) -> Result<(SdesKey10, SdesFormat), CliError> {
    if s.len() == 10 && s.chars().all(|c| c == '0' || c == '1') {
        Ok((SdesKey10::from_binary(s).unwrap(), SdesFormat::Binary))
    } else {
        SdesKey10::from_hex(s)
            .map(|k| (k, SdesFormat::Hex))
            .map_err(|e| CliError::usage(format!("key {s:?}: {e}")))
    }
}

fn parse_sdes_block(s: &str) -> Result<(SdesBlock8, SdesFormat), CliError> {
    if s.len() == 8 && s.chars().all(|c| c == '0' || c == '1') {
        Ok((SdesBlock8::from_binary(s).unwrap(), SdesFormat::Binary))
    } else {
        SdesBlock8::from_hex(s)
            .map(|b| (b, SdesFormat::Hex))
            .map_err(|e| CliError::usage(format!("block {s:?}: {e}")))
    }
}

fn sdes_crypt(key: &str, block: &str, decrypting: bool) -> Result<(), CliError> {
    let (key, _) = parse_sdes_key(key)?;
    let (block, format) = parse_sdes_block(block)?;
    let result = if decrypting {
        sdes::decrypt(block, key)
    } else {
        sdes::encrypt(block, key)
    };
    match format {
        SdesFormat::Binary => println!("{}", result.to_binary()),
        SdesFormat::Hex => println!("{}", result.to_hex()),
    }
    Ok(())
}

fn run_sdes(command: SdesCommand) -> Result<(), CliError> {
    match command {
        SdesCommand::Encrypt { key, block } => sdes_crypt(&key, &block, false),
        SdesCommand::Decrypt { key, block } => sdes_crypt(&key, &block, true),
        SdesCommand::Crack { pairs } => {
            let mut parsed = Vec::new();
            let mut format = SdesFormat::Binary;
            for (i, pair) in pairs.iter().enumerate() {
                let (pt_str, ct_str) = pair
                    .split_once(':')
                    .ok_or_else(|| CliError::usage(format!("--pair {pair:?}: expected PT:CT")))?;
                let (pt, pt_format) = parse_sdes_block(pt_str)?;
                let (ct, _) = parse_sdes_block(ct_str)?;
                if i == 0 {
                    format = pt_format;
                }
                parsed.push((pt, ct));
            }
            for key in sdes::brute_force(&parsed) {
                match format {
                    SdesFormat::Binary => println!("{}", key.to_binary()),
                    SdesFormat::Hex => println!("{}", key.to_hex()),
                }
            }
            Ok(())
        }
    }
}

fn bench(algo: Algo, mode_arg: ModeArg, bytes: usize) -> Result<(), CliError> {
    if bytes == 0 {
        return Err(CliError::usage("--bytes must be positive"));
    }
    let mut rng = rand::rng();
    let cipher: Box<dyn BlockCipher> = match algo {
        Algo::Des => Box::new(key_schedule(Key64::new(rng.random()))),
        Algo::Tdes => Box::new(TripleKeySchedule::from_keys(
            Key64::new(rng.random()),
            Key64::new(rng.random()),
            Key64::new(rng.random()),
        )),
    };
    let mode = Mode::from(mode_arg);
    let iv = mode.needs_iv().then(|| Block64::new(rng.random()));
    let cfg = ModeConfig::new(mode, iv, Padding::Bit).expect("IV supplied when needed");

    let mut data = vec![0u8; bytes];
    rng.fill_bytes(&mut data);

    let start = Instant::now();
    let ct =
        encrypt_message(&data, &cfg, cipher.as_ref()).map_err(|e| CliError::run(e.to_string()))?;
    let seconds = start.elapsed().as_secs_f64();
    std::hint::black_box(&ct);

    let throughput = bytes as f64 / 1e6 / seconds;
    println!("bytes={bytes} seconds={seconds:.6} MB/s={throughput:.3}");
    Ok(())
}
