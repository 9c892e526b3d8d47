//! Property tests for the structural cipher invariants.

use proptest::prelude::*;

use feistelkit::bits::{Block64, Half32, Key64};
use feistelkit::des::{
    decrypt_block, encrypt_block, feistel_f, final_permutation, initial_permutation, key_schedule,
    round_step, RoundState,
};
use feistelkit::modes::{decrypt_message, encrypt_message, pad, unpad, Mode, ModeConfig, Padding};
use feistelkit::sdes::{self, SdesBlock8, SdesKey10};
use feistelkit::tdea::{ede_decrypt, ede_encrypt, TripleKeySchedule};

proptest! {
    #[test]
    fn fp_inverts_ip(value: u64) {
        let block = Block64::new(value);
        prop_assert_eq!(final_permutation(initial_permutation(block)), block);
        prop_assert_eq!(initial_permutation(final_permutation(block)), block);
    }

    #[test]
    fn round_step_inverts(l: u32, r: u32, key: u64, round_sel in 0usize..16) {
        let ks = key_schedule(Key64::new(key));
        let k = ks.subkeys()[round_sel];
        let state = RoundState { l: Half32::new(l), r: Half32::new(r), round: 0 };
        let next = round_step(state, k).unwrap();
        let recovered = RoundState {
            l: next.r ^ feistel_f(next.l, k),
            r: next.l,
            round: 0,
        };
        prop_assert_eq!(recovered, state);
    }

    #[test]
    fn key_schedule_closes(key: u64) {
        let ks = key_schedule(Key64::new(key));
        let history = ks.cd_history();
        prop_assert_eq!(history[0].c(), history[16].c());
        prop_assert_eq!(history[0].d(), history[16].d());
    }

    #[test]
    fn encrypt_then_decrypt_is_identity(key: u64, block: u64) {
        let ks = key_schedule(Key64::new(key));
        let block = Block64::new(block);
        let ct = encrypt_block(block, &ks);
        prop_assert_eq!(ct.bits().width(), 64, "ciphertext is one block");
        prop_assert_eq!(decrypt_block(ct, &ks), block);
    }

    #[test]
    fn complementation(key: u64, block: u64) {
        let key = Key64::new(key);
        let block = Block64::new(block);
        let lhs = encrypt_block(!block, &key_schedule(!key));
        let rhs = !encrypt_block(block, &key_schedule(key));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pad_then_unpad_is_identity(msg in prop::collection::vec(any::<u8>(), 0..1000)) {
        let padded = pad(&msg);
        prop_assert!(padded.len().is_multiple_of(8));
        prop_assert!(padded.len() > msg.len(), "always appends at least one byte");
        prop_assert_eq!(unpad(&padded).unwrap(), msg);
    }

    #[test]
    fn modes_round_trip(
        key: u64,
        iv: u64,
        mode_sel in 0usize..5,
        msg in prop::collection::vec(any::<u8>(), 0..200),
    ) {
        let mode = [Mode::Ecb, Mode::Cbc, Mode::Cfb, Mode::Ofb, Mode::Ctr][mode_sel];
        let ks = key_schedule(Key64::new(key));
        let iv_arg = mode.needs_iv().then(|| Block64::new(iv));
        let padding = if mode.is_stream() { Padding::None } else { Padding::Bit };
        let cfg = ModeConfig::new(mode, iv_arg, padding).unwrap();
        let ct = encrypt_message(&msg, &cfg, &ks).unwrap();
        if mode.is_stream() {
            prop_assert_eq!(ct.len(), msg.len(), "stream modes never pad");
        }
        prop_assert_eq!(decrypt_message(&ct, &cfg, &ks).unwrap(), msg);
    }

    #[test]
    fn ecb_is_deterministic_per_block(key: u64, block in any::<[u8; 8]>(), reps in 2usize..5) {
        let ks = key_schedule(Key64::new(key));
        let cfg = ModeConfig::ecb(Padding::None);
        let msg: Vec<u8> = block.iter().copied().cycle().take(8 * reps).collect();
        let ct = encrypt_message(&msg, &cfg, &ks).unwrap();
        for chunk in ct.chunks(8) {
            prop_assert_eq!(chunk, &ct[..8]);
        }
    }

    #[test]
    fn changing_iv_changes_first_block(
        key: u64,
        iv_a: u64,
        iv_b: u64,
        mode_sel in 0usize..4,
        msg in prop::collection::vec(1u8..=255, 8..64),
    ) {
        prop_assume!(iv_a != iv_b);
        let mode = [Mode::Cbc, Mode::Cfb, Mode::Ofb, Mode::Ctr][mode_sel];
        let ks = key_schedule(Key64::new(key));
        let make = |iv| ModeConfig::new(mode, Some(Block64::new(iv)), Padding::None).unwrap();
        // trim to a whole number of blocks so CBC accepts it
        let msg = &msg[..msg.len() - msg.len() % 8];
        let ct_a = encrypt_message(msg, &make(iv_a), &ks).unwrap();
        let ct_b = encrypt_message(msg, &make(iv_b), &ks).unwrap();
        prop_assert_ne!(&ct_a[..8], &ct_b[..8]);
    }

    #[test]
    fn ofb_keystream_ignores_plaintext(
        key: u64,
        iv: u64,
        m1 in prop::collection::vec(any::<u8>(), 1..100),
        m2 in prop::collection::vec(any::<u8>(), 1..100),
    ) {
        let ks = key_schedule(Key64::new(key));
        let cfg = ModeConfig::new(Mode::Ofb, Some(Block64::new(iv)), Padding::None).unwrap();
        let c1 = encrypt_message(&m1, &cfg, &ks).unwrap();
        let c2 = encrypt_message(&m2, &cfg, &ks).unwrap();
        let n = m1.len().min(m2.len());
        for i in 0..n {
            prop_assert_eq!(c1[i] ^ c2[i], m1[i] ^ m2[i]);
        }
    }

    #[test]
    fn tdea_round_trips_and_collapses(k1: u64, k2: u64, k3: u64, block: u64) {
        let block = Block64::new(block);
        let tks = TripleKeySchedule::from_keys(Key64::new(k1), Key64::new(k2), Key64::new(k3));
        prop_assert_eq!(ede_decrypt(ede_encrypt(block, &tks), &tks), block);

        let one = TripleKeySchedule::one_key(Key64::new(k1));
        let ks = key_schedule(Key64::new(k1));
        prop_assert_eq!(ede_encrypt(block, &one), encrypt_block(block, &ks));
    }

    #[test]
    fn sdes_round_trips_and_brute_force_is_sound(key in 0u16..1024, pts: [u8; 3]) {
        let key = SdesKey10::new(key);
        let pairs: Vec<_> = pts
            .iter()
            .map(|&p| (SdesBlock8::new(p), sdes::encrypt(SdesBlock8::new(p), key)))
            .collect();
        for &(pt, ct) in &pairs {
            prop_assert_eq!(sdes::decrypt(ct, key), pt);
        }
        prop_assert!(sdes::brute_force(&pairs).contains(&key));
    }

    #[test]
    fn unpad_rejects_markerless_data(msg in prop::collection::vec(any::<u8>(), 8..64)) {
        let mut msg = msg;
        let len = msg.len() - msg.len() % 8;
        msg.truncate(len);
        if let Some(last) = msg.last_mut() {
            *last = 0x01; // trailing byte that is neither 0x00 nor 0x80
        }
        prop_assert!(unpad(&msg).is_err());
    }
}
