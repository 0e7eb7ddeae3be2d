use flashvault::reliability::{
    bytes_to_bits, gdbf_decode, gdbf_decode_with, inject_errors, ldpc_encode, ChannelModel, FlipSchedule, QcLdpcCode,
    DEFAULT_MAX_ITER,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense parity check straight from the shift table.
fn dense_syndrome(code: &QcLdpcCode, bits: &[u8]) -> Vec<u8> {
    let z = code.z();
    let mut out = vec![0u8; code.checks()];
    for i in 0..code.block_rows() {
        for j in 0..code.block_cols() {
            let Some(s) = code.shift(i, j) else { continue };
            for r in 0..z {
                for c in 0..z {
                    let h = u8::from(c == (r + s as usize) % z);
                    out[i * z + r] ^= h & bits[j * z + c];
                }
            }
        }
    }
    out
}

#[test]
fn page_code_dimensions() {
    let code = QcLdpcCode::page(1);
    assert_eq!(code.k(), 4096 * 8);
    assert_eq!(code.z(), 128);
    assert!((code.rate() - 0.88).abs() < 1.0 / code.block_cols() as f64);
    assert!(!code.has_four_cycles());
    assert!(!QcLdpcCode::toy().has_four_cycles());
    assert_eq!(QcLdpcCode::toy().n(), 64);
}

#[test]
fn encoder_output_satisfies_dense_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for code in [QcLdpcCode::toy(), QcLdpcCode::generate(16, 12, 4, 3, 3).unwrap()] {
        assert!(ldpc_encode(&vec![0; code.k() / 8], &code).unwrap().iter().all(|&b| b == 0));
        for _ in 0..50 {
            let mut data = vec![0u8; code.k() / 8];
            rng.fill_bytes(&mut data);
            let cw = ldpc_encode(&data, &code).unwrap();
            assert!(dense_syndrome(&code, &cw).iter().all(|&s| s == 0));
            assert_eq!(&cw[..code.k()], bytes_to_bits(&data).as_slice());
        }
    }
    let page = QcLdpcCode::page(1);
    let mut data = vec![0u8; 4096];
    rng.fill_bytes(&mut data);
    assert!(page.is_codeword(&ldpc_encode(&data, &page).unwrap()));
    assert!(ldpc_encode(&[0; 10], &page).is_err());
}

#[test]
fn zero_noise_decodes_without_flipping() {
    let code = QcLdpcCode::page(1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let mut data = vec![0u8; 4096];
        rng.fill_bytes(&mut data);
        let cw = ldpc_encode(&data, &code).unwrap();
        let r = gdbf_decode(&cw, &code, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(r.data.as_deref(), Some(data.as_slice()));
        assert_eq!((r.iterations_used, r.bits_flipped), (0, 0));
    }
}

#[test]
fn every_single_bit_error_is_corrected_on_the_toy_code() {
    let code = QcLdpcCode::toy();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for schedule in [FlipSchedule::Global, FlipSchedule::PerCirculant] {
        for _ in 0..8 {
            let mut data = vec![0u8; code.k() / 8];
            rng.fill_bytes(&mut data);
            let cw = ldpc_encode(&data, &code).unwrap();
            for pos in 0..code.n() {
                let mut r = cw.clone();
                r[pos] ^= 1;
                let out = gdbf_decode_with(&r, &code, DEFAULT_MAX_ITER, schedule).unwrap();
                assert_eq!(out.codeword, cw, "{schedule:?} position {pos}");
                assert_eq!(out.data.as_deref(), Some(data.as_slice()));
            }
        }
    }
}

#[test]
fn saturated_noise_fails_after_max_iter() {
    let code = QcLdpcCode::page(1);
    let cw = ldpc_encode(&vec![0x3C; 4096], &code).unwrap();
    let noisy = inject_errors(&cw, &ChannelModel::new(0.3, 4).unwrap());
    let r = gdbf_decode(&noisy, &code, 5).unwrap();
    assert!(!r.succeeded());
    assert_eq!(r.iterations_used, 5);
}

#[test]
fn decoding_is_replayable() {
    let code = QcLdpcCode::page(1);
    let cw = ldpc_encode(&vec![0xA5; 4096], &code).unwrap();
    let noisy = inject_errors(&cw, &ChannelModel::new(2e-3, 5).unwrap());
    assert_eq!(gdbf_decode(&noisy, &code, 30).unwrap(), gdbf_decode(&noisy, &code, 30).unwrap());
}

#[test]
fn channel_contract() {
    let bits = vec![1u8, 0, 1, 1, 0, 0, 1, 0];
    assert_eq!(inject_errors(&bits, &ChannelModel::new(0.0, 1).unwrap()), bits);
    assert!(ChannelModel::new(1.0, 1).is_err());
    assert!(ChannelModel::new(0.5, 1).is_err());
    assert!(ChannelModel::new(-0.1, 1).is_err());
    let long = vec![0u8; 100_000];
    let ch = ChannelModel::new(0.01, 9).unwrap();
    let a = inject_errors(&long, &ch);
    assert_eq!(a, inject_errors(&long, &ch));
    let flips = a.iter().filter(|&&b| b == 1).count();
    assert!((800..1200).contains(&flips), "{flips}");
}

#[test]
fn shift_table_round_trips() {
    let code = QcLdpcCode::page(1);
    let text = code.to_shift_table();
    assert_eq!(QcLdpcCode::from_shift_table(&text).unwrap(), code);
    assert!(QcLdpcCode::from_shift_table("qc-ldpc z=8 rows=3 cols=8 data_cols=5\n0:1\n").is_err());
    let broken = text.replacen("qc-ldpc", "ldpc", 1);
    assert!(QcLdpcCode::from_shift_table(&broken).is_err());
}

#[test]
fn page_frames_at_raw_ber_1e3() {
    let code = QcLdpcCode::page(1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let channel = ChannelModel::new(1e-3, 0).unwrap();
    let mut ok = 0;
    let mut iters = 0;
    for frame in 0..1000u64 {
        let mut data = vec![0u8; 4096];
        rng.fill_bytes(&mut data);
        let cw = ldpc_encode(&data, &code).unwrap();
        let r = gdbf_decode(&inject_errors(&cw, &channel.with_seed(frame)), &code, DEFAULT_MAX_ITER).unwrap();
        iters = iters.max(r.iterations_used);
        if r.data.as_deref() == Some(data.as_slice()) {
            ok += 1;
        }
    }
    eprintln!("frames ok {ok}/1000, worst iterations {iters}");
    assert!(ok >= 990);
}
