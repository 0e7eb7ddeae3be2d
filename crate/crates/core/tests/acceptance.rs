//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use flashvault::ace::ecdsa::{Curve, EcdsaKey};
use flashvault::ace::rsa::{RsaKey, RsaPadding};
use flashvault::ace::{keccak, sha2, SchemeId, Verdict};
use flashvault::bce::{decrypt_block, encrypt_block, load_cipher, CipherId};
use flashvault::bench::{overhead_averages, Bench, BenchConfig, MatrixRows, OverheadRow, ReportRow, Scenario, ScenarioKind, BOOT_BOUND_MS};
use flashvault::budget::{program_power, round2, BudgetData, PowerParams};
use flashvault::datapath::LimbInt;
use flashvault::keys::{puf_response, Challenge, PufParams, RoPufInstance};
use flashvault::reliability::{gdbf_decode, gdbf_decode_with, inject_errors, ldpc_encode, ChannelModel, FlipSchedule, QcLdpcCode, DEFAULT_MAX_ITER};
use flashvault::ssd::Placement;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ::sha2::Digest as _;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn h(s: &str) -> Vec<u8> {
    hex::decode(s).unwrap()
}

fn cipher_kats() -> Outcome {
    let kats: &[(CipherId, &str, &str, &str)] = &[
        (CipherId::Aes, "000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff", "69c4e0d86a7b0430d8cdb78070b4c55a"),
        (CipherId::Aes, "000102030405060708090a0b0c0d0e0f1011121314151617", "00112233445566778899aabbccddeeff", "dda97ca4864cdfe06eaf70a0ec0d7191"),
        (
            CipherId::Aes,
            "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
            "00112233445566778899aabbccddeeff",
            "8ea2b7ca516745bfeafc49904b496089",
        ),
        (CipherId::Sm4, "0123456789abcdeffedcba9876543210", "0123456789abcdeffedcba9876543210", "681edf34d206965e86b3e94f536e4246"),
        (CipherId::Camellia, "0123456789abcdeffedcba9876543210", "0123456789abcdeffedcba9876543210", "67673138549669730857065648eabe43"),
        (CipherId::Idea, "00010002000300040005000600070008", "0000000100020003", "11fbed2b01986de5"),
        (CipherId::Hight, "00112233445566778899aabbccddeeff", "0000000000000000", "00f418aed94f03f2"),
        (CipherId::Hight, "000102030405060708090a0b0c0d0e0f", "0123456789abcdef", "7a6fb2a28d23f466"),
        (CipherId::Tdes, "133457799bbcdff1133457799bbcdff1133457799bbcdff1", "0123456789abcdef", "85e813540f0ab405"),
        (CipherId::Serpent, "00000000000000000000000000000000", "00000000000000000000000000000000", "3620b17ae6a993d09618b8768266bae9"),
    ];
    for &(id, key, pt, ct) in kats {
        let (_, st) = load_cipher(id, &h(key)).map_err(|e| e.to_string())?;
        let (c, _) = encrypt_block(&st, &h(pt)).map_err(|e| e.to_string())?;
        ensure!(hex::encode(&c) == ct, "{id} vector: got {}", hex::encode(&c));
        ensure!(decrypt_block(&st, &c).map_err(|e| e.to_string())?.0 == h(pt), "{id} vector decrypt");
    }
    Ok(format!("{} cipher vectors", kats.len()))
}

fn against<C: KeyInit + BlockEncrypt + BlockDecrypt>(id: CipherId, key_len: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..n {
        let mut key = vec![0u8; key_len];
        rng.fill_bytes(&mut key);
        let oracle = C::new_from_slice(&key).unwrap();
        let (_, st) = load_cipher(id, &key).map_err(|e| e.to_string())?;
        let mut pt = vec![0u8; id.block_bytes()];
        rng.fill_bytes(&mut pt);
        let (ct, _) = encrypt_block(&st, &pt).map_err(|e| e.to_string())?;
        let mut expect = GenericArray::clone_from_slice(&pt);
        oracle.encrypt_block(&mut expect);
        ensure!(ct == expect.as_slice(), "{id} differs from the reference");
        ensure!(decrypt_block(&st, &ct).map_err(|e| e.to_string())?.0 == pt, "{id} round trip");
    }
    Ok(())
}

fn crypto_exactness() -> Outcome {
    let started = Instant::now();
    let mut notes = vec![cipher_kats()?];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    against::<aes::Aes128>(CipherId::Aes, 16, 1000, &mut rng)?;
    against::<aes::Aes256>(CipherId::Aes, 32, 1000, &mut rng)?;
    against::<des::TdesEde3>(CipherId::Tdes, 24, 1000, &mut rng)?;
    against::<idea::Idea>(CipherId::Idea, 16, 1000, &mut rng)?;
    against::<serpent::Serpent>(CipherId::Serpent, 32, 1000, &mut rng)?;
    against::<sm4::Sm4>(CipherId::Sm4, 16, 1000, &mut rng)?;
    against::<camellia::Camellia128>(CipherId::Camellia, 16, 1000, &mut rng)?;
    for id in CipherId::ALL {
        let mut key = vec![0u8; id.key_lengths()[0]];
        rng.fill_bytes(&mut key);
        let (_, st) = load_cipher(id, &key).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let mut pt = vec![0u8; id.block_bytes()];
            rng.fill_bytes(&mut pt);
            let (ct, _) = encrypt_block(&st, &pt).map_err(|e| e.to_string())?;
            ensure!(decrypt_block(&st, &ct).map_err(|e| e.to_string())?.0 == pt, "{id} round trip");
        }
    }

    ensure!(
        hex::encode(sha2::sha256(b"abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad",
        "SHA-256 vector"
    );
    ensure!(
        hex::encode(sha2::sha512(b"abc"))
            == "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f",
        "SHA-512 vector"
    );
    let mut state = [0u64; 25];
    keccak::keccak_f1600(&mut state);
    ensure!(state[0] == 0xF1258F7940E1DDE7, "Keccak-f zero-state vector");
    ensure!(
        hex::encode(keccak::sha3_256(b"")) == "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a",
        "SHA3-256 vector"
    );
    for _ in 0..1000 {
        let mut m = vec![0u8; rng.gen_range(0..600)];
        rng.fill_bytes(&mut m);
        ensure!(sha2::sha256(&m).as_slice() == ::sha2::Sha256::digest(&m).as_slice(), "SHA-256 mismatch");
        ensure!(sha2::sha512(&m).as_slice() == ::sha2::Sha512::digest(&m).as_slice(), "SHA-512 mismatch");
        ensure!(keccak::sha3_256(&m).as_slice() == ::sha3::Sha3_256::digest(&m).as_slice(), "SHA3-256 mismatch");
        let mut a: [u64; 25] = std::array::from_fn(|_| rng.gen());
        let mut b = a;
        keccak::keccak_f1600(&mut a);
        ::keccak::f1600(&mut b);
        ensure!(a == b, "Keccak-f mismatch");
    }
    notes.push("1000 hash comparisons".into());

    let toy = RsaKey::from_components(LimbInt::from_u64(3233), LimbInt::from_u64(17), LimbInt::from_u64(2753)).map_err(|e| e.to_string())?;
    let (sig, _) = toy.sign(&[0x0a, 0xe6], RsaPadding::Raw).map_err(|e| e.to_string())?;
    ensure!(LimbInt::from_be_bytes(&sig).low_u64() == 65, "toy RSA: 2790^d mod 3233 should be 65");
    let rsa = RsaKey::generate(2048, &mut rng);
    ensure!(rsa.modulus().bits() == 2048, "RSA modulus size");
    for i in 0..1000 {
        let digest: [u8; 32] = rng.gen();
        let (sig, _) = rsa.sign(&digest, RsaPadding::FullDomain).map_err(|e| e.to_string())?;
        let verdict = rsa.verify(&digest, &sig, RsaPadding::FullDomain).map_err(|e| e.to_string())?.0;
        ensure!(verdict == Verdict::Accept, "RSA-2048 trip {i}");
    }
    notes.push("1000 RSA-2048 round trips".into());

    let p256 = EcdsaKey::from_secret(Curve::P256, &h("519b423d715f8b581f4fa8ee59f4771a5b44c8130b4e3eacca54a56dda72b464")).map_err(|e| e.to_string())?;
    let k = LimbInt::from_be_bytes(&h("94a1bbb14b906a61a280f245f9e93c7f3b4a6247824f5d33b9670787642a68de"));
    let (sig, _) = p256.sign_with_nonce(&h("44acf6b7e36c1342c2c5897204fe09504e1e2efb1a900377dbc4e7a6a133ec56"), &k).map_err(|e| e.to_string())?;
    let sig = sig.ok_or("P-256 vector produced no signature")?;
    ensure!(
        hex::encode(sig.r.to_be_bytes_padded(32).unwrap()) == "f3ac8061b514795b8843e3d6629527ed2afd6b1f6a555a7acabb5e6f79c8c2ac",
        "P-256 vector r"
    );
    ensure!(
        hex::encode(sig.s.to_be_bytes_padded(32).unwrap()) == "8bf77819ca05a6b2786c76262bf7371cef97b218e96f175a3ccdda2acc058903",
        "P-256 vector s"
    );
    let p384 = EcdsaKey::from_secret(
        Curve::P384,
        &h("201b432d8df14324182d6261db3e4b3f46a8284482d52e370da41e6cbdf45ec2952f5db7ccbce3bc29449f4fb080ac97"),
    )
    .map_err(|e| e.to_string())?;
    let k = LimbInt::from_be_bytes(&h("dcedabf85978e090f733c6e16646fa34df9ded6e5ce28c6676a00f58a25283db8885e16ce5bf97f917c81e1f25c9c771"));
    let m = h("31a452d6164d904bb5724c878280231eae705c29ce9d4bc7d58e020e1085f17eebcc1a38f0ed0bf2b344d81fbd896825");
    let (sig, _) = p384.sign_with_nonce(&m, &k).map_err(|e| e.to_string())?;
    let sig = sig.ok_or("P-384 vector produced no signature")?;
    ensure!(
        hex::encode(sig.r.to_be_bytes_padded(48).unwrap())
            == "50835a9251bad008106177ef004b091a1e4235cd0da84fff54542b0ed755c1d6f251609d14ecf18f9e1ddfe69b946e32",
        "P-384 vector r"
    );
    for curve in [Curve::P256, Curve::P384] {
        let key = EcdsaKey::from_seed(curve, rng.gen());
        for i in 0..1000u64 {
            let mut digest = vec![0u8; curve.scalar_bytes()];
            rng.fill_bytes(&mut digest);
            let (sig, _) = key.sign(&digest, i).map_err(|e| e.to_string())?;
            ensure!(key.verify(&digest, &sig).0 == Verdict::Accept, "{curve:?} trip {i}");
        }
    }
    notes.push("2x1000 ECDSA round trips".into());
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    notes.push(format!("{:.1} s", elapsed.as_secs_f64()));
    Ok(notes.join(", "))
}

fn budget() -> Outcome {
    let p = PowerParams { i_program_ma: 13.8, v_max: 3.6, efficiency_gain: 0.0 };
    let before = round2(program_power(&p).map_err(|e| e.to_string())?);
    let after = round2(program_power(&PowerParams { efficiency_gain: 0.16, ..p }).map_err(|e| e.to_string())?);
    ensure!((before - 49.68).abs() < 1e-9 && (after - 41.73).abs() < 1e-9, "power {before} then {after}");
    let n = BudgetData::shipped().plan("text").map_err(|e| e.to_string())?.count.n;
    ensure!(n == 2, "N = {n}");
    Ok(format!("{before} mW then {after} mW, N = {n}"))
}

fn cells(rows: &[ReportRow]) -> BTreeMap<(ScenarioKind, String, String, u64), BTreeMap<Placement, f64>> {
    let mut out: BTreeMap<_, BTreeMap<Placement, f64>> = BTreeMap::new();
    for r in rows {
        out.entry((r.scenario, r.operation.clone(), r.algorithm.clone(), r.size)).or_default().insert(r.placement, r.total_ms);
    }
    out
}

fn placement_envelope(rows: &[ReportRow]) -> Outcome {
    let cells = cells(rows);
    let (mut cpu_in, mut ncp_in) = (0, 0);
    for (key, t) in &cells {
        let (fv, ncp, cpu) = (t[&Placement::Fv], t[&Placement::Ncp], t[&Placement::Cpu]);
        ensure!(fv <= ncp && ncp <= cpu, "ordering broken at {key:?}: {fv} / {ncp} / {cpu}");
        cpu_in += usize::from((1.46 * 0.75..=3.45 * 1.25).contains(&(cpu / fv)));
        ncp_in += usize::from((1.02 * 0.75..=2.01 * 1.25).contains(&(ncp / fv)));
    }
    let n = cells.len();
    ensure!(cpu_in * 5 >= n * 4 && ncp_in * 5 >= n * 4, "in envelope: CPU {cpu_in}/{n}, NCP {ncp_in}/{n}");
    Ok(format!("{n} cells ordered; CPU envelope {cpu_in}/{n}, NCP envelope {ncp_in}/{n}"))
}

fn boot_pattern(rows: &[ReportRow]) -> Outcome {
    const MIB: u64 = 1 << 20;
    let met = |p: Placement, size: u64| -> Vec<bool> {
        rows.iter().filter(|r| r.scenario == ScenarioKind::SecureBoot && r.placement == p && r.size == size).map(|r| r.total_ms <= BOOT_BOUND_MS).collect()
    };
    let (fv10, fv15) = (met(Placement::Fv, 10 * MIB), met(Placement::Fv, 15 * MIB));
    ensure!(fv10.len() == 5 && fv15.len() == 5, "expected five schemes per size");
    ensure!(fv10.iter().chain(&fv15).all(|&m| m), "FV misses the bound");
    ensure!(met(Placement::Ncp, 10 * MIB).iter().all(|&m| m), "NCP misses the bound at 10 MB");
    let ncp15 = met(Placement::Ncp, 15 * MIB).iter().filter(|&&m| !m).count();
    ensure!(ncp15 >= 1, "NCP meets the bound at 15 MB for every scheme");
    ensure!(met(Placement::Cpu, 10 * MIB).iter().chain(&met(Placement::Cpu, 15 * MIB)).all(|&m| !m), "CPU meets the bound somewhere");
    Ok(format!("FV meets both sizes, NCP violates 15 MB for {ncp15}/5, CPU violates both"))
}

fn log_pattern(rows: &[ReportRow]) -> Outcome {
    let fv: Vec<&ReportRow> = rows.iter().filter(|r| r.scenario == ScenarioKind::TamperLog && r.placement == Placement::Fv).collect();
    ensure!(!fv.is_empty(), "no tamper-log rows");
    let mut worst = 0.0f64;
    for r in &fv {
        let scheme: SchemeId = r.algorithm.parse().map_err(|_| r.algorithm.clone())?;
        if SchemeId::PQC.contains(&scheme) {
            ensure!(r.total_ms <= 15.0, "{} {} B takes {:.3} ms", r.algorithm, r.size, r.total_ms);
        }
        if scheme == SchemeId::SphincsPlus {
            ensure!(r.total_ms > 2.0, "SPHINCS+ meets 2 ms at {} B", r.size);
        } else {
            ensure!(r.total_ms <= 2.0, "{} {} B takes {:.3} ms", r.algorithm, r.size, r.total_ms);
            worst = worst.max(r.total_ms);
        }
    }
    Ok(format!("others within 2 ms (worst {worst:.3} ms), SPHINCS+ only within 15 ms"))
}

fn overhead_targets(rows: &[OverheadRow]) -> Outcome {
    let targets = [("Program", 46.1), ("Read", 79.3), ("Verify", 3.6), ("Sign", 127.6)];
    let avg: BTreeMap<String, f64> = overhead_averages(rows).into_iter().collect();
    let mut notes = Vec::new();
    for (w, target) in targets {
        let got = *avg.get(w).ok_or(format!("no {w} rows"))?;
        ensure!((got - target).abs() <= 15.0, "{w} average {got:.1}% vs {target}%");
        notes.push(format!("{w} {got:.1}%"));
    }
    let signs: Vec<&OverheadRow> = rows.iter().filter(|r| r.workload == "Sign").collect();
    let min = signs.iter().min_by(|a, b| a.overhead_pct().total_cmp(&b.overhead_pct())).ok_or("no Sign rows")?;
    ensure!(min.algorithm == SchemeId::SphincsPlus.name(), "lowest signing overhead is {}", min.algorithm);
    notes.push(format!("SPHINCS+ sign {:.1}% lowest", min.overhead_pct()));
    Ok(notes.join(", "))
}

fn ldpc() -> Outcome {
    let started = Instant::now();
    let page = QcLdpcCode::page(1);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let mut data = vec![0u8; 4096];
        rng.fill_bytes(&mut data);
        let cw = ldpc_encode(&data, &page).map_err(|e| e.to_string())?;
        let r = gdbf_decode(&cw, &page, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        ensure!(r.data.as_deref() == Some(data.as_slice()), "noiseless frame not recovered");
    }
    let toy = QcLdpcCode::toy();
    let mut data = vec![0u8; toy.k() / 8];
    rng.fill_bytes(&mut data);
    let cw = ldpc_encode(&data, &toy).map_err(|e| e.to_string())?;
    for pos in 0..toy.n() {
        let mut r = cw.clone();
        r[pos] ^= 1;
        let out = gdbf_decode_with(&r, &toy, DEFAULT_MAX_ITER, FlipSchedule::Global).map_err(|e| e.to_string())?;
        ensure!(out.codeword == cw, "toy code misses single error at {pos}");
    }
    let channel = ChannelModel::new(1e-3, 0).map_err(|e| e.to_string())?;
    let mut ok = 0;
    for frame in 0..1000u64 {
        let mut data = vec![0u8; 4096];
        rng.fill_bytes(&mut data);
        let cw = ldpc_encode(&data, &page).map_err(|e| e.to_string())?;
        let r = gdbf_decode(&inject_errors(&cw, &channel.with_seed(frame)), &page, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        ok += usize::from(r.data.as_deref() == Some(data.as_slice()));
    }
    ensure!(ok >= 990, "{ok}/1000 frames at raw BER 1e-3");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    Ok(format!("identity 1000/1000, toy {} single errors, {ok}/1000 frames at 1e-3, {:.1} s", toy.n(), elapsed.as_secs_f64()))
}

fn primitive_audit() -> Outcome {
    for id in CipherId::ALL {
        for &klen in id.key_lengths() {
            let (prog, _) = load_cipher(id, &vec![0xA5; klen]).map_err(|e| e.to_string())?;
            ensure!(prog.primitives_used() == id.required_primitives(), "{id} with {klen}-byte key executes {:?}", prog.primitives_used());
        }
    }
    Ok(format!("{} ciphers match their primitive rows", CipherId::ALL.len()))
}

fn puf_statistics() -> Outcome {
    let c = Challenge::disjoint(256);
    let responses: Vec<Vec<u8>> = (0..100).map(|s| puf_response(&RoPufInstance::new(5000 + s, PufParams::default()), &c).unwrap()).collect();
    let mut total = 0.0;
    let mut pairs = 0;
    for i in 0..responses.len() {
        for j in i + 1..responses.len() {
            let d: u32 = responses[i].iter().zip(&responses[j]).map(|(a, b)| (a ^ b).count_ones()).sum();
            total += f64::from(d) / 256.0;
            pairs += 1;
        }
    }
    let mean = total / f64::from(pairs);
    ensure!((0.45..=0.55).contains(&mean), "inter-chip mean {mean:.4}");
    let chip = RoPufInstance::new(5000, PufParams::default());
    let first = chip.measure(&c, 0).map_err(|e| e.to_string())?;
    for read in 1..=20 {
        ensure!(chip.measure(&c, read).map_err(|e| e.to_string())? == first, "noiseless re-read differs");
    }
    ensure!(puf_response(&chip, &c).map_err(|e| e.to_string())? == responses[0], "response differs across instances");
    Ok(format!("inter-chip mean {mean:.4} over {pairs} pairs, intra-chip 0"))
}

struct Matrix {
    latency: Vec<ReportRow>,
    overhead: Vec<OverheadRow>,
    files: Vec<(String, Vec<u8>)>,
}

fn full_matrix(dir: &Path) -> Result<Matrix, String> {
    let bench = Bench::new(BenchConfig::default()).map_err(|e| e.to_string())?;
    let mut m = Matrix { latency: Vec::new(), overhead: Vec::new(), files: Vec::new() };
    for kind in [ScenarioKind::BulkCipher, ScenarioKind::SecureBoot, ScenarioKind::TamperLog, ScenarioKind::FtlOverhead] {
        let report = bench.run_matrix(&Scenario::preset(kind), dir).map_err(|e| e.to_string())?;
        m.files.push((kind.name().to_string(), std::fs::read(&report.csv).map_err(|e| e.to_string())?));
        match report.rows {
            MatrixRows::Latency(rows) => m.latency.extend(rows),
            MatrixRows::Overhead(rows) => m.overhead.extend(rows),
        }
    }
    Ok(m)
}

fn determinism(a: &Matrix, b: &Matrix) -> Outcome {
    ensure!(a.files.len() == b.files.len(), "different file sets");
    for ((name, x), (_, y)) in a.files.iter().zip(&b.files) {
        ensure!(x == y, "{name}.csv differs between runs");
    }
    let bytes: usize = a.files.iter().map(|f| f.1.len()).sum();
    Ok(format!("{} CSV files, {bytes} bytes, identical", a.files.len()))
}

fn report(n: usize, name: &str, outcome: &Outcome) {
    match outcome {
        Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
        Err(why) => println!("FAIL {n:>2} {name}: {why}"),
    }
}

fn guarded(f: impl FnOnce() -> Outcome + std::panic::UnwindSafe) -> Outcome {
    std::panic::catch_unwind(f).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn main() {
    let root = std::env::temp_dir().join(format!("flashvault-acceptance-{}", std::process::id()));
    let (a_dir, b_dir) = (root.join("a"), root.join("b"));
    let crypto = guarded(crypto_exactness);
    let reliability = guarded(ldpc);
    let first = full_matrix(&a_dir);
    let second = full_matrix(&b_dir);
    let _ = std::fs::remove_dir_all(&root);

    let on_matrix = |f: &dyn Fn(&Matrix) -> Outcome| first.as_ref().map_err(Clone::clone).and_then(f);
    let results = [
        ("crypto exactness", crypto),
        ("budget reproduction", guarded(budget)),
        ("placement ordering and speedups", on_matrix(&|m| placement_envelope(&m.latency))),
        ("secure boot bounds", on_matrix(&|m| boot_pattern(&m.latency))),
        ("tamper-log bounds", on_matrix(&|m| log_pattern(&m.latency))),
        ("steady-state overheads", on_matrix(&|m| overhead_targets(&m.overhead))),
        ("LDPC properties", reliability),
        (
            "determinism",
            match (&first, &second) {
                (Ok(a), Ok(b)) => determinism(a, b),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            },
        ),
        ("primitive audit", guarded(primitive_audit)),
        ("PUF statistics", guarded(puf_statistics)),
    ];
    for (i, (name, outcome)) in results.iter().enumerate() {
        report(i + 1, name, outcome);
    }
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, r)| r.1.is_err()).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
