use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use flashvault::bce::{decrypt_block, encrypt_block, load_cipher, CipherId};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(s: &str) -> Vec<u8> {
    hex::decode(s).unwrap()
}

fn kat(id: CipherId, key: &str, pt: &str, ct: &str) {
    let (_, st) = load_cipher(id, &h(key)).unwrap();
    let (c, _) = encrypt_block(&st, &h(pt)).unwrap();
    assert_eq!(hex::encode(&c), ct.to_lowercase(), "{id} encrypt");
    let (p, _) = decrypt_block(&st, &c).unwrap();
    assert_eq!(hex::encode(&p), pt.to_lowercase(), "{id} decrypt");
}

#[test]
fn aes_published_vectors() {
    let pt = "00112233445566778899aabbccddeeff";
    kat(CipherId::Aes, "000102030405060708090a0b0c0d0e0f", pt, "69c4e0d86a7b0430d8cdb78070b4c55a");
    kat(CipherId::Aes, "000102030405060708090a0b0c0d0e0f1011121314151617", pt, "dda97ca4864cdfe06eaf70a0ec0d7191");
    kat(
        CipherId::Aes,
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
        pt,
        "8ea2b7ca516745bfeafc49904b496089",
    );
}

#[test]
fn sm4_published_vector() {
    let v = "0123456789abcdeffedcba9876543210";
    kat(CipherId::Sm4, v, v, "681edf34d206965e86b3e94f536e4246");
}

#[test]
fn camellia_published_vectors() {
    let pt = "0123456789abcdeffedcba9876543210";
    kat(CipherId::Camellia, pt, pt, "67673138549669730857065648eabe43");
    kat(CipherId::Camellia, "0123456789abcdeffedcba98765432100011223344556677", pt, "b4993401b3e996f84ee5cee7d79b09b9");
    kat(
        CipherId::Camellia,
        "0123456789abcdeffedcba987654321000112233445566778899aabbccddeeff",
        pt,
        "9acc237dff16d76c20ef7c919e3a7509",
    );
}

#[test]
fn idea_published_vector() {
    kat(CipherId::Idea, "00010002000300040005000600070008", "0000000100020003", "11fbed2b01986de5");
}

#[test]
fn hight_published_vectors() {
    kat(CipherId::Hight, "00112233445566778899aabbccddeeff", "0000000000000000", "00f418aed94f03f2");
    kat(CipherId::Hight, "ffeeddccbbaa99887766554433221100", "0011223344556677", "23ce9f72e543e6d8");
    kat(CipherId::Hight, "000102030405060708090a0b0c0d0e0f", "0123456789abcdef", "7a6fb2a28d23f466");
    kat(CipherId::Hight, "28dbc3bc49ffd87dcfa509b11d422be7", "b41e6be2eba84a14", "cc047a75209c1fc6");
}

#[test]
fn tdes_degenerate_key_matches_single_des() {
    // With K1 = K2 = K3 the EDE construction collapses to single DES.
    kat(
        CipherId::Tdes,
        "133457799bbcdff1133457799bbcdff1133457799bbcdff1",
        "0123456789abcdef",
        "85e813540f0ab405",
    );
}

/// Compares against an independent implementation on random keys and blocks.
fn cross_check<C>(id: CipherId, key_len: usize, trials: usize)
where
    C: KeyInit + BlockEncrypt + BlockDecrypt,
{
    let mut rng = ChaCha8Rng::seed_from_u64(id as u64 + 100 * key_len as u64);
    let bb = id.block_bytes();
    for _ in 0..trials {
        let mut key = vec![0u8; key_len];
        rng.fill_bytes(&mut key);
        let oracle = C::new_from_slice(&key).unwrap();
        let (_, st) = load_cipher(id, &key).unwrap();
        let mut pt = vec![0u8; bb];
        rng.fill_bytes(&mut pt);
        let (ct, _) = encrypt_block(&st, &pt).unwrap();
        let mut expect = GenericArray::clone_from_slice(&pt);
        oracle.encrypt_block(&mut expect);
        assert_eq!(ct, expect.as_slice(), "{id} key {}", hex::encode(&key));
        let mut back = expect.clone();
        oracle.decrypt_block(&mut back);
        assert_eq!(decrypt_block(&st, &ct).unwrap().0, back.as_slice());
    }
}

#[test]
fn matches_reference_implementations() {
    cross_check::<aes::Aes128>(CipherId::Aes, 16, 200);
    cross_check::<aes::Aes192>(CipherId::Aes, 24, 100);
    cross_check::<aes::Aes256>(CipherId::Aes, 32, 100);
    cross_check::<des::TdesEde3>(CipherId::Tdes, 24, 200);
    cross_check::<des::TdesEde2>(CipherId::Tdes, 16, 100);
    cross_check::<idea::Idea>(CipherId::Idea, 16, 200);
    cross_check::<serpent::Serpent>(CipherId::Serpent, 16, 200);
    cross_check::<serpent::Serpent>(CipherId::Serpent, 24, 100);
    cross_check::<serpent::Serpent>(CipherId::Serpent, 32, 100);
    cross_check::<sm4::Sm4>(CipherId::Sm4, 16, 200);
    cross_check::<camellia::Camellia128>(CipherId::Camellia, 16, 200);
    cross_check::<camellia::Camellia192>(CipherId::Camellia, 24, 100);
    cross_check::<camellia::Camellia256>(CipherId::Camellia, 32, 100);
}

#[test]
fn thousand_round_trips_per_cipher() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for id in CipherId::ALL {
        let klen = id.key_lengths()[rng.gen_range(0..id.key_lengths().len())];
        let mut key = vec![0u8; klen];
        rng.fill_bytes(&mut key);
        let (_, st) = load_cipher(id, &key).unwrap();
        for _ in 0..1000 {
            let mut pt = vec![0u8; id.block_bytes()];
            rng.fill_bytes(&mut pt);
            let (ct, _) = encrypt_block(&st, &pt).unwrap();
            assert_eq!(decrypt_block(&st, &ct).unwrap().0, pt, "{id}");
        }
    }
}

#[test]
fn microprograms_use_exactly_the_listed_primitives() {
    for id in CipherId::ALL {
        for &klen in id.key_lengths() {
            let (prog, _) = load_cipher(id, &vec![0x5Au8; klen]).unwrap();
            assert_eq!(prog.primitives_used(), id.required_primitives(), "{id} with {klen}-byte key");
        }
    }
}
