use lis_core::ciphers::{cipher_registry, CipherKind};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_bytes(rng: &mut impl RngCore, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    rng.fill_bytes(&mut v);
    v
}

#[test]
fn roundtrip_ten_thousand_cases_each() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for spec in cipher_registry() {
        for _ in 0..10_000 {
            let key = random_bytes(&mut rng, spec.key_bytes());
            let pt = random_bytes(&mut rng, spec.block_bytes());
            let cipher = spec.kind.with_key(&key).unwrap();
            let ct = cipher.encrypt_block(&pt).unwrap();
            assert_eq!(cipher.decrypt_block(&ct).unwrap(), pt, "{}", spec.name);
        }
    }
}

#[test]
fn avalanche_smoke() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for spec in cipher_registry() {
        let trials = 1000;
        let mut flipped_bits = 0u64;
        for _ in 0..trials {
            let key = random_bytes(&mut rng, spec.key_bytes());
            let cipher = spec.kind.with_key(&key).unwrap();
            let pt = random_bytes(&mut rng, spec.block_bytes());
            let mut pt2 = pt.clone();
            let bit = rng.gen_range(0..spec.block_bits);
            pt2[bit / 8] ^= 1 << (bit % 8);
            let a = cipher.encrypt_block(&pt).unwrap();
            let b = cipher.encrypt_block(&pt2).unwrap();
            flipped_bits += a.iter().zip(&b).map(|(x, y)| (x ^ y).count_ones() as u64).sum::<u64>();
        }
        let mean_fraction = flipped_bits as f64 / (trials as f64 * spec.block_bits as f64);
        assert!(mean_fraction >= 0.25, "{}: {mean_fraction}", spec.name);
    }
}

#[test]
fn katan32_is_injective_on_restricted_domain() {
    let cipher = CipherKind::Katan32.with_key(&[0x3c; 10]).unwrap();
    let mut seen = std::collections::HashSet::with_capacity(1 << 16);
    for p in 0u32..1 << 16 {
        let ct = cipher.encrypt_block(&p.to_be_bytes()).unwrap();
        assert!(seen.insert(ct), "collision at plaintext {p:#x}");
    }
}

#[test]
fn instances_are_shareable_across_threads() {
    let cipher = std::sync::Arc::new(CipherKind::Hight.with_key(&[7; 16]).unwrap());
    let expected = cipher.encrypt_block(&[1; 8]).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let c = cipher.clone();
            std::thread::spawn(move || c.encrypt_block(&[1; 8]).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), expected);
    }
}
