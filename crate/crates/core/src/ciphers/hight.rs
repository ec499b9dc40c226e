//! HIGHT: 128-bit key, 64-bit block, 32 rounds of an 8-branch generalized
//! Feistel network on bytes.
//!
//! Internally bytes are indexed least significant first (`P0..P7`,
//! `MK0..MK15`); on the wire the most significant byte comes first.

use super::BlockCipher;

const ROUNDS: usize = 32;

#[inline]
fn f0(x: u8) -> u8 {
    x.rotate_left(1) ^ x.rotate_left(2) ^ x.rotate_left(7)
}

#[inline]
fn f1(x: u8) -> u8 {
    x.rotate_left(3) ^ x.rotate_left(4) ^ x.rotate_left(6)
}

fn deltas() -> [u8; 128] {
    let mut d = [0u8; 128];
    d[0] = 0x5a;
    for i in 1..128 {
        let prev = d[i - 1];
        let bit = ((prev >> 3) ^ prev) & 1;
        d[i] = (prev >> 1) | (bit << 6);
    }
    d
}

pub struct Hight {
    whitening: [u8; 8],
    subkeys: [u8; 4 * ROUNDS],
}

impl Hight {
    pub fn new(key: &[u8; 16]) -> Self {
        let mut mk = [0u8; 16];
        for (i, b) in mk.iter_mut().enumerate() {
            *b = key[15 - i];
        }
        let mut whitening = [0u8; 8];
        whitening[..4].copy_from_slice(&mk[12..]);
        whitening[4..].copy_from_slice(&mk[..4]);
        let delta = deltas();
        let mut subkeys = [0u8; 4 * ROUNDS];
        for i in 0..8 {
            for j in 0..8 {
                let idx = 16 * i + j;
                subkeys[idx] = mk[(j + 8 - i) % 8].wrapping_add(delta[idx]);
                subkeys[idx + 8] = mk[(j + 8 - i) % 8 + 8].wrapping_add(delta[idx + 8]);
            }
        }
        Hight { whitening, subkeys }
    }
}

fn load(block: &[u8]) -> [u8; 8] {
    let mut x = [0u8; 8];
    for (i, b) in x.iter_mut().enumerate() {
        *b = block[7 - i];
    }
    x
}

fn store(x: &[u8; 8], block: &mut [u8]) {
    for (i, b) in x.iter().enumerate() {
        block[7 - i] = *b;
    }
}

impl BlockCipher for Hight {
    fn encrypt(&self, block: &mut [u8]) {
        let wk = &self.whitening;
        let sk = &self.subkeys;
        let mut x = load(block);
        x[0] = x[0].wrapping_add(wk[0]);
        x[2] ^= wk[1];
        x[4] = x[4].wrapping_add(wk[2]);
        x[6] ^= wk[3];

        for i in 0..ROUNDS - 1 {
            x = [
                x[7] ^ f0(x[6]).wrapping_add(sk[4 * i + 3]),
                x[0],
                x[1].wrapping_add(f1(x[0]) ^ sk[4 * i]),
                x[2],
                x[3] ^ f0(x[2]).wrapping_add(sk[4 * i + 1]),
                x[4],
                x[5].wrapping_add(f1(x[4]) ^ sk[4 * i + 2]),
                x[6],
            ];
        }
        let i = ROUNDS - 1;
        x[1] = x[1].wrapping_add(f1(x[0]) ^ sk[4 * i]);
        x[3] ^= f0(x[2]).wrapping_add(sk[4 * i + 1]);
        x[5] = x[5].wrapping_add(f1(x[4]) ^ sk[4 * i + 2]);
        x[7] ^= f0(x[6]).wrapping_add(sk[4 * i + 3]);

        x[0] = x[0].wrapping_add(wk[4]);
        x[2] ^= wk[5];
        x[4] = x[4].wrapping_add(wk[6]);
        x[6] ^= wk[7];
        store(&x, block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let wk = &self.whitening;
        let sk = &self.subkeys;
        let mut x = load(block);
        x[0] = x[0].wrapping_sub(wk[4]);
        x[2] ^= wk[5];
        x[4] = x[4].wrapping_sub(wk[6]);
        x[6] ^= wk[7];

        let i = ROUNDS - 1;
        x[1] = x[1].wrapping_sub(f1(x[0]) ^ sk[4 * i]);
        x[3] ^= f0(x[2]).wrapping_add(sk[4 * i + 1]);
        x[5] = x[5].wrapping_sub(f1(x[4]) ^ sk[4 * i + 2]);
        x[7] ^= f0(x[6]).wrapping_add(sk[4 * i + 3]);

        for i in (0..ROUNDS - 1).rev() {
            // y is the state after round i; recover the state before it
            let y = x;
            x = [
                y[1],
                y[2].wrapping_sub(f1(y[1]) ^ sk[4 * i]),
                y[3],
                y[4] ^ f0(y[3]).wrapping_add(sk[4 * i + 1]),
                y[5],
                y[6].wrapping_sub(f1(y[5]) ^ sk[4 * i + 2]),
                y[7],
                y[0] ^ f0(y[7]).wrapping_add(sk[4 * i + 3]),
            ];
        }

        x[0] = x[0].wrapping_sub(wk[0]);
        x[2] ^= wk[1];
        x[4] = x[4].wrapping_sub(wk[2]);
        x[6] ^= wk[3];
        store(&x, block);
    }
}
