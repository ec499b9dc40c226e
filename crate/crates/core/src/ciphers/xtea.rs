//! XTEA: 128-bit key, 64-bit block, 64 Feistel rounds (32 cycles).
//! Words are read big-endian.

use super::BlockCipher;

const DELTA: u32 = 0x9e37_79b9;
const CYCLES: u32 = 32;

pub struct Xtea {
    key: [u32; 4],
}

impl Xtea {
    pub fn new(key: &[u8; 16]) -> Self {
        let key = [0, 4, 8, 12].map(|i| u32::from_be_bytes(key[i..i + 4].try_into().unwrap()));
        Xtea { key }
    }
}

#[inline]
fn mix(v: u32) -> u32 {
    ((v << 4) ^ (v >> 5)).wrapping_add(v)
}

impl BlockCipher for Xtea {
    fn encrypt(&self, block: &mut [u8]) {
        let mut v0 = u32::from_be_bytes(block[0..4].try_into().unwrap());
        let mut v1 = u32::from_be_bytes(block[4..8].try_into().unwrap());
        let mut sum = 0u32;
        for _ in 0..CYCLES {
            v0 = v0.wrapping_add(mix(v1) ^ sum.wrapping_add(self.key[(sum & 3) as usize]));
            sum = sum.wrapping_add(DELTA);
            v1 = v1.wrapping_add(mix(v0) ^ sum.wrapping_add(self.key[((sum >> 11) & 3) as usize]));
        }
        block[0..4].copy_from_slice(&v0.to_be_bytes());
        block[4..8].copy_from_slice(&v1.to_be_bytes());
    }

    fn decrypt(&self, block: &mut [u8]) {
        let mut v0 = u32::from_be_bytes(block[0..4].try_into().unwrap());
        let mut v1 = u32::from_be_bytes(block[4..8].try_into().unwrap());
        let mut sum = DELTA.wrapping_mul(CYCLES);
        for _ in 0..CYCLES {
            v1 = v1.wrapping_sub(mix(v0) ^ sum.wrapping_add(self.key[((sum >> 11) & 3) as usize]));
            sum = sum.wrapping_sub(DELTA);
            v0 = v0.wrapping_sub(mix(v1) ^ sum.wrapping_add(self.key[(sum & 3) as usize]));
        }
        block[0..4].copy_from_slice(&v0.to_be_bytes());
        block[4..8].copy_from_slice(&v1.to_be_bytes());
    }
}
