//! 3-WAY: 96-bit key, 96-bit block, 11 rounds of theta / pi / gamma.
//!
//! The state is three 32-bit words `a[0..3]`. Byte order on the wire follows
//! the reference output convention: the block is written `a[2] a[1] a[0]`,
//! each word big-endian.

use super::BlockCipher;

const ROUNDS: usize = 11;
const START_ENCRYPT: u32 = 0x0b0b;
const START_DECRYPT: u32 = 0xb1b1;

type State = [u32; 3];

/// Reverses the bit order of the 96-bit state.
fn mu(a: &mut State) {
    *a = [a[2].reverse_bits(), a[1].reverse_bits(), a[0].reverse_bits()];
}

fn gamma(a: &mut State) {
    let b = [a[0] ^ (a[1] | !a[2]), a[1] ^ (a[2] | !a[0]), a[2] ^ (a[0] | !a[1])];
    *a = b;
}

fn theta(a: &mut State) {
    let t = |x: u32, y: u32, z: u32| {
        x ^ (x >> 16)
            ^ (y << 16)
            ^ (y >> 16)
            ^ (z << 16)
            ^ (y >> 24)
            ^ (z << 8)
            ^ (z >> 8)
            ^ (x << 24)
            ^ (z >> 16)
            ^ (x << 16)
            ^ (z >> 24)
            ^ (x << 8)
    };
    *a = [t(a[0], a[1], a[2]), t(a[1], a[2], a[0]), t(a[2], a[0], a[1])];
}

fn pi_1(a: &mut State) {
    a[0] = a[0].rotate_right(10);
    a[2] = a[2].rotate_left(1);
}

fn pi_2(a: &mut State) {
    a[0] = a[0].rotate_left(1);
    a[2] = a[2].rotate_right(10);
}

fn rho(a: &mut State) {
    theta(a);
    pi_1(a);
    gamma(a);
    pi_2(a);
}

fn round_constants(mut start: u32) -> [u32; ROUNDS + 1] {
    let mut table = [0; ROUNDS + 1];
    for rc in table.iter_mut() {
        *rc = start;
        start <<= 1;
        if start & 0x10000 != 0 {
            start ^= 0x11011;
        }
    }
    table
}

fn add_key(a: &mut State, k: &State, rc: u32) {
    a[0] ^= k[0] ^ (rc << 16);
    a[1] ^= k[1];
    a[2] ^= k[2] ^ rc;
}

fn run(a: &mut State, k: &State, rcon: &[u32; ROUNDS + 1]) {
    for rc in &rcon[..ROUNDS] {
        add_key(a, k, *rc);
        rho(a);
    }
    add_key(a, k, rcon[ROUNDS]);
    theta(a);
}

fn load(bytes: &[u8]) -> State {
    let w = |i: usize| u32::from_be_bytes(bytes[i..i + 4].try_into().unwrap());
    [w(8), w(4), w(0)]
}

fn store(a: &State, bytes: &mut [u8]) {
    bytes[0..4].copy_from_slice(&a[2].to_be_bytes());
    bytes[4..8].copy_from_slice(&a[1].to_be_bytes());
    bytes[8..12].copy_from_slice(&a[0].to_be_bytes());
}

pub struct ThreeWay {
    key: State,
    inverse_key: State,
    encrypt_rcon: [u32; ROUNDS + 1],
    decrypt_rcon: [u32; ROUNDS + 1],
}

impl ThreeWay {
    pub fn new(key: &[u8; 12]) -> Self {
        let key = load(key);
        let mut inverse_key = key;
        theta(&mut inverse_key);
        mu(&mut inverse_key);
        ThreeWay {
            key,
            inverse_key,
            encrypt_rcon: round_constants(START_ENCRYPT),
            decrypt_rcon: round_constants(START_DECRYPT),
        }
    }
}

impl BlockCipher for ThreeWay {
    fn encrypt(&self, block: &mut [u8]) {
        let mut a = load(block);
        run(&mut a, &self.key, &self.encrypt_rcon);
        store(&a, block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let mut a = load(block);
        mu(&mut a);
        run(&mut a, &self.inverse_key, &self.decrypt_rcon);
        mu(&mut a);
        store(&a, block);
    }
}
