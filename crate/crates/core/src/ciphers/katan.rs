//! KATAN and KTANTAN families: 80-bit key, 32/48/64-bit block, 254 rounds of
//! two coupled nonlinear shift registers.
//!
//! Bit `i` of the block integer (most significant byte first on the wire) is
//! state bit `i`: the low `|L2|` bits load L2, the rest load L1. Key bit `i`
//! is bit `i` of the 80-bit key integer.
//!
//! The two families share the datapath and differ in key schedule: KATAN
//! expands the key through an 80-bit LFSR, KTANTAN selects fixed key bits by
//! the round counter so the key can be burnt into hardware.

use super::BlockCipher;

pub const ROUNDS: usize = 254;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Katan,
    Ktantan,
}

#[derive(Debug, Clone, Copy)]
struct Geometry {
    l1: u32,
    l2: u32,
    x: [u32; 5],
    y: [u32; 6],
    /// Applications of the round function per round.
    reps: usize,
}

fn geometry(block_bits: usize) -> Geometry {
    match block_bits {
        32 => Geometry {
            l1: 13,
            l2: 19,
            x: [12, 7, 8, 5, 3],
            y: [18, 7, 12, 10, 8, 3],
            reps: 1,
        },
        48 => Geometry {
            l1: 19,
            l2: 29,
            x: [18, 12, 15, 7, 6],
            y: [28, 19, 21, 13, 15, 6],
            reps: 2,
        },
        64 => Geometry {
            l1: 25,
            l2: 39,
            x: [24, 15, 20, 11, 9],
            y: [38, 25, 33, 21, 14, 9],
            reps: 3,
        },
        _ => panic!("unsupported KATAN block size {block_bits}"),
    }
}

/// Round-counter LFSR states, x^8 + x^7 + x^5 + x^3 + 1, seeded all-ones and
/// clocked once before the first round. Bit 7 of each state is that round's
/// irregular-update bit IR.
fn counter_states() -> [u8; ROUNDS] {
    let mut states = [0u8; ROUNDS];
    let mut t: u8 = 0xff;
    for s in states.iter_mut() {
        let fb = ((t >> 7) ^ (t >> 6) ^ (t >> 4) ^ (t >> 2)) & 1;
        t = (t << 1) | fb;
        *s = t;
    }
    states
}

#[inline]
fn bit(v: u128, i: u32) -> u8 {
    ((v >> i) & 1) as u8
}

fn katan_round_keys(key: u128) -> Vec<(u8, u8)> {
    let mut k = vec![0u8; 2 * ROUNDS];
    for i in 0..2 * ROUNDS {
        k[i] = if i < 80 {
            bit(key, i as u32)
        } else {
            k[i - 80] ^ k[i - 61] ^ k[i - 50] ^ k[i - 13]
        };
    }
    k.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

fn ktantan_round_keys(key: u128, counters: &[u8; ROUNDS]) -> Vec<(u8, u8)> {
    let word = |w: u32| ((key >> (16 * w)) & 0xffff) as u16;
    counters
        .iter()
        .map(|&t| {
            let tb = |i: u32| (t >> i) & 1;
            let sel16 = (t >> 4) as u32;
            let a: Vec<u8> = (0..5).map(|w| ((word(w) >> sel16) & 1) as u8).collect();
            let (t3, t2) = (tb(3), tb(2));
            let sel4 = (t & 3) as usize;
            let ka = ((1 ^ t3) & (1 ^ t2) & a[0]) ^ ((t3 | t2) & a[1 + sel4]);
            let kb = ((1 ^ t3) & t2 & a[4]) ^ ((t3 | (1 ^ t2)) & a[3 - sel4]);
            (ka, kb)
        })
        .collect()
}

pub struct Katan {
    g: Geometry,
    round_keys: Vec<(u8, u8)>,
    ir: [u8; ROUNDS],
}

impl Katan {
    pub fn new(family: Family, block_bits: usize, key: &[u8; 10]) -> Self {
        let key = key.iter().fold(0u128, |acc, b| (acc << 8) | *b as u128);
        let counters = counter_states();
        let round_keys = match family {
            Family::Katan => katan_round_keys(key),
            Family::Ktantan => ktantan_round_keys(key, &counters),
        };
        Katan {
            g: geometry(block_bits),
            round_keys,
            ir: counters.map(|t| t >> 7),
        }
    }

    fn block_bytes(&self) -> usize {
        ((self.g.l1 + self.g.l2) / 8) as usize
    }

    fn load(&self, block: &[u8]) -> (u64, u64) {
        let v = block.iter().fold(0u64, |acc, b| (acc << 8) | *b as u64);
        let l2 = v & ((1 << self.g.l2) - 1);
        let l1 = v >> self.g.l2;
        (l1, l2)
    }

    fn store(&self, l1: u64, l2: u64, block: &mut [u8]) {
        let v = (l1 << self.g.l2) | l2;
        let n = self.block_bytes();
        for (i, b) in block.iter_mut().enumerate() {
            *b = (v >> (8 * (n - 1 - i))) as u8;
        }
    }
}

#[inline]
fn b64(v: u64, i: u32) -> u64 {
    (v >> i) & 1
}

impl BlockCipher for Katan {
    fn encrypt(&self, block: &mut [u8]) {
        let Geometry {
            l1: n1,
            l2: n2,
            x,
            y,
            reps,
        } = self.g;
        let (m1, m2) = ((1u64 << n1) - 1, (1u64 << n2) - 1);
        let (mut l1, mut l2) = self.load(block);
        for r in 0..ROUNDS {
            let (ka, kb) = self.round_keys[r];
            let ir = self.ir[r] as u64;
            for _ in 0..reps {
                let fa =
                    b64(l1, x[0]) ^ b64(l1, x[1]) ^ (b64(l1, x[2]) & b64(l1, x[3])) ^ (b64(l1, x[4]) & ir) ^ ka as u64;
                let fb = b64(l2, y[0])
                    ^ b64(l2, y[1])
                    ^ (b64(l2, y[2]) & b64(l2, y[3]))
                    ^ (b64(l2, y[4]) & b64(l2, y[5]))
                    ^ kb as u64;
                l1 = ((l1 << 1) | fb) & m1;
                l2 = ((l2 << 1) | fa) & m2;
            }
        }
        self.store(l1, l2, block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let Geometry {
            l1: n1,
            l2: n2,
            x,
            y,
            reps,
        } = self.g;
        let (mut l1, mut l2) = self.load(block);
        for r in (0..ROUNDS).rev() {
            let (ka, kb) = self.round_keys[r];
            let ir = self.ir[r] as u64;
            for _ in 0..reps {
                let (fa, fb) = (l2 & 1, l1 & 1);
                l1 >>= 1;
                l2 >>= 1;
                // the dropped top bits are x[0] = |L1|-1 and y[0] = |L2|-1
                let top1 = fa ^ b64(l1, x[1]) ^ (b64(l1, x[2]) & b64(l1, x[3])) ^ (b64(l1, x[4]) & ir) ^ ka as u64;
                let top2 =
                    fb ^ b64(l2, y[1]) ^ (b64(l2, y[2]) & b64(l2, y[3])) ^ (b64(l2, y[4]) & b64(l2, y[5])) ^ kb as u64;
                l1 |= top1 << (n1 - 1);
                l2 |= top2 << (n2 - 1);
            }
        }
        self.store(l1, l2, block);
    }
}
