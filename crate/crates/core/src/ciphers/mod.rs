//! The studied block ciphers behind one byte-oriented interface.
//!
//! Blocks and keys are byte arrays, most significant byte first. No modes of
//! operation and no padding: these exist to be measured.

mod aes;
mod hight;
mod katan;
mod skipjack;
mod threeway;
mod xtea;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use katan::Family as KatanFamily;

/// Raw single-block transform. Callers guarantee `block.len()` matches the
/// cipher's block size.
pub trait BlockCipher: Send + Sync {
    fn encrypt(&self, block: &mut [u8]);
    fn decrypt(&self, block: &mut [u8]);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CipherKind {
    Skipjack,
    Xtea,
    ThreeWay,
    Hight,
    Katan32,
    Katan48,
    Katan64,
    Ktantan32,
    Ktantan48,
    Ktantan64,
    Aes192,
}

impl CipherKind {
    pub const ALL: [CipherKind; 11] = [
        CipherKind::Skipjack,
        CipherKind::Xtea,
        CipherKind::ThreeWay,
        CipherKind::Hight,
        CipherKind::Katan32,
        CipherKind::Katan48,
        CipherKind::Katan64,
        CipherKind::Ktantan32,
        CipherKind::Ktantan48,
        CipherKind::Ktantan64,
        CipherKind::Aes192,
    ];

    /// Name as it appears in the study dataset.
    pub fn name(self) -> &'static str {
        match self {
            CipherKind::Skipjack => "Skipjack",
            CipherKind::Xtea => "XTEA",
            CipherKind::ThreeWay => "3-WAY",
            CipherKind::Hight => "HIGHT",
            CipherKind::Katan32 => "KATAN-32",
            CipherKind::Katan48 => "KATAN-48",
            CipherKind::Katan64 => "KATAN-64",
            CipherKind::Ktantan32 => "KTANTAN-32",
            CipherKind::Ktantan48 => "KTANTAN-48",
            CipherKind::Ktantan64 => "KTANTAN-64",
            CipherKind::Aes192 => "AES",
        }
    }

    pub fn spec(self) -> CipherSpec {
        let (key_bits, block_bits, rounds) = match self {
            CipherKind::Skipjack => (80, 64, 32),
            CipherKind::Xtea => (128, 64, 64),
            CipherKind::ThreeWay => (96, 96, 11),
            CipherKind::Hight => (128, 64, 32),
            CipherKind::Katan32 | CipherKind::Ktantan32 => (80, 32, 254),
            CipherKind::Katan48 | CipherKind::Ktantan48 => (80, 48, 254),
            CipherKind::Katan64 | CipherKind::Ktantan64 => (80, 64, 254),
            CipherKind::Aes192 => (192, 128, 12),
        };
        CipherSpec {
            kind: self,
            name: self.name(),
            key_bits,
            block_bits,
            rounds,
        }
    }

    /// Runs the key schedule.
    pub fn with_key(self, key: &[u8]) -> Result<Cipher> {
        let spec = self.spec();
        if key.len() * 8 != spec.key_bits {
            return Err(Error::usage(format!(
                "{} takes a {}-bit key, got {} bytes",
                spec.name,
                spec.key_bits,
                key.len()
            )));
        }
        let inner: Box<dyn BlockCipher> = match self {
            CipherKind::Skipjack => Box::new(skipjack::Skipjack::new(key.try_into().unwrap())),
            CipherKind::Xtea => Box::new(xtea::Xtea::new(key.try_into().unwrap())),
            CipherKind::ThreeWay => Box::new(threeway::ThreeWay::new(key.try_into().unwrap())),
            CipherKind::Hight => Box::new(hight::Hight::new(key.try_into().unwrap())),
            CipherKind::Aes192 => Box::new(aes::Aes192::new(key.try_into().unwrap())),
            _ => {
                let family = match self {
                    CipherKind::Katan32 | CipherKind::Katan48 | CipherKind::Katan64 => KatanFamily::Katan,
                    _ => KatanFamily::Ktantan,
                };
                Box::new(katan::Katan::new(family, spec.block_bits, key.try_into().unwrap()))
            }
        };
        Ok(Cipher { spec, inner })
    }
}

impl fmt::Display for CipherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherKind {
    type Err = Error;

    /// Case-insensitive; hyphens optional ("katan32", "KATAN-32", "aes192").
    fn from_str(s: &str) -> Result<Self> {
        let norm = |x: &str| x.to_ascii_lowercase().replace(['-', '_'], "");
        let wanted = norm(s);
        CipherKind::ALL
            .into_iter()
            .find(|k| norm(k.name()) == wanted || (wanted == "aes192" && *k == CipherKind::Aes192))
            .ok_or_else(|| {
                let names: Vec<_> = CipherKind::ALL.iter().map(|k| k.name()).collect();
                Error::usage(format!("unknown cipher {s:?}; known: {}", names.join(", ")))
            })
    }
}

/// Canonical parameters of one cipher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherSpec {
    pub kind: CipherKind,
    pub name: &'static str,
    pub key_bits: usize,
    pub block_bits: usize,
    pub rounds: usize,
}

impl CipherSpec {
    pub fn key_bytes(&self) -> usize {
        self.key_bits / 8
    }

    pub fn block_bytes(&self) -> usize {
        self.block_bits / 8
    }
}

/// All eleven ciphers, lightweight designs first, AES-192 last.
pub fn cipher_registry() -> Vec<CipherSpec> {
    CipherKind::ALL.iter().map(|k| k.spec()).collect()
}

/// A keyed cipher instance. Immutable after the key schedule; safe to share
/// across threads.
pub struct Cipher {
    spec: CipherSpec,
    inner: Box<dyn BlockCipher>,
}

impl Cipher {
    pub fn spec(&self) -> &CipherSpec {
        &self.spec
    }

    fn check_len(&self, block: &[u8]) -> Result<()> {
        if block.len() != self.spec.block_bytes() {
            return Err(Error::usage(format!(
                "{} works on {}-byte blocks, got {} bytes",
                self.spec.name,
                self.spec.block_bytes(),
                block.len()
            )));
        }
        Ok(())
    }

    pub fn encrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        self.check_len(block)?;
        self.inner.encrypt(block);
        Ok(())
    }

    pub fn decrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        self.check_len(block)?;
        self.inner.decrypt(block);
        Ok(())
    }

    pub fn encrypt_block(&self, plaintext: &[u8]) -> Result<Vec<u8>> {
        let mut b = plaintext.to_vec();
        self.encrypt_in_place(&mut b)?;
        Ok(b)
    }

    pub fn decrypt_block(&self, ciphertext: &[u8]) -> Result<Vec<u8>> {
        let mut b = ciphertext.to_vec();
        self.decrypt_in_place(&mut b)?;
        Ok(b)
    }

    /// Unchecked fast path for the timing loop.
    pub(crate) fn raw(&self) -> &dyn BlockCipher {
        self.inner.as_ref()
    }
}

pub fn encrypt_block(kind: CipherKind, plaintext: &[u8], key: &[u8]) -> Result<Vec<u8>> {
    kind.with_key(key)?.encrypt_block(plaintext)
}

pub fn decrypt_block(kind: CipherKind, ciphertext: &[u8], key: &[u8]) -> Result<Vec<u8>> {
    kind.with_key(key)?.decrypt_block(ciphertext)
}
