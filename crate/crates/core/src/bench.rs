//! Live software-profile measurement: per-block execution time and throughput
//! of the cipher implementations on the current host.
//!
//! CPI and cache-miss ratio need hardware counters and are never measured
//! here; ingest them from CSV and merge, or leave them absent.

use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ciphers::{Cipher, CipherKind};
use crate::error::{Error, Result};
use crate::indicator::IndicatorRegistry;
use crate::io::serialize_table_with_comments;
use crate::table::MeasurementTable;

/// Blocks kept in the working buffer; the timed loop cycles through it.
const BUFFER_BLOCKS: usize = 1024;
const MAX_BLOCK_COUNT: u64 = 1 << 34;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub block_count: u64,
    pub trials: usize,
    pub warmup_blocks: u64,
    pub seed: u64,
    /// `block_count` is doubled until one trial takes at least this long.
    pub min_trial_time: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            block_count: 1 << 20,
            trials: 5,
            warmup_blocks: 1 << 12,
            seed: 0x4c49_5300,
            min_trial_time: Duration::from_millis(100),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_count == 0 || self.trials == 0 || self.warmup_blocks == 0 {
            return Err(Error::usage(
                "block count, trials and warmup blocks must all be at least 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwProfileRow {
    pub algorithm: String,
    pub block_bits: usize,
    /// Microseconds per block.
    pub et_sw: f64,
    /// Megabits per second, `block_bits / et_sw`.
    pub th_sw: f64,
    pub cpi: Option<f64>,
    pub cmr: Option<f64>,
    /// Blocks per trial after the timer-resolution guard.
    pub blocks_per_trial: u64,
    pub trial_times: Vec<Duration>,
    /// Digest of the ciphertexts of the seeded data stream.
    pub data_checksum: u64,
}

/// Deterministic key and plaintext buffer for one cipher and seed.
fn stream(kind: CipherKind, seed: u64) -> (Vec<u8>, Vec<u8>) {
    let spec = kind.spec();
    let tag = kind.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    let mut key = vec![0u8; spec.key_bytes()];
    rng.fill_bytes(&mut key);
    let mut data = vec![0u8; spec.block_bytes() * BUFFER_BLOCKS];
    rng.fill_bytes(&mut data);
    (key, data)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ *b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

/// Encrypts `count` blocks in place, cycling through the buffer.
fn encrypt_blocks(cipher: &Cipher, buf: &mut [u8], count: u64) {
    let raw = cipher.raw();
    let bs = cipher.spec().block_bytes();
    let mut remaining = count;
    while remaining > 0 {
        for block in buf.chunks_exact_mut(bs) {
            if remaining == 0 {
                break;
            }
            raw.encrypt(block);
            remaining -= 1;
        }
    }
}

fn timed(cipher: &Cipher, pristine: &[u8], count: u64) -> Duration {
    let mut buf = pristine.to_vec();
    let start = Instant::now();
    encrypt_blocks(cipher, &mut buf, count);
    let elapsed = start.elapsed();
    std::hint::black_box(&buf);
    elapsed
}

fn median(times: &mut [Duration]) -> Duration {
    times.sort_unstable();
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2
    }
}

/// Times `config.trials` runs of encryptions over seeded pseudo-random data
/// and reports the median per-block time.
pub fn measure_cipher(kind: CipherKind, config: &BenchConfig) -> Result<SwProfileRow> {
    config.validate()?;
    let (key, data) = stream(kind, config.seed);
    let cipher = kind.with_key(&key)?;
    let spec = *cipher.spec();

    let checksum = {
        let mut buf = data.clone();
        encrypt_blocks(&cipher, &mut buf, BUFFER_BLOCKS as u64);
        fnv1a(&buf)
    };

    encrypt_blocks(&cipher, &mut data.clone(), config.warmup_blocks);

    let mut count = config.block_count;
    loop {
        let t = timed(&cipher, &data, count);
        if t >= config.min_trial_time && !t.is_zero() {
            break;
        }
        if count >= MAX_BLOCK_COUNT {
            if t.is_zero() {
                return Err(Error::Environment("monotonic clock did not advance".into()));
            }
            break;
        }
        count = count.saturating_mul(2).min(MAX_BLOCK_COUNT);
    }

    let mut times: Vec<Duration> = (0..config.trials).map(|_| timed(&cipher, &data, count)).collect();
    let trial_times = times.clone();
    let med = median(&mut times);
    if med.is_zero() {
        return Err(Error::Environment("monotonic clock did not advance".into()));
    }
    let et_sw = med.as_secs_f64() * 1e6 / count as f64;
    Ok(SwProfileRow {
        algorithm: spec.name.to_string(),
        block_bits: spec.block_bits,
        et_sw,
        th_sw: spec.block_bits as f64 / et_sw,
        cpi: None,
        cmr: None,
        blocks_per_trial: count,
        trial_times,
        data_checksum: checksum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HostInfo {
    pub os: String,
    pub cpu: String,
    pub timestamp: u64,
}

impl HostInfo {
    pub fn detect() -> Self {
        HostInfo {
            os: format!("{} {}", std::env::consts::OS, std::env::consts::ARCH),
            cpu: cpu_description(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

fn cpu_description() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|s| s.trim().to_string())
        })
        .unwrap_or_else(|| std::env::consts::ARCH.to_string())
}

#[cfg(target_os = "linux")]
fn pin_to_one_cpu() -> bool {
    // SAFETY: cpu_set_t is plain data; we pass its exact size.
    unsafe {
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        if libc::sched_getaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &mut set) != 0 {
            return false;
        }
        let Some(cpu) = (0..libc::CPU_SETSIZE as usize).find(|c| libc::CPU_ISSET(*c, &set)) else {
            return false;
        };
        libc::CPU_ZERO(&mut set);
        libc::CPU_SET(cpu, &mut set);
        libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) == 0
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_to_one_cpu() -> bool {
    false
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub rows: Vec<SwProfileRow>,
    pub host: HostInfo,
    pub config: BenchConfig,
    pub notes: Vec<String>,
}

impl SuiteResult {
    /// Partial software profile: `et_sw` and `th_sw` per cipher, plus any
    /// ingested `cpi`/`cmr`.
    pub fn table(&self) -> MeasurementTable {
        let mut t = MeasurementTable::new();
        for row in &self.rows {
            t.insert_raw(&row.algorithm, "et_sw", row.et_sw);
            t.insert_raw(&row.algorithm, "th_sw", row.th_sw);
            if let Some(cpi) = row.cpi {
                t.insert_raw(&row.algorithm, "cpi", cpi);
            }
            if let Some(cmr) = row.cmr {
                t.insert_raw(&row.algorithm, "cmr", cmr);
            }
        }
        t
    }

    pub fn comments(&self) -> Vec<String> {
        let mut c = vec![
            format!("host os: {}", self.host.os),
            format!("host cpu: {}", self.host.cpu),
            format!("timestamp: {}", self.host.timestamp),
            format!(
                "config: blocks {} trials {} warmup {} seed {} min trial {} ms",
                self.config.block_count,
                self.config.trials,
                self.config.warmup_blocks,
                self.config.seed,
                self.config.min_trial_time.as_millis()
            ),
        ];
        for row in &self.rows {
            c.push(format!(
                "{}: {} blocks/trial, checksum {:016x}",
                row.algorithm, row.blocks_per_trial, row.data_checksum
            ));
        }
        c.extend(self.notes.iter().map(|n| format!("note: {n}")));
        c
    }

    /// Measurement CSV with host metadata as comments.
    pub fn to_csv(&self) -> String {
        serialize_table_with_comments(&self.table(), &IndicatorRegistry::builtin(), &self.comments())
    }
}

/// Benchmarks each cipher in turn on one worker thread, pinned to a single CPU
/// where the platform allows.
pub fn run_suite(kinds: &[CipherKind], config: &BenchConfig) -> Result<SuiteResult> {
    config.validate()?;
    // a dedicated thread, so pinning never leaks into the caller
    let (pinned, rows) = std::thread::scope(|scope| {
        scope
            .spawn(|| {
                let pinned = pin_to_one_cpu();
                let rows = kinds
                    .iter()
                    .map(|k| measure_cipher(*k, config))
                    .collect::<Result<Vec<_>>>();
                (pinned, rows)
            })
            .join()
            .expect("timing thread panicked")
    });
    let mut notes = Vec::new();
    if !pinned {
        notes.push("could not pin the timing thread to one CPU; timings are best-effort".to_string());
    }
    Ok(SuiteResult {
        rows: rows?,
        host: HostInfo::detect(),
        config: config.clone(),
        notes,
    })
}

/// Copies `cpi`/`cmr` cells from an ingested table into matching rows.
pub fn attach_counters(result: &mut SuiteResult, counters: &MeasurementTable) {
    for row in &mut result.rows {
        row.cpi = counters.get(&row.algorithm, "cpi");
        row.cmr = counters.get(&row.algorithm, "cmr");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> BenchConfig {
        BenchConfig {
            block_count: 64,
            trials: 3,
            warmup_blocks: 16,
            seed: 7,
            min_trial_time: Duration::from_micros(200),
        }
    }

    #[test]
    fn throughput_is_block_bits_over_time() {
        let row = measure_cipher(CipherKind::Xtea, &quick()).unwrap();
        assert!(row.et_sw > 0.0 && row.et_sw.is_finite());
        assert_eq!(row.th_sw, 64.0 / row.et_sw);
        assert_eq!(row.trial_times.len(), 3);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = measure_cipher(CipherKind::Hight, &quick()).unwrap();
        let b = measure_cipher(CipherKind::Hight, &quick()).unwrap();
        assert_eq!(a.data_checksum, b.data_checksum);
        let other = BenchConfig { seed: 8, ..quick() };
        let c = measure_cipher(CipherKind::Hight, &other).unwrap();
        assert_ne!(a.data_checksum, c.data_checksum);
    }

    #[test]
    fn timer_guard_raises_block_count() {
        let cfg = BenchConfig {
            block_count: 1,
            min_trial_time: Duration::from_millis(2),
            ..quick()
        };
        let row = measure_cipher(CipherKind::Skipjack, &cfg).unwrap();
        assert!(row.blocks_per_trial > 1);
        assert!(row.blocks_per_trial.is_power_of_two());
    }

    #[test]
    fn zero_counts_rejected() {
        let cfg = BenchConfig { trials: 0, ..quick() };
        assert!(matches!(measure_cipher(CipherKind::Xtea, &cfg), Err(Error::Usage(_))));
    }

    #[test]
    fn median_of_even_and_odd() {
        let ms = Duration::from_millis;
        assert_eq!(median(&mut [ms(3), ms(1), ms(2)]), ms(2));
        assert_eq!(median(&mut [ms(4), ms(1), ms(2), ms(3)]), Duration::from_micros(2500));
    }
}
