//! Persistent record of the nonnegativity sweep.
//!
//! Coefficients are hashed in windows `(b_{j-1}, b_j]` at multiples of the
//! checkpoint interval; each link digest covers the previous digest and the
//! window's coefficients, and `head` extends the chain to `verified_up_to`.
//! The whole file carries a digest of its own contents.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const LEDGER_SCHEMA: u64 = 1;
const GENESIS: &[u8] = b"qcircle verify-nonneg v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub up_to: u64,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: u64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationLedger {
    pub schema: u64,
    pub checkpoint_every: u64,
    /// Every `g(n)` with `n <= verified_up_to` is known to be nonnegative.
    pub verified_up_to: u64,
    pub min_coefficient_seen: String,
    pub min_coefficient_at: u64,
    pub chain: Vec<ChainLink>,
    pub head: String,
    pub counterexample: Option<Counterexample>,
    pub ledger_digest: String,
}

pub fn genesis_digest() -> String {
    hex::encode(Sha256::digest(GENESIS))
}

/// Digest of `prev` followed by `(n, g(n))` for each `n` in `range`.
pub fn window_digest(prev: &str, coeffs: &[BigInt], range: std::ops::RangeInclusive<u64>) -> String {
    let mut h = Sha256::new();
    h.update(prev.as_bytes());
    for n in range {
        let bytes = coeffs[n as usize].to_signed_bytes_le();
        h.update(n.to_le_bytes());
        h.update((bytes.len() as u32).to_le_bytes());
        h.update(&bytes);
    }
    hex::encode(h.finalize())
}

impl VerificationLedger {
    /// An empty ledger; nothing verified yet.
    pub fn new(checkpoint_every: u64) -> Self {
        let mut l = Self {
            schema: LEDGER_SCHEMA,
            checkpoint_every,
            verified_up_to: 0,
            min_coefficient_seen: String::new(),
            min_coefficient_at: 0,
            chain: Vec::new(),
            head: genesis_digest(),
            counterexample: None,
            ledger_digest: String::new(),
        };
        l.seal();
        l
    }

    pub fn is_empty(&self) -> bool {
        self.min_coefficient_seen.is_empty()
    }

    fn content_digest(&self) -> String {
        let mut copy = self.clone();
        copy.ledger_digest.clear();
        let bytes = serde_json::to_vec(&copy).expect("ledger serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn seal(&mut self) {
        self.ledger_digest = self.content_digest();
    }

    pub fn seal_is_valid(&self) -> bool {
        self.ledger_digest == self.content_digest()
    }

    fn last_link(&self) -> (Option<u64>, String) {
        self.chain
            .last()
            .map_or((None, genesis_digest()), |l| (Some(l.up_to), l.digest.clone()))
    }

    fn first_index_after(boundary: Option<u64>) -> u64 {
        boundary.map_or(0, |b| b + 1)
    }

    /// Recomputes every link and the head from `coeffs`; `Err` names the
    /// first mismatch.
    pub fn verify_against(&self, coeffs: &[BigInt]) -> Result<(), String> {
        if self.is_empty() {
            return Ok(());
        }
        if (coeffs.len() as u64) <= self.verified_up_to {
            return Err("series shorter than the verified prefix".into());
        }
        let mut prev = genesis_digest();
        let mut boundary = None;
        for link in &self.chain {
            if link.up_to % self.checkpoint_every != 0 || Some(link.up_to) <= boundary {
                return Err(format!("link at {} is misplaced", link.up_to));
            }
            let d = window_digest(&prev, coeffs, Self::first_index_after(boundary)..=link.up_to);
            if d != link.digest {
                return Err(format!("link at {} does not match the coefficients", link.up_to));
            }
            prev = d;
            boundary = Some(link.up_to);
        }
        let head = if boundary == Some(self.verified_up_to) {
            prev
        } else {
            window_digest(&prev, coeffs, Self::first_index_after(boundary)..=self.verified_up_to)
        };
        if head != self.head {
            return Err("head digest does not match the coefficients".into());
        }
        let min = &coeffs[self.min_coefficient_at as usize];
        if min.to_string() != self.min_coefficient_seen {
            return Err("recorded minimum does not match".into());
        }
        Ok(())
    }

    /// Scans `coeffs` up to `target`, calling `persist` at each new link.
    /// Stops at the first negative coefficient.
    pub fn advance<F>(&mut self, coeffs: &[BigInt], target: u64, mut persist: F) -> CliResult<()>
    where
        F: FnMut(&VerificationLedger) -> CliResult<()>,
    {
        if self.counterexample.is_some() {
            return Ok(());
        }
        let start = if self.is_empty() { 0 } else { self.verified_up_to + 1 };
        let mut min = if self.is_empty() {
            None
        } else {
            Some((self.min_coefficient_at, coeffs[self.min_coefficient_at as usize].clone()))
        };
        for n in start..=target {
            let v = &coeffs[n as usize];
            if min.as_ref().is_none_or(|(_, m)| v < m) {
                min = Some((n, v.clone()));
            }
            if v.sign() == num_bigint::Sign::Minus {
                self.counterexample = Some(Counterexample {
                    n,
                    value: v.to_string(),
                });
                break;
            }
            let (at, m) = min.as_ref().expect("set above");
            self.min_coefficient_at = *at;
            self.min_coefficient_seen = m.to_string();
            self.verified_up_to = n;
            if n > 0 && n % self.checkpoint_every == 0 {
                let (boundary, prev) = self.last_link();
                let digest = window_digest(&prev, coeffs, Self::first_index_after(boundary)..=n);
                self.chain.push(ChainLink {
                    up_to: n,
                    digest: digest.clone(),
                });
                self.head = digest;
                self.seal();
                persist(self)?;
            }
        }
        if !self.is_empty() {
            let (boundary, prev) = self.last_link();
            self.head = if boundary == Some(self.verified_up_to) {
                prev
            } else {
                window_digest(&prev, coeffs, Self::first_index_after(boundary)..=self.verified_up_to)
            };
        }
        self.seal();
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        let ledger: Self =
            serde_json::from_slice(&bytes).map_err(|e| CliError::CorruptCheckpoint {
                path: path.into(),
                reason: e.to_string(),
            })?;
        if ledger.schema != LEDGER_SCHEMA {
            return Err(CliError::CorruptCheckpoint {
                path: path.into(),
                reason: format!("unknown schema {}", ledger.schema),
            });
        }
        if !ledger.seal_is_valid() {
            return Err(CliError::CorruptCheckpoint {
                path: path.into(),
                reason: "ledger digest mismatch".into(),
            });
        }
        Ok(ledger)
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn store(&self, path: &Path) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("ledger serializes");
        bytes.push(b'\n');
        write_atomically(path, &bytes)
    }
}

pub fn write_atomically(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn split_scan_equals_single_scan() {
        let c = coeffs(&[1, 1, 1, 0, 0, 1, 2, 2, 2, 3, 4, 5, 6]);
        let mut whole = VerificationLedger::new(4);
        whole.advance(&c, 12, |_| Ok(())).unwrap();
        let mut parts = VerificationLedger::new(4);
        parts.advance(&c, 5, |_| Ok(())).unwrap();
        parts.verify_against(&c).unwrap();
        parts.advance(&c, 12, |_| Ok(())).unwrap();
        assert_eq!(whole, parts);
        assert_eq!(whole.chain.len(), 3);
        assert_eq!(whole.min_coefficient_seen, "0");
        assert_eq!(whole.min_coefficient_at, 3);
        whole.verify_against(&c).unwrap();
    }

    #[test]
    fn detects_tampering() {
        let c = coeffs(&[1, 1, 1, 0, 0, 1, 2, 2, 2]);
        let mut l = VerificationLedger::new(4);
        l.advance(&c, 8, |_| Ok(())).unwrap();
        let mut edited = l.clone();
        edited.verified_up_to = 7;
        assert!(!edited.seal_is_valid());
        let mut other = c.clone();
        other[2] = BigInt::from(5);
        assert!(l.verify_against(&other).is_err());
    }

    #[test]
    fn stops_at_negative_coefficient() {
        let c = coeffs(&[1, 2, -1, 3]);
        let mut l = VerificationLedger::new(10);
        l.advance(&c, 3, |_| Ok(())).unwrap();
        assert_eq!(l.verified_up_to, 1);
        assert_eq!(
            l.counterexample,
            Some(Counterexample {
                n: 2,
                value: "-1".into()
            })
        );
    }

    #[test]
    fn persists_at_each_link() {
        let c = coeffs(&[1; 25]);
        let mut seen = Vec::new();
        let mut l = VerificationLedger::new(10);
        l.advance(&c, 24, |s| {
            seen.push(s.verified_up_to);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![10, 20]);
    }
}
