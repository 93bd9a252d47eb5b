//! Content digests for provenance and caching.
//!
//! Reports and caches key everything by SHA-256 of a canonical byte
//! encoding, so identical inputs always collide and nothing else does.

use sha2::{Digest, Sha256};

/// Hex SHA-256 of raw bytes.
pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex(&h.finalize())
}

/// Hex SHA-256 of a serde-serializable value via its canonical JSON form.
///
/// Uses `serde_json` with struct-declaration field order; maps must be
/// ordered (`BTreeMap`) for the digest to be stable.
pub fn digest_json<T: serde::Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("digest serialization cannot fail");
    digest_bytes(&bytes)
}

/// Derives an independent RNG seed from a base seed and a tag path.
///
/// Every randomized stage (fold draws, compiling draws, trajectory
/// streams, SPSA directions) hashes its coordinates through here, so runs
/// are reproducible and stages cannot collide or correlate.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    for t in tags {
        h.update(t.to_le_bytes());
    }
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("digest is long enough"))
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        use std::fmt::Write;
        write!(s, "{b:02x}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = digest_bytes(b"abc");
        assert_eq!(
            a,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_ne!(digest_bytes(b"abd"), a);
    }
}
