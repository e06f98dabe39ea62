use super::*;
use crate::pauli::index_to_bits;
use crate::protocols::{Protocol, RunRecord};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_hashes(j: usize, t: usize) -> impl Iterator<Item = ToeplitzHash> {
    let len = j + t - 1;
    (0..1usize << len).map(move |s| ToeplitzHash::new(j, t, index_to_bits(s, len)).unwrap())
}

#[test]
fn zero_input_hashes_to_zero() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let h = ToeplitzHash::random(8, 5, &mut r).unwrap();
    assert_eq!(toeplitz_hash(&[false; 8], &h).unwrap(), vec![false; 5]);
}

#[test]
fn output_bit_is_window_parity() {
    // seed 1 0 1 1 0, j = 4, t = 2: windows 1011 and 0110
    let h = ToeplitzHash::new(4, 2, vec![true, false, true, true, false]).unwrap();
    let out = toeplitz_hash(&[true, true, false, true], &h).unwrap();
    // 1011·1101 = 1+0+0+1 = 0, 0110·1101 = 0+1+0+0 = 1
    assert_eq!(out, vec![false, true]);
}

#[test]
fn shape_checks() {
    assert!(ToeplitzHash::new(4, 5, vec![false; 8]).is_err());
    assert!(ToeplitzHash::new(4, 0, vec![false; 3]).is_err());
    assert!(ToeplitzHash::new(4, 2, vec![false; 4]).is_err());
    let h = ToeplitzHash::new(4, 2, vec![false; 5]).unwrap();
    assert!(toeplitz_hash(&[false; 3], &h).is_err());
}

#[test]
fn pairwise_collisions_exhaustive_j4_t2() {
    let (j, t) = (4, 2);
    let hashes: Vec<ToeplitzHash> = all_hashes(j, t).collect();
    for a in 0..1usize << j {
        for b in a + 1..1usize << j {
            let (xa, xb) = (index_to_bits(a, j), index_to_bits(b, j));
            let collisions = hashes
                .iter()
                .filter(|h| toeplitz_hash(&xa, h).unwrap() == toeplitz_hash(&xb, h).unwrap())
                .count();
            assert!(collisions * (1 << t) <= hashes.len(), "pair ({a},{b})");
        }
    }
}

#[test]
fn two_universal_for_all_small_shapes() {
    // Collisions of (a, b) depend only on d = a ⊕ b by linearity.
    for j in 1..=6 {
        for t in 1..=j {
            let hashes: Vec<ToeplitzHash> = all_hashes(j, t).collect();
            let worst = (1..1usize << j)
                .map(|d| {
                    let dv = index_to_bits(d, j);
                    hashes.iter().filter(|h| toeplitz_hash(&dv, h).unwrap().iter().all(|b| !b)).count()
                })
                .max()
                .unwrap();
            assert!(worst * (1 << t) <= hashes.len(), "j={j} t={t}");
        }
    }
}

#[test]
fn accept_branch_lengths_and_x() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let key = KeyString::random(2, 4, &mut r);
    let h = ToeplitzHash::random(8, 2, &mut r).unwrap();
    let out = recycle_on_accept(&key, 2, 4, &h).unwrap();
    assert_eq!(out.len(), 6);
    assert_eq!(out.x(), key.x());
    assert_eq!(accept_len(2, 4), 6);
}

#[test]
fn accept_branch_zero_key() {
    let key = KeyString::zeros(1, 3);
    let h = ToeplitzHash::new(6, 1, vec![false; 6]).unwrap();
    assert_eq!(recycle_on_accept(&key, 1, 3, &h).unwrap().bits(), &[false; 3]);
}

#[test]
fn reject_branch() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let key = KeyString::random(2, 4, &mut r);
    let h = ToeplitzHash::random(12, 4, &mut r).unwrap();
    assert_eq!(recycle_on_reject(&key, 2, 4, &h).unwrap().len(), 4);
    let zero = KeyString::zeros(2, 4);
    let hz = ToeplitzHash::new(12, 4, vec![false; 15]).unwrap();
    assert!(recycle_on_reject(&zero, 2, 4, &hz).unwrap().bits().iter().all(|b| !b));
}

#[test]
fn recycling_guards() {
    let key = KeyString::zeros(2, 2);
    let h = ToeplitzHash::new(4, 1, vec![false; 4]).unwrap();
    assert!(matches!(recycle_on_accept(&key, 2, 2, &h), Err(KeyringError::TooSmall { .. })));
    let tiny = KeyString::zeros(1, 1);
    let h2 = ToeplitzHash::new(4, 1, vec![false; 4]).unwrap();
    assert!(matches!(recycle_on_reject(&tiny, 1, 1, &h2), Err(KeyringError::TooSmall { .. })));
    let wrong = ToeplitzHash::new(8, 3, vec![false; 10]).unwrap();
    assert!(recycle_on_accept(&KeyString::zeros(2, 4), 2, 4, &wrong).is_err());
}

#[test]
fn recycled_lengths_never_exceed_input() {
    for m in 1..20 {
        for s in 3..40 {
            assert!(accept_len(m, s) < 2 * m + 2 * s);
            assert!(reject_len(m, s) < accept_len(m, s));
        }
    }
}

fn record(protocol: Protocol, accepted: bool, q: u64, m: u64, consumed: u64, recycled: u64) -> RunRecord {
    let mut r = RunRecord::new(protocol, 0);
    r.accepted = accepted;
    r.qubits_sent = q;
    r.message_units = m;
    r.key_consumed_bits = consumed;
    r.key_recycled_bits = recycled;
    r
}

#[test]
fn ledger_arithmetic() {
    let mut ledger = Ledger::new();
    ledger_record(&mut ledger, &record(Protocol::Sqas, true, 6, 2, 12, 6));
    let e = ledger.entries()[0];
    assert_eq!((e.delta_k, e.delta_q - e.delta_m), (-6, 4));
    ledger_record(&mut ledger, &record(Protocol::Teleport, true, 2, 2, 0, 0));
    let e = ledger.entries()[1];
    assert_eq!((e.delta_k, e.delta_q - e.delta_m), (0, 0));
    ledger_record(&mut ledger, &record(Protocol::Sqas, false, 6, 2, 12, 4));
    let e = ledger.entries()[2];
    assert_eq!((e.delta_m, e.delta_k, e.delta_q), (0, -8, 6));
    assert!(audit_law(&ledger).ok);
}

#[test]
fn audit_flags_violations() {
    assert!(audit_law(&Ledger::new()).ok);
    let mut ledger = Ledger::new();
    ledger.push(LedgerEntry { protocol: Protocol::Sqas, seed: 9, delta_q: 1, delta_m: 1, delta_k: 1 });
    let report = audit_law(&ledger);
    assert!(!report.ok);
    assert_eq!(report.violations[0].index, 0);
    assert_eq!(report.violations[0].scope, ViolationScope::Entry);
    assert_eq!(report.violations[1].scope, ViolationScope::Prefix);
}

#[test]
fn csv_round_trip() {
    let mut ledger = Ledger::new();
    ledger.push(LedgerEntry { protocol: Protocol::SecretSharing, seed: 3, delta_q: 6, delta_m: 6, delta_k: -12 });
    ledger.push(LedgerEntry { protocol: Protocol::ModifiedQas, seed: 4, delta_q: 3, delta_m: 0, delta_k: -4 });
    let text = ledger.to_csv_string();
    assert!(text.starts_with("protocol,seed,delta_q,delta_m,delta_k\nsecret_sharing,3,6,6,-12\n"));
    assert_eq!(Ledger::read_csv(text.as_bytes()).unwrap(), ledger);
    let empty = Ledger::new().to_csv_string();
    assert_eq!(empty, "protocol,seed,delta_q,delta_m,delta_k\n");
    assert!(Ledger::read_csv(empty.as_bytes()).unwrap().is_empty());
    assert!(Ledger::read_csv("a,b\n1,2\n".as_bytes()).is_err());
    assert!(Ledger::read_csv("protocol,seed,delta_q,delta_m,delta_k\nsqas,x,1,1,1\n".as_bytes()).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hash_is_linear(
            seed in proptest::collection::vec(any::<bool>(), 15),
            a in proptest::collection::vec(any::<bool>(), 10),
            b in proptest::collection::vec(any::<bool>(), 10),
        ) {
            let h = ToeplitzHash::new(10, 6, seed).unwrap();
            let ab: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let lhs: Vec<bool> = toeplitz_hash(&a, &h).unwrap().iter()
                .zip(toeplitz_hash(&b, &h).unwrap()).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(lhs, toeplitz_hash(&ab, &h).unwrap());
        }

        #[test]
        fn accept_recycling_keeps_x(seed in any::<u64>(), m in 1usize..5, s in 3usize..9) {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let key = KeyString::random(m, s, &mut r);
            let h = ToeplitzHash::random(2 * s, s - 2, &mut r).unwrap();
            let out = recycle_on_accept(&key, m, s, &h).unwrap();
            prop_assert_eq!(out.x(), key.x());
            prop_assert_eq!(out.len(), 2 * m + s - 2);
        }
    }
}
