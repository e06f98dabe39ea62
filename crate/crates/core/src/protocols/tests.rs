use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::keyring::{accept_len, audit_law, ledger_record, Ledger};
use crate::pauli::{index_to_bits, random_bits, KeyString, PauliString};
use crate::purity::CodeFamily;
use crate::qcore::random::random_state;
use crate::qcore::{trace_distance, DensityMatrix, SubsystemLayout};
use crate::stats::{wilson, Z99};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vector_input(m: usize, r: &mut impl Rng) -> InputState {
    InputState::Vector(random_state(SubsystemLayout::single("payload", m), r).unwrap())
}

#[test]
fn attack_specs_parse_and_print() {
    for spec in ["none", "fixed_pauli:X0", "random_pauli:0.25", "steal:0,2", "measure_resend:x", "probe_cnot:1"] {
        let a = AttackModel::parse(spec, 4).unwrap();
        let printed = a.to_string();
        assert_eq!(AttackModel::parse(&printed, 4).unwrap(), a, "{spec}");
    }
    assert_eq!(AttackModel::parse("measure_resend", 3).unwrap(), AttackModel::MeasureResend { basis: Basis::Z });
    for bad in ["fixed_pauli:X9", "random_pauli:1.5", "steal:0,1,2", "steal:4", "steal:1,1", "warp", "probe_cnot:7"] {
        assert!(AttackModel::parse(bad, 4).is_err(), "{bad}");
    }
}

#[test]
fn random_pauli_extremes() {
    let mut r = rng(1);
    assert!(AttackModel::RandomPauli { p: 0.0 }.sample_pauli(5, &mut r).unwrap().is_scalar());
    let full = AttackModel::RandomPauli { p: 1.0 }.sample_pauli(5, &mut r).unwrap();
    assert_eq!(full.weight(), 5);
}

#[test]
fn sqas_complete_on_dense_backend() {
    let mut r = rng(2);
    for m in 1..=3 {
        for s in 1..=4 {
            let input = vector_input(m, &mut r);
            let key = KeyString::random(m, s, &mut r);
            let params = SimulationParams::new(m, s, r.gen());
            let rec = run_sqas(&params, &input, &key, &AttackModel::None).unwrap();
            assert!(rec.accepted, "m={m} s={s}");
            assert!(rec.fidelity_out >= 1.0 - 1e-10);
            assert_eq!((rec.qubits_sent, rec.cbits_forward, rec.cbits_back), ((m + s) as u64, 0, 1));
            assert_eq!(rec.key_consumed_bits, (2 * m + 2 * s) as u64);
        }
    }
}

#[test]
fn sqas_complete_on_stabilizer_backend() {
    let mut r = rng(3);
    for (m, s) in [(1, 1), (3, 4), (10, 10), (40, 8)] {
        let input = InputState::random_clifford(m, &mut r);
        let key = KeyString::random(m, s, &mut r);
        let params = SimulationParams::new(m, s, r.gen()).with_backend(Backend::Stabilizer);
        let rec = run_sqas(&params, &input, &key, &AttackModel::None).unwrap();
        assert!(rec.accepted && rec.fidelity_out == 1.0, "m={m} s={s}");
        let tableau = run_sqas(&params, &input, &key, &AttackModel::StealReplace { qubits: vec![] }.clone());
        assert!(tableau.is_err());
    }
}

#[test]
fn backends_agree_on_clifford_runs() {
    let mut r = rng(4);
    let mut compared = 0;
    for trial in 0..300u64 {
        let m = r.gen_range(1..=3);
        let s = r.gen_range(1..=3);
        let n = m + s;
        let attack = match trial % 6 {
            0 => AttackModel::None,
            1 => AttackModel::FixedPauli(PauliString::single(n, r.gen_range(0..n), ['X', 'Y', 'Z'][r.gen_range(0..3)]).unwrap()),
            2 => AttackModel::RandomPauli { p: 0.3 },
            3 => AttackModel::StealReplace { qubits: vec![r.gen_range(0..n)] },
            4 => AttackModel::MeasureResend { basis: Basis::Z },
            _ => AttackModel::MeasureResend { basis: Basis::X },
        };
        let input = InputState::random_clifford(m, &mut r);
        let key = KeyString::random(m, s, &mut r);
        let dense = SimulationParams::new(m, s, r.gen());
        let stab = dense.with_backend(Backend::Stabilizer);
        let a = run_sqas_full(&dense, &input, &key, &attack).unwrap();
        let b = run_sqas_full(&stab, &input, &key, &attack).unwrap();
        assert_eq!(a.record.accepted, b.record.accepted, "trial {trial} {attack}");
        assert_eq!(a.record.analysis.as_ref().unwrap()["syndrome"], b.record.analysis.as_ref().unwrap()["syndrome"]);
        assert!((a.record.fidelity_out - b.record.fidelity_out).abs() < 1e-9, "trial {trial} {attack}");
        assert_eq!(a.recycled, b.recycled);
        assert_eq!(a.record.hash_seed, b.record.hash_seed);
        compared += 1;
    }
    assert_eq!(compared, 300);
}

#[test]
fn code_stabilizer_attack_is_invisible() {
    let mut r = rng(5);
    for _ in 0..20 {
        let (m, s) = (2, 3);
        let params = SimulationParams::new(m, s, r.gen());
        let key = KeyString::random(m, s, &mut r);
        // The run's first draw picks the family, so the code is known here.
        let family = CodeFamily::random(&mut params.protocol_rng());
        let code = family.sample(m, s, key.z()).unwrap();
        for g in code.stabilizers() {
            let input = vector_input(m, &mut r);
            let rec = run_sqas(&params, &input, &key, &AttackModel::FixedPauli(g)).unwrap();
            assert!(rec.accepted);
            assert!(rec.fidelity_out >= 1.0 - 1e-10);
        }
    }
}

/// Fraction of non-identity Paulis on `n = m + s` qubits without X support on
/// the last `s` qubits: the miss rate of a uniformly random Clifford code.
fn uniform_code_miss_rate(m: usize, s: usize) -> f64 {
    let n = m + s;
    let miss = 4f64.powi(m as i32) * 2f64.powi(s as i32) - 1.0;
    miss / (4f64.powi(n as i32) - 1.0)
}

#[test]
fn fixed_z_miss_rate_and_damage() {
    let (m, s, trials) = (2, 4, 10_000u64);
    let mut r = rng(6);
    let attack = AttackModel::FixedPauli(PauliString::single(m + s, 1, 'Z').unwrap());
    let (mut accepted, mut damaged) = (0u64, 0u64);
    for _ in 0..trials {
        let input = InputState::random_clifford(m, &mut r);
        let key = KeyString::random(m, s, &mut r);
        let params = SimulationParams::new(m, s, r.gen()).with_backend(Backend::Stabilizer);
        let rec = run_sqas(&params, &input, &key, &attack).unwrap();
        if rec.accepted {
            accepted += 1;
            if rec.fidelity_out < 0.99 {
                damaged += 1;
            }
        }
    }
    let p = uniform_code_miss_rate(m, s);
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = accepted as f64 / trials as f64;
    assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate} vs {p}");
    assert!((damaged as f64 / trials as f64) <= 2.0 * 2f64.powi(-(s as i32)));
}

#[test]
fn recycled_key_runs_a_second_round() {
    let mut r = rng(7);
    for (m, s) in [(1, 3), (2, 4), (3, 5)] {
        let input = vector_input(m, &mut r);
        let key = KeyString::random(m, s, &mut r);
        let params = SimulationParams::new(m, s, r.gen());
        let out = run_sqas_full(&params, &input, &key, &AttackModel::None).unwrap();
        let recycled = out.recycled.unwrap();
        assert_eq!(recycled.len(), accept_len(m, s));
        assert_eq!(recycled.x(), key.x());
        assert_eq!(out.record.key_recycled_bits, accept_len(m, s) as u64);
        assert!(out.record.hash_seed.is_some());
        let next = KeyString::pad(recycled.bits(), m, s, &mut r).unwrap();
        let second = run_sqas(&params.with_seed(r.gen()), &input, &next, &AttackModel::None).unwrap();
        assert!(second.accepted && second.fidelity_out >= 1.0 - 1e-10);
    }
}

#[test]
fn recycling_on_small_parameters() {
    let mut r = rng(8);
    let input = vector_input(1, &mut r);
    let key = KeyString::random(1, 1, &mut r);
    let params = SimulationParams::new(1, 1, 3);
    let ok = run_sqas_full(&params, &input, &key, &AttackModel::None).unwrap();
    assert_eq!(ok.record.key_recycled_bits, 2);
    assert!(ok.record.hash_seed.is_none());
    let mut off = params;
    off.recycle = false;
    let rec = run_sqas(&off, &input, &key, &AttackModel::None).unwrap();
    assert_eq!((rec.cbits_back, rec.key_recycled_bits), (0, 0));
}

#[test]
fn interactive_accounting_and_pairing() {
    let mut r = rng(9);
    let (m, s) = (2, 3);
    let attack = AttackModel::FixedPauli(PauliString::single(m + s, 0, 'X').unwrap());
    let mut ledger = Ledger::new();
    for _ in 0..200 {
        let seed = r.gen();
        let params = SimulationParams::new(m, s, seed).with_backend(Backend::Stabilizer);
        let input = InputState::random_clifford(m, &mut input_rng(seed));
        let inter = run_interactive(&params, &input, &attack).unwrap();
        assert_eq!(inter.key_consumed_bits, 0);
        assert!(inter.cbits_forward >= (2 * m + 2 * s) as u64 && inter.cbits_back >= 1);
        let key = KeyString::random(m, s, &mut key_rng(seed));
        let sqas = run_sqas(&params, &input, &key, &attack).unwrap();
        assert_eq!(sqas.cbits_forward, 0);
        assert_eq!(inter.accepted, sqas.accepted);
        ledger_record(&mut ledger, &inter);
        let (dq, dm, dk) = inter.deltas();
        assert!(dk == 0 && dk <= dq - dm);
    }
    assert!(audit_law(&ledger).ok);

    let params = SimulationParams::new(m, s, 1);
    let rec = run_interactive(&params, &vector_input(m, &mut r), &AttackModel::None).unwrap();
    assert!(rec.accepted && rec.fidelity_out >= 1.0 - 1e-10);
}

#[test]
fn modified_qas_no_attack() {
    let mut r = rng(10);
    for (m, s) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let input = vector_input(m, &mut r);
        let yz = random_bits(2 * s, &mut r);
        let params = SimulationParams::new(m, s, r.gen());
        let rec = run_modified_qas(&params, &input, &yz, &AttackModel::None).unwrap();
        assert!(rec.accepted);
        assert!(rec.fidelity_out >= 1.0 - 1e-10);
        assert!(rec.eve_key_product_distance.unwrap() <= 1e-10);
        let overlap = rec.analysis.as_ref().unwrap()["ab_overlap"].as_f64().unwrap();
        assert!(overlap >= 1.0 - 1e-10);
        assert_eq!(rec.key_consumed_bits, (2 * s) as u64);
    }
}

#[test]
fn modified_qas_limits() {
    let mut r = rng(11);
    let input = vector_input(3, &mut r);
    let params = SimulationParams::new(3, 1, 0);
    assert!(run_modified_qas(&params, &input, &[false, false], &AttackModel::None).is_err());
    let input = vector_input(1, &mut r);
    let params = SimulationParams::new(1, 1, 0).with_backend(Backend::Stabilizer);
    assert!(run_modified_qas(&params, &input, &[false, false], &AttackModel::None).is_err());
    let params = SimulationParams::new(1, 2, 0);
    let mr = AttackModel::MeasureResend { basis: Basis::Z };
    assert!(run_modified_qas(&params, &input, &[false; 4], &mr).is_err());
}

#[test]
fn modified_qas_matches_sqas_accept_rates() {
    let (m, s, trials) = (1, 2, 4000u64);
    let mut r = rng(12);
    let attacks = [
        AttackModel::FixedPauli(PauliString::single(m + s, 0, 'Y').unwrap()),
        AttackModel::FixedPauli(PauliString::parse("X0 Z2", m + s).unwrap()),
        AttackModel::StealReplace { qubits: vec![2] },
    ];
    for attack in &attacks {
        let (mut a, mut b) = (0u64, 0u64);
        for _ in 0..trials {
            let input = vector_input(m, &mut r);
            let key = KeyString::random(m, s, &mut r);
            let pa = SimulationParams::new(m, s, r.gen());
            let pb = SimulationParams::new(m, s, r.gen());
            a += run_sqas(&pa, &input, &key, attack).unwrap().accepted as u64;
            b += run_modified_qas(&pb, &input, key.yz(), attack).unwrap().accepted as u64;
        }
        let (ia, ib) = (wilson(a, trials, Z99), wilson(b, trials, Z99));
        assert!(ia.lo <= ib.hi && ib.lo <= ia.hi, "{attack}: {a} vs {b}");
    }
}

#[test]
fn modified_qas_exact_analysis_matches_sampling() {
    let mut r = rng(13);
    let (m, s) = (1, 1);
    let input = vector_input(m, &mut r);
    let psi = input.to_vector().unwrap();
    let attack = AttackModel::cnot_probe(0);
    let (mut accepted, mut expected, mut variance) = (0.0, 0.0, 0.0);
    for seed in 0..3000u64 {
        let yz = random_bits(2, &mut r);
        let params = SimulationParams::new(m, s, seed);
        // The family is the run's first draw, so the exact analysis can use it.
        let family = CodeFamily::random(&mut params.protocol_rng());
        let exact = analyze_modified_qas(m, s, &psi, &yz, &attack, family).unwrap();
        let total = exact.p_accept + exact.reject.map_or(0.0, |b| b.probability);
        assert!((total - 1.0).abs() < 1e-12);
        let rec = run_modified_qas(&params, &input, &yz, &attack).unwrap();
        if rec.accepted {
            accepted += 1.0;
            let d = exact.accept.unwrap().eve_key_product_distance;
            assert!((rec.eve_key_product_distance.unwrap() - d).abs() < 1e-9);
        }
        expected += exact.p_accept;
        variance += exact.p_accept * (1.0 - exact.p_accept);
    }
    assert!((accepted - expected).abs() <= 4.0 * variance.sqrt(), "{accepted} vs {expected}");
}

#[test]
fn modified_qas_probe_bound() {
    let mut r = rng(14);
    let (m, s) = (1, 1);
    for target in 0..2 {
        let attack = AttackModel::cnot_probe(target);
        for f in 0..40u64 {
            let input = random_state(SubsystemLayout::single("payload", m), &mut r).unwrap();
            for k in 0..4 {
                let yz = index_to_bits(k, 2);
                let a = analyze_modified_qas(m, s, &input, &yz, &attack, CodeFamily::new(f)).unwrap();
                let acc = a.accept.unwrap();
                let eps = 1.0 - acc.ab_overlap;
                assert!(acc.eve_key_product_distance <= 2.0 * eps + 1e-10, "f={f} k={k}");
                assert!(acc.eve_key_product_distance <= 3.0 * eps.max(0.0).sqrt() + 1e-10);
            }
        }
    }
    let input = random_state(SubsystemLayout::single("payload", m), &mut r).unwrap();
    let none = analyze_modified_qas(m, s, &input, &[false, true], &AttackModel::None, CodeFamily::new(1)).unwrap();
    assert!((none.p_accept - 1.0).abs() < 1e-12);
    let acc = none.accept.unwrap();
    assert!(acc.eve_key_product_distance <= 1e-10 && acc.ab_overlap >= 1.0 - 1e-10 && acc.fidelity >= 1.0 - 1e-10);
}

#[test]
fn teleport_ideal_and_accounting() {
    let mut r = rng(15);
    for (m, s) in [(1, 1), (1, 3), (2, 2)] {
        let input = vector_input(m, &mut r);
        let params = SimulationParams::new(m, s, r.gen());
        let rec = run_teleport_baseline(&params, &input, &AttackModel::None).unwrap();
        assert!(rec.accepted);
        assert!(rec.fidelity_out >= 1.0 - 1e-10, "m={m} s={s}: {}", rec.fidelity_out);
        assert_eq!((rec.qubits_sent, rec.cbits_forward, rec.key_consumed_bits), (m as u64, 2 * m as u64, 0));
        let (dq, dm, dk) = rec.deltas();
        assert_eq!((dk, dq - dm), (0, 0));
    }
    let params = SimulationParams::new(3, 1, 0);
    assert!(run_teleport_baseline(&params, &vector_input(3, &mut r), &AttackModel::None).is_err());
}

#[test]
fn teleport_bell_outcomes_uniform() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let (m, s, trials) = (1, 1, 10_000u64);
    let mut r = rng(16);
    let input = vector_input(m, &mut r);
    let mut counts = [0u64; 4];
    for seed in 0..trials {
        let rec = run_teleport_baseline(&SimulationParams::new(m, s, seed), &input, &AttackModel::None).unwrap();
        counts[rec.analysis.unwrap()["bell_outcome"].as_u64().unwrap() as usize] += 1;
    }
    let expected = trials as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new(3.0).unwrap().inverse_cdf(0.999);
    assert!(chi2 < critical, "chi2 {chi2} counts {counts:?}");
}

#[test]
fn teleport_detects_bit_flips() {
    let mut r = rng(17);
    let (m, s) = (1, 3);
    let attack = AttackModel::FixedPauli(PauliString::single(m + s, 3, 'X').unwrap());
    let input = vector_input(m, &mut r);
    let rejected = (0..400u64)
        .filter(|&seed| !run_teleport_baseline(&SimulationParams::new(m, s, seed), &input, &attack).unwrap().accepted)
        .count();
    assert!(rejected > 300, "{rejected}");
}

#[test]
fn secret_sharing_joint_recovery() {
    let mut r = rng(18);
    for (m, s) in [(1, 1), (2, 3), (3, 2)] {
        let input = vector_input(m, &mut r);
        let x = random_bits(2 * m, &mut r);
        let sk = random_bits(2 * s, &mut r);
        let params = SimulationParams::new(m, s, r.gen());
        let out = run_secret_sharing(&params, &input, &x, &sk, &AttackModel::None).unwrap();
        assert!(out.record.accepted && out.record.fidelity_out >= 1.0 - 1e-10);
        assert_eq!(out.bob_holds.as_ref().unwrap().len(), 2 * m);
        assert_eq!(out.claire_holds.as_ref().unwrap().num_qubits(), m);
        let (dq, dm, dk) = out.record.deltas();
        assert!(dk <= dq - dm);
    }
}

#[test]
fn secret_sharing_claire_alone_sees_noise() {
    let mut r = rng(19);
    for (m, s) in [(1, 1), (2, 1), (3, 1)] {
        let input = vector_input(m, &mut r);
        let x = random_bits(2 * m, &mut r);
        let sk = random_bits(2 * s, &mut r);
        let params = SimulationParams::new(m, s, 5);
        let pads = 1usize << (2 * m);
        let shares: Vec<DensityMatrix> = (0..pads)
            .map(|j| {
                let out = run_secret_sharing_with_pad(&params, &input, &index_to_bits(j, 2 * m), &x, &sk, &AttackModel::None)
                    .unwrap();
                out.claire_holds.unwrap()
            })
            .collect();
        let avg = DensityMatrix::mixture(&vec![1.0 / pads as f64; pads], &shares).unwrap();
        let mixed = DensityMatrix::maximally_mixed(avg.layout().clone()).unwrap();
        assert!(trace_distance(&avg, &mixed).unwrap() <= 1e-10, "m={m}");
    }
}

#[test]
fn secret_sharing_bob_alone_sees_uniform_bits() {
    let mut r = rng(20);
    let input = vector_input(1, &mut r);
    let sk = random_bits(2, &mut r);
    let params = SimulationParams::new(1, 1, 9);
    for j in 0..4 {
        let pad = index_to_bits(j, 2);
        let mut counts = [0u32; 4];
        for xi in 0..4 {
            let out = run_secret_sharing_with_pad(&params, &input, &pad, &index_to_bits(xi, 2), &sk, &AttackModel::None)
                .unwrap();
            counts[crate::pauli::bits_to_index(&out.bob_holds.unwrap())] += 1;
        }
        assert_eq!(counts, [1, 1, 1, 1]);
    }
}

#[test]
fn secret_sharing_aborts_on_reject() {
    let mut r = rng(21);
    let (m, s) = (1, 3);
    let attack = AttackModel::FixedPauli(PauliString::single(m + s, 3, 'X').unwrap());
    let input = vector_input(m, &mut r);
    let mut aborted = 0;
    for seed in 0..100 {
        let out = run_secret_sharing(&SimulationParams::new(m, s, seed), &input, &[false; 2], &[false; 6], &attack).unwrap();
        if !out.record.accepted {
            aborted += 1;
            assert!(out.bob_holds.is_none() && out.claire_holds.is_none());
            assert_eq!(out.record.cbits_forward, 0);
        }
    }
    assert!(aborted > 50);
}

#[test]
fn protect_entanglement_round_trip() {
    let mut r = rng(22);
    for n in 1..=3 {
        let key = random_bits(n, &mut r);
        let rec = run_protect_entanglement(&SimulationParams::new(n, 1, 0), &key, &AttackModel::None).unwrap();
        assert!(rec.fidelity_out >= 1.0 - 1e-10);
        assert!(rec.eve_key_product_distance.unwrap() <= 1e-10);
        let ppt = rec.analysis.as_ref().unwrap()["ppt_min_eigenvalue"].as_f64().unwrap();
        assert!(ppt >= -1e-12);
        let (dq, dm, dk) = rec.deltas();
        assert_eq!((dq, dm, dk), (n as i64, n as i64, -(n as i64)));
    }
    let stolen = run_protect_entanglement(&SimulationParams::new(2, 1, 0), &[true, false], &AttackModel::StealReplace { qubits: vec![0] }).unwrap();
    assert!(stolen.fidelity_out < 0.5);
}

#[test]
fn runs_are_deterministic() {
    let mut r = rng(23);
    let input = vector_input(2, &mut r);
    let key = KeyString::random(2, 3, &mut r);
    let params = SimulationParams::new(2, 3, 77);
    let attack = AttackModel::RandomPauli { p: 0.4 };
    let a = run_sqas(&params, &input, &key, &attack).unwrap();
    let b = run_sqas(&params, &input, &key, &attack).unwrap();
    assert_eq!(a.to_json_line(), b.to_json_line());
}

#[test]
fn records_carry_required_fields() {
    let mut r = rng(24);
    let input = vector_input(1, &mut r);
    let key = KeyString::random(1, 2, &mut r);
    let rec = run_sqas(&SimulationParams::new(1, 2, 1), &input, &key, &AttackModel::None).unwrap();
    let value: serde_json::Value = serde_json::from_str(&rec.to_json_line()).unwrap();
    for field in RunRecord::REQUIRED_FIELDS {
        assert!(value.get(field).is_some(), "{field}");
    }
    assert!(value["eve_key_product_distance"].is_null());
    assert_eq!(value["protocol"], "sqas");
}

#[test]
fn parameter_validation() {
    let mut r = rng(25);
    let key = KeyString::random(1, 1, &mut r);
    let input = vector_input(1, &mut r);
    assert!(matches!(
        run_sqas(&SimulationParams::new(0, 1, 0), &input, &key, &AttackModel::None),
        Err(ProtocolError::Config(_)) | Err(ProtocolError::Pauli(_))
    ));
    let stab = SimulationParams::new(1, 1, 0).with_backend(Backend::Stabilizer);
    assert!(matches!(run_sqas(&stab, &input, &key, &AttackModel::None), Err(ProtocolError::Unsupported(_))));
    let cliff = InputState::random_clifford(1, &mut r);
    assert!(matches!(run_sqas(&stab, &cliff, &key, &AttackModel::cnot_probe(0)), Err(ProtocolError::Unsupported(_))));
    let big = KeyString::random(20, 5, &mut r);
    let big_input = InputState::random_clifford(20, &mut r);
    assert!(matches!(
        run_sqas(&SimulationParams::new(20, 5, 0), &big_input, &big, &AttackModel::None),
        Err(ProtocolError::SizeCap { .. })
    ));
    assert!(run_sqas(&SimulationParams::new(1, 2, 0), &input, &key, &AttackModel::None).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sqas_ledger_entries_obey_law(seed in any::<u64>(), m in 1usize..4, s in 1usize..6, p in 0.0f64..1.0) {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let input = InputState::random_clifford(m, &mut r);
            let key = KeyString::random(m, s, &mut r);
            let params = SimulationParams::new(m, s, seed).with_backend(Backend::Stabilizer);
            let rec = run_sqas(&params, &input, &key, &AttackModel::RandomPauli { p }).unwrap();
            let (dq, dm, dk) = rec.deltas();
            prop_assert!(dk <= dq - dm);
            prop_assert!((0.0..=1.0).contains(&rec.fidelity_out));
        }

        #[test]
        fn accepted_clean_runs_have_full_fidelity(seed in any::<u64>(), m in 1usize..3, s in 1usize..4) {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let input = vector_input(m, &mut r);
            let key = KeyString::random(m, s, &mut r);
            let rec = run_sqas(&SimulationParams::new(m, s, seed), &input, &key, &AttackModel::None).unwrap();
            prop_assert!(rec.accepted && rec.fidelity_out >= 1.0 - 1e-10);
        }
    }
}
