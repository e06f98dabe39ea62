//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Runs without the libtest harness so the
//! lines always reach the terminal.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qotp::analysis::{
    leftover_hash_bound, leftover_instance, lemma1_check, ppt_min_eigenvalue, prefix_side_info, rel_entropy_ub,
    DEFAULT_ITERS, DEFAULT_RESTARTS,
};
use qotp::cli::{run_trials, TrialConfig, DAMAGE_THRESHOLD};
use qotp::keyring::{
    accept_len, audit_law, ledger_record, recycle_on_accept, recycle_on_reject, reject_len, toeplitz_hash, Ledger,
    ToeplitzHash,
};
use qotp::pauli::{bitflip_average, bits_to_index, index_to_bits, qotp_encrypt, random_bits, singlets, KeyString, PauliString};
use qotp::protocols::{
    analyze_modified_qas, run_protect_entanglement, run_secret_sharing, run_secret_sharing_with_pad, run_sqas,
    run_sqas_full, AttackModel, Backend, Basis, InputState, Protocol, SimulationParams,
};
use qotp::purity::CodeFamily;
use qotp::qcore::random::{haar_unitary, random_state};
use qotp::qcore::{trace_distance, vn_entropy, DensityMatrix, SubsystemLayout};
use qotp::stats::{wilson, Z99};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn payload(m: usize, r: &mut impl Rng) -> InputState {
    InputState::Vector(random_state(SubsystemLayout::single("payload", m), r).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, what: &str, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {took:.2?}"))
}

fn perfect_encryption() -> Outcome {
    timed(Duration::from_secs(30), "encryption check", || {
        let mut r = rng(1);
        let mut worst: f64 = 0.0;
        for m in 1..=3 {
            let layout = SubsystemLayout::single("payload", m);
            let mixed = DensityMatrix::maximally_mixed(layout.clone()).unwrap();
            let keys = 1usize << (2 * m);
            for _ in 0..50 {
                let rho = random_state(layout.clone(), &mut r).unwrap().to_density().unwrap();
                let images: Vec<DensityMatrix> =
                    (0..keys).map(|k| qotp_encrypt(&rho, &index_to_bits(k, 2 * m)).unwrap()).collect();
                let avg = DensityMatrix::mixture(&vec![1.0 / keys as f64; keys], &images).unwrap();
                worst = worst.max(trace_distance(&avg, &mixed).unwrap());
            }
        }
        ensure(worst <= 1e-10, || format!("trace distance {worst:e}"))?;
        Ok(format!("max trace distance {worst:.1e} over 150 states"))
    })
}

fn completeness() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 1.0;
    for i in 0..200 {
        let (m, s) = (1 + i % 3, 1 + (i / 3) % 4);
        let key = KeyString::random(m, s, &mut r);
        let rec = run_sqas(&SimulationParams::new(m, s, r.gen()), &payload(m, &mut r), &key, &AttackModel::None)
            .map_err(|e| e.to_string())?;
        ensure(rec.accepted, || format!("run {i} (m={m}, s={s}) rejected"))?;
        worst = worst.min(rec.fidelity_out);
    }
    ensure(worst >= 1.0 - 1e-9, || format!("fidelity {worst}"))?;
    Ok(format!("200/200 accepted, min fidelity {worst:.12}"))
}

fn soundness_scaling() -> Outcome {
    timed(Duration::from_secs(300), "soundness sweep", || {
        let (m, trials) = (2usize, 10_000u64);
        let mut rows = Vec::new();
        for s in 2..=6usize {
            let cfg = TrialConfig {
                protocol: Protocol::Sqas,
                m,
                s,
                attack: AttackModel::FixedPauli(PauliString::single(m + s, 0, 'X').unwrap()),
                backend: Backend::Stabilizer,
                seed: 3000 + s as u64,
            };
            let recs = run_trials(&cfg, trials, 0, None).map_err(|e| e.to_string())?;
            let accepted = recs.iter().filter(|r| r.accepted).count() as u64;
            let damaged = recs.iter().filter(|r| r.accepted && r.fidelity_out < DAMAGE_THRESHOLD).count() as u64;
            rows.push((s, accepted, damaged));
        }
        // Least-squares fit of accepted/trials = c·2^{-s}.
        let num: f64 = rows.iter().map(|&(s, a, _)| a as f64 / trials as f64 * 2f64.powi(-(s as i32))).sum();
        let den: f64 = rows.iter().map(|&(s, _, _)| 4f64.powi(-(s as i32))).sum();
        let c = num / den;
        ensure((0.5..=2.0).contains(&c), || format!("fitted c = {c}"))?;
        let mut rates = Vec::new();
        for &(s, accepted, damaged) in &rows {
            let target = c * 2f64.powi(-(s as i32));
            let ci = wilson(accepted, trials, Z99);
            ensure(ci.contains(target), || format!("s={s}: {accepted}/{trials}, c·2^-s = {target} outside {ci:?}"))?;
            let bound = 2.0 * 2f64.powi(-(s as i32));
            let rate = damaged as f64 / trials as f64;
            ensure(rate <= bound, || format!("s={s}: damaged accept rate {rate} > {bound}"))?;
            rates.push(format!("{:.4}", ci.estimate));
        }
        Ok(format!("c = {c:.3}, miss rates s=2..6: [{}]", rates.join(", ")))
    })
}

fn transpose_trick() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        for _ in 0..200 {
            worst = worst.max(lemma1_check(&haar_unitary(1 << m, &mut r).unwrap()).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst <= 1e-12, || format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e} over 600 unitaries"))
}

fn recycling() -> Outcome {
    let mut r = rng(5);
    for m in 1..=3 {
        for s in 3..=6 {
            let key = KeyString::random(m, s, &mut r);
            let acc = recycle_on_accept(&key, m, s, &ToeplitzHash::random(2 * s, s - 2, &mut r).unwrap())
                .map_err(|e| e.to_string())?;
            ensure(acc.len() == 2 * m + s - 2 && acc.x() == key.x(), || format!("accept branch at m={m} s={s}"))?;
            let rej = recycle_on_reject(&key, m, s, &ToeplitzHash::random(2 * m + 2 * s, m + s - 2, &mut r).unwrap())
                .map_err(|e| e.to_string())?;
            ensure(rej.len() == m + s - 2, || format!("reject branch at m={m} s={s}"))?;

            let input = payload(m, &mut r);
            let first = run_sqas_full(&SimulationParams::new(m, s, r.gen()), &input, &key, &AttackModel::None)
                .map_err(|e| e.to_string())?;
            let recycled = first.recycled.ok_or("accepted run produced no recycled key")?;
            ensure(recycled.x() == key.x(), || "recycled key lost x".into())?;
            let next = KeyString::pad(recycled.bits(), m, s, &mut r).map_err(|e| e.to_string())?;
            let second = run_sqas(&SimulationParams::new(m, s, r.gen()), &input, &next, &AttackModel::None)
                .map_err(|e| e.to_string())?;
            ensure(second.accepted && second.fidelity_out >= 1.0 - 1e-9, || format!("second round at m={m} s={s}"))?;
        }
    }
    // The gap to the limiting rates is exactly 2/(2m+2s) on both branches.
    for m in 1..=8usize {
        let mut last = f64::INFINITY;
        for s in [3usize, 10, 100, 1000, 100_000] {
            let total = (2 * m + 2 * s) as f64;
            let gap_a = (2 * m + s) as f64 / total - accept_len(m, s) as f64 / total;
            let gap_r = (m + s) as f64 / total - reject_len(m, s) as f64 / total;
            ensure((gap_a - 2.0 / total).abs() < 1e-15 && (gap_r - 2.0 / total).abs() < 1e-15, || {
                format!("rate gap at m={m} s={s}")
            })?;
            ensure(gap_a < last, || "rate gap not decreasing".into())?;
            last = gap_a;
        }
        ensure(last < 1e-4, || format!("rate gap {last} at s=100000"))?;
    }
    Ok("lengths 2m+s-2 and m+s-2, x kept, recycled key completes a second round".into())
}

fn eve_product_on_accept() -> Outcome {
    let (m, s) = (1, 1);
    let mut r = rng(6);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_sqrt: f64 = 0.0;
    let mut literal_failures = 0;
    let mut cases = 0;
    for target in 0..2 {
        let attack = AttackModel::cnot_probe(target);
        for f in 0..20u64 {
            let input = random_state(SubsystemLayout::single("payload", m), &mut r).unwrap();
            for k in 0..4 {
                let a = analyze_modified_qas(m, s, &input, &index_to_bits(k, 2), &attack, CodeFamily::new(f))
                    .map_err(|e| e.to_string())?;
                let Some(acc) = a.accept else { continue };
                let eps = (1.0 - acc.ab_overlap).max(0.0);
                let d = acc.eve_key_product_distance;
                ensure(d <= 2.0 * eps + 1e-10, || format!("D = {d} > 2(1-F) = {}", 2.0 * eps))?;
                ensure(d <= 3.0 * eps.sqrt() + 1e-10, || format!("D = {d} > 3√(1-F)"))?;
                if eps > 1e-12 {
                    worst_ratio = worst_ratio.max(d / (2.0 * eps));
                }
                worst_sqrt = worst_sqrt.max(d - 3.0 * eps.sqrt());
                if d > 2.0 * (1.0 - a.p_accept) + 1e-10 {
                    literal_failures += 1;
                }
                cases += 1;
            }
        }
    }
    let input = random_state(SubsystemLayout::single("payload", m), &mut r).unwrap();
    let mut clean: f64 = 0.0;
    for k in 0..4 {
        let a = analyze_modified_qas(m, s, &input, &index_to_bits(k, 2), &AttackModel::None, CodeFamily::new(k as u64))
            .map_err(|e| e.to_string())?;
        clean = clean.max(a.accept.ok_or("no-attack run rejected")?.eve_key_product_distance);
    }
    ensure(clean <= 1e-10, || format!("no-attack distance {clean:e}"))?;
    Ok(format!(
        "{cases} probe cases, max D/(2(1-F_ab)) = {worst_ratio:.3}, no-attack D = {clean:.1e} \
         (bound read with F_ab; the 2(1-p_acc) reading fails in {literal_failures} cases)"
    ))
}

fn leftover_hash() -> Outcome {
    let mut checked = 0;
    let mut worst_margin = f64::INFINITY;
    for j in 1..=6 {
        for e in 0..=j {
            for t in 1..=j {
                let inst = leftover_instance(j, t, &prefix_side_info(j, e)).map_err(|e| e.to_string())?;
                let bound = leftover_hash_bound(inst.lambda_max, inst.rank_e, t, 0.0).map_err(|e| e.to_string())?;
                ensure(inst.exact <= bound + 1e-12, || format!("j={j} e={e} t={t}: {} > {bound}", inst.exact))?;
                worst_margin = worst_margin.min(bound - inst.exact);
                checked += 1;
            }
        }
    }
    // Collision probability over all seeds, in integers: count · 2^t ≤ #seeds.
    let mut pairs = 0;
    for j in 1..=5 {
        for t in 1..=j {
            let seeds = 1u64 << (j + t - 1);
            let hashes: Vec<ToeplitzHash> =
                (0..seeds as usize).map(|s| ToeplitzHash::new(j, t, index_to_bits(s, j + t - 1)).unwrap()).collect();
            let outs: Vec<Vec<usize>> = hashes
                .iter()
                .map(|h| (0..1 << j).map(|x| bits_to_index(&toeplitz_hash(&index_to_bits(x, j), h).unwrap())).collect())
                .collect();
            for a in 0..1usize << j {
                for b in a + 1..1usize << j {
                    let count = outs.iter().filter(|o| o[a] == o[b]).count() as u64;
                    ensure(count << t <= seeds, || format!("j={j} t={t} pair ({a},{b}): {count}/{seeds}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{checked} instances within bound (min margin {worst_margin:.3}), {pairs} pairs collide with prob ≤ 2^-t"))
}

fn entanglement_protection() -> Outcome {
    let psi = singlets(1).map_err(|e| e.to_string())?.to_density().unwrap();
    let rho_ce = bitflip_average(&psi, &[0.5]).map_err(|e| e.to_string())?;
    let ppt = ppt_min_eigenvalue(&rho_ce, &["A"]).map_err(|e| e.to_string())?;
    ensure(ppt >= -1e-12, || format!("PPT min eigenvalue {ppt:e}"))?;
    let rel = rel_entropy_ub(&rho_ce, DEFAULT_RESTARTS, DEFAULT_ITERS, 8).map_err(|e| e.to_string())?;
    ensure(rel <= 0.05, || format!("relative entropy bound {rel}"))?;
    let mut biased = Vec::new();
    for p in [0.0, 0.25, 0.4] {
        let v = ppt_min_eigenvalue(&bitflip_average(&psi, &[p]).unwrap(), &["A"]).map_err(|e| e.to_string())?;
        ensure(v < -1e-3, || format!("p={p}: PT min eigenvalue {v}"))?;
        biased.push(format!("{v:.3}"));
    }
    for n in 1..=3 {
        let sa = vn_entropy(&singlets(n).unwrap().reduced(&["A"]).unwrap()).unwrap();
        ensure((sa - n as f64).abs() <= 1e-10, || format!("S(ρ_A) = {sa} for n={n}"))?;
        let rec = run_protect_entanglement(&SimulationParams::new(n, 1, 0), &vec![false; n], &AttackModel::None)
            .map_err(|e| e.to_string())?;
        let v = rec.analysis.as_ref().and_then(|a| a["ppt_min_eigenvalue"].as_f64()).ok_or("missing PPT value")?;
        ensure(v >= -1e-12, || format!("protocol PPT value {v} at n={n}"))?;
    }
    Ok(format!("PPT min {ppt:.1e}, rel entropy ≤ {rel:.1e}, biased PT mins [{}], S(ρ_A) = n", biased.join(", ")))
}

fn basic_law() -> Outcome {
    let points: [(Protocol, usize, usize, Backend, &str); 6] = [
        (Protocol::Sqas, 2, 3, Backend::Stabilizer, "random_pauli:0.3"),
        (Protocol::ModifiedQas, 1, 2, Backend::Dense, "none"),
        (Protocol::Interactive, 2, 2, Backend::Stabilizer, "none"),
        (Protocol::Teleport, 1, 2, Backend::Dense, "none"),
        (Protocol::SecretSharing, 1, 2, Backend::Dense, "none"),
        (Protocol::ProtectEntanglement, 2, 1, Backend::Dense, "none"),
    ];
    let per_point = 10_000 / points.len() as u64 + 1;
    let mut runs = Vec::new();
    let mut teleport_runs = 0;
    for (i, &(protocol, m, s, backend, attack)) in points.iter().enumerate() {
        let n = if protocol == Protocol::ProtectEntanglement { m } else { m + s };
        let cfg = TrialConfig {
            protocol,
            m,
            s,
            attack: AttackModel::parse(attack, n).map_err(|e| e.to_string())?,
            backend,
            seed: 9000 + i as u64,
        };
        let recs = run_trials(&cfg, per_point, 0, None).map_err(|e| e.to_string())?;
        if protocol == Protocol::Teleport {
            for rec in &recs {
                let (dq, dm, dk) = rec.deltas();
                ensure(dk == 0 && dq - dm == 0, || format!("teleport run with δK={dk}, δQ-δM={}", dq - dm))?;
                teleport_runs += 1;
            }
        }
        runs.push(recs);
    }
    // Interleave so the prefix check sees a mixed history.
    let mut ledger = Ledger::new();
    for k in 0..per_point as usize {
        for recs in &runs {
            ledger_record(&mut ledger, &recs[k]);
        }
    }
    let report = audit_law(&ledger);
    ensure(report.ok, || format!("{} violations, first {:?}", report.violations.len(), report.violations.first()))?;
    let (q, m, k) = ledger.totals();
    Ok(format!("{} runs audited, totals δQ={q} δM={m} δK={k}; {teleport_runs} teleport runs with δK = δQ-δM = 0", ledger.len()))
}

fn secret_sharing() -> Outcome {
    let mut r = rng(10);
    let mut joint: f64 = 1.0;
    let mut claire: f64 = 0.0;
    for m in 1..=3 {
        let s = 2;
        let input = payload(m, &mut r);
        let x = random_bits(2 * m, &mut r);
        let sk = random_bits(2 * s, &mut r);
        let params = SimulationParams::new(m, s, r.gen());
        let out = run_secret_sharing(&params, &input, &x, &sk, &AttackModel::None).map_err(|e| e.to_string())?;
        ensure(out.record.accepted, || format!("m={m} rejected"))?;
        joint = joint.min(out.record.fidelity_out);
        let pads = 1usize << (2 * m);
        let shares: Vec<DensityMatrix> = (0..pads)
            .map(|j| {
                run_secret_sharing_with_pad(&params, &input, &index_to_bits(j, 2 * m), &x, &sk, &AttackModel::None)
                    .unwrap()
                    .claire_holds
                    .unwrap()
            })
            .collect();
        let avg = DensityMatrix::mixture(&vec![1.0 / pads as f64; pads], &shares).unwrap();
        let mixed = DensityMatrix::maximally_mixed(avg.layout().clone()).unwrap();
        claire = claire.max(trace_distance(&avg, &mixed).unwrap());
    }
    ensure(joint >= 1.0 - 1e-10, || format!("joint fidelity {joint}"))?;
    ensure(claire <= 1e-10, || format!("Claire-alone distance {claire:e}"))?;
    // Bob's 2-bit string J ⊕ X over all pads J and classical keys X.
    let input = payload(1, &mut r);
    let sk = random_bits(2, &mut r);
    let params = SimulationParams::new(1, 1, 11);
    let mut counts = [0u32; 4];
    for j in 0..4 {
        for x in 0..4 {
            let out = run_secret_sharing_with_pad(&params, &input, &index_to_bits(j, 2), &index_to_bits(x, 2), &sk, &AttackModel::None)
                .map_err(|e| e.to_string())?;
            counts[bits_to_index(&out.bob_holds.ok_or("missing Bob share")?)] += 1;
        }
    }
    ensure(counts == [4, 4, 4, 4], || format!("Bob counts {counts:?}"))?;
    Ok(format!("joint fidelity ≥ {joint:.12}, Claire distance {claire:.1e}, Bob counts {counts:?}"))
}

fn backends_and_scale() -> Outcome {
    let mut r = rng(11);
    let mut compared = 0;
    for trial in 0..300u64 {
        let m = r.gen_range(1..=3);
        let s = r.gen_range(1..=6 - m);
        let n = m + s;
        let attack = match trial % 5 {
            0 => AttackModel::None,
            1 => AttackModel::FixedPauli(PauliString::single(n, r.gen_range(0..n), ['X', 'Y', 'Z'][r.gen_range(0..3)]).unwrap()),
            2 => AttackModel::RandomPauli { p: 0.4 },
            3 => AttackModel::StealReplace { qubits: vec![r.gen_range(0..n)] },
            _ => AttackModel::MeasureResend { basis: if trial % 2 == 0 { Basis::Z } else { Basis::X } },
        };
        let input = InputState::random_clifford(m, &mut r);
        let key = KeyString::random(m, s, &mut r);
        let dense = SimulationParams::new(m, s, r.gen());
        let a = run_sqas_full(&dense, &input, &key, &attack).map_err(|e| e.to_string())?;
        let b = run_sqas_full(&dense.with_backend(Backend::Stabilizer), &input, &key, &attack).map_err(|e| e.to_string())?;
        let syndrome = |rec: &qotp::protocols::RunRecord| rec.analysis.as_ref().map(|a| a["syndrome"].clone());
        ensure(
            a.record.accepted == b.record.accepted
                && syndrome(&a.record) == syndrome(&b.record)
                && (a.record.fidelity_out - b.record.fidelity_out).abs() < 1e-9
                && a.recycled == b.recycled,
            || format!("trial {trial} ({attack}, m={m}, s={s}) differs"),
        )?;
        compared += 1;
    }
    let (m, s) = (180, 20);
    let start = Instant::now();
    let input = InputState::random_clifford(m, &mut r);
    let key = KeyString::random(m, s, &mut r);
    let params = SimulationParams::new(m, s, 12).with_backend(Backend::Stabilizer);
    let rec = run_sqas(&params, &input, &key, &AttackModel::None).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(rec.accepted && rec.fidelity_out >= 1.0 - 1e-12, || "n=200 run failed".into())?;
    ensure(took < Duration::from_secs(1), || format!("n=200 run took {took:?}"))?;
    Ok(format!("{compared} Clifford runs identical across backends; n=200, s=20 run in {took:.2?}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("perfect encryption", perfect_encryption),
        ("authentication completeness", completeness),
        ("soundness scaling with s", soundness_scaling),
        ("transpose trick", transpose_trick),
        ("key recycling lengths and reuse", recycling),
        ("Eve-key product on accept", eve_product_on_accept),
        ("leftover hash bound", leftover_hash),
        ("entanglement protection", entanglement_protection),
        ("resource law over mixed runs", basic_law),
        ("secret sharing", secret_sharing),
        ("backend equivalence and scale", backends_and_scale),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
