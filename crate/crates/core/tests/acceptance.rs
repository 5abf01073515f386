//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use qubobs::protocols::{bb84_run, teleport_classical, teleport_full_branch, Bb84Params};
use qubobs::verifier::audit_run_from;
use qubobs::{AlignedPair, Classification, Color, DiskSystem, Gate, Lockstep, RealState, Region, Sign, Step};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_state(rng: &mut impl Rng, n: usize) -> RealState {
    loop {
        let amps: Vec<f64> = (0..1usize << n)
            .map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(-1.0..1.0) })
            .collect();
        if amps.iter().map(|a| a * a).sum::<f64>() > 0.04 {
            let s = RealState::normalized(amps).unwrap();
            if s.probabilities().iter().all(|&p| p == 0.0 || p > 1e-6) {
                return s;
            }
        }
    }
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let states: Vec<RealState> = (0..1000).map(|i| random_state(&mut rng, 1 + i % 2)).collect();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for s in &states {
        let back = DiskSystem::encode(s).decode().map_err(|e| e.to_string())?;
        worst = worst.max(back.distance(s));
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(worst <= 1e-9, || format!("worst distance {worst:e}"))?;
    check(elapsed < 1.0, || format!("took {elapsed:.3}s"))?;
    Ok(format!("1000 states, worst distance {worst:.1e}, {elapsed:.3}s"))
}

fn alignment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (p, pp): (f64, f64) = (rng.random(), rng.random());
        let (lo, hi) = ((p + pp - 1.0).max(0.0), p.min(pp));
        let theta = lo + rng.random::<f64>() * (hi - lo);
        let pair = AlignedPair::new(p, pp, theta).map_err(|e| e.to_string())?;
        let want = [theta, p - theta, 1.0 - p - pp + theta, pp - theta];
        for (a, w) in pair.areas().iter().zip(want) {
            check((a - w).abs() <= 1e-12 && *a >= -1e-12, || {
                format!("areas {:?} vs {want:?}", pair.areas())
            })?;
        }
        let quoted = [want[0], want[1], want[3], want[2]].map(|x| x.max(0.0).sqrt());
        let decoded = pair.to_disk().decode().map_err(|e| e.to_string())?;
        for (a, q) in decoded.amplitudes().iter().zip(quoted) {
            check((a - q).abs() <= 1e-9, || format!("decoded {decoded} vs {quoted:?}"))?;
        }
    }
    Ok("1000 triples".into())
}

fn two_qubit_gray_encoding() -> Outcome {
    let (s3, s6) = (1.0 / 3f64.sqrt(), 1.0 / 6f64.sqrt());
    let (disk, pair) = DiskSystem::encode_pair([s3, s6, s3, s6]).map_err(|e| e.to_string())?;
    let areas: Vec<f64> = disk.regions().iter().map(|r| r.fraction).collect();
    let want = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0];
    check(areas.len() == 4, || format!("{} regions", areas.len()))?;
    for (a, w) in areas.iter().zip(want) {
        check((a - w).abs() <= 1e-12, || format!("areas {areas:?}"))?;
    }
    check(
        (pair.p - 0.5).abs() <= 1e-12
            && (pair.pp - 0.5).abs() <= 1e-12
            && (pair.theta - 1.0 / 3.0).abs() <= 1e-12,
        || format!("P={} P'={} theta={}", pair.p, pair.pp, pair.theta),
    )?;
    Ok("areas (1/3, 1/6, 1/3, 1/6), P = P' = 1/2, theta = 1/3".into())
}

fn double_hadamard() -> Outcome {
    for bit in 0..2 {
        let start = RealState::basis(1, bit).unwrap();
        let disk = DiskSystem::encode(&start);
        let twice = disk
            .apply_gate(&Gate::H, 0)
            .and_then(|d| d.apply_gate(&Gate::H, 0))
            .map_err(|e| e.to_string())?;
        let (out, report) = twice.cancel().map_err(|e| e.to_string())?;
        check(out.regions().len() == 1 && out.regions()[0].same_kind(&disk.regions()[0]), || {
            format!("got {out}")
        })?;
        check((out.regions()[0].fraction - 1.0).abs() <= 1e-12, || format!("got {out}"))?;
        check(report.sound, || "cancel reported unsound".into())?;
        let h = Step::Gate { gate: Gate::H, target: 0 };
        let reports = audit_run_from(&start, &[h.clone(), h, Step::Cancel]).map_err(|e| e.to_string())?;
        let last = reports.last().unwrap();
        check(last.is_sound() && last.max_abs_gap <= 1e-12, || format!("final gap {:e}", last.max_abs_gap))?;
    }
    Ok("both basis states restored, cancel sound, final gap 0".into())
}

fn unbalanced_hadamard() -> Outcome {
    let state = RealState::qubit((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()).unwrap();
    let disk = DiskSystem::encode(&state).apply_gate(&Gate::H, 0).map_err(|e| e.to_string())?;
    let want = [
        (1.0 / 3.0, Color::Blue, Sign::Plus),
        (1.0 / 3.0, Color::Orange, Sign::Plus),
        (1.0 / 6.0, Color::Blue, Sign::Plus),
        (1.0 / 6.0, Color::Orange, Sign::Minus),
    ];
    check(disk.regions().len() == 4, || format!("got {disk}"))?;
    for (r, (f, c, s)) in disk.regions().iter().zip(want) {
        check((r.fraction - f).abs() <= 1e-12 && r.colors == [c] && r.sign == s, || format!("got {disk}"))?;
    }
    let exact_orange = (1.0 / 3f64.sqrt() - 1.0 / 6f64.sqrt()).powi(2);
    let reports =
        audit_run_from(&state, &[Step::Gate { gate: Gate::H, target: 0 }]).map_err(|e| e.to_string())?;
    let r = &reports[0];
    check((r.exact_probs[1] - exact_orange).abs() <= 1e-12, || format!("exact orange {}", r.exact_probs[1]))?;
    check((exact_orange - 0.028_595_479).abs() <= 1e-9, || format!("oracle {exact_orange}"))?;
    // Sign-blind orange area: 1/3 + 1/6.
    let naive_orange = 1.0 / 3.0 + 1.0 / 6.0;
    check((r.disk_probs[1] - naive_orange).abs() <= 1e-12, || format!("naive orange {}", r.disk_probs[1]))?;
    let gap = naive_orange - exact_orange;
    check((r.max_abs_gap - gap).abs() <= 1e-6, || format!("gap {} vs {gap}", r.max_abs_gap))?;
    check(r.classification == Classification::Breakdown, || "classified Sound".into())?;
    Ok(format!(
        "disk (1/3, 1/3, 1/6, -1/6), naive orange {:.9}, exact orange {exact_orange:.9}, gap {:.9}, Breakdown",
        r.disk_probs[1], r.max_abs_gap
    ))
}

fn gate_track_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut steps = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=3);
        let mut track = Lockstep::from_state(random_state(&mut rng, n));
        for _ in 0..rng.random_range(1..=6) {
            let target = rng.random_range(0..n);
            let step = match rng.random_range(0..if n > 1 { 4 } else { 3 }) {
                0 => Step::Gate { gate: Gate::X, target },
                1 => Step::Gate { gate: Gate::Z, target },
                2 => Step::Gate { gate: Gate::H, target },
                _ => {
                    Step::Controlled { gate: Gate::X, control: (target + rng.random_range(1..n)) % n, target }
                }
            };
            track.apply(&step).map_err(|e| e.to_string())?;
            let decoded = track.disk().unwrap().decode().map_err(|e| e.to_string())?;
            let d = decoded.distance(track.exact().unwrap());
            check(d <= 1e-9, || format!("{step}: distance {d:e}"))?;
            steps += 1;
        }
    }
    Ok(format!("500 scripts, {steps} steps"))
}

fn partial_measurement() -> Outcome {
    use Color::{Blue as B, Orange as O};
    let disk = DiskSystem::new(
        2,
        [(0.1, [B, B]), (0.3, [B, O]), (0.2, [O, O]), (0.4, [O, B])]
            .into_iter()
            .map(|(f, c)| Region::new(f, c.to_vec(), Sign::Plus))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let exact = disk.decode().map_err(|e| e.to_string())?;
    for (color, p, residual) in [(B, 0.4, [0.25, 0.75]), (O, 0.6, [1.0 / 3.0, 2.0 / 3.0])] {
        let (prob, rest) = disk.postselect(&[0], &[color]).map_err(|e| e.to_string())?;
        let fr: Vec<f64> = rest.regions().iter().map(|r| r.fraction).collect();
        check((prob - p).abs() <= 1e-12, || format!("P({color:?}) = {prob}"))?;
        check(
            fr.len() == 2 && (fr[0] - residual[0]).abs() <= 1e-12 && (fr[1] - residual[1]).abs() <= 1e-12,
            || format!("residual {fr:?}"),
        )?;
        let draw = if color == B { 0.2 } else { 0.7 };
        let reading = disk.spin_window(&[0], draw).map_err(|e| e.to_string())?;
        check(reading.outcomes[0].color == color && (reading.probability - p).abs() <= 1e-12, || {
            format!("window at {draw} read {:?}", reading.outcomes[0].color)
        })?;
        check(reading.residual == rest, || format!("window residual {}", reading.residual))?;
        let (_, projected) = exact.project(0, color.bit()).map_err(|e| e.to_string())?;
        let d = rest.decode().map_err(|e| e.to_string())?.distance(&projected);
        check(d <= 1e-12, || format!("residual vs exact projection {d:e}"))?;
    }
    Ok("blue 0.4 -> (0.25, 0.75), orange 0.6 -> (1/3, 2/3)".into())
}

fn teleportation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (a, b) = (theta.cos(), theta.sin());
        let input = RealState::qubit(a, b).unwrap();
        for m0 in 0..2 {
            for m1 in 0..2 {
                let t = teleport_full_branch(a, b, m0, m1).map_err(|e| e.to_string())?;
                check((t.outcome_probability - 0.25).abs() <= 1e-9, || {
                    format!("p = {}", t.outcome_probability)
                })?;
                let o = t.bob_final_exact.overlap(&input).map_err(|e| e.to_string())?;
                check((o.abs() - 1.0).abs() <= 1e-9, || {
                    format!("overlap {o} for ({a}, {b}) branch {m0}{m1}")
                })?;
            }
        }
        let blue = a * a;
        for draw in [0.1, 0.6] {
            let t = teleport_classical(blue, draw).map_err(|e| e.to_string())?;
            let (bb, _) = t.bob_final_disk.marginals(0).map_err(|e| e.to_string())?;
            check((bb - blue).abs() <= 1e-12, || format!("classical bias {bb} vs {blue}"))?;
            check(t.history.iter().all(|d| d.regions().iter().all(|r| r.sign == Sign::Plus)), || {
                "classical stage produced a negative sign".into()
            })?;
        }
    }
    Ok("100 inputs x 4 branches, classical stage exact with + signs only".into())
}

fn bb84() -> Outcome {
    let start = Instant::now();
    let clean = bb84_run(&Bb84Params { rounds: 10_000, eve_present: false, seed: 84, sample_fraction: 0.5 })
        .map_err(|e| e.to_string())?;
    check(clean.key_mismatches() == 0, || format!("{} mismatches without Eve", clean.key_mismatches()))?;
    let frac = clean.sifted_count() as f64 / 10_000.0;
    let sigma = (0.25f64 / 10_000.0).sqrt();
    check((frac - 0.5).abs() <= 3.0 * sigma, || format!("sifted fraction {frac}"))?;
    let eve = bb84_run(&Bb84Params { rounds: 40_000, eve_present: true, seed: 85, sample_fraction: 0.9 })
        .map_err(|e| e.to_string())?;
    let qber = eve.qber.ok_or("no sample")?;
    check((0.24..=0.26).contains(&qber), || format!("qber {qber}"))?;
    let elapsed = start.elapsed().as_secs_f64();
    check(elapsed < 5.0, || format!("took {elapsed:.2}s"))?;
    Ok(format!("sifted fraction {frac:.4}, 0 mismatches; eve qber {qber:.4}; {elapsed:.2}s"))
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut scripts: Vec<String> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    scripts.push(
        "epr a b\nqubit c 0.3 0.7 -\ngate H c\ncnot c a\nmeasure a\nrender svg w.svg stacked\nmeasure b c\n\
         render svg s.svg\nbb84 40 eve\nteleport full 0.55 -\naudit\n"
            .into(),
    );
    let mut svgs = 0;
    for script in &scripts {
        for seed in [0, 1, 2024] {
            let one = qubobs::run_scenario(script, seed, None).map_err(|e| e.to_string())?;
            let two = qubobs::run_scenario(script, seed, None).map_err(|e| e.to_string())?;
            check(one.transcript.as_bytes() == two.transcript.as_bytes(), || "transcripts differ".into())?;
            check(one.audit.as_bytes() == two.audit.as_bytes(), || "audits differ".into())?;
            check(one.artifacts == two.artifacts, || "artifacts differ".into())?;
            svgs += one.artifacts.iter().filter(|a| a.file.ends_with(".svg")).count();
        }
    }
    Ok(format!("{} scripts x 3 seeds, {svgs} svg artifacts byte-identical", scripts.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("round-trip fidelity", round_trip),
        ("alignment equation", alignment),
        ("two-qubit gray encoding", two_qubit_gray_encoding),
        ("double hadamard", double_hadamard),
        ("unbalanced hadamard breakdown", unbalanced_hadamard),
        ("gate-track equivalence", gate_track_equivalence),
        ("partial measurement", partial_measurement),
        ("teleportation", teleportation),
        ("bb84", bb84),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
