//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p dsnn --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use dsnn::directional::{correlate_horizontal, correlate_vertical, DelayBank};
use dsnn::lamina::{dog_filter, gaussian_kernel};
use dsnn::lptc::{integrate, sigmoid_activation, spike_count, Direction};
use dsnn::retina::decay_coefficient;
use dsnn::stimuli::{
    gray_sweep, scene_by_name, speed_sweep, Background, Heading, Motion, ObjectShape, Scene,
    SceneSpec, GRAY_SWEEP_LEVELS, SPEED_SWEEP_VB, SPEED_SWEEP_VT,
};
use dsnn::{Ablation, Field, LuminanceFrame, NetworkOutput, Params, Pipeline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn verdict(id: u32, title: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{tag}] {title}: {detail}");
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

fn run_frames(frames: &[LuminanceFrame], p: &Params) -> Vec<NetworkOutput> {
    let mut pipe = Pipeline::new(p.clone()).unwrap();
    frames.iter().map(|f| pipe.step(f).unwrap()).collect()
}

fn scene_frames(spec: &SceneSpec) -> Vec<LuminanceFrame> {
    Scene::new(spec.clone()).unwrap().frames().collect()
}

fn run_spec(spec: &SceneSpec, p: &Params) -> Vec<NetworkOutput> {
    run_frames(&scene_frames(spec), p)
}

fn defaults(spec: &SceneSpec) -> Params {
    Params::default_for(spec.rows, spec.cols).unwrap()
}

fn library(name: &str) -> SceneSpec {
    scene_by_name(name).unwrap_or_else(|| panic!("scene {name} missing"))
}

fn peak_hs(out: &[NetworkOutput]) -> f64 {
    out.iter()
        .map(|o| o.hs_smp)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn peak_abs(out: &[NetworkOutput]) -> f64 {
    out.iter()
        .map(|o| o.hs_smp.abs().max(o.vs_smp.abs()))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_direction_sign_law() {
    let mut failures = Vec::new();
    let mut worst_match: f64 = 1.0;
    let mut worst_orth: f64 = 1.0;
    for dark in [true, false] {
        for heading in Heading::ALL {
            let polarity = if dark { "dark" } else { "light" };
            let spec = library(&format!("clean-translate-{polarity}-{}", heading.tag()));
            let out = run_spec(&spec, &defaults(&spec));
            // frame 0 has no predecessor, so motion is visible from frame 1 on
            let motion = &out[1..];
            let (matched, orth): (Vec<f64>, Vec<f64>) = motion
                .iter()
                .map(|o| {
                    if heading.is_horizontal() {
                        (o.hs_smp, o.vs_smp)
                    } else {
                        (o.vs_smp, o.hs_smp)
                    }
                })
                .unzip();
            let n = motion.len() as f64;
            let hit = matched
                .iter()
                .filter(|&&s| {
                    if heading.is_preferred() {
                        s > 0.16
                    } else {
                        s < -0.16
                    }
                })
                .count() as f64
                / n;
            let quiet = orth.iter().filter(|s| s.abs() <= 0.16).count() as f64 / n;
            worst_match = worst_match.min(hit);
            worst_orth = worst_orth.min(quiet);
            if hit < 0.5 || quiet < 0.9 {
                failures.push(format!(
                    "{} matched {hit:.2} orthogonal {quiet:.2}",
                    spec.name
                ));
            }
        }
    }
    let detail = format!(
        "worst matched fraction {worst_match:.3} (need >= 0.5), worst orthogonal quiet fraction {worst_orth:.3} (need >= 0.9){}",
        if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
    );
    verdict(1, "direction sign law", failures.is_empty(), &detail);
}

#[test]
fn criterion_02_loom_recede_suppression() {
    let names = [
        "clean-loom-dark",
        "clean-loom-light",
        "clean-recede-dark",
        "clean-recede-light",
        "clutter-shift-loom",
        "clutter-shift-recede",
    ];
    let results: Vec<(&str, u64, f64)> = names
        .par_iter()
        .map(|&name| {
            let spec = library(name);
            let out = run_spec(&spec, &defaults(&spec));
            let spikes = out.iter().map(|o| (o.hs_spikes + o.vs_spikes) as u64).sum();
            (name, spikes, peak_abs(&out))
        })
        .collect();
    let total: u64 = results.iter().map(|r| r.1).sum();
    let detail = results
        .iter()
        .map(|(n, s, p)| format!("{n}: {s} spikes, peak |smp| {p:.4}"))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(2, "loom/recede suppression", total == 0, &detail);
}

fn lp_bits(out: &[NetworkOutput], on: bool) -> Vec<(u64, u64)> {
    out.iter()
        .map(|o| {
            if on {
                (o.lp.on_hs.to_bits(), o.lp.on_vs.to_bits())
            } else {
                (o.lp.off_hs.to_bits(), o.lp.off_vs.to_bits())
            }
        })
        .collect()
}

#[test]
fn criterion_03_ablation_identity() {
    let mut inputs: Vec<(String, Vec<LuminanceFrame>)> = [
        "clean-translate-dark-R",
        "clean-translate-light-U",
        "clean-loom-light",
        "clutter-shift-translate",
    ]
    .iter()
    .map(|n| (n.to_string(), scene_frames(&library(n))))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..4 {
        let frames = (0..30).map(|t| noise_frame(&mut rng, t, 24, 40)).collect();
        inputs.push((format!("noise-{k}"), frames));
    }

    let mismatches: Vec<String> = inputs
        .par_iter()
        .filter_map(|(name, frames)| {
            let (rows, cols) = frames[0].dims();
            let base = Params::default_for(rows, cols).unwrap();
            let with = |a: Ablation| {
                run_frames(
                    frames,
                    &Params {
                        ablation: a,
                        ..base.clone()
                    },
                )
            };
            let intact = with(Ablation::Intact);
            let on_blocked = with(Ablation::OnBlocked);
            let off_blocked = with(Ablation::OffBlocked);
            let off_same = lp_bits(&intact, false) == lp_bits(&on_blocked, false);
            let on_same = lp_bits(&intact, true) == lp_bits(&off_blocked, true);
            (!(off_same && on_same)).then(|| name.clone())
        })
        .collect();

    let spec = library("clean-translate-dark-R");
    let base = defaults(&spec);
    let frames = scene_frames(&spec);
    let peak = |a: Ablation| {
        peak_abs(&run_frames(
            &frames,
            &Params {
                ablation: a,
                ..base.clone()
            },
        ))
    };
    let (pi, pn, pf) = (
        peak(Ablation::Intact),
        peak(Ablation::OnBlocked),
        peak(Ablation::OffBlocked),
    );
    let pass = mismatches.is_empty() && pn < pi && pf < pi;
    let detail = format!(
        "{} inputs bit-identical{}; peak |smp| intact {pi:.4}, on_blocked {pn:.4}, off_blocked {pf:.4}",
        inputs.len() - mismatches.len(),
        if mismatches.is_empty() { String::new() } else { format!(", mismatched: {}", mismatches.join(", ")) }
    );
    verdict(3, "exact ablation identity", pass, &detail);
}

#[test]
fn criterion_04_shifting_clutter() {
    let spec = library("clutter-shift-translate");
    let out = run_spec(&spec, &defaults(&spec));
    let preferred: u32 = out[1..]
        .iter()
        .filter(|o| o.hs_dir == Direction::Preferred)
        .map(|o| o.hs_spikes)
        .sum();
    let vs_peak = out.iter().map(|o| o.vs_smp.abs()).fold(0.0, f64::max);
    let detail = format!(
        "Vt={} Vb={}: HS preferred spikes {preferred} (need >= 1), peak hs_smp {:.4}, peak |vs_smp| {vs_peak:.4} (need < 0.16)",
        match spec.motion {
            Motion::Translate { vx, .. } => vx,
            _ => f64::NAN,
        },
        spec.bg_shift,
        peak_hs(&out)
    );
    verdict(
        4,
        "shifting-clutter robustness",
        preferred >= 1 && vs_peak < 0.16,
        &detail,
    );
}

#[test]
fn criterion_05_speed_monotonicity() {
    let cells = speed_sweep();
    let peaks: Vec<f64> = cells
        .par_iter()
        .map(|c| peak_hs(&run_spec(&c.scene, &defaults(&c.scene))))
        .collect();
    let at = |vt: f64, vb: f64| {
        let i = cells.iter().position(|c| c.vt == vt && c.vb == vb).unwrap();
        peaks[i]
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for vb in SPEED_SWEEP_VB {
        let p: Vec<f64> = SPEED_SWEEP_VT.iter().map(|&vt| at(vt, vb)).collect();
        let good = p[2] - p[1] >= 0.005 && p[1] - p[0] >= 0.005;
        ok &= good;
        rows.push(format!("Vb={vb}: {:.4}/{:.4}/{:.4}", p[0], p[1], p[2]));
    }
    let detail = format!(
        "peak hs_smp at Vt=40/80/120 (need strictly rising by >= 0.005): {}",
        rows.join("; ")
    );
    verdict(5, "speed response monotonicity", ok, &detail);
}

#[test]
fn criterion_06_contrast_valley() {
    const VT: f64 = 80.0;
    let cells: Vec<_> = gray_sweep().into_iter().filter(|c| c.vt == VT).collect();
    assert_eq!(cells.len(), GRAY_SWEEP_LEVELS.len());
    let results: Vec<(u8, f64, u32)> = cells
        .par_iter()
        .map(|c| {
            let out = run_spec(&c.scene, &defaults(&c.scene));
            let spikes = out.iter().map(|o| o.hs_spikes).sum();
            (c.gray, peak_hs(&out), spikes)
        })
        .collect();
    let (min_i, min) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, r)| (i, r.1))
        .unwrap();
    let mid = results.len() / 2;
    let strict_valley = results
        .iter()
        .enumerate()
        .all(|(i, r)| i == mid || r.1 > results[mid].1);
    let pass = min_i == mid && strict_valley && results[mid].2 >= 1;
    let detail = format!(
        "Vt={VT} Vb=-8, peak hs_smp/spikes by gray: {}; minimum at gray {} (need {}), with {} spikes (need >= 1) at min {min:.4}",
        results
            .iter()
            .map(|(g, p, s)| format!("{g}: {p:.4}/{s}"))
            .collect::<Vec<_>>()
            .join(", "),
        results[min_i].0,
        results[mid].0,
        results[mid].2
    );
    verdict(6, "contrast valley", pass, &detail);
}

fn random_field(rng: &mut ChaCha8Rng, rows: usize, cols: usize, amp: f64) -> Field {
    Field::from_fn(rows, cols, |_, _| rng.gen_range(-amp..=amp))
}

fn naive_kernel(sigma: f64) -> (isize, Vec<Vec<f64>>) {
    let r = (3.0 * sigma).ceil() as isize;
    let mut k = vec![vec![0.0; (2 * r + 1) as usize]; (2 * r + 1) as usize];
    let mut total = 0.0;
    for dy in -r..=r {
        for dx in -r..=r {
            let w = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
            k[(dy + r) as usize][(dx + r) as usize] = w;
            total += w;
        }
    }
    for row in &mut k {
        for w in row.iter_mut() {
            *w /= total;
        }
    }
    (r, k)
}

fn naive_blur(f: &Field, sigma: f64) -> Vec<f64> {
    let (r, k) = naive_kernel(sigma);
    let (rows, cols) = f.dims();
    let mut out = vec![0.0; rows * cols];
    for y in 0..rows as isize {
        for x in 0..cols as isize {
            let mut acc = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let (sx, sy) = (x + dx, y + dy);
                    if sx >= 0 && sy >= 0 && (sx as usize) < cols && (sy as usize) < rows {
                        acc += k[(dy + r) as usize][(dx + r) as usize]
                            * f.get(sx as usize, sy as usize);
                    }
                }
            }
            out[y as usize * cols + x as usize] = acc;
        }
    }
    out
}

fn naive_dog(f: &Field, se: f64, si: f64) -> Vec<f64> {
    naive_blur(f, se)
        .into_iter()
        .zip(naive_blur(f, si))
        .map(|(e, i)| match (e >= 0.0, i >= 0.0) {
            (true, true) => (e - i).abs(),
            (false, false) => -(e - i).abs(),
            _ => 0.0,
        })
        .collect()
}

fn naive_correlate(f: &Field, planes: &[Field], d: usize, w_i: f64, vertical: bool) -> Vec<f64> {
    let (rows, cols) = f.dims();
    let at = |g: &Field, x: usize, y: usize| -> f64 {
        if x < cols && y < rows {
            g.get(x, y)
        } else {
            0.0
        }
    };
    let mut out = vec![0.0; rows * cols];
    for y in 0..rows {
        for x in 0..cols {
            let mut e = 0.0;
            let mut i = 0.0;
            for (k, plane) in planes.iter().enumerate() {
                let off = (k + 1) * d;
                let (nx, ny) = if vertical { (x, y + off) } else { (x + off, y) };
                e += plane.get(x, y) * at(f, nx, ny);
                i += at(plane, nx, ny) * f.get(x, y);
            }
            out[y * cols + x] = e - w_i * i;
        }
    }
    out
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut dog_err, mut corr_err, mut int_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let rows = rng.gen_range(1..=16);
        let cols = rng.gen_range(1..=16);
        let f = random_field(&mut rng, rows, cols, 255.0);

        let se = rng.gen_range(0.5..3.0);
        let si = se * rng.gen_range(1.2..2.5);
        let fast = dog_filter(&f, &gaussian_kernel(se), &gaussian_kernel(si));
        dog_err = dog_err.max(max_err(fast.as_slice(), &naive_dog(&f, se, si)));

        let mut p = Params::unchecked_defaults(rows, cols);
        p.n_con = rng.gen_range(1..=4);
        p.d = rng.gen_range(1..=3);
        p.w_i = rng.gen_range(0.5..=1.0);
        let planes: Vec<Field> = (0..p.n_con)
            .map(|_| random_field(&mut rng, rows, cols, 50.0))
            .collect();
        let bank = DelayBank::from_planes(planes.clone(), &p);
        let h = correlate_horizontal(&f, &bank, &p);
        let v = correlate_vertical(&f, &bank, &p);
        corr_err = corr_err.max(max_err(
            h.as_slice(),
            &naive_correlate(&f, &planes, p.d, p.w_i, false),
        ));
        corr_err = corr_err.max(max_err(
            v.as_slice(),
            &naive_correlate(&f, &planes, p.d, p.w_i, true),
        ));

        let mut sum = 0.0;
        for y in 0..rows {
            for x in 0..cols {
                sum += h.get(x, y);
            }
        }
        int_err = int_err.max((integrate(&h) - sum).abs());
    }
    let pass = dog_err <= 1e-9 && corr_err <= 1e-9 && int_err <= 1e-9;
    let detail = format!(
        "50 random fields: max |err| DoG {dog_err:.2e}, correlators {corr_err:.2e}, integration {int_err:.2e} (tolerance 1e-9)"
    );
    verdict(7, "oracle equivalence", pass, &detail);
}

#[test]
fn criterion_08_analytic_values() {
    let decay = decay_coefficient(1, 1.0);
    let decay_oracle = 1.0 / (1.0 + 1f64.exp());

    let p = Params::default_for(180, 320).unwrap();
    let x = p.cols as f64 * p.rows as f64 * p.k_sig;
    let sig = sigmoid_activation(x, &p);
    let sig_oracle = 1.0 / (1.0 + (-1f64).exp()) - p.delta_c;

    let mut q = p.clone();
    q.k_sp = 3.0;
    q.t_sp = 0.2;
    let (spikes, dir) = spike_count(0.5, &q);
    let spikes_oracle = (3.0f64 * 0.3).exp().floor() as u32;

    let pass = (decay - 0.26894).abs() <= 1e-5
        && (decay - decay_oracle).abs() <= 1e-12
        && (sig - 0.23106).abs() <= 1e-5
        && (sig - sig_oracle).abs() <= 1e-12
        && spikes == 2
        && spikes == spikes_oracle
        && dir == Direction::Preferred;
    let detail = format!(
        "decay_coefficient(1,1) = {decay:.6}, sigmoid(C*R*K_sig) = {sig:.6}, spike_count(0.5, 3, 0.2) = {spikes} ({})",
        dir.as_str()
    );
    verdict(8, "analytic unit values", pass, &detail);
}

fn noise_frame(rng: &mut ChaCha8Rng, t: u64, rows: usize, cols: usize) -> LuminanceFrame {
    let px: Vec<u8> = (0..rows * cols).map(|_| rng.gen()).collect();
    LuminanceFrame::from_u8(t, rows, cols, &px)
}

fn random_scene(
    rng: &mut ChaCha8Rng,
    id: usize,
    rows: usize,
    cols: usize,
    duration: usize,
) -> SceneSpec {
    let shape = if rng.gen_bool(0.5) {
        ObjectShape::Bar {
            width: rng.gen_range(2..cols / 2),
            height: rng.gen_range(2..rows),
        }
    } else {
        ObjectShape::Square
    };
    let (cx, cy) = (
        rng.gen_range(0.0..cols as f64),
        rng.gen_range(0.0..rows as f64),
    );
    let motion = match (shape, rng.gen_range(0..3)) {
        (ObjectShape::Bar { .. }, _) | (_, 0) => Motion::Translate {
            x0: cx - cols as f64 / 2.0,
            y0: cy - rows as f64 / 2.0,
            vx: rng.gen_range(-6.0..6.0),
            vy: rng.gen_range(-6.0..6.0),
        },
        (_, 1) => Motion::Loom {
            cx,
            cy,
            half0: rng.gen_range(0.0..4.0),
            rate: rng.gen_range(0.1..3.0),
        },
        _ => Motion::Recede {
            cx,
            cy,
            half0: rng.gen_range(8.0..40.0),
            rate: rng.gen_range(0.1..3.0),
        },
    };
    let background = if rng.gen_bool(0.5) {
        Background::Uniform(rng.gen())
    } else {
        Background::Textured { seed: rng.gen() }
    };
    SceneSpec {
        name: format!("fuzz-{id}"),
        rows,
        cols,
        shape,
        object_gray: rng.gen(),
        background,
        motion,
        bg_shift: rng.gen_range(-5.0..5.0),
        duration,
    }
}

#[test]
fn criterion_09_bounds_and_silence() {
    const SEQUENCES: usize = 100;
    const LENGTH: usize = 100;
    let (rows, cols) = (24, 32);
    let stats: Vec<(usize, f64, usize)> = (0..SEQUENCES)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(9000 + i as u64);
            let mut p = Params::default_for(rows, cols).unwrap();
            if i % 4 == 3 {
                p.k_sig = rng.gen_range(1e-5..1e-3);
                p.w_i = rng.gen_range(0.5..=1.0);
            }
            let frames: Vec<LuminanceFrame> = if i % 5 == 0 {
                (0..LENGTH as u64)
                    .map(|t| noise_frame(&mut rng, t, rows, cols))
                    .collect()
            } else {
                scene_frames(&random_scene(&mut rng, i, rows, cols, LENGTH))
            };
            let out = run_frames(&frames, &p);
            let mut violations = 0;
            let mut peak: f64 = 0.0;
            for o in &out {
                for (smp, n) in [(o.hs_smp, o.hs_spikes), (o.vs_smp, o.vs_spikes)] {
                    peak = peak.max(smp.abs());
                    if smp.abs() >= 1.0 || (smp.abs() < p.t_sp && n > 0) {
                        violations += 1;
                    }
                }
            }
            (out.len(), peak, violations)
        })
        .collect();
    let frames: usize = stats.iter().map(|s| s.0).sum();
    let peak = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let violations: usize = stats.iter().map(|s| s.2).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut nonzero = 0;
    for k in 0..6 {
        let still = if k < 3 {
            LuminanceFrame::from_u8(0, rows, cols, &vec![rng.gen(); rows * cols])
        } else {
            noise_frame(&mut rng, 0, rows, cols)
        };
        let frames: Vec<LuminanceFrame> = (0..50)
            .map(|t| LuminanceFrame::new(t, still.data().clone()).unwrap())
            .collect();
        let p = Params::default_for(rows, cols).unwrap();
        nonzero += run_frames(&frames, &p)
            .iter()
            .filter(|o| {
                o.hs_smp != 0.0
                    || o.vs_smp != 0.0
                    || o.hs_spikes + o.vs_spikes != 0
                    || o.lp != Default::default()
            })
            .count();
    }
    let pass = frames >= 10_000 && violations == 0 && nonzero == 0;
    let detail = format!(
        "{frames} fuzz frames, 1 - peak |smp| = {:.2e}, {violations} bound/spike violations; 6 constant videos, {nonzero} non-zero frames",
        1.0 - peak
    );
    verdict(9, "bounds and silence invariants", pass, &detail);
}

fn mirror(frames: &[LuminanceFrame]) -> Vec<LuminanceFrame> {
    frames
        .iter()
        .map(|f| LuminanceFrame::new(f.index, f.data().mirrored_horizontally()).unwrap())
        .collect()
}

#[test]
fn criterion_10_full_balance_antisymmetry() {
    let mut inputs: Vec<(String, Vec<LuminanceFrame>)> = [
        "clean-translate-dark-R",
        "clean-translate-light-U",
        "clean-loom-dark",
        "clutter-shift-translate",
        "clutter-shift-recede",
    ]
    .iter()
    .map(|n| (n.to_string(), scene_frames(&library(n))))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..3 {
        let frames = (0..40).map(|t| noise_frame(&mut rng, t, 30, 44)).collect();
        inputs.push((format!("noise-{k}"), frames));
    }
    let errors: Vec<(String, f64)> = inputs
        .par_iter()
        .map(|(name, frames)| {
            let (rows, cols) = frames[0].dims();
            let p = Params {
                w_i: 1.0,
                ..Params::default_for(rows, cols).unwrap()
            };
            let a = run_frames(frames, &p);
            let b = run_frames(&mirror(frames), &p);
            let err = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x.hs_smp + y.hs_smp).abs())
                .fold(0.0, f64::max);
            (name.clone(), err)
        })
        .collect();
    let worst = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let detail = format!(
        "{} mirrored sequences, max |hs + hs_mirrored| = {worst:.2e} (tolerance 1e-9)",
        errors.len()
    );
    verdict(10, "full-balance antisymmetry", worst <= 1e-9, &detail);
}
