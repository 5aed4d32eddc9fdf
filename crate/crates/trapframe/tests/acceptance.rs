//! Acceptance criteria, one pass/fail line each.
//!
//! Run with `cargo test -p trapframe --test acceptance`. Pass criterion
//! numbers as arguments (`-- 3 7`) to run a subset.

use std::f64::consts::PI;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use statrs::statistics::Statistics;

use trapframe::config::RunConfig;
use trapframe::extract::extract_corpus;
use trapframe::manifest::parse_manifest;
use trapframe::pipeline::{par_compare, par_sweep};
use trapframe::synth::{write_corpus, CorpusKind, SynthSpec};
use trapframe_core::classifiers::svm::fit_smo;
use trapframe_core::classifiers::{
    fit_gaussian, fit_svm, ClassifierConfig, GaussianMode, KernelSpec, Learner, Predictor, Solver, SvmConfig,
    DEFAULT_RIDGE,
};
use trapframe_core::evaluation::{CvConfig, FeatureSelector};
use trapframe_core::features::{extract_frame_features, FeatureConfig, STATISTIC_NAMES};
use trapframe_core::selection::{fit_pca, j_criteria, rank_features, scatter_matrices};
use trapframe_core::signal::{frame_lengths, split_frames};
use trapframe_core::{Class, Dataset, MonoSignal};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_budget(start: Instant, budget: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    ensure(took < budget, format!("{detail}; budget {}s", budget.as_secs()))
}

fn rel(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs()
    }
}

fn dataset(rows: &[Vec<f64>], labels: Vec<Class>) -> Dataset {
    let names: Vec<String> = (0..rows[0].len()).map(|j| format!("f{j}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Dataset::from_rows(&names, rows, labels).expect("valid dataset")
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

// ---------------------------------------------------------------- 1

/// Compensated sum.
fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn reference_welch_mean(x: &[f64], fs: f64, planner: &mut FftPlanner<f64>) -> f64 {
    let seg = x.len().min(1024);
    let step = seg - seg / 2;
    let window: Vec<f64> = (0..seg).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / seg as f64).cos()).collect();
    let u: f64 = window.iter().map(|w| w * w).sum();
    let fft = planner.plan_fft_forward(seg);
    let bins = seg / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut count = 0;
    let mut start = 0;
    while start + seg <= x.len() {
        let mut buf: Vec<Complex<f64>> =
            x[start..start + seg].iter().zip(&window).map(|(v, w)| Complex::new(v * w, 0.0)).collect();
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        count += 1;
        start += step;
    }
    let density = acc.iter().enumerate().map(|(k, p)| {
        let one_sided = if k == 0 || (seg % 2 == 0 && k == seg / 2) { 1.0 } else { 2.0 };
        one_sided * p / (fs * u * count as f64)
    });
    density.sum::<f64>() / bins as f64
}

fn oracle_features(x: &[f64], fs: f64, planner: &mut FftPlanner<f64>) -> [f64; 8] {
    let n = x.len() as f64;
    let mean = x.iter().mean();
    let var = x.iter().population_variance();
    let m = neumaier(x.iter().copied()) / n;
    let central = |k: i32| neumaier(x.iter().map(|v| (v - m).powi(k))) / n;
    let mu2 = central(2);
    let std = |k: i32| central(k) / mu2.powf(k as f64 / 2.0);
    let guard = if mean >= 0.0 { 1e-12 } else { -1e-12 };
    [
        mean,
        var,
        std(3),
        std(4),
        std(5),
        std(6),
        var / (mean + guard),
        reference_welch_mean(x, fs, planner),
    ]
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, fs: f64) -> Vec<f64> {
    let offset = rng.random_range(0.05..0.3) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let a = rng.random_range(0.05..0.5);
    let kind = rng.random_range(0..4);
    let f = rng.random_range(50.0..fs / 3.0);
    let phase = rng.random_range(0.0..2.0 * PI);
    (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let body = match kind {
                0 => a * (Distribution::<f64>::sample(&Exp1, rng) - 1.0),
                1 => {
                    let g = gauss(rng);
                    a * (2.0 * PI * f * t + phase).sin() + 0.2 * a * (g * g - 1.0)
                }
                2 => {
                    let u: f64 = rng.random_range(-1.0..1.0);
                    a * u * u * u + 0.3 * a * gauss(rng).abs()
                }
                _ => {
                    let spike = if rng.random::<f64>() < 0.02 { 2.0 * a } else { 0.0 };
                    a * (2.0 * PI * (f + 200.0 * t) * t).sin() + spike
                }
            };
            offset + body
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut planner = FftPlanner::new();
    let cfg = FeatureConfig::default();
    let mut worst = [0.0f64; 8];
    let (lo, hi) = (8f64.ln(), 1e5f64.ln());
    for i in 0..1000 {
        let n = match i {
            0 => 8,
            1 => 100_000,
            _ => rng.random_range(lo..hi).exp().round() as usize,
        };
        let fs = [8000.0, 22050.0, 44100.0][rng.random_range(0..3)];
        let x = random_frame(&mut rng, n, fs);
        let got = extract_frame_features(&x, fs as u32, &cfg).map_err(|e| format!("n={n}: {e}"))?;
        let want = oracle_features(&x, fs, &mut planner);
        for (k, (g, w)) in got.to_array().iter().zip(want).enumerate() {
            worst[k] = worst[k].max(rel(*g, w));
        }
    }
    let (k, max) = worst.iter().enumerate().fold((0, 0.0), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
    let detail = format!("1000 frames, max relative error {max:.2e} ({})", STATISTIC_NAMES[k]);
    ensure(max <= 1e-9, detail.clone())?;
    within_budget(start, Duration::from_secs(60), detail)
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut buf: Vec<f64> = (0..100_000).map(|i| i as f64 / 100_000.0 - 0.5).collect();
    let reference = buf.clone();
    let mut compared = 0;
    for n in (60..=100_000usize).rev() {
        let head = n / 20;
        let expected = (head, n - 2 * head, head);
        let lengths = frame_lengths(n, 0.05, 0.05).map_err(|e| format!("N={n}: {e}"))?;
        if lengths != expected {
            return Err(format!("N={n}: lengths {lengths:?}, expected {expected:?}"));
        }
        let signal = MonoSignal::new(8000, buf).unwrap();
        {
            let s = signal.samples();
            let t = split_frames(&signal, 0.05, 0.05).map_err(|e| format!("N={n}: {e}"))?;
            if t.lengths() != expected {
                return Err(format!("N={n}: split {:?}", t.lengths()));
            }
            let contiguous = t.opening.as_ptr() == s.as_ptr()
                && t.opening.as_ptr_range().end == t.stanzas.as_ptr()
                && t.stanzas.as_ptr_range().end == t.closing.as_ptr()
                && t.closing.as_ptr_range().end == s.as_ptr_range().end;
            if !contiguous {
                return Err(format!("N={n}: frames are not a contiguous partition"));
            }
            if n % 97 == 0 {
                let joined: Vec<f64> = [t.opening, t.stanzas, t.closing].concat();
                if joined[..] != reference[..n] {
                    return Err(format!("N={n}: concatenation differs"));
                }
                compared += 1;
            }
        }
        buf = signal.into_samples();
        buf.truncate(n - 1);
    }
    within_budget(
        start,
        Duration::from_secs(30),
        format!("every N in [60, 100000] exact, {compared} concatenations compared by value"),
    )
}

// ---------------------------------------------------------------- 3

fn mixed_scale_dataset(rng: &mut ChaCha8Rng, d: usize) -> Dataset {
    let n1 = rng.random_range(5..120);
    let n2 = rng.random_range(5..120);
    let scales: Vec<f64> = (0..d).map(|_| 10f64.powf(rng.random_range(-4.0..4.0))).collect();
    // locations are a bounded multiple of each feature's own scale; a ratio of
    // 1e7 would leave (mu1 - mu2)^2 with only a few correct digits in any f64 method
    let locs: Vec<f64> = scales.iter().map(|s| s * rng.random_range(-50.0..50.0)).collect();
    let shifts: Vec<f64> = (0..d)
        .map(|_| if rng.random::<f64>() < 0.3 { 0.0 } else { rng.random_range(-3.0..3.0) })
        .collect();
    let spread2: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..3.0)).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (class, count) in [(Class::One, n1), (Class::Two, n2)] {
        for _ in 0..count {
            let row = (0..d)
                .map(|j| {
                    let (shift, s) = if class == Class::One { (shifts[j], 1.0) } else { (0.0, spread2[j]) };
                    locs[j] + scales[j] * (shift + s * gauss(rng))
                })
                .collect();
            rows.push(row);
            labels.push(class);
        }
    }
    dataset(&rows, labels)
}

fn brute_force_fdr(data: &Dataset) -> Vec<f64> {
    (0..data.n_features())
        .map(|j| {
            let mut stats = [(0.0, 0.0); 2];
            for (c, class) in Class::BOTH.iter().enumerate() {
                let xs: Vec<f64> =
                    (0..data.n_rows()).filter(|&i| data.labels()[i] == *class).map(|i| data.row(i)[j]).collect();
                let n = xs.len() as f64;
                let m = neumaier(xs.iter().copied()) / n;
                let v = neumaier(xs.iter().map(|x| (x - m) * (x - m))) / (n - 1.0);
                stats[c] = (m, v);
            }
            let d = stats[0].0 - stats[1].0;
            d * d / (stats[0].1 + stats[1].1)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut worst_score, mut worst_affine) = (0.0f64, 0.0f64);
    for t in 0..200 {
        let data = mixed_scale_dataset(&mut rng, 24);
        let scores = brute_force_fdr(&data);
        let mut order: Vec<usize> = (0..24).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let ranked = rank_features(&data);
        let got: Vec<usize> = ranked.entries().iter().map(|e| e.index).collect();
        if got != order {
            return Err(format!("dataset {t}: order {got:?} vs brute force {order:?}"));
        }
        for e in ranked.entries() {
            worst_score = worst_score.max(rel(e.score, scores[e.index]));
            if e.name != data.feature_names()[e.index] {
                return Err(format!("dataset {t}: name mismatch at {}", e.index));
            }
        }

        // x -> a x + b per column
        let a: Vec<f64> = (0..24)
            .map(|_| 10f64.powf(rng.random_range(-3.0..3.0)) * if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let b: Vec<f64> = (0..24)
            .map(|j| {
                let col: Vec<f64> = data.rows().map(|r| r[j]).collect();
                rng.random_range(-100.0..100.0) * a[j].abs() * col.iter().std_dev()
            })
            .collect();
        let rows: Vec<Vec<f64>> =
            data.rows().map(|r| r.iter().enumerate().map(|(j, x)| a[j] * x + b[j]).collect()).collect();
        let moved = rank_features(&dataset(&rows, data.labels().to_vec()));
        let mut base = vec![0.0; 24];
        for e in ranked.entries() {
            base[e.index] = e.score;
        }
        for e in moved.entries() {
            worst_affine = worst_affine.max(rel(e.score, base[e.index]));
        }
    }
    let detail = format!(
        "200 datasets, orders identical, score error {worst_score:.2e}, affine drift {worst_affine:.2e}"
    );
    ensure(worst_score <= 1e-10 && worst_affine <= 1e-8, detail.clone())?;
    within_budget(start, Duration::from_secs(60), detail)
}

// ---------------------------------------------------------------- 4

fn unit_scale_dataset(rng: &mut ChaCha8Rng, d: usize) -> Dataset {
    let n1 = rng.random_range(10..80);
    let n2 = rng.random_range(10..80);
    let shift: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (class, count) in [(Class::One, n1), (Class::Two, n2)] {
        for _ in 0..count {
            let mut row: Vec<f64> = (0..d).map(|_| gauss(rng)).collect();
            // correlate neighbouring coordinates a little
            for j in 1..d {
                row[j] += 0.5 * row[j - 1];
            }
            if class == Class::One {
                row.iter_mut().zip(&shift).for_each(|(x, s)| *x += s);
            }
            rows.push(row);
            labels.push(class);
        }
    }
    dataset(&rows, labels)
}

/// Random well-conditioned invertible map: rotations * diagonal * unit upper triangular.
fn random_transform(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; d]; d];
    for i in 0..d {
        a[i][i] = 1.0;
        for j in i + 1..d {
            a[i][j] = rng.random_range(-1.0..1.0);
        }
    }
    for row in a.iter_mut() {
        let s = 10f64.powf(rng.random_range(-1.0..1.0));
        row.iter_mut().for_each(|v| *v *= s);
    }
    for _ in 0..2 * d {
        let i = rng.random_range(0..d);
        let j = (i + rng.random_range(1..d.max(2))) % d;
        if i == j {
            continue;
        }
        let th: f64 = rng.random_range(0.0..2.0 * PI);
        let (c, s) = (th.cos(), th.sin());
        for k in 0..d {
            let (x, y) = (a[i][k], a[j][k]);
            a[i][k] = c * x - s * y;
            a[j][k] = s * x + c * y;
        }
    }
    a
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut worst_identity, mut worst_j3) = (0.0f64, 0.0f64);
    for t in 0..100 {
        let d = rng.random_range(2..=8);
        let data = unit_scale_dataset(&mut rng, d);
        let s = scatter_matrices(&data);
        for i in 0..d {
            for j in 0..d {
                let err = (s.mixture[(i, j)] - s.within[(i, j)] - s.between[(i, j)]).abs();
                worst_identity = worst_identity.max(err);
            }
        }
        let base = j_criteria(&s).map_err(|e| format!("dataset {t}: {e}"))?;
        if base.ridge != 0.0 {
            return Err(format!("dataset {t}: ridge applied"));
        }
        for _ in 0..20 {
            let a = random_transform(&mut rng, d);
            let rows: Vec<Vec<f64>> = data
                .rows()
                .map(|r| a.iter().map(|ai| ai.iter().zip(r).map(|(p, q)| p * q).sum()).collect())
                .collect();
            let moved = j_criteria(&scatter_matrices(&dataset(&rows, data.labels().to_vec())))
                .map_err(|e| format!("dataset {t}: {e}"))?;
            if moved.ridge != 0.0 {
                return Err(format!("dataset {t}: ridge applied after transform"));
            }
            worst_j3 = worst_j3.max(rel(moved.j3, base.j3));
        }
    }
    let detail = format!("100 datasets, |S_m - S_w - S_b| <= {worst_identity:.2e}, J3 drift {worst_j3:.2e} over 2000 maps");
    ensure(worst_identity <= 1e-10 && worst_j3 <= 1e-8, detail.clone())?;
    within_budget(start, Duration::from_secs(60), detail)
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut ortho, mut cumulative, mut cov_err, mut recon) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in 0..50 {
        let d = if t == 0 { 24 } else { rng.random_range(2..=24) };
        let n = rng.random_range(30..200);
        let mix: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| gauss(&mut rng)).collect()).collect();
        let scale: Vec<f64> = (0..d).map(|_| 10f64.powf(rng.random_range(-3.0..3.0))).collect();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let z: Vec<f64> = (0..d).map(|_| gauss(&mut rng)).collect();
                (0..d).map(|j| scale[j] * (mix[j].iter().zip(&z).map(|(m, v)| m * v).sum::<f64>() + 3.0)).collect()
            })
            .collect();
        let labels = (0..n).map(|i| if i % 2 == 0 { Class::One } else { Class::Two }).collect();
        let data = dataset(&rows, labels);
        let model = fit_pca(&data).map_err(|e| format!("dataset {t}: {e}"))?;
        let l = &model.loadings;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| l[(k, i)] * l[(k, j)]).sum();
                ortho = ortho.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        cumulative = cumulative.max((model.cumulative_pct[d - 1] - 100.0).abs());

        let scores: Vec<Vec<f64>> = data.rows().map(|r| model.transform(r, d).unwrap()).collect();
        for i in 0..d {
            for j in 0..d {
                let c: f64 = scores.iter().map(|s| s[i] * s[j]).sum::<f64>() / (n as f64 - 1.0);
                let want = if i == j { model.eigenvalues[i] } else { 0.0 };
                cov_err = cov_err.max((c - want).abs());
            }
        }
        for (r, s) in data.rows().zip(&scores) {
            let z = model.standardize(r).unwrap();
            for (a, b) in model.reconstruct(s).unwrap().iter().zip(&z) {
                recon = recon.max((a - b).abs());
            }
        }
    }
    let detail = format!(
        "50 datasets: |L'L - I| {ortho:.1e}, |cum - 100| {cumulative:.1e}, score cov {cov_err:.1e}, reconstruction {recon:.1e}"
    );
    ensure(ortho <= 1e-10 && cumulative <= 1e-9 && cov_err <= 1e-8 && recon < 1e-10, detail.clone())?;
    within_budget(start, Duration::from_secs(60), detail)
}

// ---------------------------------------------------------------- 6

/// Two clusters along a random direction; `gap` keeps every point at least
/// that far from the separating hyperplane.
fn clusters(rng: &mut ChaCha8Rng, d: usize, n: usize, centre: f64, noise: f64, gap: f64) -> (Dataset, Vec<f64>) {
    let mut u: Vec<f64> = (0..d).map(|_| gauss(rng)).collect();
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.iter_mut().for_each(|v| *v /= norm);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    while rows.len() < n {
        let class = if rows.len() % 2 == 0 { Class::One } else { Class::Two };
        let row: Vec<f64> = (0..d).map(|j| class.sign() * centre * u[j] + noise * gauss(rng)).collect();
        let side: f64 = row.iter().zip(&u).map(|(a, b)| a * b).sum();
        if side * class.sign() < gap {
            continue;
        }
        rows.push(row);
        labels.push(class);
    }
    (dataset(&rows, labels), u)
}

fn kkt_violation(data: &Dataset, cfg: &SvmConfig) -> Result<(f64, f64), String> {
    let (model, sol) = fit_smo(data, cfg, false).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (i, r) in data.rows().enumerate() {
        let a = sol.alphas[i];
        if !(0.0..=cfg.c).contains(&a) {
            return Err(format!("alpha {a} outside [0, C]"));
        }
        let yf = sol.labels[i] * model.decision(r).unwrap();
        let v = if a <= 0.0 {
            (1.0 - yf).max(0.0)
        } else if a >= cfg.c {
            (yf - 1.0).max(0.0)
        } else {
            (yf - 1.0).abs()
        };
        worst = worst.max(v);
    }
    let balance: f64 = sol.alphas.iter().zip(&sol.labels).map(|(a, y)| a * y).sum();
    Ok((worst, balance.abs()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let kernels = [KernelSpec::Linear, KernelSpec::rbf(), KernelSpec::Quadratic];
    let mut notes = Vec::new();

    let (mut worst, mut worst_balance) = (0.0f64, 0.0f64);
    for t in 0..100 {
        let separable = t < 50;
        let d = rng.random_range(2..=5);
        let n = rng.random_range(30..=80);
        let (data, _) = if separable {
            clusters(&mut rng, d, n, 3.0, 0.7, 1.0)
        } else {
            clusters(&mut rng, d, n, 0.5, 1.0, f64::NEG_INFINITY)
        };
        let c = if separable { 100.0 } else { [0.5, 1.0, 5.0][t % 3] };
        let cfg = SvmConfig::new(kernels[t % 3], Solver::Smo).with_c(c);
        let (v, b) = kkt_violation(&data, &cfg).map_err(|e| format!("problem {t}: {e}"))?;
        if v > 10.0 * cfg.tol {
            return Err(format!("problem {t}: KKT violation {v:.3e} > 10 tol"));
        }
        worst = worst.max(v);
        worst_balance = worst_balance.max(b);
    }
    if worst_balance > 1e-9 {
        return Err(format!("|sum alpha y| = {worst_balance:.2e}"));
    }
    notes.push(format!("KKT max violation {worst:.1e} (limit {:.0e})", 10.0 * 1e-3));

    // XOR
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for k in 0..80 {
        let (sx, sy) = [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)][k % 4];
        rows.push(vec![sx + 0.15 * gauss(&mut rng), sy + 0.15 * gauss(&mut rng)]);
        labels.push(if sx * sy > 0.0 { Class::One } else { Class::Two });
    }
    let xor = dataset(&rows, labels);
    for solver in [Solver::Smo, Solver::Ls] {
        let model = fit_svm(&xor, &SvmConfig::new(KernelSpec::rbf(), solver)).map_err(|e| e.to_string())?;
        let correct = xor.rows().zip(xor.labels()).filter(|(r, l)| model.predict(r).unwrap().0 == **l).count();
        if correct != xor.n_rows() {
            return Err(format!("XOR {solver:?}: {correct}/80 training points correct"));
        }
    }
    notes.push("XOR 80/80 (SMO and LS)".into());

    // 1-D, max-margin boundary halfway between 1 and -1
    let line = Dataset::from_rows(
        &["x"],
        &[[1.0], [2.0], [5.0], [-1.0], [-4.0]],
        vec![Class::One, Class::One, Class::One, Class::Two, Class::Two],
    )
    .unwrap();
    let model = fit_svm(&line, &SvmConfig::new(KernelSpec::Linear, Solver::Smo)).map_err(|e| e.to_string())?;
    let w: f64 = model.support_vectors.iter().zip(&model.coefficients).map(|(s, c)| c * s[0]).sum();
    let boundary = -model.bias / w;
    if boundary.abs() > 1e-3 {
        return Err(format!("1-D boundary at {boundary:.3e}"));
    }
    notes.push(format!("1-D boundary {boundary:.1e}"));

    // LS vs SMO on separable data, fresh points from the same clusters
    let mut min_agree = 1.0f64;
    for t in 0..20 {
        let d = rng.random_range(2..=5);
        let (train, u) = clusters(&mut rng, d, 60, 3.0, 0.7, 1.0);
        let kernel = if t % 2 == 0 { KernelSpec::Linear } else { KernelSpec::rbf() };
        let smo = fit_svm(&train, &SvmConfig::new(kernel, Solver::Smo)).map_err(|e| e.to_string())?;
        let ls = fit_svm(&train, &SvmConfig::new(kernel, Solver::Ls)).map_err(|e| e.to_string())?;
        let mut agree = 0;
        for k in 0..500 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let x: Vec<f64> = (0..d).map(|j| sign * 3.0 * u[j] + 0.7 * gauss(&mut rng)).collect();
            if smo.predict(&x).unwrap().0 == ls.predict(&x).unwrap().0 {
                agree += 1;
            }
        }
        min_agree = min_agree.min(agree as f64 / 500.0);
    }
    if min_agree < 0.99 {
        return Err(format!("LS/SMO agreement {:.1}%", 100.0 * min_agree));
    }
    notes.push(format!("LS/SMO agreement >= {:.1}%", 100.0 * min_agree));
    within_budget(start, Duration::from_secs(120), notes.join(", "))
}

// ---------------------------------------------------------------- 7

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `w.x + b >= 0` means class 1: pooled ML covariance, priors from counts.
fn closed_form_lda(data: &Dataset) -> (Vec<f64>, f64) {
    let d = data.n_features();
    let n = data.n_rows() as f64;
    let mut means = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0.0; 2];
    for (r, l) in data.rows().zip(data.labels()) {
        counts[l.index()] += 1.0;
        means[l.index()].iter_mut().zip(r).for_each(|(m, x)| *m += x);
    }
    for c in 0..2 {
        means[c].iter_mut().for_each(|m| *m /= counts[c]);
    }
    let mut s = vec![vec![0.0; d]; d];
    for (r, l) in data.rows().zip(data.labels()) {
        let m = &means[l.index()];
        for i in 0..d {
            for j in 0..d {
                s[i][j] += (r[i] - m[i]) * (r[j] - m[j]) / n;
            }
        }
    }
    let diff: Vec<f64> = means[0].iter().zip(&means[1]).map(|(a, b)| a - b).collect();
    let w = solve(s.clone(), diff);
    let q = |m: &[f64]| {
        let si = solve(s.clone(), m.to_vec());
        m.iter().zip(&si).map(|(a, b)| a * b).sum::<f64>()
    };
    let b = -0.5 * (q(&means[0]) - q(&means[1])) + (counts[0] / counts[1]).ln();
    (w, b)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let lda = ClassifierConfig::gaussian(GaussianMode::Linear);
    let mut points = 0;
    for t in 0..100 {
        let d = rng.random_range(1..=6);
        let a: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| gauss(&mut rng) * 0.5 + if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let mu: [Vec<f64>; 2] = [(0..d).map(|_| gauss(&mut rng)).collect(), (0..d).map(|_| gauss(&mut rng)).collect()];
        let draw = |rng: &mut ChaCha8Rng, m: &[f64]| -> Vec<f64> {
            let z: Vec<f64> = (0..d).map(|_| gauss(rng)).collect();
            (0..d).map(|i| m[i] + a[i].iter().zip(&z).map(|(p, q)| p * q).sum::<f64>()).collect()
        };
        let (n1, n2) = (rng.random_range(20..100), rng.random_range(20..100));
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (class, count) in [(Class::One, n1), (Class::Two, n2)] {
            for _ in 0..count {
                rows.push(draw(&mut rng, &mu[class.index()]));
                labels.push(class);
            }
        }
        let data = dataset(&rows, labels);
        let model = lda.fit(&data).map_err(|e| format!("problem {t}: {e}"))?;
        let (w, b) = closed_form_lda(&data);
        for k in 0..1000 {
            let x = draw(&mut rng, &mu[k % 2]);
            let score: f64 = w.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() + b;
            let want = if score >= 0.0 { Class::One } else { Class::Two };
            if model.predict(&x).unwrap() != want {
                return Err(format!("problem {t}: disagreement at score {score:.3e}"));
            }
            points += 1;
        }
    }

    // per-class samples symmetric about the class centre in every axis, so
    // every off-diagonal covariance is zero
    let mut worst = 0.0f64;
    for t in 0..50 {
        let d = rng.random_range(2..=4);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in Class::BOTH {
            let centre: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            for _ in 0..4 {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..2.0)).collect();
                for signs in 0..1u32 << d {
                    rows.push(
                        (0..d)
                            .map(|j| centre[j] + if signs >> j & 1 == 1 { v[j] } else { -v[j] })
                            .collect::<Vec<f64>>(),
                    );
                    labels.push(class);
                }
            }
        }
        let data = dataset(&rows, labels);
        let full = fit_gaussian(&data, GaussianMode::Quadratic, DEFAULT_RIDGE).map_err(|e| e.to_string())?;
        let diag = fit_gaussian(&data, GaussianMode::DiagQuadratic, DEFAULT_RIDGE).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
            if full.predict(&x).unwrap() != diag.predict(&x).unwrap() {
                return Err(format!("diagonal problem {t}: labels differ at {x:?}"));
            }
            let (f, g) = (full.scores(&x).unwrap(), diag.scores(&x).unwrap());
            for c in 0..2 {
                worst = worst.max((f[c] - g[c]).abs() / f[c].abs().max(1.0));
            }
        }
    }
    let detail = format!("LDA = closed form on {points} points; diag/full QDA identical labels, score gap {worst:.1e}");
    ensure(worst <= 1e-9, detail.clone())?;
    within_budget(start, Duration::from_secs(60), detail)
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let rows: Vec<Vec<f64>> = (0..200).map(|_| (0..24).map(|_| gauss(&mut rng)).collect()).collect();
    let mut labels: Vec<Class> = (0..200).map(|i| if i < 100 { Class::One } else { Class::Two }).collect();
    labels.shuffle(&mut rng);
    let data = dataset(&rows, labels);
    let roster = ClassifierConfig::roster();
    let selectors = [FeatureSelector::RankedPrefix(6)];
    let cfg = CvConfig {
        iterations: 500,
        seed: 8,
        ..CvConfig::default()
    };
    let run = || -> Result<Vec<String>, String> {
        par_sweep(&data, &roster, &selectors, &cfg)
            .into_iter()
            .map(|cell| {
                let r = cell.result.map_err(|e| format!("{} {}: {e}", cell.classifier, cell.variant))?;
                serde_json::to_string(&r).map_err(|e| e.to_string())
            })
            .collect()
    };
    let first = run()?;
    let mut means = Vec::new();
    let mut off = Vec::new();
    for (json, learner) in first.iter().zip(&roster) {
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        let mean = v["mean"].as_f64().unwrap();
        means.push(mean);
        if (mean - 0.5).abs() > 0.05 {
            off.push(format!("{} {} {mean:.3}", learner.name(), learner.variant()));
        }
    }
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let identical = run()? == first;
    let mut detail = format!(
        "17 classifiers x 500 iterations, mean MCR in [{lo:.3}, {hi:.3}], rerun {}",
        if identical { "byte-identical" } else { "DIFFERENT" }
    );
    if !off.is_empty() {
        detail.push_str(&format!("; outside 0.5 +- 0.05: {}", off.join("; ")));
    }
    ensure(off.is_empty() && identical, detail.clone())?;
    within_budget(start, Duration::from_secs(600), detail)
}

// ---------------------------------------------------------------- 9

fn corpus_delta(dir: &Path, kind: CorpusKind, seed: u64) -> Result<Vec<(String, f64, f64, f64)>, String> {
    let manifest_path = write_corpus(dir, &SynthSpec::new(kind, 100, seed)).map_err(|e| e.to_string())?;
    let manifest = parse_manifest(&fs::read_to_string(&manifest_path).unwrap()).map_err(|e| e.to_string())?;
    let cfg = RunConfig::default();
    let tables = extract_corpus(&manifest, dir, &cfg).map_err(|e| e.to_string())?;
    if !tables.skipped.is_empty() {
        return Err(format!("{} clips skipped", tables.skipped.len()));
    }
    let cv = CvConfig {
        iterations: 500,
        seed: 9,
        ..CvConfig::default()
    };
    ["quadratic", "svm-rbf-smo"]
        .iter()
        .map(|name| {
            let learner = cfg.classifier(name).map_err(|e| e.to_string())?;
            let r = par_compare(&tables.frame.data, &tables.baseline.data, &learner, &cv).map_err(|e| e.to_string())?;
            Ok((name.to_string(), r.frame.accuracy(), r.baseline.accuracy(), r.accuracy_delta))
        })
        .collect()
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let opening = corpus_delta(&tmp.path().join("opening"), CorpusKind::OpeningNoise, 91)?;
    let control = corpus_delta(&tmp.path().join("uniform"), CorpusKind::Uniform, 92)?;
    let show = |rows: &[(String, f64, f64, f64)]| {
        rows.iter()
            .map(|(n, f, b, d)| format!("{n} {:.1}% vs {:.1}% ({:+.1} pts)", 100.0 * f, 100.0 * b, 100.0 * d))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let detail = format!("opening corpus: {}; control: {}", show(&opening), show(&control));
    let ok = opening.iter().all(|r| r.3 >= 0.10) && control.iter().all(|r| r.3.abs() <= 0.05);
    ensure(ok, detail.clone())?;
    within_budget(start, Duration::from_secs(900), detail)
}

// ---------------------------------------------------------------- 10

fn cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_trapframe"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    cli(root, &["synth", "--kind", "opening-noise", "--clips-per-class", "20", "--seed", "10", "--out", "corpus"])?;
    let mut stdouts = Vec::new();
    for run in ["run1", "run2"] {
        let dir = root.join(run);
        fs::create_dir(&dir).unwrap();
        let mut log = Vec::new();
        for cmd in ["extract", "rank", "pca", "evaluate"] {
            log.extend(cli(&dir, &[cmd, "--manifest", "../corpus/manifest.csv", "--out", "out", "--seed", "10"])?);
        }
        stdouts.push(log);
    }
    let list = |run: &str| -> Vec<String> {
        let mut names: Vec<String> = fs::read_dir(root.join(run).join("out"))
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        names
    };
    let names = list("run1");
    if names != list("run2") {
        return Err("runs wrote different file sets".into());
    }
    for name in &names {
        let a = fs::read(root.join("run1/out").join(name)).unwrap();
        let b = fs::read(root.join("run2/out").join(name)).unwrap();
        if a != b {
            return Err(format!("{name} differs between runs"));
        }
    }
    if stdouts[0] != stdouts[1] {
        return Err("stdout differs between runs".into());
    }
    for required in ["features.csv", "rank.csv", "pca.csv", "pca_loadings.csv", "evaluate.csv", "evaluate.json"] {
        if !names.iter().any(|n| n == required) {
            return Err(format!("{required} missing"));
        }
    }
    within_budget(
        start,
        Duration::from_secs(300),
        format!("40 clips, {} output files and stdout byte-identical", names.len()),
    )
}

// ----------------------------------------------------------------

const CRITERIA: [(&str, fn() -> Outcome); 10] = [
    ("moment oracle equivalence", criterion_1),
    ("frame-split conformance", criterion_2),
    ("FDR ranking oracle", criterion_3),
    ("scatter identity and J3 invariance", criterion_4),
    ("PCA contract", criterion_5),
    ("SVM/SMO correctness", criterion_6),
    ("Gaussian classifier oracle", criterion_7),
    ("CV sanity on shuffled labels", criterion_8),
    ("frame features beat whole-signal baseline", criterion_9),
    ("end-to-end CLI determinism", criterion_10),
];

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id:>2} {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
