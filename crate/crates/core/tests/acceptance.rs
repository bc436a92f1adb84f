//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use spacelab_iqa::analysis::{background_rank, exposure_curve, symmetry_index};
use spacelab_iqa::catalog::{rank_by, shipped, Direction, EquipmentKind};
use spacelab_iqa::cli;
use spacelab_iqa::dataset::Background;
use spacelab_iqa::exposure::{round_ev, ExposureLabel, ExposureTuple};
use spacelab_iqa::fixtures::{background_suite, exposure_suite, generate, SceneKind, SceneSpec};
use spacelab_iqa::metrics::{ms_ssim, ssim, uqi_raw, uqi_stabilized, MetricError, UqiParams};
use spacelab_iqa::Image;

use common::{direct_stabilized, direct_uqi, noise, unimodal};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ev_table() -> Outcome {
    let expected = [11, 10, 9, 8, 7, 6, 5, 4, 3];
    let shutters = [500.0, 250.0, 125.0, 60.0, 30.0, 15.0, 8.0, 4.0, 2.0];
    let mut got = Vec::new();
    for (label, n) in ExposureLabel::ALL.iter().zip(shutters) {
        let t = ExposureTuple::new(2.0, 1.0 / n, 100.0).map_err(|e| e.to_string())?;
        ensure(label.tuple() == t, || format!("{label} is not (f/2:1/{n}:100)"))?;
        got.push(round_ev(t.ev()));
    }
    ensure(got == expected, || format!("rounded EVs {got:?}"))?;
    Ok(format!("rounded EVs {got:?}"))
}

type MetricFn = fn(&Image, &Image) -> Result<f64, MetricError>;

fn pair(seed: u64) -> (Image, Image) {
    let (w, h) = (176 + (seed % 3) as usize * 8, 176 + (seed % 2) as usize * 8);
    match seed % 4 {
        0 => (noise(seed, w, h, 0.0, 1.0), noise(seed + 1000, w, h, 0.0, 1.0)),
        1 => {
            let scene = generate(&SceneSpec::new(SceneKind::CompositeScene { seed }, w, h)).unwrap();
            (scene.clone(), scene.map_luma(|v| 0.7 * v + 0.05))
        }
        2 => (noise(seed, w, h, 0.2, 0.4), noise(seed + 1000, w, h, 0.1, 0.9)),
        _ => {
            let g = generate(&SceneSpec::new(
                SceneKind::LinearGradient { lo: 0.1, hi: 0.9, axis: spacelab_iqa::fixtures::Axis::Horizontal },
                w,
                h,
            ))
            .unwrap();
            (g, noise(seed, w, h, 0.0, 1.0))
        }
    }
}

fn identity_and_symmetry() -> Outcome {
    let tol = 1e-12;
    let metrics: [(&str, MetricFn); 4] = [
        ("UQI_RAW", |x, y| uqi_raw(x, y).map(|s| s.value)),
        ("UQI_STABILIZED", |x, y| uqi_stabilized(x, y, UqiParams::default()).map(|s| s.value)),
        ("SSIM", |x, y| ssim(x, y).map(|s| s.value)),
        ("MS_SSIM", |x, y| ms_ssim(x, y, 5).map(|s| s.value)),
    ];
    let pairs = 100u64;
    let mut worst_sym: f64 = 0.0;
    let mut worst_id: f64 = 0.0;
    for seed in 0..pairs {
        let (x, y) = pair(seed);
        for (name, m) in &metrics {
            let a = m(&x, &y).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let b = m(&y, &x).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            worst_sym = worst_sym.max((a - b).abs());
            ensure((a - b).abs() <= tol, || format!("{name} asymmetric on seed {seed}: {a} vs {b}"))?;
            let id = m(&x, &x).map_err(|e| format!("{name} identity seed {seed}: {e}"))?;
            worst_id = worst_id.max((id - 1.0).abs());
            ensure((id - 1.0).abs() <= tol, || format!("{name}(x, x) = {id} on seed {seed}"))?;
        }
    }
    for level in [0.0, 0.004, 0.5, 1.0] {
        let c = Image::filled(176, 176, level).unwrap();
        for (name, m) in &metrics[1..] {
            let v = m(&c, &c).map_err(|e| format!("{name} constant {level}: {e}"))?;
            worst_id = worst_id.max((v - 1.0).abs());
            ensure((v - 1.0).abs() <= tol, || format!("{name} on constant {level} = {v}"))?;
        }
    }
    Ok(format!("{pairs} pairs x 4 metrics, max |asym| {worst_sym:.1e}, max |id-1| {worst_id:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let p = UqiParams::default();
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let lo = 0.3 * common::noise(seed, 1, 1, 0.0, 1.0).luma()[0];
        let x = noise(seed * 2 + 1, 8, 8, lo, 1.0);
        let y = noise(seed * 2 + 2, 8, 8, 0.0, 1.0 - lo);
        let got = uqi_stabilized(&x, &y, p).map_err(|e| e.to_string())?.value;
        let want = direct_stabilized(x.luma(), y.luma(), p.c1(), p.c2());
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= 1e-12, || format!("stabilized seed {seed}: {got} vs {want}"))?;
    }
    let mut raw_worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=16usize {
        for seed in 0..10u64 {
            let x = noise(1000 + seed * 17 + n as u64, n, n, 0.05, 1.0);
            let y = noise(5000 + seed * 31 + n as u64, n, n, 0.05, 1.0);
            let got = uqi_raw(&x, &y).map_err(|e| format!("{n}x{n}: {e}"))?.value;
            let want = direct_uqi(x.luma(), y.luma());
            raw_worst = raw_worst.max((got - want).abs());
            ensure((got - want).abs() <= 1e-12, || format!("raw {n}x{n} seed {seed}: {got} vs {want}"))?;
            cases += 1;
        }
    }
    Ok(format!("200 stabilized windows max err {worst:.1e}; {cases} raw images max err {raw_worst:.1e}"))
}

fn degenerate_reference() -> Outcome {
    let mut inputs: Vec<Image> = (0..100u64)
        .map(|s| {
            let n = 2 + (s % 15) as usize;
            noise(s, n, n + (s % 3) as usize, 0.0, 1.0)
        })
        .collect();
    inputs.push(Image::filled(8, 8, 0.5).unwrap());
    inputs.push(Image::black(8, 8));
    let mut degenerate = 0;
    for x in &inputs {
        let black = Image::black(x.width(), x.height());
        if matches!(uqi_raw(x, &black), Err(MetricError::DegenerateReference(_))) {
            degenerate += 1;
        }
    }
    ensure(degenerate == inputs.len(), || format!("{degenerate}/{} flagged degenerate", inputs.len()))?;

    let black = Image::black(16, 16);
    let scores: Vec<f64> = (1..=100)
        .map(|k| {
            let level = k as f64 / 100.0;
            uqi_stabilized(&Image::filled(16, 16, level).unwrap(), &black, UqiParams::default()).unwrap().value
        })
        .collect();
    ensure(scores.iter().all(|v| v.is_finite()), || "non-finite stabilized score".into())?;
    let decreasing = scores.windows(2).all(|w| w[0] > w[1]);
    ensure(decreasing, || "stabilized UQI not strictly decreasing in level".into())?;
    Ok(format!(
        "{degenerate}/{} raw: DegenerateReference; stabilized strictly decreasing over 0.01..1.00 ({:.4e} .. {:.4e})",
        inputs.len(),
        scores[0],
        scores[99]
    ))
}

fn background_ranking() -> Outcome {
    let set = background_suite(160, 120).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    set.write_to(dir.path()).map_err(|e| e.to_string())?;
    let manifest = spacelab_iqa::dataset::load_manifest(dir.path().join("manifest.toml")).map_err(|e| e.to_string())?;
    let scores = background_rank(&manifest).map_err(|e| e.to_string())?;
    let order: Vec<Background> = scores.iter().map(|s| s.background).collect();
    ensure(order == Background::ALL.to_vec(), || format!("ranked {order:?}"))?;
    ensure(scores.iter().all(|s| s.per_condition.len() == 30), || "a background lacks 30 conditions".into())?;
    let names: Vec<String> = scores.iter().map(|s| format!("{}={:.4}", s.background, s.mean_uqi)).collect();
    Ok(format!("ranked {} over 2x3x5 conditions", names.join(" > ")))
}

fn degradation_curves() -> Outcome {
    let set = exposure_suite(256, 256).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    set.write_to(dir.path()).map_err(|e| e.to_string())?;
    let manifest = spacelab_iqa::dataset::load_manifest(dir.path().join("manifest.toml")).map_err(|e| e.to_string())?;
    let curves = exposure_curve(&manifest).map_err(|e| e.to_string())?;
    ensure(curves.len() == 6, || format!("{} curves", curves.len()))?;
    let mut report = Vec::new();
    for c in &curves {
        let values: Vec<f64> = c.points.iter().map(|p| p.ms_ssim).collect();
        ensure(c.point(ExposureLabel::Ex0).map(|p| p.ms_ssim) == Some(1.0), || {
            format!("{} EX0 is not 1.0", c.series_name())
        })?;
        ensure(values.iter().filter(|&&v| v == 1.0).count() == 1, || {
            format!("{} has several 1.0 points", c.series_name())
        })?;
        ensure(unimodal(&values), || format!("{} not unimodal: {values:?}", c.series_name()))?;
        let sym = symmetry_index(c).map_err(|e| e.to_string())?;
        report.push(format!("{} sym {sym:.4}", c.series_name()));
    }
    Ok(format!("6 unimodal curves peaking at EX0 = 1.0; {}", report.join(", ")))
}

fn catalog_fidelity() -> Outcome {
    let counts = [EquipmentKind::Background, EquipmentKind::Camera, EquipmentKind::Lamp].map(|k| shipped(k).len());
    ensure(counts == [8, 8, 6], || format!("record counts {counts:?}"))?;
    let bg =
        rank_by(&shipped(EquipmentKind::Background), "reflectivity_pct", Direction::Asc).map_err(|e| e.to_string())?;
    ensure(bg[0].record.name == "Black Velvet", || format!("first background {}", bg[0].record.name))?;
    let refl = bg[0].record.reflectivity_pct.map(|s| s.low());
    ensure(refl == Some(0.1), || format!("Black Velvet reflectivity {refl:?}"))?;
    let cams = rank_by(&shipped(EquipmentKind::Camera), "cost_eur", Direction::Desc).map_err(|e| e.to_string())?;
    ensure(cams[0].record.name == "Sony A7RIII", || format!("first camera {}", cams[0].record.name))?;
    let cost = cams[0].record.cost_eur.as_ref().map(|c| c.cheapest().value.low());
    ensure(cost == Some(3200.0), || format!("Sony cost {cost:?}"))?;
    Ok(format!("counts {counts:?}; Black Velvet 0.1% first; Sony A7RIII 3200 EUR first"))
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Runs a command through the CLI front end without printing its output.
fn cli_quiet(args: &[&str]) -> i32 {
    use clap::Parser;
    match cli::Cli::try_parse_from(args) {
        Ok(parsed) => match cli::execute(&parsed) {
            Ok(_) => 0,
            Err(f) => f.code,
        },
        Err(_) => cli::EXIT_USAGE,
    }
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = root.path();
    let arg = |p: &Path| p.to_string_lossy().into_owned();
    for (spec, sub) in [("background-suite:96x72", "bg"), ("exposure-sweep:192x192", "ex")] {
        let code = cli_quiet(&["spacelab-iqa", "fixtures", "--spec", spec, "--out", &arg(&root.join(sub))]);
        ensure(code == 0, || format!("fixtures {spec} exited {code}"))?;
    }
    let mut runs = Vec::new();
    for (i, jobs) in ["1", "3", "1"].iter().enumerate() {
        let out = root.join(format!("run{i}"));
        for (cmd, sub) in [("background-rank", "bg"), ("exposure-curve", "ex")] {
            let manifest = arg(&root.join(sub).join("manifest.toml"));
            let code = cli_quiet(&["spacelab-iqa", "--jobs", jobs, cmd, &manifest, "--out", &arg(&out)]);
            ensure(code == 0, || format!("{cmd} --jobs {jobs} exited {code}"))?;
        }
        let mut all = files(&out.join("background-suite"));
        all.extend(files(&out.join("exposure-sweep")));
        runs.push(all);
    }
    let n = runs[0].len();
    ensure(n >= 6, || format!("only {n} artifacts"))?;
    ensure(runs.iter().all(|r| *r == runs[0]), || "artifacts differ between runs".into())?;
    Ok(format!("{n} CSV/SVG/summary files byte-identical across 3 runs (--jobs 1, 3, 1)"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("EV table reproduction", ev_table, Duration::from_secs(1)),
        ("metric identity & symmetry", identity_and_symmetry, Duration::from_secs(30)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(30)),
        ("degenerate-reference behavior", degenerate_reference, Duration::from_secs(30)),
        ("background ranking", background_ranking, Duration::from_secs(120)),
        ("degradation-curve shape", degradation_curves, Duration::from_secs(120)),
        ("catalog fidelity", catalog_fidelity, Duration::from_secs(30)),
        ("end-to-end determinism", determinism, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *budget => Err(format!("{detail}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{took:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{took:.2?}] {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
