//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Takes several minutes in the test profile.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use qpmshg::cli::{autoconvolution_ratio, run, RunConfig};
use qpmshg::eigen::{solve_problem, EigenRequest};
use qpmshg::fem::{assemble, from_grid, graded_grid, CsrMatrix};
use qpmshg::materials::{poling_harmonic_amplitude, Polarization, ShgType, Waveguide};
use qpmshg::modes::{ModeLabel, ModeSolver};
use qpmshg::oracles::{dense_generalized_eigenvalues, poling_harmonics_fft, slab_effective_index, SlabStack};
use qpmshg::scan::{
    find_phase_matched_wavelength, ideal_line_width, optimal_poling_period, process_table_on, sensitivity_scan,
    RelativePowerMetric, ScanParam, Study,
};
use qpmshg::shg::{
    broaden, coupling_gamma, sh_spectrum, wavelength_grid, BandPlan, GammaModel, ProcessTriple, PumpSpec,
    SpectrumOptions,
};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, detail: impl AsRef<str>) {
        if !pass {
            self.failed += 1;
        }
        println!("{} {id}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    }
}

fn t2(s: &str) -> ProcessTriple {
    ProcessTriple::parse(ShgType::TypeII, 1, s).expect("triple")
}

const FIVE: [&str; 5] = ["00+00->00", "00+00->01", "01+01->00", "01+01->01", "10+00->10"];

/// Type II processes with their theoretical λ₂ (nm) and relative power.
const TABLE: [(&str, f64, f64); 6] = [
    ("00+00->00", 398.6, 1.00),
    ("00+00->01", 394.4, 0.81),
    ("10+00->10", 399.5, 0.78),
    ("01+01->00", 403.0, 0.43),
    ("10+01->10", 401.9, 0.42),
    ("01+01->01", 397.1, 0.18),
];

fn census(r: &mut Report) {
    let solver = ModeSolver::default();
    let wg = Waveguide::default();
    let mut counts = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut tm_labels = Vec::new();
    for lambda in [800.0, 400.0] {
        for pol in Polarization::BOTH {
            let t = Instant::now();
            let set = solver.solve(&wg, lambda, pol).expect("census");
            slowest = slowest.max(t.elapsed().as_secs_f64());
            if lambda == 800.0 && pol == Polarization::Tm {
                tm_labels = set.labels();
            }
            counts.push(set.modes.len());
        }
    }
    let pass = counts[0] == 3 && counts[1] == 5 && counts[2] > 30 && counts[3] > 30 && slowest < 60.0;
    r.line(
        "1 mode census",
        pass,
        format!(
            "800 nm TE {} TM {} (want 3, 5); 400 nm TE {} TM {} (want > 30); slowest solve {slowest:.1} s",
            counts[0], counts[1], counts[2], counts[3]
        ),
    );

    let mut want: Vec<ModeLabel> = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2)].map(|(m, n)| ModeLabel::new(m, n)).to_vec();
    want.sort();
    let mut got = tm_labels.clone();
    got.sort();
    let shown: Vec<String> = tm_labels.iter().map(|l| l.to_string()).collect();
    r.line("2 TM labels at 800 nm", got == want, format!("[{}]", shown.join(" ")));
}

fn periods(r: &mut Report) {
    let solver = ModeSolver::default();
    let wg = Waveguide::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (t, want, tol) in [(ShgType::TypeII, 7.62, 0.20), (ShgType::Type0, 3.08, 0.15), (ShgType::TypeI, 1.83, 0.10)] {
        let p = optimal_poling_period(t, 800.0, &solver, &wg).expect("period");
        pass &= (p.first_order_um - want).abs() <= tol;
        parts.push(format!(
            "type {t} {:.3} µm (want {want} ± {tol}; M={} period {:.3})",
            p.first_order_um, p.harmonic, p.period_um
        ));
    }
    r.line("3 optimal poling periods", pass, parts.join("; "));
}

fn table_and_width(r: &mut Report) -> Study {
    let pump = PumpSpec::flat(800.0, 40.0);
    let mut study = Study::default().for_pump(&pump);
    study.plan.sh_count = Some(12);
    let basis = study.basis(&[ShgType::TypeII]).expect("table basis");
    let grid = wavelength_grid(391.0, 409.0, 1801);
    let opts = SpectrumOptions {
        pump_points: 512,
        ..SpectrumOptions::default()
    };
    let table = process_table_on(&basis, &study.device, &pump, &grid, RelativePowerMetric::default(), &opts)
        .expect("process table");

    let mut found = 0;
    let mut wl_ok = true;
    let mut power_ok = true;
    let mut parts = Vec::new();
    for (modes, l2, p) in TABLE {
        match table.find(modes) {
            Some(row) => {
                found += 1;
                wl_ok &= (row.lambda2_nm - l2).abs() <= 1.5;
                power_ok &= (row.rel_power - p).abs() <= 0.25;
                parts.push(format!("{modes} {:.2} nm P {:.3}", row.lambda2_nm, row.rel_power));
            }
            None => parts.push(format!("{modes} missing")),
        }
    }
    let l = |m: &str| table.find(m).map(|row| row.lambda2_nm);
    let spacing = l("01+01->00").zip(l("00+00->00")).map(|(a, b)| a - b);
    let spacing_ok = spacing.is_some_and(|s| (s - 4.4).abs() <= 1.0);
    let p = |m: &str| table.find(m).map_or(0.0, |row| row.rel_power);
    let order_ok = p("00+00->00") > p("00+00->01") && p("00+00->01") > p("10+00->10");
    let order_ok = order_ok && TABLE[3..].iter().all(|(m, _, _)| p(m) < p("10+00->10"));
    r.line(
        "4 process table",
        found == 6 && wl_ok && spacing_ok && order_ok && power_ok,
        format!(
            "found {found}/6, λ₂ within 1.5 nm {wl_ok}, spacing {} nm, ordering {order_ok}, powers within 0.25 {power_ok}; {}",
            spacing.map_or("--".into(), |s| format!("{s:.2}")),
            parts.join(", ")
        ),
    );

    let t = t2("00+00->00");
    let poling = &study.device.poling;
    let pm = find_phase_matched_wavelength(&t, &basis.tables, poling, None).expect("root");
    let width = ideal_line_width(&pm, &basis.tables, poling, study.device.length_um()).expect("width");
    r.line(
        "5 ideal line width",
        (width - 0.13).abs() <= 0.02,
        format!("{width:.4} nm at λ₂* {:.2} nm, L {} mm (want 0.13 ± 0.02)", pm.lambda2_nm, study.device.waveguide.geometry.length_mm),
    );
    study
}

fn sensitivity(r: &mut Report) {
    let triples: Vec<ProcessTriple> = FIVE.iter().map(|s| t2(s)).collect();
    let mut study = Study::default();
    study.plan = BandPlan {
        pump_band_nm: (780.0, 820.0),
        samples: 7,
        pump_count: Some(4),
        sh_count: Some(6),
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for (param, values, target, ok) in [
        (ScanParam::Period, vec![7.52, 7.62, 7.72], 2.0, (|s: f64| (s / 2.0 - 1.0).abs() <= 0.1) as fn(f64) -> bool),
        (ScanParam::Width, vec![4.9, 5.0, 5.1], 0.05, |s: f64| (0.025..=0.1).contains(&s)),
        (ScanParam::Depth, vec![8.0, 10.0, 12.0], 0.1, |s: f64| (0.05..=0.2).contains(&s)),
    ] {
        let res = sensitivity_scan(&study, param, &values, &triples).expect("scan");
        let spreads: Vec<Option<f64>> = (0..triples.len()).map(|k| res.spread(k)).collect();
        let good = spreads.iter().all(|s| s.is_some_and(ok));
        pass &= good;
        let shown: Vec<String> = spreads.iter().map(|s| s.map_or("--".into(), |v| format!("{v:.3}"))).collect();
        parts.push(format!("{param} [{}] (target {target}) {}", shown.join(" "), if good { "ok" } else { "off" }));
    }
    r.line("6 sensitivity spreads", pass, parts.join("; "));
}

fn bandwidth(r: &mut Report) {
    let pump = PumpSpec::gaussian(800.0, 10.0);
    let mut study = Study::default().for_pump(&pump);
    study.plan.pump_count = Some(2);
    study.plan.sh_count = Some(2);
    let basis = study.basis(&[ShgType::TypeII]).expect("basis");
    let model = basis.model(&[t2("00+00->00")], &study.device).expect("model");
    let opts = SpectrumOptions {
        gamma: GammaModel::Flat,
        ..SpectrumOptions::default()
    };
    let s = sh_spectrum(&model, &pump, &wavelength_grid(392.0, 408.0, 3201), &opts).expect("spectrum");
    let engine = s.fwhm_nm().expect("resolved line");
    let (oracle, _) = autoconvolution_ratio(&pump, 2001).expect("oracle");
    let ratio = pump.fwhm_nm / engine;
    r.line(
        "7 bandwidth relation",
        (ratio / (2.0 * SQRT_2) - 1.0).abs() <= 0.02 && (engine / oracle - 1.0).abs() <= 0.02,
        format!("Δλ₁/Δλ₂ = {ratio:.4} (2√2 = {:.4}); engine {engine:.4} nm, oracle {oracle:.4} nm", 2.0 * SQRT_2),
    );
}

fn b_inner(b: &CsrMatrix, x: &[f64], y: &[f64]) -> f64 {
    let mut by = vec![0.0; y.len()];
    b.mul_vec(y, &mut by);
    x.iter().zip(&by).map(|(p, q)| p * q).sum()
}

fn properties(r: &mut Report, study: &Study) {
    let mut fails: Vec<String> = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            fails.push(name.to_string());
        }
    };
    let wg = Waveguide::default();
    let solver = ModeSolver::default();

    // residuals and B-orthogonality at the default mesh
    let p = assemble(solver.mesh(&wg).unwrap(), Polarization::Tm, 800.0, &wg).unwrap();
    let req = EigenRequest::guided(&p);
    let sol = solve_problem(&p, &req).unwrap();
    check("residual", sol.pairs.iter().all(|x| x.residual <= req.tolerance));
    let mut orth = 0.0f64;
    for (i, x) in sol.pairs.iter().enumerate() {
        for (j, y) in sol.pairs.iter().enumerate() {
            orth = orth.max((b_inner(&p.b, &x.vector, &y.vector) - f64::from(u8::from(i == j))).abs());
        }
    }
    check("B-orthogonality", orth < 1e-8);

    // dense oracle on a small mesh
    let w = wg.geometry.window;
    let xs: Vec<f64> = (0..41).map(|k| w.x_min + (w.x_max - w.x_min) * k as f64 / 40.0).collect();
    let mesh = Arc::new(from_grid(xs, graded_grid(w.y_min, w.y_max, &[0.0], 1.0, 0.5, 1.0)).unwrap());
    let small = assemble(mesh.clone(), Polarization::Te, 800.0, &wg).unwrap();
    let sparse = solve_problem(&small, &EigenRequest::guided(&small)).unwrap();
    let dense = dense_generalized_eigenvalues(&small.a, &small.b).unwrap();
    check(
        "dense oracle",
        mesh.node_count() <= 2000
            && sparse.pairs.iter().all(|x| dense.iter().any(|d| (d - x.value).abs() <= 1e-8 * x.value.abs())),
    );

    // slab oracle on the laterally uniform profile
    let s = wg.sampler(800.0).unwrap();
    let (n0, dn) = (s.substrate_index(qpmshg::materials::Axis::X), s.peak_index(qpmshg::materials::Axis::X));
    let dn = dn - n0;
    let h = wg.geometry.depth_um;
    let width = 60.0;
    let mesh = Arc::new(
        from_grid(
            (0..31).map(|k| width * k as f64 / 30.0).collect(),
            graded_grid(-3.0, 40.0, &[0.0], 0.05, 0.025, 0.5),
        )
        .unwrap(),
    );
    let k0 = qpmshg::fem::wavenumber(800.0);
    let prof = |y: f64| if y < 0.0 { 1.0 } else { n0 + dn * qpmshg::materials::DepthProfile::Erfc.eval(y / h) };
    let slab_p = qpmshg::fem::assemble_with(mesh, Polarization::Te, k0, |_, y| {
        let n = prof(y);
        [n * n; 3]
    });
    let top = k0 * k0 * (n0 + dn).powi(2);
    let slab_sol = solve_problem(
        &slab_p,
        &EigenRequest {
            shift: top,
            count: 1,
            interval: (k0 * k0 * n0 * n0, top),
            ..EigenRequest::guided(&slab_p)
        },
    )
    .unwrap();
    let n_fem = (slab_sol.pairs[0].value + (PI / width).powi(2)).sqrt() / k0;
    let stack = SlabStack::graded(1.0, n0, dn, h, 40.0, 800, |t| qpmshg::materials::DepthProfile::Erfc.eval(t));
    let n_slab = slab_effective_index(&stack, 800.0, Polarization::Te, 0).unwrap().unwrap();
    check("slab oracle", (n_fem - n_slab).abs() <= 1e-4);

    // x-parity selection, Γ limits, poling FFT
    let tp = study.for_pump(&PumpSpec::gaussian(800.0, 3.0));
    let mut tp = tp;
    tp.plan.pump_count = Some(4);
    tp.plan.sh_count = Some(4);
    let basis = tp.basis(&[ShgType::TypeII]).unwrap();
    let d0 = basis.overlap(&t2("00+00->00"), &tp.device).unwrap().value.norm();
    let d1 = basis.overlap(&t2("00+00->10"), &tp.device).unwrap().value.norm();
    check("parity selection", d1 < 1e-3 * d0);
    let l = tp.device.length_um();
    let g = coupling_gamma(0.0, l);
    check("Γ limits", g.re == l && g.im == 0.0 && coupling_gamma(2.0 * PI / l, l).norm() < 1e-12 * l);
    let fft = poling_harmonics_fft(0.375, 5, 1 << 16);
    check(
        "poling FFT",
        (1..=5u32).zip(&fft).all(|(m, c)| (poling_harmonic_amplitude(m, 0.375).unwrap() - c).abs() <= 1e-6),
    );

    // |s|⁴ scaling and broadening
    let model = basis.model(&[t2("00+00->00")], &tp.device).unwrap();
    let pump = PumpSpec::gaussian(800.0, 3.0);
    let grid = wavelength_grid(397.0, 403.0, 601);
    let opts = SpectrumOptions::default();
    let a = sh_spectrum(&model, &pump, &grid, &opts).unwrap();
    let b = sh_spectrum(&model, &pump.clone().with_power(2.5), &grid, &opts).unwrap();
    check(
        "power scaling",
        a.intensity.iter().zip(&b.intensity).all(|(x, y)| *x == 0.0 || (y / x / 6.25 - 1.0).abs() <= 1e-10),
    );
    let wide = broaden(&a, 1.0).unwrap();
    check("broadening", (wide.integrated_intensity() / a.integrated_intensity() - 1.0).abs() <= 1e-6);

    // byte-identical artifacts across thread counts
    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<Vec<u8>> = [1, 4]
        .iter()
        .map(|&n| {
            let mut cfg = RunConfig::from_toml(
                "command = \"census\"\ncache = false\n[census]\nwavelengths_nm = [800.0]\n",
            )
            .unwrap();
            cfg.out_dir = dir.path().join(format!("t{n}"));
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            pool.install(|| run(&cfg)).unwrap();
            std::fs::read(cfg.out_dir.join("census.json")).unwrap()
        })
        .collect();
    check("thread determinism", outputs[0] == outputs[1]);

    let pass = fails.is_empty();
    r.line(
        "8 property suite",
        pass,
        if pass { "all properties hold".to_string() } else { format!("failed: {}", fails.join(", ")) },
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut r = Report { failed: 0 };
    census(&mut r);
    periods(&mut r);
    let study = table_and_width(&mut r);
    sensitivity(&mut r);
    bandwidth(&mut r);
    properties(&mut r, &study);
    println!("{} of 8 criteria failed ({:.0} s)", r.failed, start.elapsed().as_secs_f64());
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
