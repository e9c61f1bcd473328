//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.
//!
//! Criteria whose failure has been analysed and is expected are listed in
//! `EXPECTED_FAILURES`; they still print `[FAIL]`, but only an unexpected
//! outcome (a new failure, or an expected failure that starts passing)
//! makes the process exit nonzero.

use std::f64::consts::{FRAC_PI_3, PI};
use std::process::ExitCode;
use std::time::Instant;

use quadspec_core::arnoldi::{arnoldi_shift_invert, ArnoldiConfig};
use quadspec_core::dense::{determinant, DenseLu, DenseMatrix};
use quadspec_core::dirichlet::{assemble_dirichlet_pencil, DirichletPencilConfig};
use quadspec_core::eig::dense_eigenvalues;
use quadspec_core::grid::make_grid;
use quadspec_core::metrics::{closure_defect, distance_to_set, hausdorff, nearest_matching};
use quadspec_core::oracles::{c0_spectrum, discrete_dispersion_spectrum};
use quadspec_core::pencil::CompanionMode;
use quadspec_core::periodic::{assemble_periodic_pencil, CoefficientSpec, PeriodicPencilConfig};
use quadspec_core::pseudospectra::{smin_at, SminOptions, ZGrid};
use quadspec_core::symmetric::symmetric_eigenvalues;
use quadspec_core::{BoundaryKind, Complex64, QuadraticPencil};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 2: the constant Fourier mode contributes λ² = 0, a Jordan
/// block of the companion, and a backward-stable eigensolver can only
/// place its pair to about sqrt(ε ‖A‖) ≈ 1e-8, above the 1e-9 target.
/// Criterion 4 asks max|Im λ| not to decrease as L grows at fixed N. With
/// h = 2L/(N-1) the top of the discrete spectrum scales like 1/h, so it
/// does decrease.
const EXPECTED_FAILURES: &[&str] = &["2", "4"];

struct Verdict {
    pass: bool,
    /// The failure is fully accounted for by the documented cause.
    explained: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict {
        pass,
        explained: false,
        detail,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dirichlet(dim: usize, extent: f64, n: usize, cc: f64) -> QuadraticPencil<f64> {
    let g = make_grid(dim, BoundaryKind::DirichletBox, extent, n).unwrap();
    assemble_dirichlet_pencil(&DirichletPencilConfig::new(g, cc).unwrap()).unwrap()
}

fn periodic(dim: usize, n: usize, coeffs: Vec<CoefficientSpec>) -> QuadraticPencil<Complex64> {
    let g = make_grid(dim, BoundaryKind::PeriodicTorus, 2.0 * PI, n)
        .unwrap()
        .with_origin(-PI)
        .unwrap();
    assemble_periodic_pencil(&PeriodicPencilConfig::new(g, coeffs).unwrap()).unwrap()
}

fn dense_spectrum<T: quadspec_core::eig::EigenField>(p: &QuadraticPencil<T>) -> Vec<Complex64> {
    let comp = p.linearize(CompanionMode::Dense).unwrap();
    let r = dense_eigenvalues(comp.dense().unwrap());
    assert!(r.all_converged(), "dense QR did not converge");
    r.eigenvalues
}

fn max_abs_re(ev: &[Complex64]) -> f64 {
    ev.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
}

fn max_abs_im(ev: &[Complex64]) -> f64 {
    ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Smallest `|arg λ| - π/3` over `|λ| > 1e-6`.
fn sector_margin(ev: &[Complex64]) -> f64 {
    ev.iter()
        .filter(|z| z.norm() > 1e-6)
        .map(|z| z.arg().abs() - FRAC_PI_3)
        .fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Verdict {
    let p = dirichlet(2, 1.0, 30, 0.0);
    let ev = dense_spectrum(&p);
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let re_ratio = max_abs_re(&ev) / scale;
    let oracle = c0_spectrum(&symmetric_eigenvalues(&p.h0().to_dense())).unwrap();
    let d = hausdorff(&ev, &oracle);
    verdict(
        ev.len() == 1800 && re_ratio <= 1e-8 && d <= 1e-6,
        format!("order {}, max|Re λ|/max|λ| = {re_ratio:.2e}, Hausdorff to ±i√spec(H0) = {d:.2e}", ev.len()),
    )
}

/// Hausdorff distance plus the computed point that realizes the larger
/// one-sided distance.
fn hausdorff_with_witness(got: &[Complex64], want: &[Complex64]) -> (f64, Complex64) {
    let mut worst = (0.0, c(0.0, 0.0));
    for &z in got {
        let d = distance_to_set(z, want);
        if d > worst.0 {
            worst = (d, z);
        }
    }
    for &z in want {
        let d = distance_to_set(z, got);
        if d > worst.0 {
            worst = (d, z);
        }
    }
    worst
}

fn criterion_2() -> Verdict {
    let mut pass = true;
    let mut explained = true;
    let mut parts = Vec::new();
    let a3 = vec![
        CoefficientSpec::Constant(1.0),
        CoefficientSpec::Constant(2f64.sqrt()),
        CoefficientSpec::Constant(3f64.sqrt()),
    ];
    for (dim, n, coeffs, tol) in [
        (2, 12, a3[..2].to_vec(), 1e-9),
        (3, 6, a3.clone(), 1e-8),
    ] {
        let g = make_grid(dim, BoundaryKind::PeriodicTorus, 2.0 * PI, n).unwrap();
        let oracle = discrete_dispersion_spectrum(&g, &coeffs).unwrap();
        let got = dense_spectrum(&periodic(dim, n, coeffs));
        let (d, at) = hausdorff_with_witness(&got, &oracle);
        // Everything away from the double root at 0 (the constant mode,
        // a 2x2 Jordan block of the companion).
        let far = |v: &[Complex64]| v.iter().copied().filter(|z| z.norm() > 1e-6).collect::<Vec<_>>();
        let d_far = hausdorff(&far(&got), &far(&oracle));
        pass &= d <= tol;
        explained &= d_far <= tol && at.norm() <= 1e-6;
        parts.push(format!(
            "{dim}D N={n}: Hausdorff {d:.2e} (tol {tol:.0e}) attained at {at:.2e}; away from 0: {d_far:.2e}"
        ));
    }
    Verdict {
        pass,
        explained,
        detail: parts.join("; "),
    }
}

fn criterion_3() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [20, 30] {
        let m = sector_margin(&dense_spectrum(&dirichlet(2, 1.0, n, 1.0)));
        pass &= m >= -0.05;
        parts.push(format!("N={n}: worst |arg λ| - π/3 = {m:+.4} rad"));
    }
    verdict(pass, parts.join(", "))
}

fn criterion_4() -> Verdict {
    let cs = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
    let re_c: Vec<f64> = cs.iter().map(|&cc| max_abs_re(&dense_spectrum(&dirichlet(2, 1.0, 16, cc)))).collect();
    let c_ok = re_c.windows(2).all(|w| w[1] >= w[0]);

    let ls = [0.5, 1.0, 2.0];
    let spectra: Vec<Vec<Complex64>> = ls.iter().map(|&l| dense_spectrum(&dirichlet(2, l, 16, 1.0))).collect();
    let re_l: Vec<f64> = spectra.iter().map(|ev| max_abs_re(ev)).collect();
    let im_l: Vec<f64> = spectra.iter().map(|ev| max_abs_im(ev)).collect();
    let re_l_ok = re_l.windows(2).all(|w| w[1] >= w[0]);
    let im_l_ok = im_l.windows(2).all(|w| w[1] >= w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    Verdict {
        pass: c_ok && re_l_ok && im_l_ok,
        explained: c_ok && re_l_ok,
        detail: format!(
            "max|Re| over c {cs:?}: [{}] {}; over L {ls:?} (c=1): max|Re| [{}] {}, max|Im| [{}] {}",
            fmt(&re_c),
            if c_ok { "nondecreasing" } else { "NOT monotone" },
            fmt(&re_l),
            if re_l_ok { "nondecreasing" } else { "NOT monotone" },
            fmt(&im_l),
            if im_l_ok { "nondecreasing" } else { "DECREASING (top of spectrum ~ 1/h, h = 2L/(N-1))" },
        ),
    }
}

fn criterion_5() -> Verdict {
    let conj = |z: Complex64| z.conj();
    let mirror = |z: Complex64| -z.conj();
    let neg = |z: Complex64| -z;

    let ones = dense_spectrum(&periodic(2, 12, vec![CoefficientSpec::Constant(1.0); 2]));
    let sins = dense_spectrum(&periodic(2, 12, vec![CoefficientSpec::sin(); 2]));
    let skew = dense_spectrum(&periodic(
        2,
        12,
        vec![CoefficientSpec::Constant(1.0), CoefficientSpec::Constant(5.0 * 2f64.sqrt())],
    ));
    let d = [
        closure_defect(&ones, conj),
        closure_defect(&ones, mirror),
        closure_defect(&sins, conj),
        closure_defect(&sins, mirror),
        closure_defect(&skew, neg),
    ];
    verdict(
        d.iter().all(|&x| x <= 1e-8),
        format!(
            "a=(1,1): λ̄ {:.1e}, -λ̄ {:.1e}; a=(sin,sin): λ̄ {:.1e}, -λ̄ {:.1e}; a=(1,5√2): -λ {:.1e}",
            d[0], d[1], d[2], d[3], d[4]
        ),
    )
}

fn invert(x: &DenseMatrix<Complex64>) -> DenseMatrix<Complex64> {
    let n = x.order();
    let lu = DenseLu::factor(x.clone(), 1e-14).unwrap();
    let mut inv = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![c(0.0, 0.0); n];
        e[j] = c(1.0, 0.0);
        let col = lu.solve(&e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    inv
}

/// Worst relative recovery error for `X diag(d) X⁻¹`, real or complex.
fn recover(n: usize, real: bool, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut block = DenseMatrix::<Complex64>::zeros(n);
    let mut want = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let mag = rng.gen_range(1.0..3.0);
        let ang = rng.gen_range(-PI..PI);
        let z = Complex64::from_polar(mag, ang);
        if real && k + 1 < n && z.im.abs() > 0.1 {
            // Real 2x2 block [[re, im], [-im, re]] carries z and z̄.
            block[(k, k)] = c(z.re, 0.0);
            block[(k + 1, k + 1)] = c(z.re, 0.0);
            block[(k, k + 1)] = c(z.im, 0.0);
            block[(k + 1, k)] = c(-z.im, 0.0);
            want.push(z);
            want.push(z.conj());
            k += 2;
        } else {
            let z = if real { c(if z.re >= 0.0 { mag } else { -mag }, 0.0) } else { z };
            block[(k, k)] = z;
            want.push(z);
            k += 1;
        }
    }
    let spread = 0.3 / (n as f64).sqrt();
    let x = DenseMatrix::from_fn(n, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        let im = if real { 0.0 } else { spread * rng.gen_range(-1.0..1.0) };
        c(d + spread * rng.gen_range(-1.0..1.0), im)
    });
    let a = x.matmul(&block).matmul(&invert(&x));
    let got = if real {
        let ar = DenseMatrix::from_fn(n, |i, j| a[(i, j)].re);
        dense_eigenvalues(&ar).eigenvalues
    } else {
        dense_eigenvalues(&a).eigenvalues
    };
    nearest_matching(&got, &want)
        .iter()
        .map(|&(_, j, d)| d / want[j].norm())
        .fold(0.0, f64::max)
}

fn criterion_6() -> Verdict {
    let mut worst_recovery: f64 = 0.0;
    for (idx, &n) in [20usize, 50, 100, 200].iter().enumerate() {
        worst_recovery = worst_recovery.max(recover(n, true, 10 + idx as u64));
        worst_recovery = worst_recovery.max(recover(n, false, 20 + idx as u64));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_trace: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for n in 1..=8 {
        let a = DenseMatrix::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
        let ev = dense_eigenvalues(&a).eigenvalues;
        let sum: Complex64 = ev.iter().sum();
        worst_trace = worst_trace.max((sum - a.trace()).norm() / (n as f64 * a.max_abs()));
        let prod: Complex64 = ev.iter().product();
        let det = determinant(&a);
        worst_det = worst_det.max((prod - det).norm() / det.abs());
    }
    verdict(
        worst_recovery <= 1e-9 && worst_trace <= 1e-10 && worst_det <= 1e-8,
        format!(
            "n ∈ {{20,50,100,200}} real+complex: worst relative recovery {worst_recovery:.2e}; trace defect {worst_trace:.1e} (scaled), determinant defect {worst_det:.1e} (relative)"
        ),
    )
}

fn criterion_7() -> Verdict {
    let p = dirichlet(2, 1.0, 10, 1.0);
    let z0 = c(0.0, 10.0);
    let all = dense_spectrum(&p);
    let mut near = all.clone();
    near.sort_by(|a, b| (a - z0).norm().total_cmp(&(b - z0).norm()));
    near.truncate(20);
    let mut cfg = ArnoldiConfig::new(z0, 20);
    cfg.tol = 1e-12;
    let out = arnoldi_shift_invert(&p, &cfg).unwrap();
    let d = hausdorff(&out.spectrum.eigenvalues, &near);
    verdict(
        out.spectrum.all_converged() && d <= 1e-8,
        format!(
            "shift {z0}, {} of 20 converged after {} restarts, Hausdorff to dense nearest-20 = {d:.2e}",
            out.converged_count(),
            out.restarts
        ),
    )
}

fn criterion_8() -> Verdict {
    let p = dirichlet(2, 1.0, 8, 1.0);
    let comp = p.linearize(CompanionMode::Dense).unwrap();
    let norm = comp.frobenius_norm();
    let ev = dense_eigenvalues(comp.dense().unwrap()).eigenvalues;
    let (re0, re1) = ev.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(z.re), b.max(z.re)));
    let (im0, im1) = ev.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(z.im), b.max(z.im)));
    let grid = ZGrid::new(re0, re1, im0, im1, 15, 15).unwrap();
    let opts = SminOptions::default();
    let mut worst_excess = f64::NEG_INFINITY;
    for f in 0..grid.len() {
        let z = grid.point(f);
        let s = smin_at(&p, z, &opts).unwrap().value;
        worst_excess = worst_excess.max(s - distance_to_set(z, &ev));
    }
    let worst_at_eig = ev
        .iter()
        .map(|&z| smin_at(&p, z, &opts).unwrap().value)
        .fold(0.0, f64::max);
    verdict(
        worst_excess <= 1e-8 && worst_at_eig <= 1e-8 * norm,
        format!(
            "15x15 grid: max(s_min - dist) = {worst_excess:.2e}; max s_min at the {} eigenvalues = {worst_at_eig:.2e} (bound {:.2e})",
            ev.len(),
            1e-8 * norm
        ),
    )
}

fn criterion_9() -> Verdict {
    let p = dirichlet(2, 1.0, 100, 1.0);
    let z0 = c(0.0, 40.0);
    let mut cfg = ArnoldiConfig::new(z0, 50);
    cfg.subspace = 120;
    let out = arnoldi_shift_invert(&p, &cfg).unwrap();
    let m = p.order();
    let vecs = out.spectrum.eigenvectors.as_ref().unwrap();
    let worst_res = out
        .spectrum
        .eigenvalues
        .iter()
        .zip(vecs)
        .map(|(&lam, x)| p.residual(lam, &x[..m]).unwrap())
        .fold(0.0, f64::max);
    let margin = sector_margin(&out.spectrum.eigenvalues);
    verdict(
        out.spectrum.eigenvalues.len() == 50 && worst_res <= 1e-8 && margin >= -0.05,
        format!(
            "dense path would need order {} (2D N=100) / 31250 (3D N=25): not attempted. Arnoldi probe at {z0}: {} eigenvalues, worst backward error {worst_res:.2e}, worst sector margin {margin:+.4} rad, {} restarts",
            2 * m,
            out.spectrum.eigenvalues.len(),
            out.restarts
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Verdict); 9] = [
        ("1", "c=0 spectrum is imaginary and equals ±i√spec(H0)", criterion_1),
        ("2", "constant-coefficient periodic spectrum equals dispersion roots", criterion_2),
        ("3", "sector |arg λ| >= π/3 - 0.05 at c=1", criterion_3),
        ("4", "monotone trends in c and L", criterion_4),
        ("5", "periodic spectrum symmetries", criterion_5),
        ("6", "dense eigensolver kernel", criterion_6),
        ("7", "Arnoldi agrees with dense", criterion_7),
        ("8", "pseudospectrum bounded by distance to spectrum", criterion_8),
        ("9", "figure scale: Arnoldi probe only", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let t = Instant::now();
        let v = run();
        let secs = t.elapsed().as_secs_f64();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = if v.pass { "PASS" } else { "FAIL" };
        let note = match (v.pass, expected_fail, v.explained) {
            (false, true, true) => " [expected]",
            (false, true, false) => " [failure beyond the documented cause]",
            (true, true, _) => " [unexpected pass]",
            _ => "",
        };
        if v.pass == expected_fail || (!v.pass && !v.explained) {
            unexpected += 1;
        }
        println!("[{tag}] {id}. {title}{note} ({secs:.1} s): {}", v.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
