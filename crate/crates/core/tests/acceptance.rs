//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//! Run with `cargo test -p gaussent --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use gaussent::gaussian_core::{entropy_g, BlockCovariance, SymmetricMatrix};
use gaussent::hyperdet::{
    build_F, cayley222, cayley222_residual, det_formula_222, minor_tensor, multilinear_eval, partials_detF, rank_certificate, Tensor2n,
};
use gaussent::info_inequalities::{ingleton_sweep, ingleton_value, is_balanced, singleton_masks, IngletonFamilyPoint, LinearFunctional};
use gaussent::linalg::Matrix;
use gaussent::minor_assignment::{check_general, default_tol, reconstruct, EquationKind, MinorCandidate};
use gaussent::region3::{
    achieve_in_cone, boundary_optimize_with, build_boundary_covariance, conjectured_region_classify, f_profile, f_stable, Classification, Delta0,
    OptimizeOptions, XTriple,
};
use gaussent::{SubsetMask, SubsetVector};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn dense(m: &Matrix<f64>) -> Dense {
    m.to_rows()
}

fn matrix(d: &Dense) -> Matrix<f64> {
    Matrix::from_rows(d).unwrap()
}

fn vector_from_bits(n: usize, v: &[f64]) -> SubsetVector<f64> {
    SubsetVector::from_fn(n, |s| v[s.bits() as usize]).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn criterion_1() -> Outcome {
    let p = IngletonFamilyPoint::new(0.25, 0.5);
    let d = dense(&p.matrix().to_dense());
    let m = principal_minors(&d);
    let at = |e: &[usize]| m[e.iter().fold(0u32, |b, &i| b | 1 << (i - 1)) as usize];
    let ratio =
        at(&[1]) * at(&[2]) * at(&[1, 2, 3]) * at(&[1, 2, 4]) * at(&[3, 4]) / (at(&[1, 2]) * at(&[1, 3]) * at(&[1, 4]) * at(&[2, 3]) * at(&[2, 4]));
    let g = entropy_g(&BlockCovariance::from_scalar(&p.matrix())).unwrap().data;
    let value = ingleton_value(&g, singleton_masks());
    let ratio_err = rel(ratio, 16.0 / 15.0);
    let value_match = (value - ratio.ln()).abs() <= 1e-12;
    outcome(
        ratio_err <= 1e-10 && value > 0.0 && value_match,
        format!("minor ratio {ratio:.15} (rel err {ratio_err:.1e} vs 16/15), ingleton value {value:.6e}"),
    )
}

fn criterion_2() -> Outcome {
    let table = ingleton_sweep::<f64>(200, 1e-10).unwrap();
    let mut violating = 0;
    let mut outside = 0;
    let mut hit = false;
    let mut compared = 0usize;
    let mut agree = 0usize;
    for c in &table.cells {
        if c.violates {
            violating += 1;
            let ok = (0.0..=0.5).contains(&c.a2) && 4.0 * c.a2 - 1.0 <= c.epsilon && c.epsilon <= 1.0;
            if !ok {
                outside += 1;
            }
            if (c.epsilon - 0.25).abs() < 1e-12 && (c.a2 - 0.25).abs() < 1e-12 {
                hit = true;
            }
        }
        let Some(_) = c.ingleton_value else { continue };
        // g-domain sign from the cofactor oracle
        let d = dense(&IngletonFamilyPoint::new(c.epsilon, c.a2.sqrt()).matrix().to_dense());
        let m = principal_minors(&d);
        let l = |e: &[usize]| m[e.iter().fold(0u32, |b, &i| b | 1 << (i - 1)) as usize].ln();
        let v = l(&[1]) + l(&[2]) + l(&[1, 2, 3]) + l(&[1, 2, 4]) + l(&[3, 4]) - l(&[1, 2]) - l(&[1, 3]) - l(&[1, 4]) - l(&[2, 3]) - l(&[2, 4]);
        if v.abs() <= table.band {
            continue;
        }
        compared += 1;
        if c.violates == (v > 0.0) {
            agree += 1;
        }
    }
    let frac = agree as f64 / compared.max(1) as f64;
    outcome(
        violating > 0 && outside == 0 && hit && frac >= 0.999,
        format!("{violating} violating cells, {outside} outside the feasible wedge, (0.25,0.25) violating: {hit}, agreement {agree}/{compared}"),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(301);
    let mut worst_formula: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for _ in 0..1000 {
        let mut a = [[[0.0; 2]; 2]; 2];
        let t = Tensor2n::from_fn(3, |b| {
            let v = r.gen_range(-1.0..1.0);
            a[(b & 1) as usize][(b >> 1 & 1) as usize][(b >> 2 & 1) as usize] = v;
            v
        })
        .unwrap();
        let (textbook, scale) = cayley_textbook(&a);
        let c = cayley222(&t).unwrap();
        let d = det_formula_222(&t).unwrap();
        worst_formula = worst_formula.max((d - c).abs() / scale);
        // the library sign is the negative of the textbook form
        worst_oracle = worst_oracle.max((c + textbook).abs() / scale);
    }
    let mut worst_minor: f64 = 0.0;
    for _ in 0..500 {
        let d = random_symmetric(&mut r, 3, (-1.0, 1.0), (0.0, 1.0));
        let m = principal_minors(&d);
        let mut a = [[[0.0; 2]; 2]; 2];
        for (b, &v) in m.iter().enumerate() {
            a[b & 1][b >> 1 & 1][b >> 2 & 1] = v;
        }
        let (_, scale) = cayley_textbook(&a);
        let t = minor_tensor(&SymmetricMatrix::from_dense(&matrix(&d), 0.0).unwrap()).unwrap();
        let c = cayley222_residual(&t).unwrap();
        worst_minor = worst_minor.max(c.value.abs() / scale);
    }
    outcome(
        worst_formula <= 1e-9 && worst_oracle <= 1e-12 && worst_minor <= 1e-9,
        format!("max |det formula − cayley|/scale {worst_formula:.1e}, vs textbook {worst_oracle:.1e}, minor tensors {worst_minor:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(401);
    let mut worst_id: f64 = 0.0;
    let mut worst_minor: f64 = 0.0;
    let mut worst_partial: f64 = 0.0;
    let mut rank_ok = true;
    for trial in 0..200 {
        let n = 3 + trial % 4;
        let d = random_symmetric(&mut r, n, (-1.0, 1.0), (0.05, 1.0));
        let sym = SymmetricMatrix::from_dense(&matrix(&d), 0.0).unwrap();
        let x: Vec<(f64, f64)> = (0..n).map(|_| (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let ml = multilinear_eval(&minor_tensor(&sym).unwrap(), &x).unwrap();
        let f = dense(&build_F(&matrix(&d), &x).unwrap());
        let det = cofactor_det(&f);
        // oracle scale: Σ_S |m_S| Π|x|
        let m = principal_minors(&d);
        let scale: f64 =
            m.iter().enumerate().map(|(b, v)| (0..n).fold(v.abs(), |acc, j| acc * if b >> j & 1 == 1 { x[j].1.abs() } else { x[j].0.abs() })).sum();
        worst_id = worst_id.max((ml - det).abs() / scale.max(det.abs()));

        let cert = rank_certificate(&sym).unwrap();
        rank_ok &= cert.rank <= n - 2;
        let fc: Dense = (0..n).map(|i| (0..n).map(|j| if i == j { cert.x[i].0 } else { 0.0 } + cert.x[i].1 * d[i][j]).collect()).collect();
        for skip_r in 0..n {
            for skip_c in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&i| i != skip_r).collect();
                let cols: Vec<usize> = (0..n).filter(|&i| i != skip_c).collect();
                let sub = select(&fc, &rows, &cols);
                let h = hadamard(&sub).max(f64::MIN_POSITIVE);
                worst_minor = worst_minor.max(cofactor_det(&sub).abs() / h);
            }
        }
        for (p0, p1) in partials_detF(&matrix(&d), &cert.x).unwrap() {
            worst_partial = worst_partial.max(p0.relative()).max(p1.relative());
        }
    }
    outcome(
        worst_id <= 1e-10 && rank_ok && worst_minor <= 1e-8 && worst_partial <= 1e-8,
        format!("det-F identity max rel {worst_id:.1e}; certificate rank ≤ n−2: {rank_ok}, max (n−1)-minor {worst_minor:.1e}, max partial {worst_partial:.1e}"),
    )
}

/// Which entries each equation reads, from its defining formula.
fn reads(kind: EquationKind, indices: SubsetMask, s: SubsetMask) -> bool {
    let b = indices.bits();
    match kind {
        EquationKind::Hyper => s.bits() & !b == 0,
        EquationKind::SignConsistency => s.bits() & !(b | 1) == 0 && s.cardinality() <= 3,
        EquationKind::Det => {
            let elems = members(b);
            let quad: u32 = elems[..4].iter().fold(0, |acc, &i| acc | 1 << i);
            let alpha = b & !quad;
            s.bits() & !b == 0 && s.bits() & alpha == alpha
        }
    }
}

/// Smallest relative gap (A_iαA_jα − A_αA_ijα)/max over all pairs and
/// conditioning sets: the squared partial correlations, up to scale.
fn nondegeneracy_margin(n: usize, m: &[f64]) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let pair = (1u32 << i) | (1 << j);
            let rest = ((1u32 << n) - 1) & !pair;
            let mut alpha = rest;
            loop {
                let lhs = m[alpha as usize] * m[(alpha | pair) as usize];
                let rhs = m[(alpha | 1 << i) as usize] * m[(alpha | 1 << j) as usize];
                worst = worst.min((rhs - lhs) / lhs.abs().max(rhs.abs()));
                if alpha == 0 {
                    break;
                }
                alpha = (alpha - 1) & rest;
            }
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let mut r = rng(501);
    let mut count_ok = true;
    let mut worst_res: f64 = 0.0;
    let mut worst_rec: f64 = 0.0;
    let mut failures = 0;
    let mut redrawn = 0;
    for trial in 0..500 {
        let n = 4 + trial % 3;
        let (_, m) = loop {
            let d = random_symmetric(&mut r, n, (2.5, 3.5), (0.05, 0.5));
            let m = principal_minors(&d);
            if nondegeneracy_margin(n, &m) > 1e-7 {
                break (d, m);
            }
            redrawn += 1;
        };
        let cand = MinorCandidate::new(vector_from_bits(n, &m)).unwrap();
        let rep = match check_general(&cand, 1e-8) {
            Ok(rep) => rep,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        count_ok &= rep.equations.len() as u64 == (1u64 << n) - 1 - (n * (n + 1) / 2) as u64;
        worst_res = worst_res.max(rep.max_relative());
        if !rep.passed {
            failures += 1;
        }
        match reconstruct(&cand, default_tol(n)) {
            Ok(back) => {
                let mb = principal_minors(&dense(&back.to_dense()));
                for b in 1..m.len() {
                    worst_rec = worst_rec.max(rel(mb[b], m[b]));
                }
            }
            Err(_) => failures += 1,
        }
    }

    let mut detected = 0;
    for trial in 0..100 {
        let n = 4 + trial % 3;
        let mut m = loop {
            let m = principal_minors(&random_symmetric(&mut r, n, (2.5, 3.5), (0.05, 0.5)));
            if nondegeneracy_margin(n, &m) > 1e-7 {
                break m;
            }
            redrawn += 1;
        };
        let target = r.gen_range(1..1u32 << n);
        m[target as usize] *= 1.0 + 1e-5;
        let s = SubsetMask(target);
        let Ok(rep) = check_general(&MinorCandidate::new(vector_from_bits(n, &m)).unwrap(), 1e-8) else { continue };
        let failing: Vec<_> = rep.failing().collect();
        let confined = !failing.is_empty() && failing.iter().all(|e| reads(e.kind, e.indices, s));
        let own_det = s.cardinality() < 4 || failing.iter().any(|e| e.kind == EquationKind::Det && e.indices == s);
        if confined && own_det {
            detected += 1;
        }
    }
    outcome(
        count_ok && failures == 0 && worst_res <= 1e-8 && worst_rec <= 1e-8 && detected >= 95,
        format!(
            "equation counts exact: {count_ok}; {redrawn} near-degenerate draws redrawn; {failures} failures; max residual {worst_res:.1e}; max reconstruction error {worst_rec:.1e}; perturbations detected {detected}/100"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(601);
    let mut bound_ok = 0;
    for _ in 0..10_000 {
        let x = [0, 0, 0].map(|_| r.gen_range(0.01..1.0));
        let d = 10f64.powf(r.gen_range(-2.0..2.0));
        let f = f_stable(&XTriple::new(x).unwrap(), d);
        if f <= min_pair_product(x) * (1.0 + 1e-12) {
            bound_ok += 1;
        }
    }

    // one representative per tie pattern, drawn at random
    let mut cases_ok = 0;
    let mut notes = Vec::new();
    let grid: Vec<f64> = (0..=120).map(|k| 10f64.powf(-3.0 + k as f64 * 0.05)).collect();
    for case in 1..=7u8 {
        let mut ok = true;
        for _ in 0..20 {
            let mut v = [0, 0, 0].map(|_| r.gen_range(0.2..0.95));
            v.sort_by(f64::total_cmp);
            let x = match case {
                1 => v,
                2 => [v[0], v[0], v[2]],
                3 => [v[0], v[2], v[2]],
                4 => [v[1]; 3],
                5 => [v[0], v[1], 1.0],
                6 => [v[0], v[0], 1.0],
                _ => [v[0], 1.0, 1.0],
            };
            // tight gaps push δ₀ past where the literal oracle underflows
            if case == 1 && (v[1] - v[0] < 0.05 || v[2] - v[1] < 0.05) {
                continue;
            }
            let xt = XTriple::new(x).unwrap();
            let p = f_profile(&xt);
            let sup = if case == 7 { x[0] } else { min_pair_product(x) };
            ok &= p.case_id == case && rel(p.sup_f, sup) <= 1e-12;
            match (case, p.delta0) {
                (1 | 2, Delta0::Finite(d0)) => ok &= (f_literal(x, d0) - sup).abs() <= 1e-9,
                // −2 + Σx^δ cancels once x₁^δ nears machine epsilon, so the literal oracle stops at δ = 10
                (7, Delta0::Constant) => ok &= grid.iter().filter(|&&d| d <= 10.0).all(|&d| (f_literal(x, d) - sup).abs() <= 1e-9),
                (3 | 4, Delta0::Infinity) => {
                    let up: Vec<f64> = grid.iter().filter(|&&d| d >= 1.0).map(|&d| f_stable(&xt, d)).collect();
                    ok &= up.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)) && *up.last().unwrap() <= sup * (1.0 + 1e-12);
                    ok &= rel(*up.last().unwrap(), sup) <= 1e-2;
                }
                (5 | 6, Delta0::ZeroPlus) => {
                    let down: Vec<f64> = grid.iter().rev().filter(|&&d| d <= 1.0).map(|&d| f_stable(&xt, d)).collect();
                    ok &= down.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)) && *down.last().unwrap() <= sup * (1.0 + 1e-12);
                    ok &= rel(*down.last().unwrap(), sup) <= 1e-2;
                }
                _ => ok = false,
            }
        }
        if ok {
            cases_ok += 1;
        } else {
            notes.push(case);
        }
    }

    let mut conforming = 0;
    let mut implication_ok = 0;
    while conforming < 1000 {
        let x = [0, 0, 0].map(|_| r.gen_range(0.01..1.0));
        if y_tilde(x) > 0.0 {
            continue;
        }
        conforming += 1;
        match f_profile(&XTriple::new(x).unwrap()).delta0 {
            Delta0::Finite(d0) if d0 >= 1.0 - 1e-9 => implication_ok += 1,
            Delta0::Infinity => implication_ok += 1,
            _ => {}
        }
    }
    outcome(
        bound_ok == 10_000 && cases_ok == 7 && implication_ok == 1000,
        format!("f ≤ min x_ix_j on {bound_ok}/10000; cases matched {cases_ok}/7 {notes:?}; ỹ ≤ 0 ⇒ δ₀ ≥ 1 on {implication_ok}/1000"),
    )
}

fn criterion_7() -> Outcome {
    let mut r = rng(701);
    let grid: Vec<f64> = (0..=150).map(|k| 10f64.powf(k as f64 * 0.02)).collect();
    let mut samples = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_x = [0.0; 3];
    let mut labelled = true;
    while samples < 10_000 {
        let x = [0, 0, 0].map(|_| r.gen_range(0.01..1.0));
        if y_tilde(x) <= 0.0 {
            continue;
        }
        samples += 1;
        let xt = XTriple::new(x).unwrap();
        let f1 = f_stable(&xt, 1.0);
        let excess = grid.iter().map(|&d| f_stable(&xt, d) - f1).fold(f64::NEG_INFINITY, f64::max);
        if excess > worst {
            worst = excess;
            worst_x = x;
        }
        if samples % 1000 == 0 {
            let mut g = SubsetVector::filled(3, 0.0).unwrap();
            for (k, (i, j)) in [(2, 3), (1, 3), (1, 2)].into_iter().enumerate() {
                g[SubsetMask::of(&[i, j])] = x[k].ln();
            }
            g[SubsetMask::full(3)] = -5.0;
            labelled &= conjectured_region_classify(&g).is_ok() && Classification::<f64>::LABEL == "CONJECTURAL";
        }
    }
    let clean = worst <= 1e-9;
    let finding = if clean { "no excess above 1e-9" } else { "excess logged as a finding" };
    outcome(
        labelled,
        format!("max_δ∈[1,1e3] f(δ) − f(1) over {samples} samples = {worst:.3e} at x = {worst_x:?} ({finding}); classifier labelled CONJECTURAL"),
    )
}

fn criterion_8() -> Outcome {
    let mut r = rng(801);
    let mut scalar_ok = 0;
    let mut worst_scalar: f64 = 0.0;
    for _ in 0..200 {
        let d = random_spd(&mut r, 3);
        let m = principal_minors(&d);
        let p = vector_from_bits(3, &m);
        let Ok(a) = achieve_in_cone(&p) else { continue };
        let spec = a.spec();
        let Ok(cov) = build_boundary_covariance(&spec) else { continue };
        let q = block_minors(&dense(cov.matrix()), 3, spec.t);
        let gap = (1..8).map(|b| rel(q[b].powf(1.0 / spec.t as f64), m[b])).fold(0.0, f64::max);
        worst_scalar = worst_scalar.max(gap);
        if a.theta_prime == 1.0 && gap <= 1e-8 {
            scalar_ok += 1;
        }
    }

    let mut corner_ok = 0;
    let mut corners = 0;
    let mut worst_corner: f64 = 0.0;
    while corners < 50 {
        let x = [0, 0, 0].map(|_| r.gen_range(0.2..0.95));
        if y_tilde(x) <= 0.0 {
            continue;
        }
        corners += 1;
        let p1 = [0, 0, 0].map(|_| r.gen_range(0.5..2.0));
        let mut p = vec![0.0; 8];
        for i in 0..3 {
            p[1 << i] = p1[i];
        }
        for (k, (i, j)) in [(1usize, 2usize), (0, 2), (0, 1)].into_iter().enumerate() {
            p[(1 << i) | (1 << j)] = p1[i] * p1[j] * x[k];
        }
        // corner: one conditional independence holds with equality
        p[7] = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)]
            .iter()
            .map(|&(i, j, k)| p[(1 << i) | (1 << k)] * p[(1 << j) | (1 << k)] / p[1 << k])
            .fold(f64::INFINITY, f64::min);
        let Ok(a) = achieve_in_cone(&vector_from_bits(3, &p)) else { continue };
        let spec = a.spec();
        let Ok(cov) = build_boundary_covariance(&spec) else { continue };
        let q = block_minors(&dense(cov.matrix()), 3, spec.t);
        let gap = (1..8).map(|b| rel(q[b].powf(1.0 / spec.t as f64), p[b].powf(1.0 / a.theta_prime))).fold(0.0, f64::max);
        worst_corner = worst_corner.max(gap);
        if gap <= 1e-6 {
            corner_ok += 1;
        }
    }
    outcome(
        scalar_ok == 200 && corner_ok == 50,
        format!("scalar round trips {scalar_ok}/200 (max gap {worst_scalar:.1e}); scaled corners {corner_ok}/50 (max gap {worst_corner:.1e})"),
    )
}

/// −Σ c·(Shannon normal) over I(i;j) and I(i;j|k); balanced by construction.
fn random_valid_gamma(r: &mut impl Rng) -> LinearFunctional<f64> {
    let mut g = SubsetVector::filled(3, 0.0).unwrap();
    for (i, j, k) in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        let c = r.gen_range(0.1..1.0);
        g[SubsetMask::of(&[i, j])] += c;
        g[SubsetMask::of(&[i])] -= c;
        g[SubsetMask::of(&[j])] -= c;
        let c = r.gen_range(0.1..1.0);
        g[SubsetMask::full(3)] += c;
        g[SubsetMask::of(&[k])] += c;
        g[SubsetMask::of(&[i, k])] -= c;
        g[SubsetMask::of(&[j, k])] -= c;
    }
    LinearFunctional::new(g)
}

fn criterion_9() -> Outcome {
    let mut r = rng(901);
    let opts = OptimizeOptions::default();
    let mut good = 0;
    let mut worst_kkt: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    for run in 0..20 {
        let gamma = random_valid_gamma(&mut r);
        assert!(is_balanced(&gamma));
        let Ok((_, d)) = boundary_optimize_with(&gamma, 3, run, &opts) else { continue };
        worst_kkt = worst_kkt.max(d.kkt_residual);
        worst_dev = worst_dev.max(d.max_off_block_deviation());
        if d.kkt_residual <= 1e-5 && d.max_off_block_deviation() <= 1e-4 {
            good += 1;
        }
    }
    outcome(
        good >= 16,
        format!("{good}/20 runs within kkt ≤ 1e-5 and off-block deviation ≤ 1e-4 (max kkt {worst_kkt:.1e}, max deviation {worst_dev:.1e})"),
    )
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture or a filter; only --list needs an answer
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [(u8, &str, Duration, fn() -> Outcome); 9] = [
        (1, "Ingleton violation point", Duration::from_secs(1), criterion_1),
        (2, "Ingleton sweep 200x200", Duration::from_secs(10), criterion_2),
        (3, "hyperdeterminant identities", Duration::from_secs(5), criterion_3),
        (4, "det-F identity and rank certificate", Duration::from_secs(10), criterion_4),
        (5, "minor-assignment round trip", Duration::from_secs(60), criterion_5),
        (6, "f(δ)/y(δ) properties", Duration::from_secs(10), criterion_6),
        (7, "f(δ) scan beyond δ = 1", Duration::from_secs(30), criterion_7),
        (8, "cone achievability", Duration::from_secs(30), criterion_8),
        (9, "boundary structure", Duration::from_secs(120), criterion_9),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took < limit;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{}] {name}: {} ({:.2}s, limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
