use std::fs;
use std::path::{Path, PathBuf};

use gaussent::gaussian_core::{all_principal_minors, entropy_g, BlockCovariance, SymmetricMatrix, PSD_TOL};
use gaussent::hyperdet::{cayley222, cayley222_residual, det_formula_222, minor_tensor, minor_tensor_from_vector, rank_certificate};
use gaussent::info_inequalities::{
    check_shannon, ingleton_minor_ratio, ingleton_sweep, ingleton_value, ingleton_violation_predicate, IngletonFamilyPoint, LinearFunctional,
    ShannonMode, SWEEP_VALUE_BAND,
};
use gaussent::io::{self, format_number, subset_vector_to_json, to_pretty};
use gaussent::minor_assignment::{check_general, check_n4, default_tol, gauss_entropic_check, reconstruct, MinorCandidate};
use gaussent::region3::{
    achieve_in_cone, boundary_optimize_with, conjectured_region_classify, f_profile, f_profile_table, OptimizeOptions, Verdict, XTriple,
};
use gaussent::{Error, SubsetMask, SubsetVector};
use serde_json::{json, Value};

use crate::args::*;
use crate::report::{self, header, with_header};

/// What a command produced: stdout text, files to write, and whether the
/// checked property held.
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub passed: bool,
}

impl Outcome {
    fn json(v: Value, passed: bool) -> Self {
        Outcome { stdout: to_pretty(&v), files: Vec::new(), passed }
    }

    fn file(mut self, path: Option<&PathBuf>, content: String) -> Self {
        if let Some(p) = path {
            self.files.push((p.clone(), content));
        }
        self
    }
}

pub enum Failure {
    /// bad input: exit 2
    Input(String),
    /// the checked property fails and no report could be produced: exit 1
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConditionsFailed(_) | Error::Unreachable(_) | Error::NotInContinuousRegion(_) => Failure::Verdict(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn covariance(path: &Path, t: Option<usize>) -> Result<BlockCovariance<f64>, Failure> {
    Ok(io::parse_matrix(&read(path)?)?.into_covariance(t)?)
}

fn vector(path: &Path) -> Result<SubsetVector<f64>, Failure> {
    Ok(io::parse_subset_vector(&read(path)?)?)
}

fn symmetric(path: &Path) -> Result<SymmetricMatrix<f64>, Failure> {
    let f = io::parse_matrix(&read(path)?)?;
    Ok(SymmetricMatrix::from_dense(&f.matrix, 1e-12)?)
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Entropy(a) => entropy(a),
        Command::CheckShannon(a) => shannon(a),
        Command::CheckIngleton(a) => ingleton(a),
        Command::IngletonSweep(a) => sweep(a),
        Command::Hyperdet(a) => hyperdet(a),
        Command::PmCheck(a) => pm_check(a),
        Command::PmReconstruct(a) => pm_reconstruct(a),
        Command::GaussEntropic(a) => gauss_entropic(a),
        Command::Region3(Region3Command::Fprofile(a)) => fprofile(a),
        Command::Region3(Region3Command::Classify(a)) => classify(a),
        Command::Region3(Region3Command::Achieve(a)) => achieve(a),
        Command::BoundaryOpt(a) => boundary_opt(a),
    }
}

fn entropy(a: &EntropyArgs) -> Run {
    let cov = covariance(&a.matrix, a.t)?;
    let g = entropy_g(&cov)?.data;
    if a.csv {
        let mut out = String::from("subset,g\n");
        for (s, v) in g.iter() {
            out.push_str(&format!("\"{s}\",{}\n", format_number(*v)));
        }
        return Ok(Outcome { stdout: out, files: Vec::new(), passed: true });
    }
    let h = header("entropy", &[("n", json!(cov.n())), ("T", json!(cov.t())), ("log", json!("natural"))]);
    // flat SubsetVector object so the output feeds straight into --vector
    Ok(Outcome::json(with_header(h, subset_vector_to_json(&g)), true))
}

fn shannon(a: &ShannonArgs) -> Run {
    let h = match (&a.vector, &a.matrix) {
        (Some(v), _) => vector(v)?,
        (None, Some(m)) => entropy_g(&covariance(m, a.t)?)?.data,
        (None, None) => return Err(Failure::Input("need --vector or --matrix".into())),
    };
    let mode = if a.continuous { ShannonMode::Continuous } else { ShannonMode::Discrete };
    let rep = check_shannon(&h, mode, a.tol)?;
    let hd = header("check-shannon", &[("n", json!(h.n())), ("mode", json!(report::shannon_mode(mode))), ("tol", json!(a.tol))]);
    Ok(Outcome::json(with_header(hd, report::shannon(&rep)), rep.passed()))
}

fn parse_sets(text: &str) -> Result<[SubsetMask; 4], Failure> {
    let sets = text.split(';').map(|s| s.parse::<SubsetMask>()).collect::<Result<Vec<_>, _>>()?;
    <[SubsetMask; 4]>::try_from(sets).map_err(|v| Failure::Input(format!("--sets needs four subsets, got {}", v.len())))
}

fn ingleton(a: &IngletonArgs) -> Run {
    let masks = parse_sets(&a.sets)?;
    let mut extra = serde_json::Map::new();
    let (g, minors, t) = if let Some(v) = &a.vector {
        let g = vector(v)?;
        let m = g.map(|_, &x| x.exp());
        (g, m, 1)
    } else {
        let cov = if let Some(m) = &a.matrix {
            covariance(m, a.t)?
        } else {
            let (e, x) = (a.epsilon.unwrap_or_default(), a.a.unwrap_or_default());
            let p = IngletonFamilyPoint::new(e, x);
            let violates = ingleton_violation_predicate(&p)?;
            extra.insert("family".into(), json!({ "epsilon": e, "a": x, "predicate_violates": violates }));
            BlockCovariance::from_scalar(&p.matrix())
        };
        let t = cov.t();
        (entropy_g(&cov)?.data, all_principal_minors(&cov)?, t)
    };
    let full = SubsetMask::full(g.n());
    if let Some(s) = masks.iter().find(|s| s.is_empty() || !s.is_subset_of(full)) {
        return Err(Failure::Input(format!("subset {s} is not a nonempty subset of 1..={}", g.n())));
    }
    let value = ingleton_value(&g, masks);
    let ratio = ingleton_minor_ratio(&minors, masks);
    let hd = header("check-ingleton", &[("n", json!(g.n())), ("T", json!(t)), ("sets", json!(masks.map(|s| s.to_string()).to_vec()))]);
    let mut body = serde_json::Map::new();
    body.insert("ingleton_value".into(), io::number_to_json(value));
    body.insert("minor_ratio".into(), io::number_to_json(ratio));
    body.insert("violates_g".into(), json!(value > 0.0));
    body.insert("violates_ratio".into(), json!(ratio > 1.0));
    body.extend(extra);
    Ok(Outcome::json(with_header(hd, Value::Object(body)), value <= 0.0))
}

fn sweep(a: &SweepArgs) -> Run {
    let table = ingleton_sweep(a.res, a.tol)?;
    let mut csv = String::from("epsilon,a2,feasible,violates,ingleton_value\n");
    for c in &table.cells {
        let v = c.ingleton_value.map(format_number).unwrap_or_default();
        csv.push_str(&format!("{},{},{},{},{}\n", format_number(c.epsilon), format_number(c.a2), c.feasibility.label(), c.violates, v));
    }
    match &a.out {
        Some(path) => {
            let hd = header(
                "ingleton-sweep",
                &[
                    ("res", json!(a.res)),
                    ("psd_tol", json!(a.tol)),
                    ("value_band", json!(SWEEP_VALUE_BAND)),
                    ("out", json!(path.display().to_string())),
                ],
            );
            Ok(Outcome::json(with_header(hd, report::sweep_summary(&table)), true).file(Some(path), csv))
        }
        None => Ok(Outcome { stdout: csv, files: Vec::new(), passed: true }),
    }
}

fn hyperdet(a: &HyperdetArgs) -> Run {
    if let Some(p) = &a.tensor {
        let t = io::parse_tensor(&read(p)?)?;
        let c = cayley222(&t)?;
        let d = det_formula_222(&t)?;
        let hd = header("hyperdet", &[("source", json!("tensor"))]);
        let body = json!({ "cayley222": io::number_to_json(c), "det_formula_222": io::number_to_json(d), "difference": io::number_to_json(c - d) });
        return Ok(Outcome::json(with_header(hd, body), true));
    }
    let (tensor, cert) = match (&a.matrix, &a.vector) {
        (Some(m), _) => {
            let s = symmetric(m)?;
            let cert = rank_certificate(&s).ok().map(|c| {
                json!({
                    "rank": c.rank,
                    "n": s.n(),
                    "x": c.x.iter().map(|&(x0, x1)| json!([io::number_to_json(x0), io::number_to_json(x1)])).collect::<Vec<_>>(),
                })
            });
            (minor_tensor(&s)?, cert)
        }
        (None, Some(v)) => (minor_tensor_from_vector(&vector(v)?)?, None),
        _ => return Err(Failure::Input("need one of --tensor, --matrix or --vector".into())),
    };
    let n = tensor.n();
    let mut body = serde_json::Map::new();
    let mut passed = true;
    if n == 3 {
        let r = cayley222_residual(&tensor)?;
        passed = r.within(a.tol);
        body.insert("cayley222".into(), io::number_to_json(r.value));
        body.insert("scale".into(), io::number_to_json(r.scale));
        body.insert("relative".into(), io::number_to_json(r.relative()));
        body.insert("vanishes".into(), json!(passed));
    }
    if let Some(c) = cert {
        body.insert("rank_certificate".into(), c);
    }
    let hd = header("hyperdet", &[("source", json!("minor-tensor")), ("n", json!(n)), ("tol", json!(a.tol))]);
    Ok(Outcome::json(with_header(hd, Value::Object(body)), passed))
}

fn candidate(a: &PmArgs) -> Result<(MinorCandidate<f64>, f64), Failure> {
    let c = MinorCandidate::new(vector(&a.vector)?)?;
    let tol = a.tol.unwrap_or_else(|| default_tol(c.n()));
    Ok((c, tol))
}

fn pm_check(a: &PmArgs) -> Run {
    let (c, tol) = candidate(a)?;
    let rep = if c.n() == 4 { check_n4(&c, tol)? } else { check_general(&c, tol)? };
    let hd = header("pm-check", &[("n", json!(c.n())), ("tol", json!(tol)), ("psd_tol", json!(PSD_TOL))]);
    let out = Outcome::json(with_header(hd, report::minor_report(&rep)), rep.passed);
    let text = out.stdout.clone();
    Ok(out.file(a.out.as_ref(), text))
}

fn pm_reconstruct(a: &PmArgs) -> Run {
    let (c, tol) = candidate(a)?;
    let m = reconstruct(&c, tol)?;
    let csv = io::format_matrix_csv(&m.to_dense(), m.n(), 1);
    Ok(Outcome { stdout: csv.clone(), files: Vec::new(), passed: true }.file(a.out.as_ref(), csv))
}

fn gauss_entropic(a: &PmArgs) -> Run {
    let g = vector(&a.vector)?;
    let tol = a.tol.unwrap_or_else(|| default_tol(g.n()));
    let rep = gauss_entropic_check(&g, tol)?;
    let hd = header("gauss-entropic", &[("n", json!(g.n())), ("tol", json!(tol)), ("psd_tol", json!(PSD_TOL))]);
    let out = Outcome::json(with_header(hd, report::entropic(&rep)), rep.passed);
    let text = out.stdout.clone();
    Ok(out.file(a.out.as_ref(), text))
}

fn parse_triple(text: &str) -> Result<[f64; 3], Failure> {
    let vals = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::Input(format!("bad number '{s}' in --x"))))
        .collect::<Result<Vec<_>, _>>()?;
    <[f64; 3]>::try_from(vals).map_err(|v| Failure::Input(format!("--x needs three values, got {}", v.len())))
}

fn fprofile(a: &FprofileArgs) -> Run {
    let x = match (&a.x, &a.vector) {
        (Some(t), _) => XTriple::new(parse_triple(t)?)?,
        (None, Some(v)) => XTriple::from_g(&vector(v)?)?,
        _ => return Err(Failure::Input("need --x or --vector".into())),
    };
    let p = f_profile(&x);
    let mut csv = String::from("delta,f,y\n");
    let table = f_profile_table(&x);
    for &(d, f, y) in &table {
        csv.push_str(&format!("{},{},{}\n", format_number(d), format_number(f), format_number(y)));
    }
    if a.csv {
        return Ok(Outcome { stdout: csv.clone(), files: Vec::new(), passed: true }.file(a.out.as_ref(), csv));
    }
    let hd = header(
        "region3 fprofile",
        &[
            ("x_sorted", json!(x.sorted().to_vec())),
            ("tie_tol", json!(gaussent::region3::fdelta::TIE_TOL)),
            ("root_tol", json!(gaussent::region3::fdelta::ROOT_TOL)),
        ],
    );
    let mut body = report::profile(&p);
    if a.out.is_none() {
        body["grid"] =
            Value::Array(table.iter().map(|&(d, f, y)| json!([io::number_to_json(d), io::number_to_json(f), io::number_to_json(y)])).collect());
    }
    Ok(Outcome::json(with_header(hd, body), true).file(a.out.as_ref(), csv))
}

fn classify(a: &VectorArg) -> Run {
    let g = vector(&a.vector)?;
    let c = conjectured_region_classify(&g)?;
    let hd = header("region3 classify", &[("tol", json!(gaussent::region3::classify::CLASSIFY_TOL))]);
    Ok(Outcome::json(with_header(hd, report::classification(&c)), c.verdict != Verdict::Outside))
}

fn achieve(a: &AchieveArgs) -> Run {
    let mut p = vector(&a.vector)?;
    if a.from_g {
        p = p.map(|_, &v| v.exp());
    }
    let r = achieve_in_cone(&p)?;
    let hd = header(
        "region3 achieve",
        &[
            ("theta_prime_tol", json!(gaussent::region3::achieve::THETA_PRIME_TOL)),
            ("max_denominator", json!(gaussent::region3::achieve::MAX_DENOMINATOR)),
        ],
    );
    Ok(Outcome::json(with_header(hd, report::achievement(&r)), true))
}

fn boundary_opt(a: &BoundaryOptArgs) -> Run {
    let gamma = LinearFunctional::new(vector(&a.vector)?);
    let opts = OptimizeOptions { restarts: a.restarts, max_iter: a.max_iter, tol: a.tol, ..Default::default() };
    let (cov, d) = boundary_optimize_with(&gamma, a.t, a.seed, &opts)?;
    let hd = header(
        "boundary-opt",
        &[
            ("T", json!(a.t)),
            ("seed", json!(a.seed)),
            ("tol", json!(a.tol)),
            ("restarts", json!(a.restarts)),
            ("max_iter", json!(a.max_iter)),
            ("init_noise", json!(opts.init_noise)),
        ],
    );
    Ok(Outcome::json(with_header(hd, report::diagnostics(&d, cov.matrix(), a.t)), d.converged))
}
