use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{angle, pick, positive, require, FileConfig};
use super::output::{write_csv, Cell, RunDir, DEFAULT_OUT_DIR};
use super::*;
use crate::error::Result;
use crate::geometry::{build_halfstrip_mesh, GradingSpec, HalfStripGeom, TrapezoidGeom};
use crate::harness::{
    broken_strip_spectrum, dive_sweep, matched_near_field, matched_threshold_angle,
    solve_trapezoid, verify_discrete, verify_generic, verify_model_k, verify_model_zero,
    verify_threshold, AsymptoticComparison, TrapezoidParams, DEFAULT_EPS_LIST,
};
use crate::model1d::{dispersion_eigenvalues_for, fem1d_eigenvalues_for, RobinModel};
use crate::scattering::{
    constant_b, constant_d, find_threshold_angles, phase_derivative_check, scan_phase,
    scan_phase_with, uniform_grid, BConstant, DConstant, ModelConstants, NearFieldParams,
    PhaseDerivative, ScanOptions, ThresholdAngle,
};

pub const DEFAULT_EPS: f64 = 0.02;
pub const DEFAULT_COUNT: usize = 5;
pub const DEFAULT_MAX_ALPHA: f64 = 0.45 * PI;
pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_ALPHA_STAR: f64 = 1.321;
pub const DEFAULT_D_H: f64 = 0.025;
/// Largest relative gap between the two estimates of `B`.
pub const B_AGREEMENT: f64 = 1e-2;

pub struct Outcome {
    pub messages: Vec<String>,
    pub violation: Option<String>,
}

struct Ctx {
    file: FileConfig,
    root: PathBuf,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let root = cli
        .out
        .clone()
        .or_else(|| file.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    if let Some(n) = cli.threads.or(file.threads) {
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let ctx = Ctx { file, root };
    match &cli.command {
        Command::Spectrum(a) => spectrum(&ctx, a),
        Command::Scan(a) => scan(&ctx, a),
        Command::Thresholds(a) => thresholds(&ctx, a),
        Command::Constants(a) => constants(&ctx, a),
        Command::Model1d(a) => model1d(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Broken(a) => broken(&ctx, a),
        Command::MeshDump(a) => mesh_dump(&ctx, a),
    }
}

fn parse_order(s: &str) -> Result<ElementOrder> {
    match s.to_ascii_lowercase().as_str() {
        "p1" => Ok(ElementOrder::P1),
        "p2" => Ok(ElementOrder::P2),
        _ => Err(Error::InvalidArgument(format!(
            "unknown element order {s:?}"
        ))),
    }
}

fn parse_gamma(s: &str) -> Result<GammaBc> {
    match s.to_ascii_lowercase().as_str() {
        "neumann" => Ok(GammaBc::Neumann),
        "dirichlet" => Ok(GammaBc::Dirichlet),
        _ => Err(Error::InvalidArgument(format!("unknown gamma_bc {s:?}"))),
    }
}

fn trapezoid_params(f: &TrapezoidFlags, file: &FileConfig) -> Result<TrapezoidParams> {
    let d = TrapezoidParams::default();
    let order = match (f.order, &file.order) {
        (Some(o), _) => o.into(),
        (None, Some(s)) => parse_order(s)?,
        (None, None) => d.order,
    };
    let h_over_eps = positive(
        "h-over-eps",
        pick(f.h_over_eps, file.h_over_eps, d.h_over_eps),
    )?;
    if h_over_eps > 0.5 {
        return Err(Error::InvalidArgument(format!(
            "--h-over-eps = {h_over_eps} leaves fewer than two layers"
        )));
    }
    let mut gevp = d.gevp;
    gevp.tol = positive("eig-tol", pick(f.eig_tol, file.eig_tol, gevp.tol))?;
    Ok(TrapezoidParams {
        h_over_eps,
        order,
        refinements: pick(f.refinements, file.refinements, d.refinements),
        gevp,
        ..d
    })
}

fn near_params(f: &NearFieldFlags, file: &FileConfig) -> Result<NearFieldParams> {
    let d = NearFieldParams::default();
    let truncation_l = pick(f.truncation_l, file.truncation_l, d.truncation_l);
    if !(truncation_l >= NearFieldParams::DECAY_MARGIN) {
        return Err(Error::InvalidArgument(format!(
            "--truncation-l = {truncation_l} must be at least 4"
        )));
    }
    let h = positive("near-h", pick(f.near_h, file.near_h, d.h))?;
    Ok(NearFieldParams {
        truncation_l,
        h,
        ..d
    })
}

fn eps_value(flag: Option<f64>, file: &FileConfig) -> Result<f64> {
    let eps = positive("eps", pick(flag, file.eps, DEFAULT_EPS))?;
    if eps >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "--eps = {eps} must be below 1"
        )));
    }
    Ok(eps)
}

fn count_value(flag: Option<usize>, file: &FileConfig) -> Result<usize> {
    let n = pick(flag, file.count, DEFAULT_COUNT);
    if n == 0 {
        return Err(Error::InvalidArgument("--count must be at least 1".into()));
    }
    Ok(n)
}

fn samples_value(flag: Option<usize>, file: &FileConfig, default: usize) -> Result<usize> {
    let n = pick(flag, file.samples, default);
    if n < 2 {
        return Err(Error::InvalidArgument(
            "--samples must be at least 2".into(),
        ));
    }
    Ok(n)
}

fn done(run: RunDir, mut messages: Vec<String>, violation: Option<String>) -> Result<Outcome> {
    let path = run.path.clone();
    let hash = run.finish()?;
    messages.push(format!(
        "wrote {} (content hash {})",
        path.display(),
        &hash[..16]
    ));
    Ok(Outcome {
        messages,
        violation,
    })
}

#[derive(Serialize)]
struct SpectrumRun {
    eps: f64,
    alpha: Option<f64>,
    alpha_range: Option<[f64; 2]>,
    samples: Option<usize>,
    count: usize,
    gamma_bc: GammaBc,
    mesh: TrapezoidParams,
}

fn spectrum(ctx: &Ctx, a: &SpectrumArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let eps = eps_value(a.eps, file)?;
    let count = count_value(a.count, file)?;
    let gamma_bc = match (a.gamma_bc, &file.gamma_bc) {
        (Some(g), _) => g.into(),
        (None, Some(s)) => parse_gamma(s)?,
        (None, None) => GammaBc::Neumann,
    };
    let mesh = trapezoid_params(&a.mesh, file)?;
    if let Some(r) = &a.alpha_range {
        let (lo, hi) = (angle("alpha-range", r[0])?, angle("alpha-range", r[1])?);
        if !(lo < hi) {
            return Err(Error::InvalidArgument("--alpha-range needs A < B".into()));
        }
        let samples = samples_value(a.samples, file, 21)?;
        let params = SpectrumRun {
            eps,
            alpha: None,
            alpha_range: Some([lo, hi]),
            samples: Some(samples),
            count,
            gamma_bc,
            mesh,
        };
        let mut run = RunDir::create(&ctx.root, "spectrum", &params)?;
        let table = dive_sweep(eps, &uniform_grid(lo, hi, samples), gamma_bc, count, &mesh)?;
        let mut csv = Vec::new();
        table.write_csv(&mut csv)?;
        run.write("dive.csv", &csv)?;
        let counts: Vec<usize> = table.rows.iter().map(|r| r.below_threshold).collect();
        let msg = format!(
            "{} angles, eigenvalues below pi^2/eps^2: {} at alpha = {lo} to {} at alpha = {hi}",
            samples,
            counts[0],
            counts[counts.len() - 1]
        );
        return done(run, vec![msg], None);
    }
    let alpha = angle("alpha", require(a.alpha, file.alpha, "alpha")?)?;
    let params = SpectrumRun {
        eps,
        alpha: Some(alpha),
        alpha_range: None,
        samples: None,
        count,
        gamma_bc,
        mesh,
    };
    TrapezoidGeom::new(eps, alpha)?;
    let mut run = RunDir::create(&ctx.root, "spectrum", &params)?;
    let sol = solve_trapezoid(eps, alpha, gamma_bc, count, &mesh)?;
    let s = &sol.spectrum;
    let rows: Vec<Vec<Cell>> = s
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            vec![
                Cell::I(i + 1),
                Cell::F(l),
                Cell::F(l - s.threshold),
                Cell::F(l - s.discrete_threshold),
                Cell::F(eps * eps * l),
                Cell::F(s.residual_norms[i]),
            ]
        })
        .collect();
    let header = [
        "p",
        "lambda",
        "lambda_minus_threshold",
        "lambda_minus_discrete_threshold",
        "eps2_lambda",
        "residual",
    ];
    run.write("spectrum.csv", write_csv(&header, &rows).as_bytes())?;
    if a.modes {
        for (i, u) in sol.modes.iter().enumerate() {
            let rows: Vec<Vec<Cell>> = sol
                .mesh
                .nodes()
                .iter()
                .zip(u)
                .map(|(p, v)| vec![Cell::F(p[0]), Cell::F(p[1]), Cell::F(*v)])
                .collect();
            run.write(
                &format!("mode_{}.csv", i + 1),
                write_csv(&["x", "y", "u"], &rows).as_bytes(),
            )?;
        }
    }
    let msg = format!(
        "eps = {eps}, alpha = {alpha}: {} of {} eigenvalues below pi^2/eps^2 = {:.6e}",
        s.below_threshold.min(count),
        count,
        s.threshold
    );
    done(run, vec![msg], None)
}

#[derive(Serialize)]
struct ScanRun {
    alpha_min: f64,
    alpha_max: f64,
    samples: usize,
    refine: bool,
    near_field: NearFieldParams,
}

fn scan(ctx: &Ctx, a: &ScanArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let lo = a.alpha_min.unwrap_or(0.0);
    let hi = a.alpha_max.unwrap_or(DEFAULT_MAX_ALPHA);
    angle("alpha-min", lo)?;
    angle("alpha-max", hi)?;
    if !(lo < hi) {
        return Err(Error::InvalidArgument(
            "--alpha-min must be below --alpha-max".into(),
        ));
    }
    let samples = samples_value(a.samples, file, DEFAULT_SAMPLES)?;
    let near = near_params(&a.near, file)?;
    let params = ScanRun {
        alpha_min: lo,
        alpha_max: hi,
        samples,
        refine: !a.no_refine,
        near_field: near,
    };
    let mut run = RunDir::create(&ctx.root, "scan", &params)?;
    let grid = uniform_grid(lo, hi, samples);
    let scan = if a.no_refine {
        scan_phase_with(
            &grid,
            &near,
            &ScanOptions {
                max_passes: 0,
                ..Default::default()
            },
        )?
    } else {
        scan_phase(&grid, &near)?
    };
    let rows: Vec<Vec<Cell>> = scan
        .iter()
        .map(|s| {
            vec![
                Cell::F(s.alpha),
                Cell::F(s.s_re),
                Cell::F(s.s_im),
                Cell::F(s.s().norm()),
                Cell::F(s.phase_unwrapped),
                Cell::F(s.abs_s_error),
                Cell::F(s.truncation_l),
                Cell::F(s.mesh_h),
                Cell::I(s.accepted as usize),
            ]
        })
        .collect();
    let header = [
        "alpha",
        "s_re",
        "s_im",
        "abs_s",
        "phase_unwrapped",
        "abs_s_error",
        "truncation_l",
        "mesh_h",
        "accepted",
    ];
    run.write("scan.csv", write_csv(&header, &rows).as_bytes())?;
    let worst = scan.iter().map(|s| s.abs_s_error).fold(0.0, f64::max);
    let rejected = scan.iter().filter(|s| !s.accepted).count();
    let violation = (rejected > 0)
        .then(|| format!("{rejected} samples violate unitarity (max ||S| - 1| = {worst:.3e})"));
    done(
        run,
        vec![format!(
            "{} samples, max ||S| - 1| = {worst:.3e}",
            scan.len()
        )],
        violation,
    )
}

#[derive(Serialize)]
struct ThresholdRun {
    max_alpha: f64,
    samples: usize,
    k_max: usize,
    angle_tol: f64,
    near_field: NearFieldParams,
}

#[derive(Serialize)]
pub struct ThresholdReport {
    pub alphas: Vec<f64>,
    pub requested: usize,
    pub complete: bool,
    pub angles: Vec<ThresholdAngle>,
}

fn thresholds(ctx: &Ctx, a: &ThresholdArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let max_alpha = a.max_alpha.unwrap_or(DEFAULT_MAX_ALPHA);
    if !(max_alpha > 0.0) {
        return Err(Error::InvalidArgument(
            "--max-alpha must be positive".into(),
        ));
    }
    angle("max-alpha", max_alpha)?;
    let samples = samples_value(a.samples, file, DEFAULT_SAMPLES)?;
    let k_max = a.k_max.unwrap_or(1);
    let angle_tol = positive("angle-tol", pick(a.angle_tol, file.angle_tol, 1e-9))?;
    let near = near_params(&a.near, file)?;
    let params = ThresholdRun {
        max_alpha,
        samples,
        k_max,
        angle_tol,
        near_field: near,
    };
    let mut run = RunDir::create(&ctx.root, "thresholds", &params)?;
    let scan = scan_phase(&uniform_grid(0.0, max_alpha, samples), &near)?;
    let found = find_threshold_angles(&scan, k_max, &near, angle_tol)?;
    let report = ThresholdReport {
        alphas: found.values(),
        requested: found.requested,
        complete: found.complete,
        angles: found.angles,
    };
    run.write_json("thresholds.json", &report)?;
    let msg = format!("threshold angles: {:?}", report.alphas);
    done(run, vec![msg], None)
}

#[derive(Serialize)]
struct ConstantsRun {
    alpha_star: f64,
    d_truncation_l: Option<f64>,
    d_h: Option<f64>,
    phase_check: bool,
    near_field: NearFieldParams,
}

#[derive(Serialize)]
pub struct ConstantsReport {
    pub constants: ModelConstants,
    pub b: BConstant,
    pub d: Option<DConstant>,
    pub phase: Option<PhaseDerivative>,
}

fn constants(ctx: &Ctx, a: &ConstantsArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let alpha_star = angle(
        "alpha-star",
        pick(a.alpha_star, file.alpha_star, DEFAULT_ALPHA_STAR),
    )?;
    let near = near_params(&a.near, file)?;
    let d_h = positive("d-h", a.d_h.unwrap_or(DEFAULT_D_H))?;
    let params = ConstantsRun {
        alpha_star,
        d_truncation_l: (!a.no_d).then_some(near.truncation_l),
        d_h: (!a.no_d).then_some(d_h),
        phase_check: a.phase_check,
        near_field: near,
    };
    let mut run = RunDir::create(&ctx.root, "constants", &params)?;
    let b = constant_b(alpha_star, &near)?;
    let d = if a.no_d {
        None
    } else {
        Some(constant_d(near.truncation_l, d_h)?)
    };
    let phase = if a.phase_check {
        Some(phase_derivative_check(alpha_star, &near)?)
    } else {
        None
    };
    let mut constants = ModelConstants::default().with_b(&b);
    if let Some(d) = &d {
        constants = constants.with_d(d);
    }
    let mut problems = Vec::new();
    if !(b.b > 0.0 && b.b_rellich > 0.0) || b.relative_gap > B_AGREEMENT {
        problems.push(format!(
            "B = {} and B_rellich = {} disagree (gap {:.2e})",
            b.b, b.b_rellich, b.relative_gap
        ));
    }
    if let Some(d) = &d {
        if !(d.d > 0.0) || d.d < d.lower_bound {
            problems.push(format!("D = {} violates D >= {}", d.d, d.lower_bound));
        }
    }
    if let Some(p) = &phase {
        if !p.counter_clockwise {
            problems.push("phase does not turn counter-clockwise at the threshold angle".into());
        }
    }
    let report = ConstantsReport {
        constants,
        b,
        d,
        phase,
    };
    run.write_json("constants.json", &report)?;
    let mut msg = format!(
        "alpha* = {:.9}: B = {:.6}, B_rellich = {:.6}",
        report.b.alpha_star, report.b.b, report.b.b_rellich
    );
    if let Some(d) = &report.d {
        msg.push_str(&format!(", D = {:.7}", d.d));
    }
    done(
        run,
        vec![msg],
        (!problems.is_empty()).then(|| problems.join("; ")),
    )
}

#[derive(Serialize)]
struct Model1dRun {
    variant: crate::model1d::ModelVariant,
    constant: f64,
    tau_range: [f64; 2],
    samples: usize,
    count: usize,
    fem_elements: Option<usize>,
}

fn model1d(ctx: &Ctx, a: &Model1dArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let variant: crate::model1d::ModelVariant = a.variant.into();
    let two = match a.variant {
        VariantArg::K => a.two_b.or(file.b.map(|b| 2.0 * b)).unwrap_or(1.0),
        VariantArg::Zero => a.two_d.or(file.d.map(|d| 2.0 * d)).unwrap_or(1.0),
    };
    let constant = positive("two-b", two)? / 2.0;
    let r = a.tau_range.clone().unwrap_or_else(|| vec![-30.0, 30.0]);
    if !(r[0] < r[1]) {
        return Err(Error::InvalidArgument("--tau-range needs LO < HI".into()));
    }
    let samples = samples_value(a.samples, file, 241)?;
    let count = count_value(a.count, file)?;
    let params = Model1dRun {
        variant,
        constant,
        tau_range: [r[0], r[1]],
        samples,
        count,
        fem_elements: a.fem_elements,
    };
    let mut run = RunDir::create(&ctx.root, "model1d", &params)?;
    let mut rows = Vec::with_capacity(samples);
    for tau in uniform_grid(r[0], r[1], samples) {
        let c = RobinModel::new(variant, tau, constant)?.robin_coeff();
        let etas = match a.fem_elements {
            Some(n) => fem1d_eigenvalues_for(c, n, count)?,
            None => dispersion_eigenvalues_for(c, count)?,
        };
        let mut row = vec![Cell::F(tau), Cell::F(c)];
        row.extend(etas.into_iter().map(Cell::F));
        rows.push(row);
    }
    let mut header = vec!["tau".to_string(), "c".to_string()];
    header.extend((1..=count).map(|q| format!("eta_{q}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    run.write("model1d.csv", write_csv(&header, &rows).as_bytes())?;
    done(
        run,
        vec![format!("{samples} values of tau in [{}, {}]", r[0], r[1])],
        None,
    )
}

#[derive(Serialize)]
struct VerifyRun {
    regime: Regime,
    alpha: Option<f64>,
    alpha_star: Option<f64>,
    eps_list: Vec<f64>,
    tau_list: Vec<f64>,
    index: usize,
    b: Option<f64>,
    d: Option<f64>,
    mesh: TrapezoidParams,
}

fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let regime: Regime = a.regime.into();
    let mesh = trapezoid_params(&a.mesh, file)?;
    let eps_list = a
        .eps_list
        .clone()
        .or(file.eps_list.clone())
        .unwrap_or_else(|| DEFAULT_EPS_LIST.to_vec());
    let index = a.index.unwrap_or(1);
    let needs_alpha = matches!(regime, Regime::DiscreteSpectrum | Regime::GenericDirichlet);
    let needs_star = matches!(
        regime,
        Regime::ThresholdNeumann | Regime::RobinModelK | Regime::GenericDirichlet
    );
    let alpha = if needs_alpha {
        Some(angle("alpha", require(a.alpha, file.alpha, "alpha")?)?)
    } else {
        None
    };
    let guess = angle(
        "alpha-star",
        pick(a.alpha_star, file.alpha_star, DEFAULT_ALPHA_STAR),
    )?;
    let tau_list = a
        .tau_list
        .clone()
        .or(file.tau_list.clone())
        .unwrap_or_else(|| match regime {
            Regime::RobinModelZero => vec![-3.0, 3.0],
            _ => vec![0.0],
        });
    let alpha_star = if needs_star {
        Some(matched_threshold_angle(guess, &mesh)?)
    } else {
        None
    };
    let b = match regime {
        Regime::RobinModelK => Some(match a.b.or(file.b) {
            Some(b) => positive("b", b)?,
            None => constant_b(alpha_star.unwrap_or(guess), &matched_near_field(&mesh))?.b,
        }),
        _ => None,
    };
    let d = match regime {
        Regime::RobinModelZero => Some(match a.d.or(file.d) {
            Some(d) => positive("d", d)?,
            None => constant_d(NearFieldParams::default().truncation_l, DEFAULT_D_H)?.d,
        }),
        _ => None,
    };
    let params = VerifyRun {
        regime,
        alpha,
        alpha_star,
        eps_list: eps_list.clone(),
        tau_list: tau_list.clone(),
        index,
        b,
        d,
        mesh,
    };
    let mut run = RunDir::create(&ctx.root, "verify", &params)?;
    let cmp: AsymptoticComparison = match regime {
        Regime::DiscreteSpectrum => verify_discrete(alpha.unwrap_or(0.0), &eps_list, index, &mesh)?,
        Regime::GenericDirichlet => {
            let thresholds = [0.0, alpha_star.unwrap_or(guess)];
            verify_generic(alpha.unwrap_or(0.0), &eps_list, index, &thresholds, &mesh)?
        }
        Regime::ThresholdNeumann => {
            verify_threshold(alpha_star.unwrap_or(guess), &eps_list, index, &mesh)?
        }
        Regime::RobinModelK => verify_model_k(
            alpha_star.unwrap_or(guess),
            b.unwrap_or(1.0),
            &tau_list,
            &eps_list,
            &mesh,
        )?,
        Regime::RobinModelZero => verify_model_zero(d.unwrap_or(1.0), &tau_list, &eps_list, &mesh)?,
    };
    run.write_json("verify.json", &cmp)?;
    let mut messages = vec![format!(
        "{:?}: {} records, fitted rates {:?}, min ratio {:?}, relative residual at the smallest eps {:?}",
        cmp.regime,
        cmp.records.len(),
        cmp.fitted_rates,
        cmp.min_ratio,
        cmp.finest_relative_residual
    )];
    messages.extend(cmp.diagnostics.iter().map(|d| format!("note: {d}")));
    let violation = (cmp.assessed && !cmp.passed)
        .then(|| format!("{:?} comparison misses its rate floor", cmp.regime));
    done(run, messages, violation)
}

#[derive(Serialize)]
struct BrokenRun {
    eps: f64,
    alpha: f64,
    count: usize,
    mesh: TrapezoidParams,
}

fn broken(ctx: &Ctx, a: &BrokenArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let eps = eps_value(a.eps, file)?;
    let alpha = angle("alpha", require(a.alpha, file.alpha, "alpha")?)?;
    let count = count_value(a.count, file)?;
    let mesh = trapezoid_params(&a.mesh, file)?;
    TrapezoidGeom::new(eps, alpha)?;
    let mut run = RunDir::create(
        &ctx.root,
        "broken",
        &BrokenRun {
            eps,
            alpha,
            count,
            mesh,
        },
    )?;
    let spec = broken_strip_spectrum(eps, alpha, count, &mesh)?;
    let rows: Vec<Vec<Cell>> = spec
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let parity = match l.parity {
                crate::harness::Parity::Symmetric => "symmetric",
                crate::harness::Parity::Antisymmetric => "antisymmetric",
            };
            vec![
                Cell::I(i + 1),
                Cell::F(l.value),
                Cell::F(l.normalized),
                Cell::S(parity.into()),
            ]
        })
        .collect();
    run.write(
        "broken.csv",
        write_csv(
            &[
                "index",
                "lambda",
                "lambda_minus_discrete_threshold",
                "parity",
            ],
            &rows,
        )
        .as_bytes(),
    )?;
    done(
        run,
        vec![format!("{} eigenvalues of the broken strip", spec.len())],
        None,
    )
}

#[derive(Serialize)]
struct MeshRun {
    domain: &'static str,
    eps: Option<f64>,
    alpha: f64,
    trapezoid: Option<TrapezoidParams>,
    near_field: Option<NearFieldParams>,
}

#[derive(Serialize)]
pub struct MeshStats {
    pub nodes: usize,
    pub vertices: usize,
    pub triangles: usize,
    pub h_min: f64,
    pub h_max: f64,
    pub min_quality: f64,
    pub area: f64,
}

fn mesh_dump(ctx: &Ctx, a: &MeshDumpArgs) -> Result<Outcome> {
    let file = &ctx.file;
    let alpha = angle("alpha", require(a.alpha, file.alpha, "alpha")?)?;
    let (params, mesh) = match a.domain {
        DomainArg::Trapezoid => {
            let eps = eps_value(a.eps, file)?;
            let t = trapezoid_params(&a.mesh, file)?;
            let mesh = t.mesh(&TrapezoidGeom::new(eps, alpha)?)?;
            (
                MeshRun {
                    domain: "trapezoid",
                    eps: Some(eps),
                    alpha,
                    trapezoid: Some(t),
                    near_field: None,
                },
                mesh,
            )
        }
        DomainArg::HalfStrip => {
            let n = near_params(&a.near, file)?;
            let geom = HalfStripGeom::new(alpha, n.truncation_at(alpha))?;
            let mesh = build_halfstrip_mesh(&geom, n.h, &GradingSpec::default())?;
            (
                MeshRun {
                    domain: "half-strip",
                    eps: None,
                    alpha,
                    trapezoid: None,
                    near_field: Some(n),
                },
                mesh,
            )
        }
    };
    let mut run = RunDir::create(&ctx.root, "mesh-dump", &params)?;
    let mut text = Vec::new();
    mesh.write_text(&mut text)?;
    run.write("mesh.txt", &text)?;
    let stats = MeshStats {
        nodes: mesh.n_nodes(),
        vertices: mesh.n_vertices(),
        triangles: mesh.n_elements(),
        h_min: mesh.h_min(),
        h_max: mesh.h_max(),
        min_quality: mesh.min_quality(),
        area: mesh.area(),
    };
    run.write_json("mesh.json", &stats)?;
    let msg = format!(
        "{} triangles, {} nodes, min quality {:.3}",
        stats.triangles, stats.nodes, stats.min_quality
    );
    done(run, vec![msg], None)
}
