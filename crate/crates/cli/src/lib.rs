//! Command-line front end: configuration, subcommands and exit codes.

pub mod config;

use std::f64::consts::PI;
use std::path::Path;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use sommerfeld::continuation::{build_gamma0, compute_basis, BasisContours, BasisVector, PushSettings};
use sommerfeld::field::{HalfPlaneField, KnownField, StripField};
use sommerfeld::green::{contour_integral_with_rule, BranchedContour, ComplexPoint2};
use sommerfeld::monodromy::{
    compute_z, continue_word, frobenius, measure_word, reference_matrix, verify_matrix_identities, CMatrix,
    FundamentalMatrix, StencilEvaluator,
};
use sommerfeld::surface::{SommerfeldSurface, SurfacePoint};
use sommerfeld::Error;

pub use config::{ConfigArgs, Problem, RunConfig};

type C = Complex64;

/// Largest distance of a measured matrix from its rounding that still counts
/// as an integer matrix.
pub const ROUNDING_THRESHOLD: f64 = 1e-4;

#[derive(Parser, Debug)]
#[command(name = "sommerfeld", version, about = "Diffraction on Sommerfeld surfaces and its continuation into C^2")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the diffraction problem; reports convergence, far field and a
    /// Green reconstruction check at seeded random points
    Solve,
    /// Total field on a grid of one sheet, as CSV
    Field {
        /// `x_min,x_max,y_min,y_max`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,2,-2,2")]
        bbox: Vec<f64>,
        #[arg(long, default_value_t = 41)]
        nx: usize,
        #[arg(long, default_value_t = 41)]
        ny: usize,
        #[arg(long, default_value_t = 1)]
        sheet: usize,
    },
    /// Basis functions g1..g4 at the anchor (g1 only for the half-line)
    Basis,
    /// Continue the basis along a word of elementary bypasses
    Continue {
        /// Bypasses as `lj` tokens, e.g. `11,22`: A_l goes once around P_j
        #[arg(long, value_delimiter = ',', required = true)]
        word: Vec<String>,
    },
    /// Measure the four monodromy matrices and check them against the
    /// reference integer matrices and their identities
    Monodromy,
    /// Coordinate equations Z1, Z2 by central differences at h and h/2
    Coordeq {
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Surface geometry
    Surface {
        #[command(subcommand)]
        what: SurfaceCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCommand {
    /// Sheets, branch points, cuts and loop permutations
    Info,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Domain(_) | Error::OnBranchPoint | Error::Precondition(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

/// One output document.
#[derive(Debug)]
pub struct Report {
    pub file_name: &'static str,
    pub body: String,
    /// False when a check the subcommand performs did not pass.
    pub checks_passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.checks_passed {
            0
        } else {
            3
        }
    }
}

/// Complex number as named parts.
#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<C> for Cx {
    fn from(z: C) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

fn cx_matrix(m: &CMatrix) -> Vec<Vec<Cx>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)].into()).collect()).collect()
}

fn point_json(a: &ComplexPoint2) -> serde_json::Value {
    let (a1, a2) = a.associated_real_points();
    json!({ "x1": Cx::from(a.x1), "x2": Cx::from(a.x2), "associated_real_points": [a1, a2] })
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn known_field(cfg: &RunConfig, angles: &[f64]) -> Result<Box<dyn KnownField>, CliError> {
    Ok(match cfg.problem {
        Problem::Strip => Box::new(StripField::solve(cfg.k(), cfg.a, angles, cfg.order)?),
        Problem::HalfLine => Box::new(HalfPlaneField::new(cfg.k(), angles)?),
    })
}

fn circle(c: [f64; 2], r: f64, sides: usize) -> Vec<[f64; 2]> {
    (0..sides)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / sides as f64;
            [c[0] + r * t.cos(), c[1] + r * t.sin()]
        })
        .collect()
}

fn clearance(surface: &SommerfeldSurface, x: [f64; 2]) -> f64 {
    let cut = surface.cuts.iter().map(|c| c.distance(x)).fold(f64::INFINITY, f64::min);
    surface
        .branch_points
        .iter()
        .map(|b| (b.pos()[0] - x[0]).hypot(b.pos()[1] - x[1]))
        .fold(cut, f64::min)
}

/// Worst relative error of the contour reconstruction of the field at `n`
/// seeded random real points, alternating sheets.
fn reconstruction_check(cfg: &RunConfig, field: &dyn KnownField, n: usize) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let scale = field.surface().length_scale;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < n {
        let x = [rng.gen_range(-2.0..2.0) * scale, rng.gen_range(-2.0..2.0) * scale];
        let d = clearance(field.surface(), x);
        if d < 0.15 * scale {
            continue;
        }
        let sheet = 1 + done % 2;
        let a = ComplexPoint2::real(x[0], x[1]);
        let c = BranchedContour::new(circle(x, (0.5 * d).min(0.25 * scale), 48), 0, sheet, &a)?;
        let (got, _) = contour_integral_with_rule(&a, &c, field, cfg.tolerance())?;
        let want = field.sample(&SurfacePoint::new(x[0], x[1], sheet))?;
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w.u).norm() / w.u.norm());
        }
        done += 1;
    }
    Ok(worst)
}

fn solve(cfg: &RunConfig) -> Result<Report, CliError> {
    let field = known_field(cfg, &[cfg.phi_in])?;
    let mut doc = json!({
        "problem": cfg.problem,
        "k": Cx::from(cfg.k()),
        "phi_in": cfg.phi_in,
    });
    if cfg.problem == Problem::Strip {
        let strip = StripField::solve(cfg.k(), cfg.a, &[cfg.phi_in], cfg.order)?;
        let d = &strip.densities()[0];
        let far: Vec<_> = (0..8)
            .map(|i| {
                let phi = PI * i as f64 / 4.0;
                json!({ "phi": phi, "amplitude": Cx::from(d.far_field(phi)) })
            })
            .collect();
        doc["a"] = json!(cfg.a);
        doc["order"] = json!(d.order());
        doc["chebyshev_tail_ratio"] = json!(d.tail_ratio());
        doc["far_field"] = json!(far);
    }
    let worst = reconstruction_check(cfg, field.as_ref(), 6)?;
    doc["green_reconstruction"] = json!({ "seed": cfg.seed, "points": 6, "worst_relative_error": worst });
    Ok(Report { file_name: "solve.json", body: to_json(&doc), checks_passed: worst < 1e-6 })
}

fn field_grid(cfg: &RunConfig, bbox: &[f64], nx: usize, ny: usize, sheet: usize) -> Result<Report, CliError> {
    let [x0, x1, y0, y1]: [f64; 4] = bbox
        .try_into()
        .map_err(|_| CliError::Validation(format!("invalid `bbox`: need 4 numbers, got {}", bbox.len())))?;
    if !(x1 > x0 && y1 > y0) {
        return Err(CliError::Validation("invalid `bbox`: need x_min < x_max and y_min < y_max".into()));
    }
    if nx < 2 || ny < 2 || nx * ny > 1_000_000 {
        return Err(CliError::Validation(format!("invalid grid {nx} x {ny}: need 2..=1000000 points per side product")));
    }
    let field = known_field(cfg, &[cfg.phi_in])?;
    if sheet == 0 || sheet > field.surface().sheets {
        return Err(CliError::Validation(format!("invalid `sheet`: {sheet} out of 1..={}", field.surface().sheets)));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Numerical(format!("csv: {e}"));
    w.write_record(["x1", "x2", "sheet", "re_u", "im_u"]).map_err(io)?;
    for j in 0..ny {
        let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            let u = match field.sample(&SurfacePoint::new(x, y, sheet)) {
                Ok(s) => s[0].u,
                Err(Error::OnBranchPoint) => C::new(f64::NAN, f64::NAN),
                Err(e) => return Err(e.into()),
            };
            w.serialize((x, y, sheet, u.re, u.im)).map_err(io)?;
        }
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?)
        .expect("csv output is utf-8");
    Ok(Report { file_name: "field.csv", body, checks_passed: true })
}

fn basis_json(w: &BasisVector, angles: &[f64], count: usize) -> serde_json::Value {
    let channels: Vec<_> = w
        .g
        .iter()
        .zip(angles)
        .map(|(g, phi)| json!({ "phi_in": phi, "g": g[..count].iter().map(|&z| Cx::from(z)).collect::<Vec<_>>() }))
        .collect();
    json!(channels)
}

fn basis(cfg: &RunConfig) -> Result<Report, CliError> {
    let field = known_field(cfg, &cfg.angles)?;
    let a = cfg.anchor_point();
    let (w, count) = match cfg.problem {
        Problem::Strip => {
            let set = BasisContours::new(field.surface(), &a)?;
            (compute_basis(field.as_ref(), &set, cfg.tolerance())?, 4)
        }
        Problem::HalfLine => {
            let c = build_gamma0(field.surface(), &a)?;
            let (g1, _) = contour_integral_with_rule(&a, &c, field.as_ref(), cfg.tolerance())?;
            let zero = C::new(0.0, 0.0);
            (BasisVector { a, g: g1.into_iter().map(|g| [g, zero, zero, zero]).collect() }, 1)
        }
    };
    let doc = json!({ "anchor": point_json(&a), "channels": basis_json(&w, &cfg.angles, count) });
    Ok(Report { file_name: "basis.json", body: to_json(&doc), checks_passed: true })
}

pub fn parse_word(tokens: &[String]) -> Result<Vec<(u8, usize)>, CliError> {
    tokens
        .iter()
        .map(|t| match t.trim().as_bytes() {
            [l @ (b'1' | b'2'), j @ (b'1' | b'2')] => Ok((l - b'0', usize::from(j - b'0'))),
            _ => Err(CliError::Validation(format!("invalid `word`: token `{t}` is not one of 11, 12, 21, 22"))),
        })
        .collect()
}

struct StripBasis {
    field: StripField,
    set: BasisContours,
    w: BasisVector,
    settings: PushSettings,
}

fn strip_basis(cfg: &RunConfig, what: &str) -> Result<StripBasis, CliError> {
    cfg.require_strip(what)?;
    let field = StripField::solve(cfg.k(), cfg.a, &cfg.angles, cfg.order)?;
    let set = BasisContours::new(field.surface(), &cfg.anchor_point())?;
    let w = compute_basis(&field, &set, cfg.tolerance())?;
    Ok(StripBasis { field, set, w, settings: PushSettings::for_scale(cfg.a) })
}

fn continue_cmd(cfg: &RunConfig, tokens: &[String]) -> Result<Report, CliError> {
    let word = parse_word(tokens)?;
    let sb = strip_basis(cfg, "continue")?;
    let after = continue_word(&sb.field, &sb.set, &word, 1, &sb.settings)?;
    let w_after = compute_basis(&sb.field, &after, cfg.tolerance())?;
    let mut doc = json!({
        "anchor": point_json(&sb.set.a),
        "word": tokens,
        "before": basis_json(&sb.w, &cfg.angles, 4),
        "after": basis_json(&w_after, &cfg.angles, 4),
    });
    let mut ok = true;
    if cfg.angles.len() == 4 {
        let before = FundamentalMatrix::from_basis(&sb.w, &cfg.angles)?;
        let after_v = FundamentalMatrix::from_basis(&w_after, &cfg.angles)?;
        let numeric = after_v.v * before.inverse()?;
        let (rounded, residual) = sommerfeld::monodromy::round_matrix(&numeric);
        ok = residual < ROUNDING_THRESHOLD;
        doc["matrix"] = json!({ "numeric": cx_matrix(&numeric), "rounded": rounded, "residual": residual });
    }
    Ok(Report { file_name: "continue.json", body: to_json(&doc), checks_passed: ok })
}

fn monodromy(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.require_four_angles("monodromy")?;
    let sb = strip_basis(cfg, "monodromy")?;
    let before = FundamentalMatrix::from_basis(&sb.w, &cfg.angles)?;
    let mut ok = true;
    let mut mats = Vec::new();
    for (ell, j) in [(1u8, 1usize), (1, 2), (2, 1), (2, 2)] {
        let m = measure_word(&sb.field, &sb.set, &before, &[(ell, j)], &sb.settings, cfg.tolerance())?;
        let expected = reference_matrix(ell, j)?.entries;
        let matches = m.rounded == expected && m.residual < ROUNDING_THRESHOLD;
        ok &= matches;
        mats.push(json!({
            "ell": ell,
            "j": j,
            "rounded": m.rounded,
            "expected": expected,
            "residual": m.residual,
            "matches": matches,
        }));
    }
    let ids = verify_matrix_identities();
    ok &= ids.passed();
    let doc = json!({
        "anchor": point_json(&sb.set.a),
        "condition_of_v": before.condition(),
        "matrices": mats,
        "identities": ids,
    });
    Ok(Report { file_name: "monodromy.json", body: to_json(&doc), checks_passed: ok })
}

fn coordeq(cfg: &RunConfig, h: f64) -> Result<Report, CliError> {
    if !(h > 0.0 && h <= 0.05 * cfg.a) {
        return Err(CliError::Validation(format!("invalid `h`: must lie in (0, {}], got {h}", 0.05 * cfg.a)));
    }
    cfg.require_four_angles("coordeq")?;
    let sb = strip_basis(cfg, "coordeq")?;
    let eval = StencilEvaluator::new(&sb.field, &sb.set, cfg.tolerance())?;
    let coarse = compute_z(&eval, h)?;
    let fine = compute_z(&eval, 0.5 * h)?;
    let ratio = coarse.consistency_norm() / fine.consistency_norm();
    let doc = json!({
        "anchor": point_json(&sb.set.a),
        "h": h,
        "z1": cx_matrix(&fine.z1),
        "z2": cx_matrix(&fine.z2),
        "consistency_norm": [coarse.consistency_norm(), fine.consistency_norm()],
        "consistency_ratio": ratio,
        "z_change_under_halving": frobenius(&(coarse.z1 - fine.z1)).max(frobenius(&(coarse.z2 - fine.z2))),
        "defining_residual": fine.defining_residual,
    });
    Ok(Report { file_name: "coordeq.json", body: to_json(&doc), checks_passed: (3.0..5.0).contains(&ratio) })
}

fn surface_info(cfg: &RunConfig) -> Result<Report, CliError> {
    let surface = match cfg.problem {
        Problem::Strip => sommerfeld::surface::build_strip_surface(cfg.a)?,
        Problem::HalfLine => sommerfeld::surface::build_halfline_surface(),
    };
    let perms = (0..surface.branch_points.len())
        .map(|j| surface.loop_permutation(j))
        .collect::<Result<Vec<_>, _>>()?;
    let doc = json!({ "surface": surface, "loop_permutations": perms });
    Ok(Report { file_name: "surface.json", body: to_json(&doc), checks_passed: true })
}

/// Runs one subcommand and returns its document.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = RunConfig::resolve(&cli.config)?;
    match &cli.command {
        Command::Solve => solve(&cfg),
        Command::Field { bbox, nx, ny, sheet } => field_grid(&cfg, bbox, *nx, *ny, *sheet),
        Command::Basis => basis(&cfg),
        Command::Continue { word } => continue_cmd(&cfg, word),
        Command::Monodromy => monodromy(&cfg),
        Command::Coordeq { h } => coordeq(&cfg, *h),
        Command::Surface { what: SurfaceCommand::Info } => surface_info(&cfg),
    }
}

/// Writes the report to `out/<file>` or stdout, and returns the exit code.
pub fn emit(report: &Report, out: Option<&Path>) -> Result<u8, CliError> {
    match out {
        Some(dir) => {
            let fail = |e: std::io::Error| CliError::Validation(format!("invalid `out` {}: {e}", dir.display()));
            std::fs::create_dir_all(dir).map_err(fail)?;
            let path = dir.join(report.file_name);
            std::fs::write(&path, &report.body).map_err(fail)?;
            println!("{}", path.display());
        }
        None => print!("{}", report.body),
    }
    Ok(report.exit_code())
}
