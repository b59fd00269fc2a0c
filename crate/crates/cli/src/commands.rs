use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use texradon::formats::{read_polefig, read_so3coef, write_polefig, write_so3coef};
use texradon::goniometry::{default_grid, equal_angle_grid, radon_figure};
use texradon::limits::check_bandlimit;
use texradon::{
    even_projector, invert_backprojection, make_odf, pole_figure, reconstruct_even,
    s2s2_synthesize, so3_quadrature, so3_synthesize, EulerZYZ, HarmonicCoeffsSO3, OdfModel,
    PoleFigureGrid, Rotation, UnitVector,
};

use crate::config::{parse_triple, ConfigFile};
use crate::error::{io_error, CliError, CliResult};
use crate::{GenArgs, GridKind, InvertArgs, Method, Model, ProjectArgs};

const NONNEGATIVITY_TOLERANCE: f64 = 1e-8;
const NORMALIZATION_TOLERANCE: f64 = 1e-10;
const RANDOM_PROBES: usize = 2000;

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_error(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> CliResult<()> {
    w.flush().map_err(|e| io_error(path, e))
}

pub fn load_coefficients(path: &Path) -> CliResult<HarmonicCoeffsSO3> {
    let f = File::open(path).map_err(|e| io_error(path, e))?;
    read_so3coef(BufReader::new(f)).map_err(|e| CliError::from(e).in_file(path))
}

pub fn save_coefficients(path: &Path, c: &HarmonicCoeffsSO3) -> CliResult<()> {
    let mut w = create(path)?;
    write_so3coef(&mut w, c)?;
    finish(path, w)
}

fn load_polefig(path: &Path) -> CliResult<PoleFigureGrid> {
    let f = File::open(path).map_err(|e| io_error(path, e))?;
    read_polefig(BufReader::new(f)).map_err(|e| CliError::from(e).in_file(path))
}

fn direction(s: &str) -> CliResult<UnitVector> {
    let [x, y, z] = parse_triple(s).map_err(CliError::Validation)?;
    UnitVector::new(x, y, z).map_err(|e| CliError::Validation(format!("direction {s:?}: {e}")))
}

fn report_check(name: &str, pass: bool, metric: f64, tolerance: f64) -> bool {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("check {name} {status} {metric:.6e} {tolerance:.1e}");
    pass
}

pub fn gen(a: &GenArgs, cfg: &ConfigFile) -> CliResult<()> {
    let model = cfg.pick_enum(a.model, "model", Model::Uniform)?;
    let lmax = cfg.pick(a.bandlimit, "L", 8)?;
    check_bandlimit(lmax)?;
    let center = cfg.pick(a.center.clone(), "center", "0,0,0".to_string())?;
    let [alpha, beta, gamma] = parse_triple(&center).map_err(CliError::Validation)?;
    let kappa = cfg.pick(a.kappa, "kappa", 10.0)?;
    let seed = cfg.pick(a.seed, "seed", 7)?;
    let out = cfg.pick(a.out.clone(), "out", PathBuf::from("odf.so3coef"))?;

    let center = Rotation::from_euler(&EulerZYZ::new(alpha, beta, gamma));
    let spec = match model {
        Model::Uniform => OdfModel::uniform(lmax),
        Model::Unimodal => OdfModel::unimodal(center, kappa, lmax),
    };
    let c = make_odf(&spec)?;
    save_coefficients(&out, &c)?;

    let c = load_coefficients(&out)?;
    let nonzero = c.iter().filter(|t| t.3.norm() > 0.0).count();
    println!(
        "wrote {} (L={lmax}, {nonzero} nonzero coefficients)",
        out.display()
    );

    let rule = so3_quadrature(lmax.max(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut minimum = f64::INFINITY;
    let mut integral = 0.0;
    for (e, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = so3_synthesize(&c, &Rotation::from_euler(e)).re;
        minimum = minimum.min(v);
        integral += w * v;
    }
    for _ in 0..RANDOM_PROBES {
        minimum = minimum.min(so3_synthesize(&c, &Rotation::random(&mut rng)).re);
    }
    let mut ok = report_check(
        "nonnegativity",
        minimum >= -NONNEGATIVITY_TOLERANCE,
        minimum,
        -NONNEGATIVITY_TOLERANCE,
    );
    ok &= report_check(
        "normalization",
        (integral - 1.0).abs() <= NORMALIZATION_TOLERANCE,
        (integral - 1.0).abs(),
        NORMALIZATION_TOLERANCE,
    );
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed(1))
    }
}

/// Product grid with its row/column layout for matrix dumps.
struct Grid {
    points: Vec<UnitVector>,
    n_theta: usize,
    n_phi: usize,
}

fn write_matrix(path: &Path, grid: &Grid, pf: &PoleFigureGrid) -> CliResult<()> {
    let mut w = create(path)?;
    let io = |e| io_error(path, e);
    // gnuplot `nonuniform matrix`: first row holds the column coordinates
    // (phi), each following row starts with its theta.
    write!(w, "{}", grid.n_phi).map_err(io)?;
    for j in 0..grid.n_phi {
        write!(w, " {:.16e}", grid.points[j].to_spherical().1).map_err(io)?;
    }
    writeln!(w).map_err(io)?;
    for i in 0..grid.n_theta {
        let row = i * grid.n_phi;
        write!(w, "{:.16e}", grid.points[row].to_spherical().0).map_err(io)?;
        for v in &pf.values[row..row + grid.n_phi] {
            write!(w, " {v:.16e}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    finish(path, w)
}

pub fn project(a: &ProjectArgs, cfg: &ConfigFile) -> CliResult<()> {
    let coef = cfg
        .pick_opt(a.coef.clone(), "coef")?
        .ok_or_else(|| CliError::Validation("project needs --coef <file>".into()))?;
    let c = load_coefficients(&coef)?;
    let lmax = c.bandlimit();
    if let Some(expected) = cfg.pick_opt(a.bandlimit, "L")? {
        if expected != lmax {
            return Err(CliError::Validation(format!(
                "band-limit mismatch: {} has L={lmax}, expected L={expected}",
                coef.display()
            )));
        }
    }
    let hs: Vec<String> = if a.h.is_empty() {
        cfg.raw("h")
            .map(|v| v.split(';').map(str::to_string).collect())
            .unwrap_or_default()
    } else {
        a.h.clone()
    };
    if hs.is_empty() {
        return Err(CliError::Validation(
            "project needs at least one --h x,y,z".into(),
        ));
    }
    let hs = hs
        .iter()
        .map(|s| direction(s))
        .collect::<CliResult<Vec<_>>>()?;

    let grid = match cfg.pick_enum(a.grid, "grid", GridKind::Gauss)? {
        GridKind::Gauss => Grid {
            points: default_grid(lmax).0,
            n_theta: lmax + 1,
            n_phi: 2 * lmax + 2,
        },
        GridKind::Lattice => {
            let n_theta = cfg.pick(a.n_theta, "n_theta", 18)?;
            let n_phi = cfg.pick(a.n_phi, "n_phi", 36)?;
            if n_theta == 0 || n_phi == 0 {
                return Err(CliError::Validation("grid sizes must be positive".into()));
            }
            Grid {
                points: equal_angle_grid(n_theta, n_phi),
                n_theta,
                n_phi,
            }
        }
    };
    let out_dir = cfg.pick(a.out_dir.clone(), "out_dir", PathBuf::from("."))?;
    let prefix = cfg.pick(a.prefix.clone(), "prefix", "pf".to_string())?;
    let matrix = cfg.switch(a.matrix, "matrix")?;
    let raw = cfg.switch(a.raw_radon, "raw_radon")?;
    std::fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;

    for (k, h) in hs.iter().enumerate() {
        let pf = if raw {
            radon_figure(&c, h, &grid.points)?
        } else {
            pole_figure(&c, h, &grid.points)?
        };
        let path = out_dir.join(format!("{prefix}_{k}.polefig"));
        let mut w = create(&path)?;
        write_polefig(&mut w, &pf)?;
        finish(&path, w)?;
        if matrix {
            write_matrix(&out_dir.join(format!("{prefix}_{k}.matrix")), &grid, &pf)?;
        }
        let (r, v) = pf.argmax().expect("grid is non-empty");
        let (theta, phi) = r.to_spherical();
        let [hx, hy, hz] = h.to_array();
        let [x, y, z] = r.to_array();
        println!(
            "{}: h={hx:.6},{hy:.6},{hz:.6} max {v:.10e} at theta={theta:.6} phi={phi:.6} r={x:.6},{y:.6},{z:.6}",
            path.display()
        );
    }
    Ok(())
}

pub fn invert(a: &InvertArgs, cfg: &ConfigFile) -> CliResult<()> {
    if a.files.is_empty() {
        return Err(CliError::Validation(
            "invert needs at least one pole figure file".into(),
        ));
    }
    let lmax = cfg.pick(a.bandlimit, "L", 8)?;
    check_bandlimit(lmax)?;
    let method = cfg.pick_enum(a.method, "method", Method::Slice)?;
    let out = cfg.pick(a.out.clone(), "out", PathBuf::from("even.so3coef"))?;
    let truth = cfg.pick_opt(a.truth.clone(), "truth")?;
    let report_path = cfg.pick_opt(a.report.clone(), "report")?;

    let pfs = a
        .files
        .iter()
        .map(|p| load_polefig(p))
        .collect::<CliResult<Vec<_>>>()?;
    let rec = reconstruct_even(&pfs, lmax)?;
    let coeffs = match method {
        Method::Slice => rec.coeffs.clone(),
        Method::Backprojection => even_projector(&invert_backprojection(
            |h: &UnitVector, r: &UnitVector| s2s2_synthesize(&rec.pair, h, r),
            lmax,
        )?),
    };
    save_coefficients(&out, &coeffs)?;

    let mut report = Vec::new();
    report.push(format!(
        "method {}",
        match method {
            Method::Slice => "slice",
            Method::Backprojection => "backprojection",
        }
    ));
    report.push(format!("bandlimit {lmax}"));
    report.push(format!("pole_figures {}", pfs.len()));
    for (p, r) in a.files.iter().zip(&rec.residuals) {
        report.push(format!("residual {} {r:.6e}", p.display()));
    }
    for (p, c) in a.files.iter().zip(&rec.grid_condition) {
        report.push(format!("grid_condition {} {c:.6e}", p.display()));
    }
    for (l, c) in &rec.direction_condition {
        report.push(format!("degree_condition {l} {c:.6e}"));
    }
    report.push(format!("condition {:.6e}", rec.condition()));
    if method == Method::Backprojection {
        report.push(format!(
            "slice_difference {:.6e}",
            coeffs.max_abs_diff(&rec.coeffs)
        ));
    }
    if let Some(t) = truth {
        let even = even_projector(&load_coefficients(&t)?);
        report.push(format!(
            "truth_error_max {:.6e}",
            coeffs.max_abs_diff(&even)
        ));
    }
    report.push(format!("wrote {}", out.display()));
    let text = report.join("\n") + "\n";
    print!("{text}");
    if let Some(p) = report_path {
        std::fs::write(&p, &text).map_err(|e| io_error(&p, e))?;
    }
    Ok(())
}
