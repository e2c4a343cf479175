//! Regenerates every published example and tabulates computed against
//! published constants.
//!
//! Constants are compared in magnitude; a sign disagreement is flagged in
//! its own column and does not fail the run.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;

use wronskia::geometry::{
    affine_map, certify_with_surfaces, cyclic_map, surface_residual, Surface,
};
use wronskia::reduction::SeedKind;
use wronskia::{FamilySpec, Grid};

use crate::{
    family_curve, reduce_curve, resolve_tol, to_json, CliError, Reference, ReproArgs, EXIT_FAIL,
    EXIT_PASS,
};

#[derive(Debug, Clone, Copy)]
pub enum Source {
    Family(FamilySpec),
    Reduce { seed: SeedKind, delta: f64 },
}

#[derive(Debug, Clone)]
pub struct Case {
    pub name: &'static str,
    pub source: Source,
    pub interval: (f64, f64),
    pub w_published: Option<f64>,
    pub alpha_published: Option<f64>,
    pub surfaces: Vec<Surface>,
    /// Surface the curve should lie on after the coordinate cycle.
    pub cycled_surface: Option<Surface>,
}

pub fn cases() -> Vec<Case> {
    let s3 = 3f64.sqrt();
    let family = |name, spec: FamilySpec, w: f64| Case {
        name,
        source: Source::Family(spec),
        interval: spec.default_interval(),
        w_published: Some(w),
        alpha_published: None,
        surfaces: vec![],
        cycled_surface: None,
    };
    let exp_trig =
        |name, delta: f64| family(name, FamilySpec::ExpTrig { delta }, -1.5 * s3 * delta);
    vec![
        Case {
            alpha_published: Some(-2.0 * s3 / 9.0),
            surfaces: vec![Surface::XRevolution],
            cycled_surface: Some(Surface::ZRevolution),
            ..exp_trig("exp-trig-delta1", 1.0)
        },
        exp_trig("exp-trig-delta-1", -1.0),
        exp_trig("exp-trig-delta8", 8.0),
        family(
            "cubic-distinct-1-2",
            FamilySpec::CubicDistinct { v1: 1.0, v2: 2.0 },
            20.0,
        ),
        family(
            "cubic-repeated-1",
            FamilySpec::CubicRepeated { v1: 1.0 },
            9.0,
        ),
        family(
            "cubic-complex-1-2",
            FamilySpec::CubicComplex { m: 1.0, n: 2.0 },
            26.0,
        ),
        Case {
            alpha_published: Some(PI),
            ..family("airy-delta1", FamilySpec::Airy { delta: 1.0 }, -1.0 / PI)
        },
        Case {
            interval: (-1.5, 1.5),
            alpha_published: Some(4.0 * PI),
            ..family("airy-delta8", FamilySpec::Airy { delta: 8.0 }, -2.0 / PI)
        },
        Case {
            alpha_published: Some(0.5),
            surfaces: vec![Surface::YzQuadric],
            ..family("example4", FamilySpec::Quadric, 6.75)
        },
        Case {
            name: "reduce-power-1.5",
            source: Source::Reduce {
                seed: SeedKind::Power(-1.5),
                delta: -27.0 / 8.0,
            },
            interval: (1.1, 5.0),
            w_published: Some(6.75),
            alpha_published: Some(0.5),
            surfaces: vec![Surface::YzQuadric],
            cycled_surface: None,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub case: String,
    pub quantity: String,
    pub computed: f64,
    pub published: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub sign_matches: bool,
    pub within_tol: bool,
    /// `rel_err` on a grid with half as many intervals.
    pub rel_err_half: f64,
}

pub struct CaseOutput {
    pub csv: String,
    pub report: String,
    /// `(quantity, computed, published)`; a zero published value marks a residual.
    pub values: Vec<(String, f64, f64)>,
}

pub fn run_case(case: &Case, n: usize, tol: f64) -> Result<CaseOutput, CliError> {
    let grid = Grid::uniform(case.interval.0, case.interval.1, n)?;
    let (curve, report, mut values) = match case.source {
        Source::Family(spec) => {
            let curve = family_curve(&spec, &grid)?;
            let report = certify_with_surfaces(&curve, Some(spec.delta()), tol, &case.surfaces);
            let json = to_json(&report);
            (curve, json, vec![report_values(&report, case)])
        }
        Source::Reduce { seed, delta } => {
            let (curve, report) =
                reduce_curve(seed, delta, &grid, Reference::Auto, &case.surfaces, tol)?;
            let mut v = vec![report_values(&report.certificate, case)];
            if let Some(fit) = &report.basis_fit {
                v.push(vec![("basis_fit".to_string(), fit.residual, 0.0)]);
            }
            (curve, to_json(&report), v)
        }
    };
    if let Some(s) = case.cycled_surface {
        let cycled = affine_map(&curve, &cyclic_map())?;
        values.push(vec![(
            format!("cycled:{}", s.name()),
            surface_residual(&cycled, s),
            0.0,
        )]);
    }
    Ok(CaseOutput {
        csv: crate::csv::write_curve(&curve, true),
        report,
        values: values.into_iter().flatten().collect(),
    })
}

fn report_values(r: &wronskia::TzitzeicaReport, case: &Case) -> Vec<(String, f64, f64)> {
    let mut v = Vec::new();
    if let Some(w) = case.w_published {
        v.push(("W".to_string(), r.w0, w));
    }
    if let Some(a) = case.alpha_published {
        v.push(("alpha".to_string(), r.alpha_est.unwrap_or(f64::NAN), a));
    }
    for (name, res) in &r.surface_residuals {
        v.push((format!("surface:{name}"), *res, 0.0));
    }
    v
}

fn compare(computed: f64, published: f64) -> (f64, f64, bool) {
    if published == 0.0 {
        let e = computed.abs();
        return (e, e, true);
    }
    let abs_err = (computed.abs() - published.abs()).abs();
    (
        abs_err,
        abs_err / published.abs(),
        computed.signum() == published.signum(),
    )
}

pub fn summarize(case: &Case, fine: &CaseOutput, half: &CaseOutput, tol: f64) -> Vec<SummaryRow> {
    fine.values
        .iter()
        .zip(&half.values)
        .map(|((q, c, p), (_, ch, _))| {
            let (abs_err, rel_err, sign_matches) = compare(*c, *p);
            SummaryRow {
                case: case.name.to_string(),
                quantity: q.clone(),
                computed: *c,
                published: *p,
                abs_err,
                rel_err,
                sign_matches,
                within_tol: rel_err < tol,
                rel_err_half: compare(*ch, *p).1,
            }
        })
        .collect()
}

pub const SUMMARY_HEADER: &str =
    "case,quantity,computed,published,abs_err,rel_err,sign_matches,within_tol,rel_err_half_grid";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(
            s,
            "{},{},{:?},{:?},{:?},{:?},{},{},{:?}",
            r.case,
            r.quantity,
            r.computed,
            r.published,
            r.abs_err,
            r.rel_err,
            r.sign_matches,
            r.within_tol,
            r.rel_err_half
        )
        .unwrap();
    }
    s
}

pub fn cmd_repro(
    args: &ReproArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let tol = resolve_tol(args.tol)?;
    if args.points < 9 {
        return Err(CliError::usage("repro needs --n of at least 9"));
    }
    let half = (args.points - 1) / 2 + 1;
    fs::create_dir_all(&args.outdir).map_err(|e| CliError::io(&args.outdir, e))?;
    let mut rows = Vec::new();
    for case in cases() {
        let fine = run_case(&case, args.points, tol)?;
        let coarse = run_case(&case, half, tol)?;
        for (ext, text) in [("csv", &fine.csv), ("json", &fine.report)] {
            let path = args.outdir.join(format!("{}.{ext}", case.name));
            fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        }
        rows.extend(summarize(&case, &fine, &coarse, tol));
    }
    let table = summary_csv(&rows);
    let path = args.outdir.join("summary.csv");
    fs::write(&path, &table).map_err(|e| CliError::io(&path, e))?;
    out.write_all(table.as_bytes())
        .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))?;
    for r in rows.iter().filter(|r| !r.sign_matches) {
        let _ = writeln!(
            err,
            "note: {} {} has sign opposite to the published value ({:?} vs {:?})",
            r.case, r.quantity, r.computed, r.published
        );
    }
    Ok(if rows.iter().all(|r| r.within_tol) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}
