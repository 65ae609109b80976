//! The sphere pipeline checked against `golden/sphere.golden`.
//!
//! Each reference line is `key expected tolerance`. A key is a quantity name,
//! optionally followed by `@U,V` with constant expressions for the point.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};

use lightcone::catalog;
use lightcone::classify::{classify, classify_grid, line_of_curvature_test, write_classification_csv};
use lightcone::curvature::{curvature_grid, curvature_packet, singular_curvatures, write_curvature_csv};
use lightcone::format::g12;
use lightcone::limits::{limit_along, ApproachPath, Quantity, Verdict};
use lightcone::surface::{validate_framed, Domain, ScalarField, SurfaceDef};
use lightcone::trace::{trace_zero_set, write_trace_csv};

use crate::parse_pair;

pub const GOLDEN: &str = include_str!("../golden/sphere.golden");
const TOL: f64 = 1e-9;

pub struct Outcome {
    pub report: String,
    pub diffs: Vec<String>,
}

enum Expected {
    Exact(String),
    Within(f64, f64),
}

pub fn run(out: Option<&Path>) -> anyhow::Result<Outcome> {
    let s = catalog::sphere();
    let mut report = String::new();
    let mut diffs = Vec::new();
    for (n, line) in GOLDEN.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [key, expected, tol] = fields[..] else {
            bail!("golden line {}: expected `key value tolerance`", n + 1);
        };
        let expected = if tol == "-" {
            Expected::Exact(expected.to_string())
        } else {
            Expected::Within(expected.parse()?, tol.parse()?)
        };
        let got = compute(&s, key).with_context(|| format!("computing {key}"))?;
        let ok = match &expected {
            Expected::Exact(e) => got == *e,
            Expected::Within(e, t) => got
                .parse::<f64>()
                .map(|g| (g - e).abs() <= *t)
                .unwrap_or(false),
        };
        let shown = match &expected {
            Expected::Exact(e) => e.clone(),
            Expected::Within(e, t) => format!("{} +- {}", g12(*e), g12(*t)),
        };
        writeln!(report, "{} {key} = {got}", if ok { "ok  " } else { "FAIL" })?;
        if !ok {
            diffs.push(format!("{key}: expected {shown}, got {got}"));
        }
    }

    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
        let rows = classify_grid(&s, 64, 64, TOL)?;
        write_classification_csv(&rows, fs::File::create(dir.join("classification.csv"))?)?;
        let packets = curvature_grid(&s, 64, 64)?;
        write_curvature_csv(&packets, fs::File::create(dir.join("curvature.csv"))?)?;
        let lines = trace_zero_set(&s, ScalarField::LambdaTil, 64, 64, 1e-12)?;
        write_trace_csv(&lines, fs::File::create(dir.join("trace.csv"))?)?;
        fs::write(dir.join("demo.txt"), &report)?;
    }
    Ok(Outcome { report, diffs })
}

fn compute(s: &SurfaceDef, key: &str) -> anyhow::Result<String> {
    let (name, at) = match key.split_once('@') {
        Some((name, at)) => (name, Some(parse_pair(at).map_err(|e| anyhow!(e))?)),
        None => (key, None),
    };
    let Some((u, v)) = at else {
        return global(s, name);
    };
    let packet = || curvature_packet(s, u, v);
    let fmt_opt = |x: Option<f64>| x.map(g12).unwrap_or_else(|| "undefined".into());
    Ok(match name {
        "lambda_til" => g12(packet()?.forms.lambda_til),
        "Ktil" => g12(packet()?.forms.ktil),
        "Htil" => g12(packet()?.forms.htil),
        "Etil" => g12(packet()?.forms.etil),
        "Ltil" => g12(packet()?.forms.ltil),
        "Mtil" => g12(packet()?.forms.mtil),
        "Ntil" => g12(packet()?.forms.ntil),
        "K" => fmt_opt(packet()?.k),
        "H" => fmt_opt(packet()?.h),
        "kappa_til_1" => fmt_opt(packet()?.kappa_til_1.value()),
        "kappa_v_til" => g12(singular_curvatures(s, u, v)?.kappa_v_til),
        "mu_c_til" => g12(singular_curvatures(s, u, v)?.mu_c_til),
        "mu_Pi_til" => g12(singular_curvatures(s, u, v)?.mu_pi_til),
        "c2u" => g12(s.basic_invariants_at(u, v)?.c2u),
        "c2v" => g12(s.basic_invariants_at(u, v)?.c2v),
        "class" => classify(s, u, v, TOL)?.to_string().replace(' ', "/"),
        "line_of_curvature" => line_of_curvature_test(s, u, v, TOL)?.is_line().to_string(),
        "limit.K" | "limit.H" => {
            let q = if name == "limit.K" { Quantity::K } else { Quantity::H };
            // approach from inside the domain
            let centre = 0.5 * (s.domain().u.0 + s.domain().u.1);
            let dir = if u > centre { -1.0 } else { 1.0 };
            match limit_along(s, &ApproachPath::new((u, v), (dir, 0.0)), q)?.verdict {
                Verdict::NonzeroLimit(x) => g12(x),
                other => format!("{other:?}"),
            }
        }
        _ => bail!("unknown key `{key}`"),
    })
}

fn global(s: &SurfaceDef, name: &str) -> anyhow::Result<String> {
    let max_dev = |lines: &[lightcone::trace::LocusPolyline], target: f64| {
        lines
            .iter()
            .flat_map(|l| l.points.iter())
            .map(|&(u, _)| (u.abs() - target).abs())
            .fold(0.0, f64::max)
    };
    // c2 vanishes on the boundary of the native domain; trace on a wider one
    let wide = || -> anyhow::Result<SurfaceDef> {
        Ok(s.with_domain(Domain::new((-1.6, 1.6), (0.0, 2.0 * PI))?))
    };
    Ok(match name {
        "validate.admitted" => validate_framed(s, 64, 64, 1e-8)?.admitted.to_string(),
        "validate.max_area_residual" => g12(validate_framed(s, 64, 64, 1e-8)?.max_area_residual),
        "trace.lambda_til.polylines" => {
            trace_zero_set(s, ScalarField::LambdaTil, 64, 64, 1e-12)?.len().to_string()
        }
        "trace.lambda_til.max_deviation" => {
            g12(max_dev(&trace_zero_set(s, ScalarField::LambdaTil, 64, 64, 1e-12)?, FRAC_PI_4))
        }
        "trace.c2.polylines" => trace_zero_set(&wide()?, ScalarField::C2, 64, 64, 1e-12)?.len().to_string(),
        "trace.c2.max_deviation" => {
            g12(max_dev(&trace_zero_set(&wide()?, ScalarField::C2, 64, 64, 1e-12)?, FRAC_PI_2))
        }
        _ => bail!("unknown key `{name}`"),
    })
}
