//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs under `cargo test` with its own harness so the output stays readable.
//! A criterion listed in `KNOWN_RED` prints FAIL without failing the run, as
//! long as it fails in exactly the documented way.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lightcone::catalog;
use lightcone::classify::{classify, Category, Kind};
use lightcone::curvature::{
    bounded_principal_check, curvature_packet, modified_normal, singular_curvatures,
    singular_zero_equivalences, BoundedPrincipalReport,
};
use lightcone::limits::{limit_along, ApproachPath, LimitVerdict, Quantity, Verdict};
use lightcone::minkowski::{det3, pseudo_dot, wedge, LVec3};
use lightcone::surface::{Domain, ScalarField, SurfaceDef};
use lightcone::trace::trace_zero_set;

/// Criteria expected to stay red, with the check that pins the failure mode.
const KNOWN_RED: &[usize] = &[6];

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
    /// For known-red criteria: whether the failure matches the documented defect.
    defect_confirmed: Option<bool>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn rel1(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn vrel(a: LVec3, b: LVec3) -> f64 {
    (a - b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

fn sphere_sample_u() -> Vec<f64> {
    (0..=16).map(|k| -FRAC_PI_2 + PI * k as f64 / 16.0).collect()
}

fn sixteen_v() -> Vec<f64> {
    (0..16).map(|k| 2.0 * PI * k as f64 / 16.0).collect()
}

fn criterion_1() -> Criterion {
    let s = catalog::sphere();
    let mut c = Criterion::default();
    let (mut g, mut f, mut forms, mut normal) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &u in &sphere_sample_u() {
        for &v in &sixteen_v() {
            let i = s.basic_invariants_at(u, v).unwrap();
            let (su, cu) = u.sin_cos();
            for (x, y) in [
                (i.a1, 0.5 * (cu - su)),
                (i.b1, 0.5 * (cu + su)),
                (i.c1, 0.0),
                (i.c2, -cu),
                (i.a2, 0.0),
                (i.b2, 0.0),
            ] {
                g = g.max((x - y).abs());
            }
            for (x, y) in [(i.e1, 0.0), (i.f1, 0.0), (i.g1, 0.0), (i.e2, 0.0), (i.f2, 0.5), (i.g2, -0.5)] {
                f = f.max((x - y).abs());
            }
            let p = curvature_packet(&s, u, v).unwrap();
            for (x, y) in [
                (p.forms.lambda_til, -(2.0 * u).cos()),
                (p.forms.ktil, -cu),
                (p.forms.htil, -su * su * cu),
            ] {
                forms = forms.max((x - y).abs());
            }
            let n = modified_normal(&s, u, v).unwrap();
            normal = normal.max((n - LVec3::new(su, -cu * v.sin(), -cu * v.cos())).max_abs());
        }
    }
    c.check("basic invariants G", g <= 1e-10, format!("max err {g:.2e}"));
    c.check("frame invariants F1 F2", f <= 1e-10, format!("max err {f:.2e}"));
    c.check("l~ K~ H~ closed forms", forms <= 1e-9, format!("max err {forms:.2e}"));
    c.check("modified normal", normal <= 1e-9, format!("max err {normal:.2e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut ek, mut eh, mut n) = (0.0f64, 0.0f64, 0);
    while n < 200 {
        let u: f64 = rng.gen_range(-1.5..1.5);
        let v = rng.gen_range(0.0..2.0 * PI);
        if (2.0 * u).cos().abs() < 1e-2 {
            continue;
        }
        n += 1;
        let p = curvature_packet(&s, u, v).unwrap();
        let sec = 1.0 / (2.0 * u).cos();
        ek = ek.max(rel(p.k.unwrap(), sec * sec));
        eh = eh.max(rel(p.h.unwrap(), u.sin().powi(2) * sec.abs().powf(1.5)));
    }
    c.check("K = sec^2 2u", ek <= 1e-8, format!("200 points, max rel {ek:.2e}"));
    c.check("H = sin^2 u |sec 2u|^1.5", eh <= 1e-8, format!("200 points, max rel {eh:.2e}"));
    c
}

fn criterion_2() -> Criterion {
    let s = catalog::sphere();
    let mut c = Criterion::default();
    let mut worst = [0.0f64; 8];
    let mut class_ok = true;
    let mut class_seen = String::new();
    for &u in &[FRAC_PI_2, -FRAC_PI_2] {
        for &v in &sixteen_v() {
            let p = curvature_packet(&s, u, v).unwrap();
            let sc = singular_curvatures(&s, u, v).unwrap();
            let i = s.basic_invariants_at(u, v).unwrap();
            let k1 = p.kappa_til_1.value().unwrap_or(f64::NAN);
            let errs = [
                p.forms.ktil.abs(),
                p.forms.htil.abs(),
                (k1 - 0.5).abs(),
                (sc.kappa_v_til - 1.0).abs(),
                sc.mu_c_til.abs(),
                sc.mu_pi_til.abs(),
                // c2 = -cos u, so c2u = sin u = +-1 at u = +-pi/2
                (i.c2u - u.signum()).abs(),
                i.c2v.abs(),
            ];
            for (w, e) in worst.iter_mut().zip(errs) {
                *w = w.max(if e.is_nan() { f64::INFINITY } else { e });
            }
            let cl = classify(&s, u, v, 1e-9).unwrap();
            let ok = cl.category == Category::Singular1
                && cl.degenerate == Some(false)
                && cl.kind == Some(Kind::SecondKind);
            if !ok {
                class_seen = cl.to_string();
            }
            class_ok &= ok;
        }
    }
    let names = [
        ("K~ = 0", 1e-10),
        ("H~ = 0", 1e-10),
        ("kappa~_1 = 0.5", 1e-3),
        ("kappa~_v = 1", 1e-8),
        ("mu~_c = 0", 1e-10),
        ("mu~_Pi = 0", 1e-10),
        ("c2u = +-1", 1e-8),
        ("c2v = 0", 1e-10),
    ];
    for ((name, tol), w) in names.into_iter().zip(worst) {
        c.check(name, w <= tol, format!("max err {w:.2e} (tol {tol:e})"));
    }
    c.check(
        "non-degenerate Singular1 of second kind",
        class_ok,
        if class_ok { "32 points".to_string() } else { class_seen },
    );
    c
}

/// The limit verdicts of criterion 3, reused by criterion 8.
fn limit_suite() -> (Vec<(String, LimitVerdict)>, f64) {
    let s = catalog::sphere();
    let start = Instant::now();
    let mut out = Vec::new();
    for &v in &[0.0, 1.0, 2.5, 4.0] {
        for (u, dir) in [(FRAC_PI_2, -1.0), (-FRAC_PI_2, 1.0), (FRAC_PI_4, -1.0), (FRAC_PI_4, 1.0)] {
            for q in [Quantity::K, Quantity::H] {
                let path = ApproachPath::new((u, v), (dir, 0.0));
                let lv = limit_along(&s, &path, q).unwrap();
                out.push((format!("{q} at ({u:.4}, {v}) dir {dir}"), lv));
            }
        }
    }
    (out, start.elapsed().as_secs_f64())
}

fn criterion_3(verdicts: &[(String, LimitVerdict)], secs: f64) -> Criterion {
    let mut c = Criterion::default();
    let mut pole = (true, String::new());
    let mut lightlike = (true, String::new());
    for (label, lv) in verdicts {
        let u = lv.path.target.0;
        if (u.abs() - FRAC_PI_2).abs() < 1e-12 {
            let ok = matches!(lv.verdict, Verdict::NonzeroLimit(x) if (x - 1.0).abs() <= 1e-4);
            if !ok {
                pole = (false, format!("{label}: {}", lv.verdict));
            }
        } else {
            let ok = lv.verdict == Verdict::Unbounded;
            if !ok {
                lightlike = (false, format!("{label}: {}", lv.verdict));
            }
        }
    }
    c.check("K, H -> 1 at u = +-pi/2", pole.0, pole.1);
    c.check("K, H unbounded at u = pi/4", lightlike.0, lightlike.1);
    c.check("runtime < 5 s", secs < 5.0, format!("{secs:.2} s for {} paths", verdicts.len()));
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let s = catalog::sphere();
    let lines = trace_zero_set(&s, ScalarField::LambdaTil, 64, 64, 1e-12).unwrap();
    let dev = |lines: &[lightcone::trace::LocusPolyline], t: f64| {
        lines
            .iter()
            .flat_map(|l| &l.points)
            .map(|&(u, _)| (u.abs() - t).abs())
            .fold(0.0, f64::max)
    };
    let d = dev(&lines, FRAC_PI_4);
    let both_sides = lines.iter().any(|l| l.points[0].0 > 0.0) && lines.iter().any(|l| l.points[0].0 < 0.0);
    c.check(
        "l~ = 0 is two polylines at u = +-pi/4",
        lines.len() == 2 && both_sides && d <= 1e-6,
        format!("{} polylines, max dev {d:.2e}", lines.len()),
    );
    let wide = s.with_domain(Domain::new((-1.6, 1.6), (0.0, 2.0 * PI)).unwrap());
    let lines = trace_zero_set(&wide, ScalarField::C2, 64, 64, 1e-12).unwrap();
    let d = dev(&lines, FRAC_PI_2);
    c.check(
        "c2 = 0 at u = +-pi/2 on enlarged domain",
        lines.len() == 2 && d <= 1e-6,
        format!("{} polylines, max dev {d:.2e}", lines.len()),
    );
    c
}

fn random_vec(rng: &mut ChaCha8Rng) -> LVec3 {
    LVec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Random points of a surface's domain.
fn domain_points(s: &SurfaceDef, n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let d = s.domain();
    (0..n)
        .map(|_| (rng.gen_range(d.u.0..d.u.1), rng.gen_range(d.v.0..d.v.1)))
        .collect()
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut tp, mut dw, mut lg) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (a, b, x, y) = (random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng));
        tp = tp.max(rel1(pseudo_dot(&wedge(&a, &b), &x), det3(&a, &b, &x)));
        let lhs = wedge(&wedge(&a, &b), &x);
        let rhs = pseudo_dot(&b, &x) * a - pseudo_dot(&a, &x) * b;
        dw = dw.max(vrel(lhs, rhs));
        let l = pseudo_dot(&wedge(&a, &b), &wedge(&x, &y));
        let r = pseudo_dot(&a, &y) * pseudo_dot(&b, &x) - pseudo_dot(&a, &x) * pseudo_dot(&b, &y);
        lg = lg.max(rel1(l, r));
    }
    c.check("triple product", tp <= 1e-10, format!("1000 triples, max rel {tp:.2e}"));
    c.check("double wedge", dw <= 1e-10, format!("max rel {dw:.2e}"));
    c.check("Lagrange", lg <= 1e-10, format!("max rel {lg:.2e}"));

    let (mut ode, mut recon, mut lam) = (0.0f64, 0.0f64, 0.0f64);
    let h = 1e-5;
    for name in catalog::NAMES {
        let s = catalog::by_name(name).unwrap();
        let d = s.domain();
        let shrunk = Domain::new((d.u.0 + 2.0 * h, d.u.1 - 2.0 * h), d.v).unwrap();
        let s = s.with_domain(shrunk);
        for (u, v) in domain_points(&s, 200, &mut rng) {
            let i = s.basic_invariants_at(u, v).unwrap();
            let fr = s.frame_at(u, v).unwrap();
            let (vv, ww, mm) = (fr.v, fr.w, fr.m);
            let fd = |du: f64, dv: f64| {
                let p = s.frame_at(u + du, v + dv).unwrap();
                let q = s.frame_at(u - du, v - dv).unwrap();
                [(p.v - q.v) / (2.0 * h), (p.w - q.w) / (2.0 * h), (p.m - q.m) / (2.0 * h)]
            };
            let [v_u, w_u, m_u] = fd(h, 0.0);
            let [v_v, w_v, m_v] = fd(0.0, h);
            let pred = [
                (v_u, i.e1 * vv + 2.0 * i.g1 * mm),
                (w_u, -i.e1 * ww + 2.0 * i.f1 * mm),
                (m_u, i.f1 * vv + i.g1 * ww),
                (v_v, i.e2 * vv + 2.0 * i.g2 * mm),
                (w_v, -i.e2 * ww + 2.0 * i.f2 * mm),
                (m_v, i.f2 * vv + i.g2 * ww),
            ];
            for (a, b) in pred {
                ode = ode.max(vrel(a, b));
            }
            let j = s.jet_at(u, v).unwrap();
            recon = recon.max(vrel(j.x_u, i.a1 * vv + i.b1 * ww + i.c1 * mm));
            recon = recon.max(vrel(j.x_v, i.a2 * vv + i.b2 * ww + i.c2 * mm));
            let n = modified_normal(&s, u, v).unwrap();
            lam = lam.max(rel1(i.lambda_til(), -pseudo_dot(&n, &n)));
        }
    }
    c.check("frame ODE by finite differences", ode <= 1e-6, format!("1000 points, max rel {ode:.2e}"));
    c.check("X_u, X_v reconstruction", recon <= 1e-9, format!("max rel {recon:.2e}"));
    c.check("l~ = -4 a1 b1 = -<n~, n~>", lam <= 1e-10, format!("max rel {lam:.2e}"));
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let surfaces = [catalog::twisted(), catalog::ruffle(), catalog::cubic_cone()];
    let (mut ek, mut eh, mut el) = (0.0f64, 0.0f64, 0.0f64);
    let (mut prod, mut sum) = (0.0f64, 0.0f64);
    let (mut signed_prod, mut signed_sum) = (0.0f64, 0.0f64);
    let (mut spacelike_err, mut timelike, mut n) = (0.0f64, 0usize, 0usize);
    while n < 1000 {
        let s = &surfaces[n % 3];
        let (u, v) = domain_points(s, 1, &mut rng)[0];
        let p = curvature_packet(s, u, v).unwrap();
        if !p.is_regular() || p.c2.abs() < 1e-3 || p.forms.lambda_til.abs() < 1e-3 {
            continue;
        }
        let Some(kappa) = p.kappa else { continue };
        n += 1;
        let (k, h) = (p.k.unwrap(), p.h.unwrap());
        let l = p.forms.lambda_til;
        ek = ek.max(rel(k * p.c2 * l.abs().powi(2), p.forms.ktil));
        eh = eh.max(rel(h * p.c2 * l.abs().powf(1.5), p.forms.htil));
        let j = s.jet_at(u, v).unwrap();
        el = el.max(rel1(p.forms.ltil, pseudo_dot(&j.x_uu, &p.n_til)));
        let (pr, sm) = (kappa[0] * kappa[1], kappa[0] + kappa[1]);
        let (ep, es) = (rel(pr, k), rel(sm, 2.0 * h));
        prod = prod.max(ep);
        sum = sum.max(es);
        if l < 0.0 {
            timelike += 1;
        } else {
            spacelike_err = spacelike_err.max(ep).max(es);
        }
        signed_prod = signed_prod.max(rel(pr, l.signum() * k));
        signed_sum = signed_sum.max(rel(sm, 2.0 * l.signum() * h));
    }
    c.check("K c2 |l~|^2 = K~", ek <= 1e-8, format!("1000 points, max rel {ek:.2e}"));
    c.check("H c2 |l~|^1.5 = H~", eh <= 1e-8, format!("max rel {eh:.2e}"));
    c.check(
        "kappa_1 kappa_2 = K",
        prod <= 1e-8,
        format!("max rel {prod:.2e}; {timelike} timelike points"),
    );
    c.check("kappa_1 + kappa_2 = 2H", sum <= 1e-8, format!("max rel {sum:.2e}"));
    c.check("L~ = <X_uu, n~>", el <= 1e-8, format!("max rel {el:.2e}"));
    // The real eigenvalues obey product = sign(l~) K and sum = 2 sign(l~) H,
    // so the two unsigned relations cannot hold at timelike points.
    let others_ok = ek <= 1e-8 && eh <= 1e-8 && el <= 1e-8;
    c.defect_confirmed = Some(
        others_ok && timelike > 0 && spacelike_err <= 1e-8 && signed_prod <= 1e-8 && signed_sum <= 1e-8,
    );
    c.check(
        "(diagnostic) signed relations sign(l~) K, 2 sign(l~) H",
        signed_prod <= 1e-8 && signed_sum <= 1e-8,
        format!("max rel {signed_prod:.2e}, {signed_sum:.2e}; spacelike-only max rel {spacelike_err:.2e}"),
    );
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    let (mut first, mut second, mut zero_cases) = (0, 0, 0);
    let mut disagreements = Vec::new();
    let (mut bounded_checked, mut bounded_err) = (0, 0.0f64);
    for &k in &[0.0, 0.4, -0.7, 1.6] {
        for &q in &[0.0, 0.8, -1.3] {
            for &eps in &[0.0, 0.5, -1.2] {
                let s = catalog::singular_model(k, q, eps, 0.3).unwrap();
                let (u, v) = (0.3, 0.0);
                let r = singular_zero_equivalences(&s, u, v, 1e-9).unwrap();
                match r.kind {
                    Kind::FirstKind => first += 1,
                    Kind::SecondKind => second += 1,
                    Kind::Indeterminate => {}
                }
                zero_cases += r.checks.iter().filter(|x| x.both_zero()).count();
                if !r.all_agree() {
                    disagreements.push(format!("k={k} q={q} eps={eps}"));
                }
                if let BoundedPrincipalReport::Checked { kappa_til_1, .. } =
                    bounded_principal_check(&s, u, v, 1e-9).unwrap()
                {
                    let mf = curvature_packet(&s, u, v).unwrap().forms;
                    bounded_checked += 1;
                    bounded_err = bounded_err.max(rel1(kappa_til_1, mf.ltil / mf.etil));
                }
            }
        }
    }
    c.check(
        "zero/nonzero equivalences agree",
        disagreements.is_empty() && first + second >= 20 && first > 0 && second > 0,
        format!(
            "{first} first-kind, {second} second-kind, {zero_cases} zero pairs; disagree: {disagreements:?}"
        ),
    );
    c.check(
        "bounded principal curvature = L~/E~",
        bounded_checked > 0 && bounded_err <= 1e-8,
        format!("{bounded_checked} points, max rel {bounded_err:.2e}"),
    );
    c
}

fn criterion_8(verdicts: &[(String, LimitVerdict)]) -> Criterion {
    let mut c = Criterion::default();
    let mut nonzero = 0;
    let mut bad = Vec::new();
    for (label, lv) in verdicts {
        if let Verdict::NonzeroLimit(_) = lv.verdict {
            nonzero += 1;
            if lv.numerator_order.order != lv.gamma_order.order {
                bad.push(format!("{label}: l={} m={}", lv.numerator_order.order, lv.gamma_order.order));
            }
        }
    }
    c.check("l = m for nonzero limits", nonzero > 0 && bad.is_empty(), format!("{nonzero} verdicts {bad:?}"));

    let mut zero = 0;
    let mut bad = Vec::new();
    for (s, (u, v)) in [(catalog::cubic_cone(), (0.0, 1.0)), (catalog::flat_front(), (0.0, 0.0))] {
        for dir in [(1.0, 0.0), (-1.0, 0.0), (1.0, 1.0)] {
            for q in [Quantity::K, Quantity::H] {
                let lv = limit_along(&s, &ApproachPath::new((u, v), dir), q).unwrap();
                if lv.verdict != Verdict::ZeroLimit {
                    bad.push(format!("{} {q} {dir:?}: {}", s.name(), lv.verdict));
                    continue;
                }
                zero += 1;
                let (l, m) = (lv.numerator_order.order.as_f64(), lv.gamma_order.order.as_f64());
                if l <= m {
                    bad.push(format!("{} {q} {dir:?}: l={l} m={m}", s.name()));
                }
            }
        }
    }
    c.check("l > m for zero limits", zero == 12 && bad.is_empty(), format!("{zero} verdicts {bad:?}"));
    c
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (verdicts, secs) = limit_suite();
    let criteria = [
        (1, "sphere reference values", criterion_1()),
        (2, "sphere singular points", criterion_2()),
        (3, "sphere limits", criterion_3(&verdicts, secs)),
        (4, "locus tracing", criterion_4()),
        (5, "algebraic identities", criterion_5()),
        (6, "curvature relations", criterion_6()),
        (7, "singular-point equivalences", criterion_7()),
        (8, "order dichotomy", criterion_8(&verdicts)),
    ];
    let mut unexpected = false;
    for (n, title, c) in &criteria {
        let pass = c.passed();
        let known = KNOWN_RED.contains(n);
        let note = match (pass, known, c.defect_confirmed) {
            (true, true, _) => " (listed as known red but passes)",
            (false, true, Some(true)) => " (known: principal-curvature relations fail at timelike points)",
            (false, true, _) => " (known red, but the failure changed)",
            _ => "",
        };
        println!("criterion {n} {title}: {}{note}", if pass { "PASS" } else { "FAIL" });
        for ch in &c.checks {
            println!("    [{}] {}: {}", if ch.ok { "ok" } else { "FAIL" }, ch.name, ch.detail);
        }
        unexpected |= match (pass, known) {
            (true, false) => false,
            (false, false) => true,
            (true, true) => true,
            (false, true) => c.defect_confirmed != Some(true),
        };
    }
    println!("total {:.2} s", start.elapsed().as_secs_f64());
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
