//! Acceptance suite: one line per criterion, nonzero exit if any fails.

// NaN must fail every threshold, hence `!(x < tol)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

type Criterion = (&'static str, fn() -> Outcome);

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use hermicurv::analysis::{
    corollary12_probe, extremal_bisectional, extremal_sectional, lu_inequality_check, LuStatus,
    Mode, Sign, DEFAULT_RESTARTS, DEFAULT_TOL,
};
use hermicurv::connection::{
    chern_torsion, induced_real_connection, real_christoffel, InducedConnectionJet,
};
use hermicurv::curvature::{chern_curvature, complexified_11_direct, PointCurvature};
use hermicurv::dsl::{parse_expr, parse_metric, Wirtinger};
use hermicurv::metric::{compare_jets, fd_oracle_jet, jet_at, CatalogMetric};
use hermicurv::sectional::{
    chern_sectional, chern_wedge_numerator, holo_sectional, identity_suite, riemann_sectional,
    thm11_lhs, Plane,
};
use hermicurv::tangent::{apply_j, to_holomorphic, ChartPoint, HoloTangentVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fd_wirtinger, random_expr, random_vector};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn points(cat: CatalogMetric, n: usize, k: usize, seed: u64) -> Vec<ChartPoint> {
    let mut r = rng(seed);
    (0..k).map(|_| cat.sample_point(n, &mut r)).collect()
}

fn at(cat: CatalogMetric, p: &ChartPoint) -> PointCurvature {
    PointCurvature::at(&cat.definition(p.dim()).unwrap(), p).unwrap()
}

fn flatness() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for p in points(CatalogMetric::Euclidean, n, 5, 1) {
            let pc = at(CatalogMetric::Euclidean, &p);
            worst = worst
                .max(pc.chern.kr.max_abs())
                .max(pc.real.r.max_abs())
                .max(pc.complexified.r.max_abs())
                .max(complexified_11_direct(&pc.jet).max_abs());
        }
    }
    ensure!(worst < 1e-12, "largest curvature entry {worst:e}");
    Ok(format!("max |entry| = {worst:e}"))
}

fn oracle_equivalence() -> Outcome {
    let (mut first, mut second): (f64, f64) = (0.0, 0.0);
    for cat in CatalogMetric::ALL {
        let m = cat.definition(2).unwrap();
        for p in points(cat, 2, 20, 2) {
            let d = compare_jets(&jet_at(&m, &p).unwrap(), &fd_oracle_jet(&m, &p).unwrap());
            first = first.max(d.first);
            second = second.max(d.second);
        }
    }
    ensure!(
        first < 1e-6 && second < 1e-4,
        "first {first:e}, second {second:e}"
    );
    Ok(format!("rel. error first {first:.1e}, second {second:.1e}"))
}

fn direct_block() -> Outcome {
    let mut worst: f64 = 0.0;
    for cat in CatalogMetric::ALL {
        for n in [2, 3] {
            for p in points(cat, n, 10, 3) {
                let pc = at(cat, &p);
                worst = worst
                    .max(complexified_11_direct(&pc.jet).max_abs_diff(&pc.complexified.block_11()));
            }
        }
    }
    ensure!(worst < 1e-6, "max abs diff {worst:e}");
    Ok(format!("max abs diff {worst:.1e}"))
}

fn gray_vanishing() -> Outcome {
    let mut worst: f64 = 0.0;
    for cat in CatalogMetric::ALL {
        for n in [2, 3] {
            for p in points(cat, n, 10, 4) {
                worst = worst.max(at(cat, &p).complexified.gray_residual());
            }
        }
    }
    ensure!(worst < 1e-7, "largest holomorphic-block entry {worst:e}");
    Ok(format!("largest entry {worst:.1e}"))
}

fn kahler_suite() -> Outcome {
    let mut r = rng(5);
    let (mut block, mut kd, mut ident, mut conn, mut tors): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    for cat in [CatalogMetric::FubiniStudy, CatalogMetric::PoincareBall] {
        for p in points(cat, 2, 5, 6) {
            let pc = at(cat, &p);
            block = block.max(pc.complexified.block_11().max_abs_diff(&pc.chern.kr));
            for _ in 0..20 {
                let pl = Plane::new(random_vector(&mut r, 4), random_vector(&mut r, 4)).unwrap();
                let k = riemann_sectional(&pc.real, &pc.rjet.g, &pl).unwrap();
                let d = chern_sectional(&pc.chern, &pc.jet.h, &pl).unwrap();
                kd = kd.max((k - d).abs());
                ident = ident.max(identity_suite(&pc, &pl.u, &pl.v).unwrap().kahler_max());
            }
            let theta = induced_real_connection(&pc.jet).theta_tilde;
            let lc = real_christoffel(&pc.rjet).unwrap().gamma;
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        conn = conn.max((theta[(i, j, k)] - lc[(k, i, j)]).abs());
                    }
                }
            }
            let t = chern_torsion(&induced_real_connection(&pc.jet));
            tors = tors.max(t.iter().map(|x| x.abs()).fold(0.0, f64::max));
        }
    }
    ensure!(block < 1e-7, "R vs KR block {block:e}");
    ensure!(kd < 1e-7, "|K - K_D| {kd:e}");
    ensure!(ident < 1e-7, "Kahler identities {ident:e}");
    ensure!(conn < 1e-8, "D vs Levi-Civita {conn:e}");
    ensure!(tors < 1e-8, "torsion {tors:e}");
    Ok(format!(
        "block {block:.1e}, |K-K_D| {kd:.1e} on 200 planes, identities {ident:.1e}, D-LC {conn:.1e}, torsion {tors:.1e}"
    ))
}

fn theorem_two_sided() -> Outcome {
    let mut r = rng(7);
    let (mut exact, mut fd, mut special): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for cat in CatalogMetric::ALL {
        let m = cat.definition(2).unwrap();
        for p in points(cat, 2, 5, 8) {
            let pc = at(cat, &p);
            let fd_conn = InducedConnectionJet::finite_difference(&m, &p, 1e-5).unwrap();
            for _ in 0..10 {
                let (u, v) = (random_vector(&mut r, 4), random_vector(&mut r, 4));
                let rhs = chern_wedge_numerator(&pc.chern, &u, &v).unwrap();
                let scale = rhs.abs().max(1.0);
                exact = exact.max(
                    (thm11_lhs(&pc.connection, &pc.rjet.g, &u, &v).unwrap() - rhs).abs() / scale,
                );
                fd = fd.max((thm11_lhs(&fd_conn, &pc.rjet.g, &u, &v).unwrap() - rhs).abs() / scale);
                let xi = to_holomorphic(&u);
                let x = xi.comps();
                let holo = 2.0 * pc.chern.contract(x, x, x, x).re;
                let sub = chern_wedge_numerator(&pc.chern, &u, &apply_j(&u)).unwrap();
                special = special.max((sub - holo).abs() / holo.abs().max(1.0));
            }
        }
    }
    ensure!(
        exact < 1e-5 && fd < 1e-5,
        "exact route {exact:e}, difference route {fd:e}"
    );
    ensure!(special < 1e-10, "v = Ju specialization {special:e}");
    Ok(format!(
        "250 pairs: exact route {exact:.1e}, difference route {fd:.1e}, v = Ju {special:.1e}"
    ))
}

fn universal_identities() -> Outcome {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    let mut kahler_only: f64 = 0.0;
    for cat in [CatalogMetric::NkDiag, CatalogMetric::Hopf] {
        for p in points(cat, 2, 5, 10) {
            let pc = at(cat, &p);
            for _ in 0..10 {
                let res = identity_suite(&pc, &random_vector(&mut r, 4), &random_vector(&mut r, 4))
                    .unwrap();
                worst = worst.max(res.universal_max());
                kahler_only = kahler_only.max(res.kahler_sectional.abs());
            }
        }
    }
    ensure!(worst < 1e-6, "residual {worst:e}");
    Ok(format!(
        "100 pairs, residual {worst:.1e} (Kahler-only identity off by up to {kahler_only:.2})"
    ))
}

fn corollary_probe() -> Outcome {
    let nk = CatalogMetric::NkDiag;
    let found =
        corollary12_probe(&nk.definition(2).unwrap(), &points(nk, 2, 4, 11), 250, 1).unwrap();
    ensure!(
        found.max_abs_diff > 1e-3,
        "nk_diag witness only {:e}",
        found.max_abs_diff
    );
    let fs = CatalogMetric::FubiniStudy;
    let none =
        corollary12_probe(&fs.definition(2).unwrap(), &points(fs, 2, 10, 12), 100, 1).unwrap();
    ensure!(
        none.max_abs_diff < 1e-7,
        "fubini_study |K - K_D| {:e}",
        none.max_abs_diff
    );
    Ok(format!(
        "nk_diag witness |K-K_D| = {:.3}, fubini_study max {:.1e} over {} planes",
        found.max_abs_diff, none.max_abs_diff, none.planes_sampled
    ))
}

fn constant_holomorphic_curvature() -> Outcome {
    let mut r = rng(13);
    let mut worst: f64 = 0.0;
    let mut fd_worst: f64 = 0.0;
    for (cat, expected) in [
        (CatalogMetric::FubiniStudy, 2.0),
        (CatalogMetric::PoincareBall, -2.0),
    ] {
        for n in [1, 2] {
            let m = cat.definition(n).unwrap();
            for p in points(cat, n, 6, 14) {
                let kr = chern_curvature(&jet_at(&m, &p).unwrap());
                let fd_jet = fd_oracle_jet(&m, &p).unwrap();
                let fd_kr = chern_curvature(&fd_jet);
                for _ in 0..3 {
                    let xi = HoloTangentVector::new(common::random_point(&mut r, n, 1.0)).unwrap();
                    let h = holo_sectional(&kr, &fd_jet.h, &xi).unwrap();
                    let h_fd = holo_sectional(&fd_kr, &fd_jet.h, &xi).unwrap();
                    worst = worst.max((h - expected).abs() / 2.0);
                    fd_worst = fd_worst.max((h_fd - expected).abs() / 2.0);
                }
            }
        }
    }
    ensure!(worst < 1e-8, "symbolic H off by {worst:e}");
    ensure!(fd_worst < 1e-4, "difference oracle H off by {fd_worst:e}");
    Ok(format!(
        "H = +/-2 to rel. {worst:.1e}; difference oracle agrees to {fd_worst:.1e}"
    ))
}

fn theorem_extremal_sectional() -> Outcome {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut reseed: f64 = 0.0;
    for (cat, mode) in [
        (CatalogMetric::FubiniStudy, Mode::Max),
        (CatalogMetric::PoincareBall, Mode::Min),
    ] {
        let mut pts = vec![ChartPoint::origin(2)];
        pts.extend(points(cat, 2, 2, 15));
        for p in &pts {
            let pc = at(cat, p);
            let a = extremal_sectional(&pc, mode, DEFAULT_RESTARTS, 1, DEFAULT_TOL);
            let b = extremal_sectional(&pc, mode, DEFAULT_RESTARTS, 2, DEFAULT_TOL);
            ensure!(a.hypotheses_hold, "{cat}: hypotheses not met at {p:?}");
            worst_gap = worst_gap.max(a.gap).max(b.gap);
            reseed = reseed
                .max((a.best_value - b.best_value).abs())
                .max((a.holo_best_value - b.holo_best_value).abs());
        }
    }
    ensure!(
        worst_gap <= 1e-4,
        "general plane beats holomorphic by {worst_gap:e}"
    );
    ensure!(reseed < 1e-4, "reseeding moved values by {reseed:e}");
    Ok(format!(
        "worst gap {worst_gap:.1e}, reseed change {reseed:.1e}"
    ))
}

fn theorem_extremal_bisectional() -> Outcome {
    let mut diff: f64 = 0.0;
    let mut alignment: f64 = 1.0;
    for (cat, mode) in [
        (CatalogMetric::FubiniStudy, Mode::Max),
        (CatalogMetric::PoincareBall, Mode::Min),
    ] {
        let mut pts = vec![ChartPoint::origin(2)];
        pts.extend(points(cat, 2, 2, 16));
        for p in &pts {
            let r = extremal_bisectional(&at(cat, p), mode, DEFAULT_RESTARTS, 1, DEFAULT_TOL);
            ensure!(r.hypotheses_hold, "{cat}: hypotheses not met");
            diff = diff.max((r.best_value - r.holo_best_value).abs());
            alignment = alignment.min(r.alignment);
        }
    }
    ensure!(
        diff < 1e-4,
        "B extremum differs from H extremum by {diff:e}"
    );
    ensure!(
        alignment > 1.0 - 1e-3,
        "best pair not parallel: |h(xi, eta)| = {alignment}"
    );
    Ok(format!(
        "|B* - H*| {diff:.1e}, min alignment {alignment:.6}"
    ))
}

fn lu_inequality() -> Outcome {
    let mut r = rng(17);
    let mut detail = Vec::new();
    for (cat, sign) in [
        (CatalogMetric::FubiniStudy, Sign::Nonneg),
        (CatalogMetric::PoincareBall, Sign::Nonpos),
    ] {
        for p in points(cat, 2, 2, 18) {
            let kr = at(cat, &p).chern.kr;
            let rep = lu_inequality_check(&kr, 1000, sign, DEFAULT_TOL, &mut r);
            ensure!(
                rep.hypothesis_holds,
                "{cat}: sign hypothesis failed ({:e})",
                rep.hypothesis_worst
            );
            ensure!(
                rep.status == LuStatus::Holds && rep.violations == 0,
                "{cat}: {rep:?}"
            );
            detail.push(format!("{cat} worst margin {:.1e}", rep.worst_margin));
        }
    }
    Ok(detail.join(", "))
}

fn dsl_robustness() -> Outcome {
    let mut r = rng(19);
    for cat in CatalogMetric::ALL {
        let src = cat.source(2).unwrap();
        let m1 = parse_metric(&src).map_err(|e| e.to_string())?;
        let m2 = parse_metric(&m1.to_string()).map_err(|e| e.to_string())?;
        ensure!(
            m1 == m2 && m1.to_string() == m2.to_string(),
            "{cat}: metric round trip changed"
        );
    }
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let e = random_expr(&mut r, 2, 3);
        let s1 = e.to_string();
        let e1 = parse_expr(&s1, Some(2)).map_err(|err| format!("{s1}: {err}"))?;
        let s2 = e1.to_string();
        let e2 = parse_expr(&s2, Some(2)).map_err(|err| format!("{s2}: {err}"))?;
        ensure!(e1 == e2 && s2 == e2.to_string(), "no fixpoint for {s1}");
        let z = common::random_point(&mut r, 2, 0.8);
        for w in [
            Wirtinger::Holo(0),
            Wirtinger::Holo(1),
            Wirtinger::Anti(0),
            Wirtinger::Anti(1),
        ] {
            let exact = e.derivative(w).eval(&z).unwrap();
            let fd = fd_wirtinger(&e, &z, w, 1e-5);
            worst = worst.max((exact - fd).norm() / exact.norm().max(1.0));
        }
    }
    ensure!(worst < 1e-6, "derivative rel. error {worst:e}");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bad = dir.path().join("bad.metric");
    std::fs::write(&bad, "dim 1;\nh[1,1] = 1 + z1 * ;\n").map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_hermicurv"))
        .args([
            "curvature",
            "--metric",
            bad.to_str().unwrap(),
            "--point",
            "[[0,0]]",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(
        out.status.code() == Some(2),
        "exit code {:?}",
        out.status.code()
    );
    ensure!(
        v["error"]["line"] == 2 && v["error"]["column"].is_u64(),
        "no position in {v}"
    );
    Ok(format!(
        "round trips ok, derivative rel. error {worst:.1e}, parse error at line 2 column {}",
        v["error"]["column"]
    ))
}

fn determinism() -> Outcome {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_hermicurv"))
            .args(args)
            .output()
            .map(|o| (o.status.code(), o.stdout))
            .map_err(|e| e.to_string())
    };
    let requests: [&[&str]; 3] = [
        &[
            "extremal",
            "--metric",
            "hopf",
            "--point",
            "[[0.6,0.1],[-0.2,0.5]]",
            "--seed",
            "7",
            "--restarts",
            "16",
        ],
        &[
            "probe-corollary",
            "--metric",
            "nk_diag",
            "--point",
            "[[1,0],[0,0]]",
            "--seed",
            "3",
            "--samples",
            "200",
        ],
        &[
            "lu",
            "--metric",
            "fubini_study",
            "--point",
            "[[0.1,0.2],[0.3,0]]",
            "--seed",
            "5",
            "--samples",
            "300",
        ],
    ];
    for args in requests {
        let (a, b) = (run(args)?, run(args)?);
        ensure!(a.0 == Some(0) && a == b, "{} differs between runs", args[0]);
    }
    Ok("extremal, probe-corollary and lu reports byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("flatness", flatness),
        ("symbolic vs finite-difference jets", oracle_equivalence),
        ("direct (1,1) block vs complexified tensor", direct_block),
        ("Gray vanishing", gray_vanishing),
        ("Kahler equality suite", kahler_suite),
        (
            "connection curvature vs Chern contraction",
            theorem_two_sided,
        ),
        (
            "universal identities on non-Kahler metrics",
            universal_identities,
        ),
        ("K vs K_D probe", corollary_probe),
        (
            "constant holomorphic sectional curvature",
            constant_holomorphic_curvature,
        ),
        (
            "sectional extremum at holomorphic planes",
            theorem_extremal_sectional,
        ),
        (
            "bisectional extremum at holomorphic sectional",
            theorem_extremal_bisectional,
        ),
        ("Lu inequality", lu_inequality),
        ("DSL robustness", dsl_robustness),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
