//! Acceptance criteria 1 through 10, one PASS/FAIL line each.

mod common;

use common::{
    bigrading_axioms, random_interior_germ, random_mhs, random_two_step_pair, rng, sample_points, zero_set_equivalence,
};
use rug::Rational;
use std::path::Path;
use std::time::{Duration, Instant};
use zerolocus::degeneration::{
    grading_decomposition_residual, grading_numeric, limit_data, limit_grading, puncture_zero_locus,
    sector_independence_check, LimitConfig, PunctureGerm, PunctureKind,
};
use zerolocus::fixtures::{fix_a, fix_b, fix_b_trivial, fix_c, fix_d, unit};
use zerolocus::interior::{interior_zero_locus, zero_scan, ScanConfig, ZeroLocusKind};
use zerolocus::io::{corpus, parse_germ, run_command, Command, Germ, GermDocument, RunConfig};
use zerolocus::mhs::{deligne_bigrading, deligne_grading, MixedHodgeStructure};
use zerolocus::nilpotent::{bch_transport, psi_series};
use zerolocus::{NumericScalar, Scalar};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ac1() -> Outcome {
    let mut r = rng(1);
    for i in 0..100 {
        let m = random_mhs(&mut r);
        let b = deligne_bigrading(&m).map_err(|e| format!("structure {i}: {e}"))?;
        bigrading_axioms(&m, &b).map_err(|e| format!("structure {i}: {e}"))?;
    }
    Ok("100 random structures satisfy the three properties exactly".into())
}

fn ac2() -> Outcome {
    let mut r = rng(2);
    for i in 0..100 {
        let (g0, g1) = random_two_step_pair(&mut r);
        let psi = psi_series(&g0, &g1).map_err(|e| e.to_string())?;
        let bch = bch_transport(&g0, &g1).map_err(|e| e.to_string())?;
        check(psi == bch, format!("pair {i}: series and logarithm differ"))?;
    }
    let (u, v) = (unit(3, 1, 2), unit(3, 2, 0));
    let expected = v.add_ref(&unit(3, 1, 0).scale(&Scalar::frac(1, 2)));
    check(psi_series(&u, &v).map_err(|e| e.to_string())? == expected, "half-coefficient instance")?;
    Ok("100 random pairs agree exactly; E(1<-2), E(2<-0) gives E(2<-0) + 1/2 E(1<-0)".into())
}

fn ac3() -> Outcome {
    let mut r = rng(3);
    let pts = sample_points(&mut r, &[], 1000);
    let zeros = zero_set_equivalence(&fix_a(), &pts)?;
    check(zeros == 1, format!("FIX-A has {zeros} sampled zeros, expected only the center"))?;
    for i in 0..20 {
        let (g, roots) = random_interior_germ(&mut r, i);
        let pts = sample_points(&mut r, &roots, 1000);
        zero_set_equivalence(&g, &pts).map_err(|e| format!("{}: {e}", g.name))?;
    }
    Ok("FIX-A and 20 random germs, 1000 points each, plus series valuations".into())
}

fn ac4() -> Outcome {
    let g = fix_a();
    let d = interior_zero_locus(&g, &Rational::from((1, 5))).map_err(|e| e.to_string())?;
    check(
        d.kind == ZeroLocusKind::Isolated && d.roots.len() == 1 && d.roots[0].exact && d.roots[0].center == Scalar::zero(),
        format!("r = 0.2 gave {:?} with {} roots", d.kind, d.roots.len()),
    )?;
    let config = ScanConfig {
        tolerance: 1e-10,
        ..ScanConfig::default()
    };
    let report = zero_scan(&g, 0.7, &config).map_err(|e| e.to_string())?;
    let mut found: Vec<Scalar> = Vec::new();
    for c in &report.candidates {
        check(c.confirmed && c.local_kind == Some(ZeroLocusKind::Isolated), "unconfirmed candidate")?;
        let z: Scalar = c.exact.as_deref().ok_or("candidate without exact value")?.parse().map_err(|e| format!("{e}"))?;
        found.push(z);
    }
    let expected: Vec<Scalar> = ["0", "1/2", "-1/2", "1/2*i", "-1/2*i"].iter().map(|s| s.parse().unwrap()).collect();
    check(
        found.len() == expected.len() && expected.iter().all(|z| found.contains(z)),
        format!("scan found {found:?}"),
    )?;
    Ok("Isolated{0} at r = 0.2; scan at r = 0.7 finds {0, ±1/2, ±i/2}, all confirmed".into())
}

fn ac5() -> Outcome {
    let g = fix_b();
    let d = limit_data(&g).map_err(|e| e.to_string())?;
    let config = LimitConfig::default();
    check(config.precision == 256 && config.order == 6 && config.y0 == 4.0, "default configuration changed")?;
    let l = limit_grading(&g, &d, &config).map_err(|e| e.to_string())?;
    let exact = l.exact.clone().ok_or("no exact shortcut on the split branch")?;
    let lift = g.shape().lift_from_coordinates(&exact);
    check(lift == zerolocus::fixtures::basis_vector(3, 0), format!("limit lift {lift:?}"))?;
    check(l.error < 1e-20, format!("error estimate {:e}", l.error))?;
    let gap = l
        .coordinates
        .iter()
        .zip(&exact)
        .map(|(c, e)| (c.to_f64() - e.re().to_f64()).abs())
        .fold(0.0, f64::max);
    check(gap <= l.error, format!("extrapolated value misses exact one by {gap:e} > {:e}", l.error))?;
    Ok(format!("Y[e0], error estimate {:.2e}, extrapolation gap {gap:.2e}", l.error))
}

fn ac6() -> Outcome {
    for g in [fix_b(), fix_c()] {
        let d = limit_data(&g).map_err(|e| e.to_string())?;
        let n = g.monodromy();
        let bracket = d.h_operator.commutator(n);
        check(bracket == n.scale(&Scalar::int(-2)), format!("{}: [H, N] != -2N", g.name))?;
        let minus_i = Scalar::gauss((0, 1), (-1, 1));
        let e = d.delta.scale(&minus_i).exp_nilpotent().map_err(|e| e.to_string())?;
        let moved = d.y_infinity.act(&e).map_err(|e| e.to_string())?;
        check(moved.matrix() == d.y_hat.matrix(), format!("{}: Y_hat != exp(-i delta).Y_inf", g.name))?;
        let fo = MixedHodgeStructure::new(d.f_o.clone(), g.shape().weight()).map_err(|e| e.to_string())?;
        let y_fo = deligne_grading(&fo).map_err(|e| e.to_string())?;
        check(y_fo.matrix() == d.y_hat.matrix(), format!("{}: Y(F_o, W) != Y_hat", g.name))?;
        check(d.f_o_polarization.valid, format!("{}: F_o fails polarization", g.name))?;
    }
    Ok("FIX-B and FIX-C: all four identities hold exactly".into())
}

fn ac7() -> Outcome {
    let config = LimitConfig::default();
    let mut worst = 0.0f64;
    for g in [fix_b(), fix_c()] {
        let d = limit_data(&g).map_err(|e| e.to_string())?;
        let r = sector_independence_check(&g, &d, 0.0, 0.5, &config).map_err(|e| e.to_string())?;
        for x in [0.0, 0.5] {
            let l = limit_grading(&g, &d, &LimitConfig { x, ..config.clone() }).map_err(|e| e.to_string())?;
            check(l.error < 1e-10, format!("{} at x = {x}: error {:e}", g.name, l.error))?;
        }
        check(r.agrees, format!("{}: difference {:e} > {:e}", g.name, r.difference, r.tolerance))?;
        worst = worst.max(r.difference);
    }
    Ok(format!("x = 0 and x = 0.5 agree on FIX-B and FIX-C, largest difference {worst:.2e}"))
}

fn ac8() -> Outcome {
    let config = LimitConfig::default();
    let r = Rational::from((1, 4));
    let kind = |g: &PunctureGerm| puncture_zero_locus(g, &r, &config).map(|c| c.kind).map_err(|e| e.to_string());
    check(kind(&fix_b())? == PunctureKind::NoAccumulation(vec![]), "FIX-B is not NoAccumulation/empty")?;
    let trivial = fix_b_trivial();
    check(kind(&trivial)? == PunctureKind::WholeDisk, "trivial germ is not WholeDisk")?;
    check(matches!(kind(&fix_d())?, PunctureKind::NonAdmissible(_)), "FIX-D is not NonAdmissible")?;
    let mut worst = 0.0f64;
    for k in 0..20 {
        let x = (k % 5) as f64 * 0.2;
        let y = 1.0 + (k / 5) as f64 * 1.5;
        let (_, t, _) = grading_numeric(&trivial, &NumericScalar::from_f64(256, x, y)).map_err(|e| e.to_string())?;
        for c in &t {
            let re = c.re().to_f64();
            worst = worst.max((re - re.round()).abs()).max(c.im().to_f64().abs());
        }
    }
    check(worst < 1e-20, format!("extension class reaches {worst:e}"))?;
    Ok(format!("NoAccumulation/empty, WholeDisk, NonAdmissible; trivial-class germ has lattice distance at most {worst:.1e} over 20 samples"))
}

fn ac9() -> Outcome {
    for g in [fix_b(), fix_c()] {
        let d = limit_data(&g).map_err(|e| e.to_string())?;
        for y in [5.0, 10.0, 20.0] {
            let rep = grading_decomposition_residual(&g, &d, &NumericScalar::from_f64(256, 0.0, y)).map_err(|e| e.to_string())?;
            check(rep.lowers_weight && rep.stabilizes, format!("{} at y = {y}: {rep:?}", g.name))?;
        }
        let mut last = f64::INFINITY;
        for y in LimitConfig::default().schedule() {
            let rep = grading_decomposition_residual(&g, &d, &NumericScalar::from_f64(256, 0.0, y)).map_err(|e| e.to_string())?;
            check(rep.twisted_log2 < last, format!("{}: twisted term grows at y = {y}", g.name))?;
            last = rep.twisted_log2;
        }
    }
    Ok("residual in W_{-1}End and Stab F(s) at y = 5, 10, 20; twisted term decreasing".into())
}

fn ac10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let docs = corpus().map_err(|e| e.to_string())?;
    for doc in &docs {
        let name = &doc.metadata.name;
        let text = std::fs::read_to_string(dir.join("corpus").join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        let parsed = parse_germ(&text, true).map_err(|e| format!("{name}: {e}"))?;
        check(parsed.to_json() == text, format!("{name}: serialize(parse(file)) differs from file"))?;
        let again = match parsed.to_germ().map_err(|e| e.to_string())? {
            Germ::Interior(g) => GermDocument::from_interior(&g, &doc.metadata.notes),
            Germ::Puncture(g) => GermDocument::from_puncture(&g, &doc.metadata.notes),
        }
        .map_err(|e| e.to_string())?;
        check(again == parsed, format!("{name}: germ round trip differs"))?;
    }
    let config = RunConfig {
        timing: false,
        ..RunConfig::default()
    };
    let mut count = 0;
    for doc in &docs {
        let name = &doc.metadata.name;
        let input = doc.to_json();
        for command in [Command::Validate, Command::Bigrading, Command::Classify] {
            let a = run_command(command, input.as_bytes(), true, &config).to_json();
            let b = run_command(command, input.as_bytes(), true, &config).to_json();
            check(a == b, format!("{name} {}: runs differ", command.name()))?;
            let golden = dir.join("golden").join(format!("{name}.{}.json", command.name()));
            if let Ok(expected) = std::fs::read_to_string(&golden) {
                check(expected == a, format!("{} differs from the golden file", golden.display()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{} corpus files round-trip; {count} golden documents byte-identical across runs", docs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("bigrading axioms", ac1, 10),
        ("CBH oracle", ac2, 5),
        ("zero-set equivalence", ac3, 30),
        ("interior oracle", ac4, 60),
        ("limit grading", ac5, 60),
        ("structural identities", ac6, 10),
        ("sector independence", ac7, 120),
        ("classification matrix", ac8, 60),
        ("residual diagnostics", ac9, 30),
        ("CLI determinism and corpus", ac10, 10),
    ];
    let mut failures = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => Err(format!("{msg}; runtime over {limit} s")),
            other => other,
        };
        let (status, msg) = match &outcome {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("AC{:<2} {status} {name}: {msg} ({:.2} s, limit {limit} s)", k + 1, elapsed.as_secs_f64());
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
