use std::path::{Path, PathBuf};
use zerolocus::io::{corpus, parse_germ, run_command, Command, GermDocument, RunConfig};
use zerolocus::{Error, Scalar};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).unwrap()
}

fn quiet() -> RunConfig {
    RunConfig {
        timing: false,
        ..RunConfig::default()
    }
}

#[test]
fn corpus_files_match_builtin_germs() {
    for doc in corpus().unwrap() {
        let text = read(&doc.metadata.name);
        assert_eq!(text, doc.to_json(), "{} is stale; run the write_corpus example", doc.metadata.name);
    }
}

#[test]
fn documents_round_trip() {
    for doc in corpus().unwrap() {
        let parsed = parse_germ(&doc.to_json(), true).unwrap();
        assert_eq!(parsed, doc);
        let rebuilt = match parsed.to_germ().unwrap() {
            zerolocus::io::Germ::Interior(g) => GermDocument::from_interior(&g, &doc.metadata.notes).unwrap(),
            zerolocus::io::Germ::Puncture(g) => GermDocument::from_puncture(&g, &doc.metadata.notes).unwrap(),
        };
        assert_eq!(rebuilt, doc);
    }
}

fn golden_cases() -> Vec<(String, Command, RunConfig)> {
    let mut cases = Vec::new();
    for doc in corpus().unwrap() {
        let name = doc.metadata.name.clone();
        cases.push((name.clone(), Command::Validate, quiet()));
        cases.push((name.clone(), Command::Bigrading, quiet()));
        match doc.kind {
            zerolocus::io::GermKind::Interior => {
                let point = RunConfig {
                    point: Some(Scalar::frac(1, 10)),
                    ..quiet()
                };
                cases.push((name.clone(), Command::GradingAt, point));
                cases.push((name.clone(), Command::ZeroLocus, quiet()));
            }
            zerolocus::io::GermKind::Puncture => {
                cases.push((name.clone(), Command::LimitGrading, quiet()));
                cases.push((name.clone(), Command::Classify, quiet()));
                let ray = RunConfig {
                    precision: 128,
                    ..quiet()
                };
                cases.push((name.clone(), Command::SampleRay, ray));
            }
        }
    }
    cases
}

#[test]
fn golden_results() {
    let update = std::env::var("UPDATE_GOLDEN").is_ok();
    let mut stale = Vec::new();
    for (name, command, config) in golden_cases() {
        let input = read(&name);
        let doc = run_command(command, input.as_bytes(), true, &config);
        let text = doc.to_json();
        let path = golden_dir().join(format!("{name}.{}.json", command.name()));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else {
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == text => {}
                _ => stale.push(path.display().to_string()),
            }
        }
    }
    assert!(stale.is_empty(), "golden mismatch (UPDATE_GOLDEN=1 regenerates): {stale:#?}");
}

#[test]
fn results_are_deterministic() {
    let input = read("FIX-C");
    let a = run_command(Command::LimitGrading, input.as_bytes(), true, &quiet());
    let b = run_command(Command::LimitGrading, input.as_bytes(), true, &quiet());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn exit_codes() {
    let run = |name: &str, c: Command| run_command(c, read(name).as_bytes(), true, &quiet()).exit_code;
    assert_eq!(run("FIX-A", Command::ZeroLocus), 0);
    assert_eq!(run("FIX-A-shifted", Command::ZeroLocus), 2);
    assert_eq!(run("FIX-D", Command::Classify), 2);
    assert_eq!(run("FIX-D", Command::Validate), 2);
    assert_eq!(run("FIX-A", Command::LimitGrading), 1);
    assert_eq!(run_command(Command::Validate, b"{", true, &quiet()).exit_code, 1);
}

#[test]
fn digest_covers_input_bytes() {
    let input = read("FIX-B");
    let doc = run_command(Command::Validate, input.as_bytes(), true, &quiet());
    assert_eq!(doc.germ_digest, zerolocus::io::digest(input.as_bytes()));
    assert_eq!(doc.germ_digest.len(), 64);
}

#[test]
fn truncated_document() {
    let text = read("FIX-A");
    let cut = &text[..text.len() / 2];
    match parse_germ(cut, true) {
        Err(Error::Syntax { offset, .. }) => assert!(offset <= cut.len()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn syntax_offset_points_at_error() {
    let text = "{\n  \"kind\": ?\n}";
    match parse_germ(text, true) {
        Err(Error::Syntax { offset, .. }) => assert_eq!(&text[offset..offset + 1], "?"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn three_step_weight_is_rejected() {
    let mut v: serde_json::Value = serde_json::from_str(&read("FIX-A")).unwrap();
    v["weight_filtration"]["-2"] = serde_json::json!([[0, 0, 1]]);
    match parse_germ(&v.to_string(), true) {
        Err(Error::Schema(msgs)) => assert!(msgs.iter().any(|m| m.starts_with("weight_filtration")), "{msgs:?}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn non_reduced_rational_is_its_own_error() {
    let text = read("FIX-C").replace("\"radius\": \"1/2\"", "\"radius\": \"2/4\"");
    assert!(matches!(parse_germ(&text, true), Err(Error::NonReducedRational(_))));
    let text = read("FIX-C").replacen("\"1\", \"0\", \"i\"", "\"2/2\", \"0\", \"i\"", 1);
    assert!(matches!(parse_germ(&text, true), Err(Error::NonReducedRational(_))));
}

#[test]
fn unknown_fields_depend_on_strictness() {
    let mut v: serde_json::Value = serde_json::from_str(&read("FIX-B")).unwrap();
    v["comment"] = serde_json::json!("extra");
    let text = v.to_string();
    match parse_germ(&text, true) {
        Err(Error::Schema(msgs)) => assert_eq!(msgs, vec!["comment: unknown field".to_string()]),
        other => panic!("unexpected {other:?}"),
    }
    assert!(parse_germ(&text, false).is_ok());
}

#[test]
fn schema_errors_carry_paths() {
    let mut v: serde_json::Value = serde_json::from_str(&read("FIX-B")).unwrap();
    v["gamma"][0]["power"] = serde_json::json!("one");
    match parse_germ(&v.to_string(), true) {
        Err(Error::Schema(msgs)) => assert!(msgs[0].starts_with("gamma[0].power"), "{msgs:?}"),
        other => panic!("unexpected {other:?}"),
    }
    let mut v: serde_json::Value = serde_json::from_str(&read("FIX-B")).unwrap();
    v["n_matrix"] = serde_json::json!([[0, 0], [0, 0]]);
    assert!(matches!(parse_germ(&v.to_string(), true), Err(Error::Schema(_))));
}

#[test]
fn invalid_mathematics_is_reported_by_constructors() {
    // N that is not an infinitesimal isometry of the polarization
    let mut v: serde_json::Value = serde_json::from_str(&read("FIX-B")).unwrap();
    v["n_matrix"] = serde_json::json!([[0, 0, 0], [0, 1, 0], [0, 0, 0]]);
    let doc = parse_germ(&v.to_string(), true).unwrap();
    assert!(doc.to_germ().is_err());
}

#[test]
fn sample_ray_csv_shape() {
    let config = RunConfig {
        precision: 128,
        ..quiet()
    };
    let doc = run_command(Command::SampleRay, read("FIX-B").as_bytes(), true, &config);
    let csv = doc.outcome["csv"].as_str().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "y,x,t1_re,t1_im,t2_re,t2_im,distance,extrapolated_t1,extrapolated_t2");
    assert_eq!(lines.len(), 1 + 9);
    // the lattice distance column decreases along the schedule
    let dist: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert!(dist.windows(2).all(|w| w[1] <= w[0]), "{dist:?}");
}
