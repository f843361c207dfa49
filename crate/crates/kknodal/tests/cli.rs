use std::process::{Command, Output};

fn kknodal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kknodal")).args(args).output().unwrap()
}

#[test]
fn summaries_do_not_depend_on_thread_count() {
    for args in [
        &["modular-count", "--res", "32x32x192"][..],
        &["graph-count", "--count", "3", "--m", "1,2"],
        &["torus-count", "--max-freq", "1", "--res", "16x16x16"],
    ] {
        let outs: Vec<Vec<u8>> = ["1", "3"]
            .iter()
            .map(|t| {
                let o = kknodal(&[args, &["--threads", t, "--no-timing"]].concat());
                assert_eq!(
                    o.status.code(),
                    Some(0),
                    "{args:?}: {}",
                    String::from_utf8_lossy(&o.stderr)
                );
                o.stdout
            })
            .collect();
        assert_eq!(outs[0], outs[1], "{args:?}");
    }
}

#[test]
fn summary_schema() {
    let o = kknodal(&["t2-count", "--m", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["command", "params", "results", "converged", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "t2-count");
}

#[test]
fn writes_summary_and_face_csv_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.json");
    let csv = dir.path().join("faces.csv");
    let o = kknodal(&[
        "modular-count",
        "--res",
        "32x32x192",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["results"]["total"], 4);

    let mut r = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec!["face", "x", "y", "theta", "value", "sign", "label"]
    );
    let faces: Vec<String> = r.records().map(|x| x.unwrap()[0].to_string()).collect();
    assert_eq!(faces.len(), 3 * 32 * 192);
    for f in ["side", "front", "top"] {
        assert_eq!(faces.iter().filter(|x| *x == f).count(), 32 * 192);
    }
}

#[test]
fn graph_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let o = kknodal(&[
        "graph-count",
        "--field",
        "linear",
        "--m",
        "2",
        "--graph-json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g["m"], 2);
    assert!(!g["edges"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    // a failed check
    assert_eq!(kknodal(&["modular-count", "--res", "8x8x8"]).status.code(), Some(1));
    // configuration errors
    for args in [
        &["modular-count", "--res", "96x96"][..],
        &["modular-count", "--res", "9x9x30"],
        &["torus-count", "--manifold", "modular"],
        &["modular-tau", "--n", "0"],
    ] {
        let o = kknodal(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn tau_is_exact_beyond_64_bits() {
    use num_bigint::BigInt;
    let o = kknodal(&["modular-tau", "--n", "3721"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tau = |n: usize| v["results"][n - 1].to_string().parse::<BigInt>().unwrap();
    // τ(p²) = τ(p)² - p¹¹ with p = 61; τ(61)² does not fit in 64 bits
    let p = BigInt::from(61);
    assert!(tau(61) * tau(61) > BigInt::from(i64::MAX));
    assert_eq!(tau(3721), tau(61) * tau(61) - p.pow(11));
}
