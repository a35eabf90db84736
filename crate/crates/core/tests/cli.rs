use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use toepfact::io::{parse_matrix, serialize_matrix, ChainFile};
use toepfact::structmat::Factor;
use toepfact::{DenseMatrix, Scalar, ToeplitzSpec};

fn toepfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toepfact"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, n: usize, seed: u64, kind: &str) -> PathBuf {
    let path = dir.path().join(name);
    let out = toepfact(&[
        "gen",
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--kind",
        kind,
        "--out",
        s(&path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", 3, 7, "toeplitz");
    let b = gen(&dir, "b.txt", 3, 7, "toeplitz");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let m = parse_matrix(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert!(ToeplitzSpec::detect(&m, 0.0).is_some());
}

#[test]
fn generated_kinds_have_their_structure() {
    let dir = TempDir::new().unwrap();
    let read = |p: PathBuf| parse_matrix(&std::fs::read_to_string(p).unwrap()).unwrap();
    let circ = read(gen(&dir, "c.txt", 4, 1, "circulant"));
    assert!(toepfact::guards::is_circulant(&circ, 1e-15).holds);
    let generic = read(gen(&dir, "g.txt", 5, 2, "generic"));
    assert!(ToeplitzSpec::detect(&generic, 1e-10).is_none());
    assert!(toepfact::HankelSpec::detect(&generic, 1e-10).is_none());
    assert!(!toepfact::guards::is_circulant(&generic, 1e-10).holds);
    assert!(!toepfact::guards::is_centrosymmetric(&generic, 1e-10).holds);
}

#[test]
fn decompose_then_verify_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", 6, 3, "generic");
    for (method, kind) in [
        ("ge", "toeplitz"),
        ("ge", "hankel"),
        ("gauss-newton", "toeplitz"),
        ("gauss-newton", "hankel"),
    ] {
        let c1 = dir.path().join(format!("{method}-{kind}-1.txt"));
        let c2 = dir.path().join(format!("{method}-{kind}-2.txt"));
        for c in [&c1, &c2] {
            let out = toepfact(&[
                "decompose",
                s(&a),
                "--method",
                method,
                "--kind",
                kind,
                "--seed",
                "5",
                "--out",
                s(c),
            ]);
            assert_eq!(
                code(&out),
                0,
                "{method} {kind}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
        let out = toepfact(&["verify", s(&a), s(&c1)]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("status pass"));
    }
}

#[test]
fn five_by_five_ge_chain_shape() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.txt",
        "toepfact-matrix v1 5 5\n2 5 2 5 3\n4 5 5 2 2\n2 3 2 1 5\n3 1 5 2 3\n4 1 2 4 3\n",
    );
    let out = toepfact(&["decompose", s(&a)]);
    assert_eq!(code(&out), 0);
    let chain = ChainFile::parse(&stdout(&out)).unwrap();
    assert_eq!(chain.chain.count("toeplitz"), 10);
    assert_eq!(chain.chain.count("permutation"), 5);
    assert!(chain.meta("residual").unwrap().parse::<f64>().unwrap() <= 1e-10);
}

#[test]
fn counting_matrix_with_two_factors() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.txt",
        "toepfact-matrix v1 3 3\n1 2 3\n4 5 6\n7 8 9\n",
    );
    let out = toepfact(&["decompose", s(&a), "--method", "gauss-newton", "--r", "2"]);
    assert_eq!(code(&out), 0);
    let chain = ChainFile::parse(&stdout(&out)).unwrap();
    assert_eq!(chain.chain.count("toeplitz"), 2);
    assert_eq!(chain.meta("r"), Some("2"));
}

#[test]
fn closed_form_for_two_by_two() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", 2, 4, "generic");
    let out = toepfact(&[
        "decompose",
        s(&a),
        "--method",
        "closed-form2",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(code(&out), 0);
    let b = gen(&dir, "b.txt", 3, 4, "generic");
    assert_eq!(
        code(&toepfact(&["decompose", s(&b), "--method", "closed-form2"])),
        4
    );
}

#[test]
fn perturbed_chain_fails_verification() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", 4, 9, "generic");
    let out = toepfact(&["decompose", s(&a)]);
    let mut file = ChainFile::parse(&stdout(&out)).unwrap();
    if let Factor::Toeplitz(t) = &mut file.chain.factors[0] {
        t.set(0, t.get(0) + Scalar::new(1e-2, 0.0));
    }
    let c = write(&dir, "c.txt", &file.serialize());
    let out = toepfact(&["verify", s(&a), s(&c)]);
    assert_eq!(code(&out), 1);
    let residual: f64 = stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix("residual "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual >= 1e-4);
}

#[test]
fn printed_pair_verifies_loosely() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.txt",
        "toepfact-matrix v1 3 3\n1 2 3\n4 5 6\n7 8 9\n",
    );
    // Diagonal storage from −2 to 2: first column reversed, then the first row.
    let chain = "toepfact-chain v1 3\n\
                 toeplitz 4.8889 3.5556 2.2222 0.8889 -0.4444\n\
                 toeplitz 1 1 0.25 1 1\n";
    let c = write(&dir, "c.txt", chain);
    assert_eq!(
        code(&toepfact(&["verify", s(&a), s(&c), "--tol", "1e-3"])),
        0
    );
    assert_eq!(
        code(&toepfact(&["verify", s(&a), s(&c), "--tol", "1e-10"])),
        1
    );
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let exchange = write(
        &dir,
        "j.txt",
        "toepfact-matrix v1 3 3\n0 0 1\n0 1 0\n1 0 0\n",
    );
    let out = toepfact(&["decompose", s(&exchange), "--kind", "hankel"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stage"));
    let out = toepfact(&[
        "decompose",
        s(&exchange),
        "--kind",
        "hankel",
        "--precondition-retry",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("meta preconditioned"));

    let a = gen(&dir, "a.txt", 3, 1, "generic");
    let out = toepfact(&["decompose", s(&a), "--method", "gauss-newton", "--r", "1"]);
    assert_eq!(code(&out), 3);

    let bad = write(&dir, "bad.txt", "toepfact-matrix v1 2 2\n1 2\n3\n");
    let out = toepfact(&["screen", s(&bad)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        code(&toepfact(&["verify", "/nonexistent/a", "/nonexistent/b"])),
        4
    );
    assert_eq!(
        code(&toepfact(&[
            "gen", "--n", "3", "--seed", "1", "--kind", "bogus"
        ])),
        4
    );
    assert_eq!(code(&toepfact(&["--help"])), 0);
}

#[test]
fn rank_certificates() {
    for (n, rank) in [("2", "rank 4"), ("3", "rank 9"), ("10", "rank 100")] {
        let out = toepfact(&["rank-cert", "--n", n, "--seed", "1"]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains(rank));
    }
}

#[test]
fn export_counts() {
    let dir = TempDir::new().unwrap();
    let a2 = gen(&dir, "a2.txt", 2, 1, "generic");
    let path = dir.path().join("sys2.txt");
    let out = toepfact(&["export-lq", s(&a2), "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "9 quadratic, 4 linear");
    let text = std::fs::read_to_string(&path).unwrap();
    let summary = toepfact::minimal::parse_export(&text).unwrap();
    assert_eq!((summary.quadratic, summary.linear), (9, 4));

    let a3 = gen(&dir, "a3.txt", 3, 1, "generic");
    let out = toepfact(&["export-lq", s(&a3)]);
    let summary = toepfact::minimal::parse_export(&stdout(&out)).unwrap();
    assert_eq!(summary.linear, 9);
    assert_eq!(stdout(&out), stdout(&toepfact(&["export-lq", s(&a3)])));
}

#[test]
fn screen_reports() {
    let dir = TempDir::new().unwrap();
    let diag = write(&dir, "d.txt", "toepfact-matrix v1 2 2\n1 0\n0 2\n");
    let out = stdout(&toepfact(&["screen", s(&diag)]));
    assert!(out
        .lines()
        .any(|l| l.starts_with("ruled_out") && l.contains("circulant")));

    let m = write(&dir, "m.txt", "toepfact-matrix v1 2 2\n1 2\n3 4\n");
    let out = stdout(&toepfact(&["screen", s(&m)]));
    assert!(out.contains("symmetric-toeplitz"));

    let mut rng = toepfact::gen::rng_from_seed(3);
    let c1 = toepfact::gen::random_circulant(&mut rng, 4).densify();
    let c2 = toepfact::gen::random_circulant(&mut rng, 4).densify();
    let prod = write(&dir, "p.txt", &serialize_matrix(&c1.matmul(&c2).unwrap()));
    let out = stdout(&toepfact(&["screen", s(&prod)]));
    assert!(!out
        .lines()
        .any(|l| l.starts_with("ruled_out") && l.contains("circulant")));
}

#[test]
fn matrix_file_round_trip_through_decompose() {
    let dir = TempDir::new().unwrap();
    let a = DenseMatrix::new(
        2,
        vec![
            Scalar::new(1.0 / 3.0, -0.1),
            Scalar::new(2.0, 0.0),
            Scalar::new(0.0, 1e-300),
            Scalar::new(-7.5, 0.0),
        ],
    )
    .unwrap();
    let text = serialize_matrix(&a);
    assert_eq!(parse_matrix(&text).unwrap(), a);
    let path = write(&dir, "a.txt", &text);
    let out = toepfact(&["decompose", s(&path), "--method", "closed-form2"]);
    let file = ChainFile::parse(&stdout(&out)).unwrap();
    assert_eq!(ChainFile::parse(&file.serialize()).unwrap(), file);
}
