use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regionbound"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn gamma_and_bmatrix_per_variant() {
    for v in ["ours", "serra"] {
        let g = stdout(&[
            "gamma",
            "--variant",
            v,
            "--nprime",
            "6",
            "--layout",
            "matrix",
        ]);
        assert_eq!(g, golden(&format!("gamma_{v}_6.matrix")), "{v}");
        let b = stdout(&["bmatrix", "--variant", v, "--nprime", "6"]);
        assert_eq!(b, golden(&format!("bmatrix_{v}_6.matrix")), "{v}");
    }
}

#[test]
fn gamma_seed_columns() {
    assert_eq!(
        stdout(&["gamma", "--variant", "ours", "--nprime", "1"]),
        "(0,1)\n(1,1)\n"
    );
}

#[test]
fn bound_small_mlp() {
    let out = stdout(&["bound", &path("mlp_1_2_1.json")]);
    assert_eq!(out.lines().next(), Some("3"));
    let out = stdout(&[
        "bound",
        &path("mlp_1_2_1.json"),
        "--variant",
        "serra",
        "--per-stage",
    ]);
    assert_eq!(
        out,
        "# dense 1->2 relu: (0,3)\n# dense 2->1: (0,3)\n3\n3.000×10^0\n"
    );
}

#[test]
fn compare_files() {
    let out = stdout(&["compare", &path("mlp_10_6x3.json")]);
    assert_eq!(
        out,
        "ours  94928 (9.493×10^4)\nserra 96753 (9.675×10^4)\nratio 1.019\n"
    );
    // two hidden layers: column norms agree, so the bounds coincide
    let out = stdout(&["compare", &path("mlp_10_6x2.json")]);
    assert!(out.ends_with("ratio 1.000\n"), "{out}");
}

#[test]
fn unet_against_autoencoder() {
    let unet = stdout(&["bound", &path("unet_small.json")]);
    let ae = stdout(&["bound", &path("ae_small.json")]);
    // values from an independent explicit-matrix computation
    assert_eq!(
        unet.lines().next().unwrap(),
        "1272403298253673539037612318598414357973386881066300966706764364957439352365165491"
    );
    assert_eq!(
        ae.lines().next().unwrap(),
        "18642318668282110931392447593296017360058130632773965247590881084541919696545225"
    );
    assert_eq!(unet, stdout(&["bound", "builtin:unet_small"]));
    assert_eq!(ae, stdout(&["bound", "builtin:ae_small"]));
}

#[test]
fn demos() {
    let out = stdout(&["demo", "resnet_small"]);
    let lines: Vec<_> = out.lines().collect();
    assert!(lines[0].starts_with(
        "resnet_small        3028900203055642156635577866352397226330769695236478759995263663175211187518125875022750908379556834885"
    ));
    assert!(lines[1].starts_with(
        "resnet_small_plain  2998648731969784227191205248607542553491596557300894625648419778354482111223435599301099917604482832053"
    ));
    assert_eq!(lines[2], "ratio               1.010");
    let out = stdout(&["demo", "unet_small"]);
    assert!(out.ends_with("ratio       6.825×10^1\n"), "{out}");
    let out = run(&["demo", "vgg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv() {
    let out = stdout(&[
        "sweep",
        "--n0",
        "10",
        "--widths",
        "6,8,10,15,20,25",
        "--depths",
        "1..10",
    ]);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "n0,ni,k,bound_ours,bound_serra,ratio");
    assert_eq!(lines.len(), 61);
    assert_eq!(lines[2], "10,6,2,2510,2510,1.000");
    assert_eq!(lines[3], "10,6,3,94928,96753,1.019");
    let stepped = stdout(&[
        "sweep",
        "--n0",
        "10",
        "--widths",
        "10",
        "--depths",
        "10..100:10",
    ]);
    assert_eq!(stepped.lines().count(), 11);
    assert!(stepped.lines().last().unwrap().ends_with(",5.985×10^3"));
}

#[test]
fn sweep_to_file() {
    let dir = std::env::temp_dir().join(format!("regionbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("grid.csv");
    let out = stdout(&[
        "sweep",
        "--n0",
        "4",
        "--widths",
        "3",
        "--depths",
        "1,2",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&file).unwrap();
    assert_eq!(written.lines().count(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_on_small_chain() {
    let net = path("net_1d.json");
    assert_eq!(
        stdout(&["oracle", &net, "--method", "sweep1d"]),
        "count=5 bound=6 OK\n"
    );
    let out = stdout(&[
        "oracle",
        &net,
        "--method",
        "pattern_sample",
        "--samples",
        "4000",
        "--seed",
        "3",
    ]);
    assert!(
        out.starts_with("count=") && out.ends_with("bound=6 OK\n"),
        "{out}"
    );
    assert_eq!(
        out,
        stdout(&[
            "oracle",
            &net,
            "--method",
            "pattern_sample",
            "--samples",
            "4000",
            "--seed",
            "3"
        ])
    );
    assert_eq!(
        run(&["oracle", &net, "--method", "lp"]).status.code(),
        Some(1)
    );
}

#[test]
fn exit_codes_and_diagnostics() {
    let out = run(&["--gamma-cap", "5", "gamma", "--nprime", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("exceeds the configured cap of 5"), "{err}");

    let out = run(&["bound", &path("bad_kind.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("blocks[1]") && err.contains("unknown variant `dropout`"),
        "{err}"
    );

    assert_eq!(
        run(&["bound", &path("missing.json")]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["gamma", "--variant", "tight", "--nprime", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_output() {
    let args = ["bound", "builtin:resnet_small", "--per-stage"];
    assert_eq!(stdout(&args), stdout(&args));
}
