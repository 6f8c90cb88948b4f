mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use entropic_threshold::report::parse_csv;
use entropic_threshold::{write_gray, GrayImage};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropic-threshold"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn two_tone(dir: &Path) -> String {
    let px = (0..100)
        .map(|i| if (i / 10 + i % 10) % 3 == 0 { 200 } else { 10 })
        .collect();
    let path = dir.join("two_tone.pgm");
    write_gray(&GrayImage::new(10, 10, px).unwrap(), &path).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn single_mode_prints_threshold_and_writes_image() {
    let dir = tempfile::tempdir().unwrap();
    let input = two_tone(dir.path());
    let out_image = dir.path().join("bw.pgm");
    let out = run(&[
        "--input",
        &input,
        "--mode",
        "single",
        "--entropy",
        "kaniadakis",
        "--index",
        "0.3",
        "--out-image",
        out_image.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.starts_with("kaniadakis index=0.3 threshold=10 "),
        "{stdout}"
    );
    let bw = entropic_threshold::load_image(&out_image).unwrap();
    assert!(bw.pixels().iter().all(|&p| p == 0 || p == 255));

    let out = run(&["--input", &input, "--entropy", "shannon"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("shannon threshold=10 "));
}

#[test]
fn compare_two_tone_rows_are_constant() {
    let dir = tempfile::tempdir().unwrap();
    let input = two_tone(dir.path());
    let out = run(&["--input", &input, "--mode", "compare", "--grid-default"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,threshold_tsallis,edges_tsallis,threshold_kaniadakis,edges_kaniadakis"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 13);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!((cols[1], cols[3]), ("10", "10"), "{row}");
        assert_eq!(cols[2], cols[4]);
    }
    // summary lines go to stderr when the CSV is on stdout
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("best tsallis"));
}

#[test]
fn sweep_report_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sweep.csv");
    let input = common::fixture_path("ascent.pgm");
    let out = run(&[
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "sweep",
        "--entropy",
        "tsallis",
        "--grid",
        "0.99,0.25,0.5",
        "--connectivity",
        "8",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("index,threshold_tsallis,edges_tsallis\n0.25,"));
    let parsed = parse_csv(&text).unwrap();
    assert_eq!(parsed.tsallis.unwrap().len(), 3);
    assert!(parsed.kaniadakis.is_none());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("best tsallis: index="));
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let input = two_tone(dir.path());

    // 1: bad arguments
    let out = run(&[
        "--input",
        &input,
        "--mode",
        "sweep",
        "--entropy",
        "tsallis",
        "--grid",
        "",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--input", &input, "--mode", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--input", &input, "--entropy", "tsallis", "--index", "1.5"]);
    assert_eq!(out.status.code(), Some(1));

    // extended indices are opt-in
    let out = run(&[
        "--input",
        &input,
        "--entropy",
        "tsallis",
        "--index",
        "1.5",
        "--allow-extended-index",
    ]);
    assert_eq!(out.status.code(), Some(0));

    // 2: unreadable input
    let out = run(&["--input", "/nonexistent.pgm", "--entropy", "shannon"]);
    assert_eq!(out.status.code(), Some(2));
    let garbage = dir.path().join("garbage.pgm");
    fs::write(&garbage, b"P5\n2 2\n65535\n").unwrap();
    let out = run(&["--input", garbage.to_str().unwrap(), "--entropy", "shannon"]);
    assert_eq!(out.status.code(), Some(2));

    // 3: single-tone image
    let flat = dir.path().join("flat.pgm");
    write_gray(&GrayImage::new(4, 4, vec![77; 16]).unwrap(), &flat).unwrap();
    let out = run(&["--input", flat.to_str().unwrap(), "--mode", "compare"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());

    // 4: output I/O failure, and no partial report left behind
    let missing_dir = dir.path().join("no/such/dir/report.csv");
    let out = run(&[
        "--input",
        &input,
        "--mode",
        "compare",
        "--report",
        missing_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!missing_dir.exists());
}
