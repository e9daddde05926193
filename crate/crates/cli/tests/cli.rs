use std::path::PathBuf;
use std::process::Command;

fn valnag() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valnag"))
}

fn write_scene(dir: &std::path::Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const V2: &str = "surface p2;\nvaluation { free; free; sat(1); }\ncurve H { deg 1; mult 1:1, 2:1; }\n";

#[test]
fn verdict_prints_stable_json() {
    let dir = tempdir();
    let scene = write_scene(&dir, "v2.valnag", V2);
    let run = || {
        let out = valnag().arg("verdict").arg(&scene).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    assert!(first.contains("\"status\": \"NonMinimal\""));
    assert!(first.contains("\"witness\": \"H\""));
    assert!(first.contains("\"eps\": \"1/3\""));
    assert_eq!(first, run(), "output is byte-stable across runs");
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = tempdir();
    let scene = write_scene(&dir, "bad.valnag", "valuation { free; sat(5); }\n");
    let out = valnag().arg("invariants").arg(&scene).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("satellite target out of range"), "{stderr}");
    assert!(stderr.contains("1:19"), "{stderr}");
}

#[test]
fn nok_writes_svg_and_json_files() {
    let dir = tempdir();
    let scene = write_scene(&dir, "v2.valnag", V2);
    let json_path = dir.join("out.json");
    let svg_path = dir.join("out.svg");
    let out = valnag()
        .arg("nok")
        .arg(&scene)
        .arg("--json")
        .arg(&json_path)
        .arg("--svg")
        .arg(&svg_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json = std::fs::read_to_string(&json_path).unwrap();
    assert!(json.contains("\"complete\": true"));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn batch_emits_one_line_per_scene_in_order() {
    let dir = tempdir();
    write_scene(&dir, "a.valnag", V2);
    write_scene(&dir, "b.valnag", "valuation { free; }\n");
    let out = valnag().arg("invariants").arg("--batch").arg(&dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("\"file\":\"a.valnag\""));
    assert!(lines[1].contains("\"file\":\"b.valnag\""));
}

#[test]
fn zariski_needs_t() {
    let dir = tempdir();
    let scene = write_scene(&dir, "v2.valnag", V2);
    let out = valnag().arg("zariski").arg(&scene).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = valnag().arg("zariski").arg(&scene).arg("--t").arg("2").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"pSquared\": \"1/3\""));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "valnag-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
