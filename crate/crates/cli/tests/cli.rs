use std::fs;
use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use kpmlcs::{export_graph_json, export_graphml, export_stats_json, export_text, mine, MineParams, ProblemInstance};

const BIN: &str = env!("CARGO_BIN_EXE_kpmlcs");

fn kpmlcs(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn mine_identical_sequences() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("same.txt"), "ACGT\nACGT\nACGT\n").unwrap();
    let o = kpmlcs(dir.path(), &["mine", "same.txt", "--out", "res"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("L=4 paths=1\n"));
    for f in ["mlcs.text", "graph.xml", "graph.json", "stats.json"] {
        assert!(dir.path().join("res").join(f).is_file(), "{f}");
    }
}

#[test]
fn artifacts_match_library_exports() {
    let dir = tempfile::tempdir().unwrap();
    let seqs = ["ABC", "ACB", "ABC"];
    fs::write(dir.path().join("abc.txt"), seqs.join("\n")).unwrap();
    let o = kpmlcs(dir.path(), &["mine", "abc.txt", "--mode", "topk", "-k", "2", "-o", "res"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let inst = ProblemInstance::from_strs(&seqs).unwrap();
    let out = mine(&inst, &MineParams::topk(2)).unwrap();
    let text = export_text(&out.result, &out.stats, 3);
    assert!(text.ends_with("AB\t1\nAC\t2\n"));
    let expected = [
        ("mlcs.text", text),
        ("graph.xml", export_graphml(&out.dag)),
        (
            "graph.json",
            export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, None).unwrap().to_json(),
        ),
        ("stats.json", export_stats_json(&out.stats)),
    ];
    for (name, want) in expected {
        let got = fs::read_to_string(dir.path().join("res").join(name)).unwrap();
        assert_eq!(got, want, "{name}");
    }

    let o = kpmlcs(
        dir.path(),
        &["export", "abc.txt", "--mode", "topk", "-k", "2", "--as", "graph-json", "--from", "1", "--to", "2", "-o", "part.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let part = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, Some((1, 2))).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("part.json")).unwrap(), part.to_json());
}

#[test]
fn spilled_run_writes_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let plain = kpmlcs(dir.path(), &["mine", "--sample", "dna-60", "--mode", "topk", "-o", "a"]);
    let spilled = kpmlcs(
        dir.path(),
        &["mine", "--sample", "dna-60", "--mode", "topk", "-o", "b", "--memory-budget", "512"],
    );
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(spilled.status.code(), Some(0), "{}", stderr(&spilled));
    assert!(!stdout(&spilled).contains(" 0 level(s) spilled"));
    assert!(dir.path().join("b/manifest.bin").is_file());
    for f in ["mlcs.text", "graph.xml", "graph.json", "stats.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn failures_use_documented_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("abc.txt"), "ABC\nACB\nABC\n").unwrap();

    let o = kpmlcs(dir.path(), &["mine", "abc.txt", "--node-budget", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("node budget exceeded"));

    let o = kpmlcs(dir.path(), &["mine", "abc.txt", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    let o = kpmlcs(dir.path(), &["mine", "abc.txt", "-k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = kpmlcs(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));

    fs::write(dir.path().join("one.txt"), "ACGT\n").unwrap();
    let o = kpmlcs(dir.path(), &["mine", "one.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("need >= 2 sequences"));
    let o = kpmlcs(dir.path(), &["mine", "missing.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_every_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 6] = [
        (
            "mine",
            &["--sample", "--format", "--mode", "-k", "--memory-budget", "--node-budget", "--prune", "--out"],
        ),
        ("verify", &["--instances", "--seed", "--prune", "--inject-fault"]),
        ("stats", &["--sample", "--format", "--mode", "--node-budget", "--prune"]),
        ("export", &["--as", "--from", "--to", "--output", "--mode"]),
        ("sample", &["--output"]),
        ("serve", &["--port", "--host", "--artifact-dir", "--max-jobs", "--memory-budget", "--ui-dir"]),
    ];
    for (cmd, flags) in cases {
        let o = kpmlcs(dir.path(), &[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let help = stdout(&o);
        for flag in flags {
            assert!(help.contains(flag), "{cmd} --help misses {flag}");
        }
    }
    let top = stdout(&kpmlcs(dir.path(), &["--help"]));
    for cmd in ["mine", "verify", "stats", "export", "sample", "serve"] {
        assert!(top.contains(cmd));
    }
}

#[test]
fn verify_passes_and_detects_faults() {
    let dir = tempfile::tempdir().unwrap();
    let o = kpmlcs(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("checked 200 random instance(s)"));

    let o = kpmlcs(dir.path(), &["verify", "--instances", "20", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"missing\""));

    fs::write(dir.path().join("suite.txt"), "ABC\nACB\nABC\n\nGATTACA\nTAGACCA\nATTAGCA\n").unwrap();
    let first = kpmlcs(dir.path(), &["verify", "suite.txt"]);
    let second = kpmlcs(dir.path(), &["verify", "suite.txt"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("checked 2 instance(s)"));
}

#[test]
fn samples_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&kpmlcs(dir.path(), &["sample"]));
    assert!(list.contains("dna-1000"));
    let o = kpmlcs(dir.path(), &["sample", "two-mlcs", "-o", "two.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let o = kpmlcs(dir.path(), &["stats", "two.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("L 2  paths 2"));
    assert_eq!(kpmlcs(dir.path(), &["sample", "nope"]).status.code(), Some(2));
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn http(port: u16, method: &str, path: &str, body: &str) -> Option<(u16, String)> {
    let mut s = TcpStream::connect(("127.0.0.1", port)).ok()?;
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    );
    s.write_all(req.as_bytes()).ok()?;
    let mut raw = String::new();
    s.read_to_string(&mut raw).ok()?;
    let status = raw.split(' ').nth(1)?.parse().ok()?;
    let (head, body) = raw.split_once("\r\n\r\n")?;
    let chunked = head.to_ascii_lowercase().contains("transfer-encoding: chunked");
    Some((status, if chunked { dechunk(body) } else { body.to_string() }))
}

fn dechunk(mut body: &str) -> String {
    let mut out = String::new();
    while let Some((size, rest)) = body.split_once("\r\n") {
        let n = usize::from_str_radix(size.trim(), 16).unwrap_or(0);
        if n == 0 {
            break;
        }
        out.push_str(&rest[..n]);
        body = &rest[n + 2..];
    }
    out
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

#[test]
fn serve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let port = free_port();
    let child = Command::new(BIN)
        .current_dir(dir.path())
        .args(["serve", "--port", &port.to_string(), "--artifact-dir", "jobs"])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let _server = Server(child);

    let deadline = Instant::now() + Duration::from_secs(30);
    let samples = loop {
        if let Some(r) = http(port, "GET", "/api/samples", "") {
            break r;
        }
        assert!(Instant::now() < deadline, "server did not come up");
        std::thread::sleep(Duration::from_millis(50));
    };
    assert_eq!(samples.0, 200);
    assert!(samples.1.contains("two-mlcs"));

    let (status, body) = http(port, "POST", "/api/jobs", r#"{"sequences":["ABC","ACB","ABC"],"mode":"topk","k":2}"#).unwrap();
    assert_eq!(status, 202, "{body}");
    let rec: serde_json::Value = serde_json::from_str(&body).unwrap();
    let id = rec["job_id"].as_str().unwrap();
    loop {
        let (_, body) = http(port, "GET", &format!("/api/jobs/{id}"), "").unwrap();
        let rec: serde_json::Value = serde_json::from_str(&body).unwrap();
        if rec["state"] == "done" {
            break;
        }
        assert!(Instant::now() < deadline, "job did not finish");
        std::thread::sleep(Duration::from_millis(20));
    }
    let (status, text) = http(port, "GET", &format!("/api/jobs/{id}/download?format=text"), "").unwrap();
    assert_eq!(status, 200);
    assert!(text.ends_with("AB\t1\nAC\t2\n"), "{text}");
}

#[test]
fn serve_on_busy_port_fails() {
    let dir = tempfile::tempdir().unwrap();
    let held = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = held.local_addr().unwrap().port().to_string();
    let o = kpmlcs(dir.path(), &["serve", "--port", &port, "--artifact-dir", "jobs"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("binding"), "{}", stderr(&o));
}
