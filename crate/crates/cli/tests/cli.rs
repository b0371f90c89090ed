use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const S2: &str = "grp 2 0\ng 2 1 | . | .\n";
const EVEN_C4: &str = "mng 2 0\nv 4\ne 1 2 1\ne 2 3 2\ne 3 4 1\ne 4 1 2\n";
const ODD_C4: &str = "mng 2 0\nv 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 1 2\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_switchcol")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }
}

#[test]
fn solve_then_verify() {
    let f = Files::new();
    let (g, grp) = (f.put("g.mng", EVEN_C4), f.put("s2.grp", S2));
    let cert = f.path("out.cert");
    let o = run(&["solve", &g, &grp, "--certificate", &cert]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "cert yes k2 1\n");
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("map 0101"));
    let o = run(&["verify", &g, &grp, &cert]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");
}

#[test]
fn no_answers_exit_one() {
    let f = Files::new();
    let (g, grp) = (f.put("g.mng", ODD_C4), f.put("s2.grp", S2));
    let o = run(&["solve", &g, &grp]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("cert no bad_cycle\nwalk "), "{out}");
    assert!(out.ends_with("pair 1 2\n"));
    let cert = f.put("no.cert", &out);
    assert_eq!(run(&["verify", &g, &grp, &cert]).status.code(), Some(0));
    let o = run(&["solve", &g, &grp, "--verdict-only"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "cert no bad_cycle\n".to_string()));
}

#[test]
fn tampered_certificate_is_refuted() {
    let f = Files::new();
    let (g, grp) = (f.put("g.mng", EVEN_C4), f.put("s2.grp", S2));
    let cert = f.put("bad.cert", "cert yes k2 1\nmap 0101\n");
    let o = run(&["verify", &g, &grp, &cert]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "invalid\n");
    assert!(!o.stderr.is_empty());
}

#[test]
fn input_errors_exit_two() {
    let f = Files::new();
    let grp = f.put("s2.grp", S2);
    let broken = f.put("broken.mng", "mng 2 0\nv 3\ne 1 2 1\ne 2 9 1\n");
    let o = run(&["solve", &broken, &grp]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    let other = f.put("s3.grp", "grp 3 0\ng 2 1 3 | . | .\n");
    let g = f.put("g.mng", EVEN_C4);
    assert_eq!(run(&["solve", &g, &other]).status.code(), Some(2));
    assert_eq!(run(&["solve", &g, &f.path("missing.grp")]).status.code(), Some(2));
}

#[test]
fn classes_output() {
    let f = Files::new();
    let o = run(&["classes", &f.put("s2.grp", S2)]);
    assert_eq!(stdout(&o), "class 1 : 1\nclass 2 : 2\nc_gamma 2\n");
    let o = run(&["classes", &f.put("s3.grp", "grp 3 0\ng 2 1 3 | . | .\ng 2 3 1 | . | .\n")]);
    let out = stdout(&o);
    assert!(out.starts_with("class 1 : 1 2 3\nclass 2 : 1 2 3\nclass 3 : 1 2 3\nc_gamma "), "{out}");
}

#[test]
fn reduce_and_solve_agree() {
    let f = Files::new();
    let g = f.put("arcs.mng", "mng 0 1\nv 3\na 1 2 1\na 2 3 1\n");
    let grp = f.put("flip.grp", "grp 0 1\ng . | 1 | -\n");
    let (rg, rgrp) = (f.path("r.mng"), f.path("r.grp"));
    let o = run(&["reduce", &g, &grp, "--graph-out", &rg, "--group-out", &rgrp]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&rg).unwrap(), "mng 2 0\nv 3\ne 1 2 1\ne 2 3 2\n");
    assert_eq!(fs::read_to_string(&rgrp).unwrap(), "grp 2 0\ng 2 1 | . | .\n");
    assert_eq!(run(&["solve", &g, &grp]).status.code(), run(&["solve", &rg, &rgrp]).status.code());
}

#[test]
fn gadget_of_a_triangle() {
    let f = Files::new();
    let o = run(&["gadget", &f.put("tri.txt", "1 2\n2 3\n3 1\n"), "--m", "2"]);
    assert_eq!(stdout(&o), "mng 2 0\nv 3\ne 1 2 1\ne 2 3 1\ne 1 3 1\n");
    let g = f.put("tri.mng", &stdout(&o));
    let o = run(&["solve", &g, &f.put("s2.grp", S2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("cert no odd_cycle\n"));
    assert_eq!(run(&["gadget", &f.path("tri.txt"), "--m", "0", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn oracle_mirrors_solve() {
    let f = Files::new();
    let grp = f.put("s2.grp", S2);
    let even = f.put("even.mng", EVEN_C4);
    let o = run(&["oracle", &even, &grp, "--states"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("cert yes k2 "), "{out}");
    assert!(out.ends_with("# states 8\n"), "{out}");
    let cert = f.put("oracle.cert", &out);
    assert_eq!(run(&["verify", &even, &grp, &cert]).status.code(), Some(0));
    let odd = f.put("odd.mng", ODD_C4);
    let o = run(&["oracle", &odd, &grp]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "cert no exhaustive\n".to_string()));
    assert_eq!(run(&["oracle", &even, &grp, "--cap", "2"]).status.code(), Some(2));
}

#[test]
fn examples_directory_round_trips() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let Ok(entries) = fs::read_dir(&dir) else { return };
    for entry in entries.flatten() {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("mng") {
            continue;
        }
        let grp = path.with_extension("grp");
        let o = run(&["solve", path.to_str().unwrap(), grp.to_str().unwrap()]);
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", path.display());
    }
}
