//! End-to-end checks of the `preper` binary.

use std::io::{self, Write};
use std::process::{Command, Output};

use preper::cli::{run, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK};
use preper::Certificate;

fn preper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preper"))
        .args(args)
        .output()
        .expect("failed to launch preper")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn certificates(args: &[&str]) -> Vec<Certificate> {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = preper(&full);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).lines().map(|l| Certificate::from_json(l).unwrap()).collect()
}

const COMMANDS: &[&[&str]] = &[
    &["orbit", "--d", "4", "--c", "-19561/10000", "--x", "9/10"],
    &["dynatomic", "--d", "4", "--n", "2"],
    &["trace-resultant", "--d", "4"],
    &["search-2cycles", "--d", "4", "--bound", "40"],
    &["search-preper", "--d", "2", "--c", "-29/16"],
    &["search-fixed", "--d", "4", "--bound", "30"],
    &["search-type12", "--d", "3", "--bound", "2"],
    &["sweep", "--degrees", "3,4", "--z-max", "2", "--height", "6"],
    &["fc-decompose", "--d", "4", "--x1", "-13", "--x2", "9", "--z", "10"],
    &["fc-search", "--k", "2", "--delta", "2", "--bound", "12"],
    &["fc-check", "--k", "15"],
    &["abc-bound", "--epsilon", "0.72", "--K", "1", "--base", "2"],
    &["abc-bound", "--epsilon", "0.62991", "--K", "10", "--d", "8", "--w", "1300"],
    &["abc-triple", "1", "8", "9"],
    &["curve-quartic", "--bound", "9"],
    &["curve-hyper", "--bound", "6"],
    &["family", "--t", "-2/5", "--y", "22/25"],
    &["family-factor"],
    &["system-check", "--d", "4", "--x1", "-13", "--x2", "9", "--x3", "-13", "--z", "10"],
    &["fixed-to-cycle", "--d", "4", "--x1", "-9/10", "--x2", "13/10"],
    &["cycle-to-fixed", "--d", "4", "--x1", "-13/10", "--x2", "9/10"],
    &["factor", "19561"],
];

#[test]
fn json_reparses_to_the_human_form_and_reverifies() {
    for args in COMMANDS {
        let human = preper(args);
        assert_eq!(human.status.code(), Some(EXIT_OK), "{args:?}");
        let certs = certificates(args);
        assert!(!certs.is_empty(), "{args:?}");
        let rendered: Vec<String> = certs.iter().map(Certificate::human).collect();
        assert_eq!(rendered, stdout(&human).lines().collect::<Vec<_>>(), "{args:?}");
        for c in &certs {
            c.verify().unwrap();
            assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), *c);
        }
    }
}

#[test]
fn json_is_identical_for_every_thread_count() {
    for args in [
        &["search-2cycles", "--d", "6", "--bound", "60"][..],
        &["search-fixed", "--d", "4", "--bound", "50"],
        &["curve-hyper", "--bound", "10"],
        &["sweep", "--degrees", "4,5", "--z-max", "2", "--height", "10"],
        &["fc-search", "--k", "3", "--delta", "1", "--bound", "30"],
    ] {
        let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|t| {
                let mut full = vec!["--json", "--threads", t];
                full.extend_from_slice(args);
                preper(&full).stdout
            })
            .collect();
        assert!(!outputs[0].is_empty());
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn worked_examples() {
    let orbit = certificates(&["orbit", "--d", "4", "--c", "-19561/10000", "--x", "9/10"]);
    assert!(orbit[0].to_json().contains(r#""period":2,"tail":0"#));

    let search = certificates(&["search-2cycles", "--d", "8", "--bound", "1300"]);
    assert_eq!(search.len(), 1);
    assert!(search[0].to_json().contains(r#""c":"-1""#));

    let bound = preper(&["abc-bound", "--epsilon", "0.72", "--K", "1", "--base", "2"]);
    assert!(stdout(&bound).trim_end().ends_with(": 9.6"));

    let family = preper(&["family", "--t", "-2/5", "--y", "22/25"]);
    assert!(stdout(&family).contains("c = -19561/10000, two-cycle {-13/10, 9/10}"));
}

#[test]
fn exit_codes() {
    assert_eq!(preper(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(preper(&["--version"]).status.code(), Some(EXIT_OK));
    for bad in [
        &["bogus"][..],
        &["orbit", "--d", "4", "--c", "1/0", "--x", "0"],
        &["orbit", "--d", "1", "--c", "0", "--x", "0"],
        &["search-2cycles", "--d", "5", "--bound", "10"],
        &["abc-triple", "1", "2", "4"],
        &["factor", "0"],
    ] {
        let out = preper(bad);
        assert_eq!(out.status.code(), Some(EXIT_INVALID), "{bad:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

struct Broken;

impl Write for Broken {
    fn write(&mut self, _: &[u8]) -> io::Result<usize> {
        Err(io::Error::new(io::ErrorKind::BrokenPipe, "closed"))
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

#[test]
fn failed_output_is_an_internal_error() {
    let code = run(["preper", "factor", "12"], &mut Broken, &mut io::sink());
    assert_eq!(code, EXIT_INTERNAL);
}
