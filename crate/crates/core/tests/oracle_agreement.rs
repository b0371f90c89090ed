mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use switchcol::oracle::{oracle_decide_2col, OracleVerdict};
use switchcol::solver::{check_length_bound, c_gamma_for, decide_2col, solve, verify_certificate, Outcome, SolveOptions};
use switchcol::Certificate;

fn check(g: &switchcol::MixedGraph, grp: &switchcol::SwitchGroup, label: &str) -> &'static str {
    let cert = decide_2col(g, grp).unwrap();
    let oracle = oracle_decide_2col(g, grp).unwrap();
    assert_eq!(cert.is_yes(), oracle.is_yes(), "{label}: {g:?}\n{cert:?}");
    let v = verify_certificate(g, grp, &cert);
    assert!(v.valid, "{label}: {g:?}\n{cert:?}\n{:?}", v.diagnostics);
    if let Certificate::Yes(y) = &cert {
        assert!(check_length_bound(g, y, c_gamma_for(g, grp).unwrap()), "{label}: bound");
    }
    if let OracleVerdict::Yes(y) = oracle {
        let v = verify_certificate(g, grp, &Certificate::Yes(y));
        assert!(v.valid, "{label}: oracle certificate {:?}", v.diagnostics);
    }
    let quick = solve(g, grp, SolveOptions { certificate: false }).unwrap();
    assert_eq!(quick.is_yes(), cert.is_yes());
    if let Outcome::No(no) = quick {
        assert_eq!(Certificate::No(no), cert);
    }
    match cert {
        Certificate::Yes(_) => "yes",
        Certificate::No(no) => no.reason_name(),
    }
}

#[test]
fn small_cycles_agree() {
    for named in common::catalog() {
        for len in 4..=5 {
            for g in common::all_cycle_colourings(&named.group, len) {
                check(&g, &named.group, named.name);
            }
        }
    }
}

#[test]
fn random_instances_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = std::collections::BTreeSet::new();
    for named in common::catalog().into_iter().chain(common::extra_groups()) {
        for _ in 0..60 {
            let g = common::random_instance(&mut rng, &named.group, 7, 10);
            seen.insert(check(&g, &named.group, named.name));
        }
    }
    let all = ["bad_cycle", "direction_conflict", "mixed_edge_arc", "odd_cycle", "orbit", "yes"];
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), all);
}
