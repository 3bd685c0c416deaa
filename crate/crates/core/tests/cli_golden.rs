mod common;

use common::golden::{check, transcript, CASES};

#[test]
fn transcripts_match_golden_files() {
    let failures: Vec<String> = CASES
        .iter()
        .filter_map(|(name, args)| check(name, &transcript(args)).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn exit_codes() {
    let code = |name: &str| {
        let args = CASES.iter().find(|(n, _)| *n == name).unwrap().1;
        transcript(args).lines().next().unwrap().to_string()
    };
    assert_eq!(code("eval_z2_sum"), "exit: 0");
    assert_eq!(code("eval_syntax_error"), "exit: 1");
    assert_eq!(code("eval_outside_sort"), "exit: 1");
    assert_eq!(code("eval_space_limit"), "exit: 2");
    assert_eq!(code("unknown_algebra"), "exit: 1");
}
