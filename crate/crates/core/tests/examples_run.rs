mod parse_and_compose {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/parse_and_compose.rs"));
}

mod mine_all {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mine_all.rs"));
}

mod top_k {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/top_k.rs"));
}

mod common_patterns {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/common_patterns.rs"));
}

mod spill_reload {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spill_reload.rs"));
}

mod export_formats {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/export_formats.rs"));
}

mod verify_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_oracle.rs"));
}

mod long_sequences {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/long_sequences.rs"));
}


#[test]
fn parse_and_compose_runs() {
    parse_and_compose::run_example().expect("parse_and_compose example should run");
}

#[test]
fn mine_all_runs() {
    mine_all::run_example().expect("mine_all example should run");
}

#[test]
fn top_k_runs() {
    top_k::run_example().expect("top_k example should run");
}

#[test]
fn common_patterns_runs() {
    common_patterns::run_example().expect("common_patterns example should run");
}

#[test]
fn spill_reload_runs() {
    spill_reload::run_example().expect("spill_reload example should run");
}

#[test]
fn export_formats_runs() {
    export_formats::run_example().expect("export_formats example should run");
}

#[test]
fn verify_oracle_runs() {
    verify_oracle::run_example().expect("verify_oracle example should run");
}

#[test]
fn long_sequences_runs() {
    long_sequences::run_example().expect("long_sequences example should run");
}
