//! Drives the command-line pipeline from code: parses a TOML run
//! configuration, runs it and lists the artifacts.
//!
//! cargo run --release --example run_config

use qpmshg::cli::{run, RunConfig};

const CONFIG: &str = r#"
command = "match"
out_dir = "target/run_config"

[match]
types = ["II", "0", "I"]
lambda1_nm = 800.0
"#;

fn main() -> qpmshg::Result<()> {
    let cfg = RunConfig::from_toml(CONFIG)?;
    let report = run(&cfg)?;
    for f in &report.files {
        let path = report.out_dir.join(f);
        println!("== {}", path.display());
        println!("{}", std::fs::read_to_string(path)?);
    }
    Ok(())
}
