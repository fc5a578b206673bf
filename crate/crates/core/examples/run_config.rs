//! Library-level equivalent of the `fdsl` binary: load a TOML file, run,
//! and write every artifact.
//!
//! ```bash
//! cargo run --release -p fdsl --example run_config -- crates/core/examples/reference.toml out/
//! ```

use std::path::PathBuf;

use fdsl::cli::{load_config, render_table, run, Emit, Overrides};

fn main() -> fdsl::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reference.toml")));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("fdsl-run-config"));
    // two eigenpairs keep the demo short
    let overrides = Overrides {
        n_list: Some(vec![1, 2]),
        emit: vec![Emit::Table, Emit::Report, Emit::Plot, Emit::Analysis],
        ..Overrides::default()
    };
    let cfg = load_config(&config, &overrides)?;
    let report = run(&cfg, &out)?;
    print!("{}", render_table(&report));
    println!("artifacts in {}", out.display());
    Ok(())
}
