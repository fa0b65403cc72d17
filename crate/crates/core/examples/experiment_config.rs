//! Experiments as TOML: a hand-written config run through the same command
//! functions the binary uses, then a built-in preset.

use lieadapt::cli::{cmd_compare, cmd_simulate, preset, preset_toml, ExperimentConfig, RunOptions};

const CONFIG: &str = r#"
[plant]
a = 3.0
b = 0.5

[controller]
kind = "proposed"
omega = 200.0

[time]
tf = 2.0

[initial]
states = [[0.5, 1.0]]
random = { count = 2, y = [-1.0, 1.0], k = [-1.0, 1.0] }
"#;

fn main() -> lieadapt::error::Result<()> {
    let dir = std::env::temp_dir().join("lieadapt-example");
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let opts = RunOptions {
        out_dir: Some(dir.join("custom")),
        with_lbs: true,
        seed: 42,
    };
    for p in cmd_simulate(&cfg, &opts)? {
        println!("{}", p.display());
    }

    println!("--- preset fig2 ---\n{}", preset_toml("fig2").unwrap_or_default());
    let opts = RunOptions {
        out_dir: Some(dir.join("fig2")),
        ..RunOptions::default()
    };
    for p in cmd_compare(&preset("fig2")?, &opts)? {
        println!("{}", p.display());
    }
    Ok(())
}
