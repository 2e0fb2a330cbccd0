//! Driving the experiment runner from code: a TOML layer, overrides on top,
//! and the artifacts it would write.

use sirtail::experiment::{run, ConfigLayer, ExperimentConfig};

fn main() -> sirtail::Result<()> {
    let file = ConfigLayer::from_toml(
        r#"
        command = "tail"
        model = "ginibre"
        fading = "nakagami:2"
        beta = 3.0
        samples = 20000
        points = 200
        theta_points = 6
        "#,
    )?;
    let flags = ConfigLayer { seed: Some(42), ..Default::default() };
    let cfg = ExperimentConfig::resolve(file.overlay(flags))?;
    let out = run(&cfg)?;
    print!("{}", out.summary);
    for a in &out.artifacts {
        println!("--- {} ({} bytes)", a.name, a.contents.len());
    }
    println!("{}", out.artifacts[0].contents);

    match ExperimentConfig::resolve(ConfigLayer::from_toml("command = \"tail\"\n")?) {
        Err(e) => println!("without a seed: {e} (exit code {})", e.exit_code()),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
