//! Running JSON jobs through the same path as the `qwind` binary.

use qwind::cli::{emit_plot_data, run, Command, InputSource, JobSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let wind = JobSpec::new(
        Command::Wind,
        InputSource::Inline(r#"{"curve": {"kind": "analytic", "name": "circle_spiral", "params": {"turns": 2}}}"#.into()),
    );
    let out = run(&wind)?;
    println!("wind: {} (exit code {})", out.json, out.exit_code());

    let mut roots = JobSpec::new(Command::Roots, InputSource::Inline(r#"{"coeffs": [1, 0, -2, 0, 1]}"#.into()));
    roots.slice = Some([0.0, 0.0, 1.0]);
    let out = run(&roots)?;
    emit_plot_data(&out.plot, std::io::stdout())?;
    Ok(())
}
