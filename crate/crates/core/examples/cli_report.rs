//! Drives the command layer directly and prints a worked example as CSV.

use largepow::cli::{self, Command, Format, RunConfig};
use largepow::rational::int;

fn main() -> largepow::Result<()> {
    let cfg = RunConfig {
        spec: None,
        command: Command::Example {
            id: 1,
            b: int(1),
            c: int(1),
            scale: Some(15),
        },
        format: Format::Csv,
    };
    print!("{}", cli::run(&cfg)?);
    Ok(())
}
