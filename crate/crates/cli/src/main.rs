use clap::Parser;

use speedclean_cli::commands::{run, Cli};

fn main() {
    // clap itself exits with code 2 on usage errors.
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
