use clap::Parser;

use optomech::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    if let Err(e) = run(&cli, &command_line) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
