use clap::Parser;
use prefgraph::cli::{exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    match cli.run() {
        Ok(output) => print!("{output}"),
        Err(error) => {
            eprintln!("error: {error}");
            std::process::exit(exit_code(&error));
        }
    }
}
