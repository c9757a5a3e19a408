use clap::Parser;
use epb::cli::{exit_code, run, Cli};

fn main() {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            std::process::exit(out.status);
        }
        Err(e) => {
            eprintln!("epb: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
