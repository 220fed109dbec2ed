use clap::Parser;
use fastmi_cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = fastmi_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
