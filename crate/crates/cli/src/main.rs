use clap::Parser;

fn main() {
    std::process::exit(cyclodyn_cli::main_with(cyclodyn_cli::Cli::parse()));
}
