use clap::Parser;

fn main() {
    let cli = isoprim_cli::Cli::parse();
    std::process::exit(isoprim_cli::run(cli));
}
