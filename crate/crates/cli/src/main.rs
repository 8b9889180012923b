use clap::Parser;

fn main() {
    let cli = morita_cli::Cli::parse();
    std::process::exit(morita_cli::run(&cli));
}
