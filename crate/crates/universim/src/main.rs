use clap::Parser;

fn main() {
    let cli = universim::cli::Cli::parse();
    std::process::exit(universim::cli::run(cli));
}
