use clap::Parser;

fn main() {
    let cli = trendstat_cli::Cli::parse();
    if let Err(e) = trendstat_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
