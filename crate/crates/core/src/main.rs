use clap::Parser;

fn main() {
    // Warnings only, on stderr; no environment configuration.
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).format_timestamp(None).init();
    let args = gravcat::cli::Args::parse();
    std::process::exit(gravcat::cli::main_with(args));
}
