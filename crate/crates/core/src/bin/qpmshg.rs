use clap::Parser;

fn main() -> std::process::ExitCode {
    qpmshg::cli::main_with(qpmshg::cli::Args::parse())
}
