use clap::Parser;

fn main() {
    let args = padic_curvature::cli::Args::parse();
    std::process::exit(padic_curvature::cli::main_with(args));
}
