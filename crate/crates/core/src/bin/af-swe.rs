fn main() {
    std::process::exit(active_flux_swe::cli::run_cli(std::env::args_os()));
}
