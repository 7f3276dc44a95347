fn main() {
    std::process::exit(asnr_lab::cli::run_cli(std::env::args_os()));
}
