fn main() {
    std::process::exit(hpol_lab::cli::run(std::env::args_os()));
}
