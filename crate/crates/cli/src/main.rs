fn main() {
    std::process::exit(dissipstab_cli::run(std::env::args_os()));
}
