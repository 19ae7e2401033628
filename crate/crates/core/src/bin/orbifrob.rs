fn main() {
    std::process::exit(orbifrob::cli::run(std::env::args_os()));
}
