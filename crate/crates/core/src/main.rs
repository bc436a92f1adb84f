fn main() {
    std::process::exit(spacelab_iqa::cli::run(std::env::args_os()));
}
