fn main() {
    std::process::exit(zeta_chords::run(std::env::args_os()));
}
