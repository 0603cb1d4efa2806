fn main() {
    std::process::exit(ordered_spacings::cli::run());
}
