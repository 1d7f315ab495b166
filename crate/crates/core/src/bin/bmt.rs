fn main() {
    std::process::exit(bmt_core::cli::run());
}
