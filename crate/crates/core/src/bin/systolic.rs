fn main() {
    std::process::exit(systolic::cli::main());
}
