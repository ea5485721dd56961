fn main() {
    std::process::exit(superalg::cli_main());
}
