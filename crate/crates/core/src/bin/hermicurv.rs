fn main() {
    std::process::exit(hermicurv::cli::main_entry());
}
