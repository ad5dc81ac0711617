fn main() {
    std::process::exit(pftl::run(std::env::args_os()));
}
