fn main() {
    std::process::exit(gzspec::report::run(std::env::args_os()));
}
