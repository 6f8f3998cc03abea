fn main() { std::process::exit(errmargin::cli::main()); }
