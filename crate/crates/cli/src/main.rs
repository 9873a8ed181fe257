//! `li` binary entry point.

fn main() {
    std::process::exit(li_cli::main_with_args(std::env::args_os()));
}
