fn main() -> std::process::ExitCode {
    kslice::cli::main_entry()
}
