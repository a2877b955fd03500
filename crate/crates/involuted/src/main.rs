use std::process::ExitCode;

fn main() -> ExitCode {
    involuted::cli::main()
}
