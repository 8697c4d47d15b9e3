fn main() -> std::process::ExitCode {
    mammotex::cli::main()
}
