fn main() {
    // Rust ignores SIGPIPE by default, turning a downstream `head` into a
    // "failed printing to stdout" panic; die quietly like other CLI tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(eulerfv::cli::main_entry());
}
