use std::io::Write;

fn main() {
    let (code, out) = panache_cli::execute_command(std::env::args_os());
    let stream = if code == panache_cli::EXIT_USAGE && !out.starts_with('{') { 2 } else { 1 };
    if stream == 2 {
        let _ = std::io::stderr().write_all(out.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    std::process::exit(code);
}
