use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::with_capacity(1 << 16, stdout);
    let mut err = io::stderr();
    let code = sentiflux::cli::run(std::env::args_os(), &mut out, &mut err);
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe {
            let _ = writeln!(err, "error: {e}");
            std::process::exit(1);
        }
    }
    std::process::exit(code);
}
