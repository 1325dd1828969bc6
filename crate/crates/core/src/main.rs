// SPDX-License-Identifier: Apache-2.0
use std::io::Write;

fn main() {
    let (code, out) = isw::cli::run(std::env::args_os());
    if code >= 2 {
        eprint!("{out}");
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    std::process::exit(code);
}
