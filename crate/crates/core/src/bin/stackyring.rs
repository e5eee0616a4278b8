use std::io::Write;
use std::process::ExitCode;

use stackyring::cli::{parse_hmax, run};

fn main() -> ExitCode {
    let hmax = match parse_hmax(std::env::var("STACKYRING_HMAX").ok().as_deref()) {
        Ok(h) => h,
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let out = run(std::env::args_os(), hmax);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
