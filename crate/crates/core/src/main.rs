use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = match cofibrant::cli::run(std::env::args_os()) {
        Ok(o) => o,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if outcome.code != 0 {
        if let Some(msg) = outcome.report.get("message").and_then(|m| m.as_str()) {
            eprintln!("cofib: {msg}");
        } else {
            eprintln!("cofib: check failed");
        }
    }
    println!("{}", outcome.report);
    ExitCode::from(outcome.code as u8)
}
