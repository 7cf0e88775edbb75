use std::process::ExitCode;

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("MINKSPEC_TOL") {
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => minkspec_core::tol::set_scale(v),
            _ => {
                eprintln!("error: MINKSPEC_TOL must be a positive number, got {raw:?}");
                return ExitCode::from(2);
            }
        }
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    match minkspec_cli::run(&args) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if args.iter().any(|a| a == "--json") {
                let obj = serde_json::json!({
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                });
                eprintln!("{obj}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
