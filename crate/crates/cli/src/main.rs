use std::process::ExitCode;

use neighbor_lof_cli::{execute, parse_args, CliError};

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os().skip(1))
        .and_then(|config| execute(&config, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("error: {}", text.trim_end().trim_start_matches("error: "));
            e.exit_code()
        }
    }
}
