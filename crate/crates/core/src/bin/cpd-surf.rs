use std::process::ExitCode;

use cpd_surf::io::cli;

fn main() -> ExitCode {
    if let Err(e) = cli::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(cli::EXIT_INVALID as u8);
    }
    let code = cli::run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
