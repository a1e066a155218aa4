use clap::Parser;
use jnsc::cli::{execute, exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match execute(cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}
