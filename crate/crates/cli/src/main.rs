mod args;
mod config;
mod dispatch;

use clap::Parser;

fn main() {
    let cli = args::Cli::parse();
    let overrides = match config::Overrides::from_env() {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("config error: {msg}");
            std::process::exit(2);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch::run(cli.command, cli.output, &overrides, &mut lock) {
        Ok(outcome) => {
            if let Some(fail) = outcome.first_failure {
                eprintln!("first failing report: {fail}");
            }
            std::process::exit(outcome.exit_code);
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
