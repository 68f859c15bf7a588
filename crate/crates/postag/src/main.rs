use clap::error::ErrorKind;
use clap::Parser;

mod cli;

fn main() {
    let parsed = match cli::Cli::try_parse() {
        Ok(p) => p,
        Err(e) => {
            // help and version are successful exits; everything else is
            // a usage error
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().ok();
            std::process::exit(code);
        }
    };
    std::process::exit(cli::run(parsed));
}
