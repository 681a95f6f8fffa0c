use clap::Parser;
use sat2xor::cli::{run, Cli, Io};

fn main() {
    let cli = Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr());
    let code = match run(
        cli,
        &mut Io {
            out: &mut out,
            err: &mut err,
        },
    ) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}
