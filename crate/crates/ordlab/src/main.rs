use std::process::ExitCode;

use clap::Parser;
use ordlab::cli::{execute, strip_format, Cli, Command, CorpusCmd};
use ordlab::corpus;
use ordlab::report::Format;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv = strip_format(&std::env::args().skip(1).collect::<Vec<_>>());
    let format = Format::from(cli.format);
    if let (Command::Corpus(CorpusCmd::Run { dir }), Format::Text) = (&cli.command, format) {
        return match corpus::run_dir(dir) {
            Ok(rows) => {
                print!("{}", corpus::table(&rows));
                if rows.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::FAILURE }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        };
    }
    match execute(&cli.command, argv) {
        Ok(r) => {
            print!("{}", r.render(format));
            if format == Format::Json {
                println!();
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
