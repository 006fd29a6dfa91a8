use clap::Parser;
use psu_designs_cli::commands::{run, Cli, EXIT_ERROR, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are operational; 2 is reserved for contradictions
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = run(&cli, &mut std::io::stdout().lock());
    std::process::exit(code);
}
