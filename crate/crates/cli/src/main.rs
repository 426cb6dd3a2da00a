use clap::Parser;

fn main() {
    let cli = match pplane_cli::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::process::exit(pplane_cli::run(&cli));
}
