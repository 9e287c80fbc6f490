use clap::Parser;
use yagi_cli::{run, Args};

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("yagi: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
