use clap::Parser;

fn main() {
    let cli = ebqn::cli::Cli::parse();
    match ebqn::cli::run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
