use clap::Parser;

fn main() {
    let cli = regcat_cli::Cli::parse();
    let code = regcat_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
