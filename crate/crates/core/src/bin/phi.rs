use clap::Parser;

use phi_machine::atoms::Registry;
use phi_machine::cli::{run_cli, Cli};
use phi_machine::pipeline::with_big_stack;

fn main() {
    let cli = Cli::parse();
    let code = with_big_stack(move || {
        let reg = Registry::builtins();
        let mut out = std::io::stdout().lock();
        let mut err = std::io::stderr().lock();
        run_cli(cli, &reg, &mut out, &mut err)
    });
    std::process::exit(code);
}
