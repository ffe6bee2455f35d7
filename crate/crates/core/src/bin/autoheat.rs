use std::path::PathBuf;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let env_data = std::env::var_os(autoheat::cli::DATA_ENV).map(PathBuf::from);
    let outcome = autoheat::cli::run(std::env::args_os(), env_data);
    let code = autoheat::cli::emit(&outcome, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
