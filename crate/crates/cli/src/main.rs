fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match hdtransform_cli::run(std::env::args_os()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("hdt: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
