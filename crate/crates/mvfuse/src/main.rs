fn main() {
    env_logger::init();
    std::process::exit(mvfuse::cli_main(std::env::args_os()));
}
