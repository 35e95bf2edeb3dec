fn main() { std::process::exit(gctt::driver::main()) }
