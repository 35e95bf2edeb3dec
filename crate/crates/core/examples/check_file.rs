//! Type check a module and list its declarations.
//!
//! cargo run --example check_file -- corpus/streams.ctt

use std::path::PathBuf;
use std::process::ExitCode;

use gctt::driver::check_file;
use gctt::surface::pretty;

fn main() -> ExitCode {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/zipWith_preserves_comm.ctt"));
    match check_file(&path) {
        Ok(loaded) => {
            println!("module {}", loaded.module.name);
            for d in &loaded.module.decls {
                let kind = if d.body().is_some() { "def" } else { "postulate" };
                println!("  {kind:9} {} : {}", d.name, pretty::term(d.ty()));
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.diagnostic().render());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
