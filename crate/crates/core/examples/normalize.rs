//! Evaluate closed natural numbers, including ones computed by transport,
//! composition and fixed points.

use std::path::Path;

use gctt::driver::{check_file, evaluate};

fn main() {
    let loaded = check_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/canonicity.ctt"))
        .unwrap_or_else(|f| panic!("{}", f.diagnostic().render()));
    for expr in ["fact4", "transportFun", "zerosUnfoldHead", "natrecDeep", "add 2 (mul 3 4)"] {
        let full = evaluate(&loaded, expr, false).unwrap();
        let head = evaluate(&loaded, expr, true).unwrap();
        println!("{expr}");
        println!("  normal form     {}", full.render(&loaded.globals));
        let mut head = head.render(&loaded.globals);
        if head.chars().count() > 72 {
            head = head.chars().take(72).collect::<String>() + " ...";
        }
        println!("  weak-head form  {head}");
    }
}
