//! Delayed fixed points unfold only at the 1-end; streams built from them
//! still compute.

use std::path::Path;

use gctt::check::convert;
use gctt::driver::{check_file, evaluate};
use gctt::surface::parse_term;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let fix = check_file(&dir.join("fixpoints.ctt")).unwrap_or_else(|f| panic!("{}", f.diagnostic().render()));
    let ctx = fix.context();
    let ty = parse_term("|> A").unwrap();
    let unfolded = parse_term("next (f (dfix x : A . f x))").unwrap();
    for r in ["1", "0"] {
        let d = parse_term(&format!("dfix [{r}] x : A . f x")).unwrap();
        println!("dfix [{r}] unfolds judgementally: {}", convert(&ctx, &d, &unfolded, &ty));
    }
    if let Some(d) = fix.module.decls.iter().find(|d| d.name.as_str() == "unfoldLemma") {
        println!("unfoldLemma : {}", gctt::surface::pretty::term(d.ty()));
    }

    let streams = check_file(&dir.join("streams.ctt")).unwrap_or_else(|f| panic!("{}", f.diagnostic().render()));
    for expr in ["head (cons a s)", "head (repeat a)"] {
        let v = evaluate(&streams, expr, false).unwrap();
        println!("{expr}  ~>  {}", v.render(&streams.globals));
    }
}
