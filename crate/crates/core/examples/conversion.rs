//! Judgemental equality of paths and of later types and terms.

use gctt::check::{convert, Checker};
use gctt::driver::check_source;
use gctt::surface::parse_term;

const MODULE: &str = "module example where
postulate A : U
postulate B : U
postulate Q : A -> B -> U
postulate a : |> A
postulate b : |> B
postulate t0 : A
postulate x0 : A
postulate y0 : A
postulate q : Path A x0 y0
postulate h : A -> B
";

fn main() {
    let loaded = check_source(MODULE).unwrap_or_else(|f| panic!("{}", f.diagnostic().render()));
    let ctx = loaded.context();
    let pairs = [
        ("<i> q @ i", "q", "Path A x0 y0"),
        ("q @ 1", "y0", "A"),
        ("|> [x <- a, y <- b] Q x y", "|> [y <- b, x <- a] Q x y", "U"),
        ("next [x <- next t0] h x", "next (h t0)", "|> B"),
        ("next [x <- a] x", "a", "|> A"),
        ("next [x <- a] t0", "next x0", "|> A"),
    ];
    for (l, r, ty) in pairs {
        let (lt, rt, tt) = (parse_term(l).unwrap(), parse_term(r).unwrap(), parse_term(ty).unwrap());
        let mut checker = Checker::new();
        checker.check(&ctx, &lt, &tt).unwrap();
        checker.check(&ctx, &rt, &tt).unwrap();
        let sign = if convert(&ctx, &lt, &rt, &tt) { "==" } else { "/=" };
        println!("{l}  {sign}  {r}  : {ty}");
    }
}
