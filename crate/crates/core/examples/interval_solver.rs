//! Deciding equality of interval expressions and reasoning about faces.

use gctt::cofib::{face_dnf, face_entails, face_equal, face_of_interval, forall_name, iv_equal};
use gctt::surface::pretty;
use gctt::syntax::{Face, Interval, Name};

fn main() {
    let (i, j) = (Interval::name("i"), Interval::name("j"));

    let de_morgan = (
        Interval::neg(Interval::meet(i.clone(), j.clone())),
        Interval::join(Interval::neg(i.clone()), Interval::neg(j.clone())),
    );
    let middle = (Interval::join(i.clone(), Interval::neg(i.clone())), Interval::One);
    for (r, s) in [de_morgan, middle] {
        println!("{} = {} : {}", pretty::interval(&r), pretty::interval(&s), iv_equal(&r, &s));
    }

    let phi = Face::or(Face::eq1("i"), Face::and(Face::eq1("i"), Face::eq0("j")));
    println!("dnf of {} is {}", pretty::face(&phi), pretty::face(&face_dnf(&phi).to_face()));
    let contradiction = Face::and(Face::eq0("i"), Face::eq1("i"));
    println!("{} is empty: {}", pretty::face(&contradiction), face_dnf(&contradiction).is_bot());

    // under (i = 1), the faces (j = 0) and (i = 1) /\ (j = 0) coincide
    let both = Face::and(Face::eq1("i"), Face::eq0("j"));
    println!("(i = 1) |- (j = 0) = {} : {}", pretty::face(&both), face_equal(&Face::eq1("i"), &Face::eq0("j"), &both));
    println!("{} |- (j = 0) : {}", pretty::face(&both), face_entails(&both, &Face::eq0("j")));

    let meet = Interval::meet(i, Interval::neg(j));
    println!("face of {} is {}", pretty::interval(&meet), pretty::face(&face_of_interval(&meet)));

    let psi = Face::or(Face::eq0("i"), Face::eq1("j"));
    let all = forall_name(&Name::new("i"), &psi);
    println!("forall i. {} is {}", pretty::face(&psi), pretty::face(&face_dnf(&all).to_face()));
}
