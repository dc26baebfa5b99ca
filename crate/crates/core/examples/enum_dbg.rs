use exotic_forests::enumerate::{family_at, Family};
fn main() {
    for f in family_at(5, Family::GraftedTrees, false) {
        println!("{}", f.key());
    }
    println!("---exotic size2=4---");
    for f in family_at(4, Family::ExoticTrees, false) {
        println!("{}", f.key());
    }
}
