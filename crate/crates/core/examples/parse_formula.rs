//! Parse formulas, show their rendering, surface choices and polarity, and
//! what a parse error looks like.

use cl1::parse_formula;
use cl1::syntax::{owner, render_unicode, surface_occurrences};

fn main() {
    for text in ["((p?&q)&(p?&q))->(p?&q)", "~(p ?| (q ?& r))", "p & q | r"] {
        match parse_formula(text) {
            Ok(f) => {
                println!("{text}\n  ascii {f}\n  unicode {}", render_unicode(&f));
                for occ in surface_occurrences(&f).into_iter().filter(|o| o.subformula.is_choice()) {
                    println!(
                        "  choice at {} ({:?}): {} moves",
                        occ.path,
                        occ.polarity,
                        owner(occ.subformula.kind(), occ.polarity).map(|p| format!("{p:?}")).unwrap_or_default()
                    );
                }
            }
            Err(e) => println!("{text}\n  error: {e}"),
        }
    }
}
