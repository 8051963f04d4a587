use super::{Formula, Kind};

/// Binding strength; higher binds tighter.
fn level(kind: Kind) -> u8 {
    match kind {
        Kind::Impl => 0,
        Kind::Or | Kind::Cor => 1,
        Kind::And | Kind::Cand => 2,
        Kind::Neg | Kind::Atom | Kind::Top | Kind::Bot => 3,
    }
}

#[derive(Clone, Copy)]
struct Symbols {
    not: &'static str,
    and: &'static str,
    or: &'static str,
    cand: &'static str,
    cor: &'static str,
    implies: &'static str,
    top: &'static str,
    bot: &'static str,
}

const ASCII: Symbols =
    Symbols { not: "~", and: "&", or: "|", cand: "?&", cor: "?|", implies: "->", top: "T", bot: "F" };

const UNICODE: Symbols =
    Symbols { not: "¬", and: " ∧ ", or: " ∨ ", cand: " ⊓ ", cor: " ⊔ ", implies: " → ", top: "⊤", bot: "⊥" };

/// Canonical ASCII text with the fewest parentheses that still parse back to
/// the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, ASCII, &mut out);
    out
}

/// Same shape as [`render`] but with the logical symbols and spacing.
pub fn render_unicode(f: &Formula) -> String {
    let mut out = String::new();
    write(f, UNICODE, &mut out);
    out
}

fn write(f: &Formula, sym: Symbols, out: &mut String) {
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push_str(sym.top),
        Formula::Bot => out.push_str(sym.bot),
        Formula::Neg(child) => {
            out.push_str(sym.not);
            write_child(child, level(child.kind()) < 3, sym, out);
        }
        Formula::Impl(left, right) => {
            write_child(left, level(left.kind()) == 0, sym, out);
            out.push_str(sym.implies);
            write_child(right, false, sym, out);
        }
        Formula::And(cs) | Formula::Or(cs) | Formula::Cand(cs) | Formula::Cor(cs) => {
            let op = match f.kind() {
                Kind::And => sym.and,
                Kind::Or => sym.or,
                Kind::Cand => sym.cand,
                _ => sym.cor,
            };
            let own = level(f.kind());
            for (n, child) in cs.iter().enumerate() {
                if n > 0 {
                    out.push_str(op);
                }
                // Same-level children need parentheses: an equal operator would
                // flatten, a different one is rejected as ambiguous.
                write_child(child, level(child.kind()) <= own, sym, out);
            }
        }
    }
}

fn write_child(child: &Formula, parens: bool, sym: Symbols, out: &mut String) {
    if parens {
        out.push('(');
        write(child, sym, out);
        out.push(')');
    } else {
        write(child, sym, out);
    }
}
