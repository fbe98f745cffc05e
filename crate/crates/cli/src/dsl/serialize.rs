//! Canonical text form. Categories are written as full composition tables
//! and every functor, action, component and unit entry is spelled out, so
//! parsing the output and writing it again reproduces it byte for byte.

use std::fmt::Write;

use finitopos_core::fincat::{FinCategory, Mor};
use finitopos_core::finset::{FinFn, FinSet};

use super::lexer::{is_ident_char, is_ident_start};
use super::{CatName, Document, Value};

/// A name as the parser reads it back: bare when it is an identifier,
/// quoted otherwise.
pub fn format_name(s: &str) -> String {
    let mut chars = s.chars();
    if chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char) {
        return s.to_string();
    }
    quote(s)
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Element labels may also be bare numbers.
fn format_label(s: &str) -> String {
    if s.parse::<u64>().is_ok_and(|n| n.to_string() == s) {
        return s.to_string();
    }
    format_name(s)
}

fn cat_name(c: &CatName) -> String {
    match c {
        CatName::Declared(n) => format_name(n),
        CatName::Fixture(n) => quote(n),
    }
}

fn mor(c: &FinCategory, m: Mor) -> String {
    if c.is_identity(m) {
        format!("id({})", format_name(c.obj_name(c.dom(m))))
    } else {
        format_name(c.mor_name(m))
    }
}

fn non_identities(c: &FinCategory) -> impl Iterator<Item = Mor> + '_ {
    c.morphisms().filter(|&m| !c.is_identity(m))
}

fn table(f: &FinFn, dom: &FinSet, cod: &FinSet) -> String {
    let pairs: Vec<String> = (0..f.dom())
        .map(|i| format!("{} -> {}", format_label(dom.label(i)), format_label(cod.label(f.apply(i)))))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

fn category(out: &mut String, name: &str, c: &FinCategory) {
    let objects: Vec<String> = c.objects().map(|o| format_name(c.obj_name(o))).collect();
    let _ = writeln!(out, "category {} {{", format_name(name));
    let _ = writeln!(out, "  objects: {};", objects.join(", "));
    let gens: Vec<String> = non_identities(c)
        .map(|m| {
            format!(
                "{}: {} -> {}",
                mor(c, m),
                format_name(c.obj_name(c.dom(m))),
                format_name(c.obj_name(c.cod(m)))
            )
        })
        .collect();
    if !gens.is_empty() {
        let _ = writeln!(out, "  morphisms: {};", gens.join(", "));
        let _ = writeln!(out, "  compose:");
        for f in non_identities(c) {
            for &g in c.outgoing(c.cod(f)) {
                if !c.is_identity(g) {
                    let _ = writeln!(out, "    {}.{} = {};", mor(c, g), mor(c, f), mor(c, c.compose(g, f)));
                }
            }
        }
    }
    out.push_str("}\n");
}

/// Writes every value of the document in declaration order.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    for (i, (name, value)) in doc.entries().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match value {
            Value::Category(c) => category(&mut out, name, c),
            Value::Functor {
                source,
                target,
                functor,
            } => {
                let (s, t) = (functor.source(), functor.target());
                let _ = writeln!(
                    out,
                    "functor {} : {} -> {} {{",
                    format_name(name),
                    cat_name(source),
                    cat_name(target)
                );
                let objs: Vec<String> = s
                    .objects()
                    .map(|o| format!("{} -> {}", format_name(s.obj_name(o)), format_name(t.obj_name(functor.obj(o)))))
                    .collect();
                let _ = writeln!(out, "  objects: {};", objs.join(", "));
                let mors: Vec<String> = non_identities(s)
                    .map(|m| format!("{} -> {}", mor(s, m), mor(t, functor.mor(m))))
                    .collect();
                if !mors.is_empty() {
                    let _ = writeln!(out, "  morphisms: {};", mors.join(", "));
                }
                out.push_str("}\n");
            }
            Value::Presheaf { base, presheaf } => {
                let c = presheaf.base();
                let _ = writeln!(out, "presheaf {} : {} {{", format_name(name), cat_name(base));
                for o in c.objects() {
                    let labels: Vec<String> = presheaf.set(o).labels().iter().map(|l| format_label(l)).collect();
                    let _ = writeln!(out, "  set {} = {{{}}};", format_name(c.obj_name(o)), labels.join(", "));
                }
                for m in non_identities(c) {
                    let t = table(presheaf.act(m), presheaf.set(c.cod(m)), presheaf.set(c.dom(m)));
                    let _ = writeln!(out, "  act {} = {};", mor(c, m), t);
                }
                out.push_str("}\n");
            }
            Value::Map { source, target, map } => {
                let (x, y) = (map.source(), map.target());
                let c = x.base();
                let _ = writeln!(
                    out,
                    "map {} : {} -> {} {{",
                    format_name(name),
                    format_name(source),
                    format_name(target)
                );
                for o in c.objects() {
                    let t = table(map.component(o), x.set(o), y.set(o));
                    let _ = writeln!(out, "  at {} = {};", format_name(c.obj_name(o)), t);
                }
                out.push_str("}\n");
            }
            Value::Reflection {
                left,
                right,
                reflection,
            } => {
                let b = reflection.big();
                let _ = writeln!(out, "reflection {} {{", format_name(name));
                let _ = writeln!(out, "  left: {};", format_name(left));
                let _ = writeln!(out, "  right: {};", format_name(right));
                let unit: Vec<String> = b
                    .objects()
                    .map(|o| format!("{} -> {}", format_name(b.obj_name(o)), mor(b, reflection.unit(o))))
                    .collect();
                let _ = writeln!(out, "  unit: {};", unit.join(", "));
                out.push_str("}\n");
            }
        }
    }
    out
}
