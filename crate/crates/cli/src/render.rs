//! Canonical text form of a parsed document; `parse ∘ render` is the
//! identity on the structural content.

use crate::parse::{MemberRef, RangeDecl, UltragraphDocument};

fn member(m: &MemberRef, var: &str) -> String {
    match m {
        MemberRef::Name(n) => n.clone(),
        MemberRef::Absolute { prefix, index } => format!("{prefix}[{index}]"),
        MemberRef::Offset { prefix, offset } => match offset {
            0 => format!("{prefix}[{var}]"),
            d if *d > 0 => format!("{prefix}[{var}+{d}]"),
            d => format!("{prefix}[{var}-{}]", -d),
        },
    }
}

fn range(r: &RangeDecl, var: &str) -> String {
    let members: Vec<String> = r.members.iter().map(|(m, _)| member(m, var)).collect();
    let body = if members.is_empty() {
        String::from("{ }")
    } else {
        format!("{{ {} }}", members.join(" "))
    };
    if r.cofinite {
        format!("~{body}")
    } else {
        body
    }
}

pub fn render_ultragraph(doc: &UltragraphDocument) -> String {
    let mut out = String::new();
    if !doc.vertices.is_empty() {
        out.push_str("vertices");
        for (v, _) in &doc.vertices {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
    }
    if let Some(tail) = &doc.tail {
        out.push_str(&format!(
            "tail {}[{}] for {} >= {}\n",
            tail.prefix, tail.var, tail.var, tail.start
        ));
    }
    for e in &doc.edges {
        out.push_str(&format!(
            "edge {} : {} -> {}\n",
            e.name,
            member(&e.source.0, ""),
            range(&e.range, "")
        ));
    }
    for f in &doc.families {
        out.push_str(&format!(
            "family {}[{}] for {} >= {} : {} -> {}\n",
            f.name,
            f.var,
            f.var,
            f.start,
            member(&f.source.0, &f.var),
            range(&f.range, &f.var)
        ));
    }
    out
}
