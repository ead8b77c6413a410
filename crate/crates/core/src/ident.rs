//! Canonical ordering of element identifiers.
//!
//! Identifiers are opaque; the ordering here only fixes iteration and output
//! order. Runs of ASCII digits compare by numeric value so `2 < 12`, everything
//! else compares bytewise.

use std::cmp::Ordering;

pub fn canonical_cmp(a: &str, b: &str) -> Ordering {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].is_ascii_digit() && b[j].is_ascii_digit() {
            let si = i;
            while i < a.len() && a[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let da = trim_zeros(&a[si..i]);
            let db = trim_zeros(&b[sj..j]);
            let ord = da
                .len()
                .cmp(&db.len())
                .then_with(|| da.cmp(db))
                .then_with(|| (i - si).cmp(&(j - sj)));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            match a[i].cmp(&b[j]) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                ord => return ord,
            }
        }
    }
    (a.len() - i).cmp(&(b.len() - j))
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits
        .iter()
        .position(|&d| d != b'0')
        .unwrap_or(digits.len());
    &digits[start..]
}

/// Renders a set of member labels as `{a,b,c}`.
pub fn set_label<'a>(members: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::from("{");
    for (k, m) in members.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(m);
    }
    out.push('}');
    out
}

/// Renders tuple components as `(a,b,c)`.
pub fn tuple_label<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("(");
    for (k, p) in parts.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(p.as_ref());
    }
    out.push(')');
    out
}
