//! Identifier helpers shared by constructions that mint new names.

use std::collections::HashSet;

/// Makes identifiers unique by suffixing `#k` to later repeats. Generated
/// tuple names only collide when user identifiers contain `,` or brackets.
pub(crate) fn distinct(mut names: Vec<String>) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::with_capacity(names.len());
    for name in names.iter_mut() {
        if !seen.contains(name.as_str()) {
            seen.insert(name.clone());
            continue;
        }
        let mut k = 1;
        while seen.contains(&format!("{name}#{k}")) {
            k += 1;
        }
        *name = format!("{name}#{k}");
        seen.insert(name.clone());
    }
    names
}

#[cfg(test)]
mod tests {
    #[test]
    fn repeats_get_suffixes() {
        let out = super::distinct(vec!["a".into(), "a".into(), "a#1".into(), "a".into()]);
        assert_eq!(out, ["a", "a#1", "a#1#1", "a#2"]);
    }
}
