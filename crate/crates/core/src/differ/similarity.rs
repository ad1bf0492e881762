use std::collections::HashSet;

use crate::model::ClassDecl;

/// Unit-cost insert/delete/substitute edit distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if ca == cb {
                diag
            } else {
                1 + diag.min(above).min(row[j])
            };
            diag = above;
        }
    }
    row[b.len()]
}

/// `1 - levenshtein / max_len`, with two empty strings scoring 1.
pub fn name_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

/// Jaccard index of the two classes' attribute name sets; two attribute-less
/// classes score 1.
pub fn structural_similarity(a: &ClassDecl, b: &ClassDecl) -> f64 {
    let left: HashSet<&str> = a.attributes.iter().map(|x| x.name.as_str()).collect();
    let right: HashSet<&str> = b.attributes.iter().map(|x| x.name.as_str()).collect();
    let union = left.union(&right).count();
    if union == 0 {
        return 1.0;
    }
    left.intersection(&right).count() as f64 / union as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Attribute;
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Textbook recursive definition, memoized. Independent of the rolling
    /// row implementation above.
    fn oracle(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        if let Some(&v) = memo.get(&(a.len(), b.len())) {
            return v;
        }
        let cost = usize::from(a[0] != b[0]);
        let v = (oracle(&a[1..], b, memo) + 1)
            .min(oracle(a, &b[1..], memo) + 1)
            .min(oracle(&a[1..], &b[1..], memo) + cost);
        memo.insert((a.len(), b.len()), v);
        v
    }

    fn oracle_distance(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        oracle(&a, &b, &mut HashMap::new())
    }

    fn class(attrs: &[&str]) -> ClassDecl {
        let mut c = ClassDecl::new("C");
        c.attributes = attrs.iter().map(|n| Attribute::new(*n, "T")).collect();
        c
    }

    #[test]
    fn name_similarity_examples() {
        assert_eq!(name_similarity("ECU", "ECU"), 1.0);
        assert_eq!(oracle_distance("name", "newName"), 3);
        assert!((name_similarity("name", "newName") - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
        assert_eq!(name_similarity("a", ""), 0.0);
        assert_eq!(name_similarity("", ""), 1.0);
        assert_eq!(oracle_distance("Customer", "Client"), 7);
        assert!((name_similarity("Customer", "Client") - 0.125).abs() < 1e-12);
    }

    #[test]
    fn structural_similarity_examples() {
        assert_eq!(structural_similarity(&class(&["id", "name"]), &class(&["name", "id"])), 1.0);
        assert!((structural_similarity(&class(&["id", "name"]), &class(&["id", "addr"])) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(structural_similarity(&class(&[]), &class(&[])), 1.0);
        assert_eq!(structural_similarity(&class(&["a"]), &class(&[])), 0.0);
    }

    proptest! {
        #[test]
        fn levenshtein_matches_oracle(a in "[a-dA-D]{0,9}", b in "[a-dA-D]{0,9}") {
            prop_assert_eq!(levenshtein(&a, &b), oracle_distance(&a, &b));
        }

        #[test]
        fn name_similarity_bounded_and_symmetric(a in "\\PC{0,12}", b in "\\PC{0,12}") {
            let s = name_similarity(&a, &b);
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert_eq!(s, name_similarity(&b, &a));
        }

        #[test]
        fn structural_similarity_symmetric(
            a in proptest::collection::btree_set("[a-e]", 0..5),
            b in proptest::collection::btree_set("[a-e]", 0..5),
        ) {
            let ca = class(&a.iter().map(String::as_str).collect::<Vec<_>>());
            let cb = class(&b.iter().map(String::as_str).collect::<Vec<_>>());
            let s = structural_similarity(&ca, &cb);
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert_eq!(s, structural_similarity(&cb, &ca));
        }
    }
}
