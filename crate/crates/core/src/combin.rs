//! Small enumeration helpers shared by the searches.

/// Steps `choice` to the next tuple, last index fastest, where position `i`
/// ranges over `0..len(i)`. Returns false after the last tuple.
pub(crate) fn advance(choice: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < len(i) {
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// Ways to write `total` as an ordered sum of `parts` non-negative terms,
/// largest first term first.
pub(crate) fn compositions(total: u8, parts: usize) -> Vec<Vec<u8>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 2), vec![vec![0, 0]]);
        let mut c = vec![0, 0];
        let mut seen = 1;
        while advance(&mut c, |i| [2, 3][i]) {
            seen += 1;
        }
        assert_eq!(seen, 6);
    }
}
