/// Outcome of comparing two multisets under the extension of a preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulOrd {
    Strict,
    Equiv,
    Incomparable,
}

impl MulOrd {
    pub fn is_geq(self) -> bool {
        matches!(self, MulOrd::Strict | MulOrd::Equiv)
    }
}

/// Multiset comparison on precomputed relation matrices: `gt[i][j]` and
/// `eq[i][j]` relate element `i` of the left multiset to element `j` of the
/// right one.
pub fn multiset_cmp_matrix(gt: &[Vec<bool>], eq: &[Vec<bool>], right_len: usize) -> MulOrd {
    let left_len = gt.len();
    if strict_cover(gt, eq, left_len, right_len).is_some() {
        return MulOrd::Strict;
    }
    if left_len == right_len && perfect_matching(eq, left_len, right_len) {
        return MulOrd::Equiv;
    }
    MulOrd::Incomparable
}

/// Standard extension: `M >mul N` iff `M = X ⊎ M'`, `N = Y ⊎ N'` with
/// `M' ≈ N'` elementwise, `X` non-empty and every element of `Y` below some
/// element of `X`.
pub fn multiset_cmp<T>(
    left: &[T],
    right: &[T],
    mut strict: impl FnMut(&T, &T) -> bool,
    mut equiv: impl FnMut(&T, &T) -> bool,
) -> MulOrd {
    let gt: Vec<Vec<bool>> = left
        .iter()
        .map(|a| right.iter().map(|b| strict(a, b)).collect())
        .collect();
    let eq: Vec<Vec<bool>> = left
        .iter()
        .map(|a| right.iter().map(|b| equiv(a, b)).collect())
        .collect();
    multiset_cmp_matrix(&gt, &eq, right.len())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Free,
    Eq,
    Big,
}

/// Finds a cover for the strict comparison. Returns, per right element,
/// `(left index, via equivalence)`.
pub(crate) fn strict_cover(
    gt: &[Vec<bool>],
    eq: &[Vec<bool>],
    left_len: usize,
    right_len: usize,
) -> Option<Vec<(usize, bool)>> {
    if left_len == 0 {
        return None;
    }
    // rows with identical relations are interchangeable while in the same
    // state; only the first of them is tried
    let class: Vec<usize> = (0..left_len)
        .map(|i| {
            (0..i)
                .find(|&p| gt[p] == gt[i] && eq[p] == eq[i])
                .unwrap_or(i)
        })
        .collect();
    let mut slots = vec![Slot::Free; left_len];
    let mut out = Vec::with_capacity(right_len);
    struct Ctx<'a> {
        gt: &'a [Vec<bool>],
        eq: &'a [Vec<bool>],
        class: &'a [usize],
        right_len: usize,
    }
    fn redundant(c: &Ctx<'_>, slots: &[Slot], i: usize) -> bool {
        (0..i).any(|p| c.class[p] == c.class[i] && slots[p] == slots[i])
    }
    fn go(j: usize, c: &Ctx<'_>, slots: &mut Vec<Slot>, out: &mut Vec<(usize, bool)>) -> bool {
        if j == c.right_len {
            return slots.iter().any(|s| *s != Slot::Eq);
        }
        // strict domination first: it keeps more left elements available
        for i in 0..slots.len() {
            if c.gt[i][j] && slots[i] != Slot::Eq && !redundant(c, slots, i) {
                let old = slots[i];
                slots[i] = Slot::Big;
                out.push((i, false));
                if go(j + 1, c, slots, out) {
                    return true;
                }
                out.pop();
                slots[i] = old;
            }
        }
        for i in 0..slots.len() {
            if c.eq[i][j] && slots[i] == Slot::Free && !redundant(c, slots, i) {
                slots[i] = Slot::Eq;
                out.push((i, true));
                if go(j + 1, c, slots, out) {
                    return true;
                }
                out.pop();
                slots[i] = Slot::Free;
            }
        }
        false
    }
    let ctx = Ctx {
        gt,
        eq,
        class: &class,
        right_len,
    };
    go(0, &ctx, &mut slots, &mut out).then_some(out)
}

pub(crate) fn perfect_matching(eq: &[Vec<bool>], left_len: usize, right_len: usize) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; right_len];
    fn augment(i: usize, eq: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..owner.len() {
            if eq[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, eq, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    if left_len != right_len {
        return false;
    }
    (0..left_len).all(|i| augment(i, eq, &mut vec![false; right_len], &mut owner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let lt = |a: &u32, b: &u32| a > b;
        let eq = |a: &u32, b: &u32| a == b;
        assert_eq!(multiset_cmp(&[3], &[1, 2, 2], lt, eq), MulOrd::Strict);
        assert_eq!(multiset_cmp(&[1, 2], &[2, 1], lt, eq), MulOrd::Equiv);
        assert_eq!(multiset_cmp(&[], &[1], lt, eq), MulOrd::Incomparable);
        assert_eq!(multiset_cmp(&[1], &[], lt, eq), MulOrd::Strict);
        assert_eq!(multiset_cmp::<u32>(&[], &[], lt, eq), MulOrd::Equiv);
        assert_eq!(
            multiset_cmp(&[2, 2], &[2, 2, 1], lt, eq),
            MulOrd::Incomparable
        );
        assert_eq!(multiset_cmp(&[2, 3], &[2, 2, 1], lt, eq), MulOrd::Strict);
    }
}
