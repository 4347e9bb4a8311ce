//! Subsets of a ground set `{0, .., n-1}` as bit masks.

pub type Mask = u64;

/// Largest ground set a mask can describe.
pub const MAX_ELEMENTS: usize = 63;

#[inline]
pub fn full(n: usize) -> Mask {
    debug_assert!(n <= MAX_ELEMENTS);
    (1u64 << n) - 1
}

#[inline]
pub fn singleton(u: usize) -> Mask {
    1u64 << u
}

#[inline]
pub fn contains(s: Mask, u: usize) -> bool {
    s >> u & 1 == 1
}

#[inline]
pub fn len(s: Mask) -> usize {
    s.count_ones() as usize
}

#[inline]
pub fn is_valid(s: Mask, n: usize) -> bool {
    n <= MAX_ELEMENTS && s & !full(n) == 0
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Element indices of `s` in ascending order.
pub fn elements(s: Mask) -> impl Iterator<Item = usize> {
    let mut rest = s;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(u)
        }
    })
}

pub fn from_elements<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, u| m | singleton(u))
}

/// All submasks of `s`, including `0` and `s`, in ascending numeric order.
pub fn submasks(s: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == s {
            None
        } else {
            Some((cur.wrapping_sub(s)) & s)
        };
        Some(cur)
    })
}
