use crate::arith::SigmaSieve;

/// All n <= limit grouped by σ(n), stored as sorted adjacency lists.
///
/// `keys` is strictly increasing; the members of bucket `i` are
/// `members[offsets[i]..offsets[i + 1]]`, ascending.
#[derive(Clone, Debug)]
pub struct SigmaBuckets {
    keys: Vec<u64>,
    offsets: Vec<usize>,
    members: Vec<u64>,
}

impl SigmaBuckets {
    /// Buckets for every n <= `limit`; `limit` must not exceed the sieve.
    pub fn new(sieve: &SigmaSieve, limit: u64) -> Self {
        let table = sieve.indexed();
        assert!(limit <= sieve.limit(), "bucket limit beyond sieve");
        let mut pairs: Vec<(u64, u64)> = (1..=limit).map(|n| (table[n as usize], n)).collect();
        pairs.sort_unstable();
        let mut keys = Vec::new();
        let mut offsets = Vec::new();
        let mut members = Vec::with_capacity(pairs.len());
        for (s, n) in pairs {
            if keys.last() != Some(&s) {
                keys.push(s);
                offsets.push(members.len());
            }
            members.push(n);
        }
        offsets.push(members.len());
        SigmaBuckets { keys, offsets, members }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// The σ value of bucket `i` and its members.
    pub fn bucket(&self, i: usize) -> (u64, &[u64]) {
        (self.keys[i], &self.members[self.offsets[i]..self.offsets[i + 1]])
    }

    pub fn members_of(&self, sigma: u64) -> &[u64] {
        match self.keys.binary_search(&sigma) {
            Ok(i) => self.bucket(i).1,
            Err(_) => &[],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[u64])> + '_ {
        (0..self.len()).map(move |i| self.bucket(i))
    }
}

/// Enumerates index-ascending k-tuples from `elems` (sorted ascending) with
/// Σ weights[i]·tuple[i] = `target`. Strict mode forbids repeated elements.
/// Returns the number of leaf candidates examined.
pub(crate) fn solve_weighted(
    elems: &[u64],
    weights: &[u64],
    target: u128,
    strict: bool,
    out: &mut Vec<Vec<u64>>,
) -> u64 {
    let mut prefix = Vec::with_capacity(weights.len());
    let mut scanned = 0;
    descend(elems, weights, target, strict, 0, &mut prefix, out, &mut scanned);
    scanned
}

#[allow(clippy::too_many_arguments)]
fn descend(
    elems: &[u64],
    weights: &[u64],
    remaining: u128,
    strict: bool,
    start: usize,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    scanned: &mut u64,
) {
    let pos = prefix.len();
    let w = weights[pos] as u128;
    if pos + 1 == weights.len() {
        *scanned += 1;
        if !remaining.is_multiple_of(w) {
            return;
        }
        let want = remaining / w;
        let Ok(want) = u64::try_from(want) else { return };
        if elems[start.min(elems.len())..].binary_search(&want).is_ok() {
            prefix.push(want);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    // Every later element is at least the current one.
    let rest_weight: u128 = weights[pos..].iter().map(|&a| a as u128).sum();
    for i in start..elems.len() {
        let e = elems[i] as u128;
        if rest_weight * e > remaining {
            break;
        }
        prefix.push(elems[i]);
        let next = if strict { i + 1 } else { i };
        descend(elems, weights, remaining - w * e, strict, next, prefix, out, scanned);
        prefix.pop();
    }
}
