//! Sobol low-discrepancy points with random digital shifts, and seed
//! derivation for reproducible parallel work.

/// (degree s, polynomial a, initial direction numbers m) for dimensions 2..=10
/// of the Joe–Kuo `new-joe-kuo-6.21201` table.
const JOE_KUO: [(u32, u32, &[u32]); 9] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
];

pub const MAX_DIMS: usize = JOE_KUO.len() + 1;
const BITS: usize = 32;

/// Sobol sequence in up to `MAX_DIMS` dimensions with 32-bit resolution.
#[derive(Debug, Clone)]
pub struct Sobol {
    dirs: Vec<[u32; BITS]>,
}

impl Sobol {
    pub fn new(dims: usize) -> Self {
        assert!((1..=MAX_DIMS).contains(&dims), "Sobol supports 1..={MAX_DIMS} dimensions");
        let mut dirs = Vec::with_capacity(dims);
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - k);
        }
        dirs.push(first);
        for &(s, a, m) in JOE_KUO.iter().take(dims - 1) {
            let s = s as usize;
            let mut v = [0u32; BITS];
            for i in 0..BITS {
                if i < s {
                    v[i] = m[i] << (BITS - 1 - i);
                } else {
                    let mut x = v[i - s] ^ (v[i - s] >> s);
                    for k in 1..s {
                        if (a >> (s - 1 - k)) & 1 == 1 {
                            x ^= v[i - k];
                        }
                    }
                    v[i] = x;
                }
            }
            dirs.push(v);
        }
        Sobol { dirs }
    }

    pub fn dims(&self) -> usize {
        self.dirs.len()
    }

    /// Integer coordinates of point `index` (Gray-code order).
    pub fn point_bits(&self, index: u32, out: &mut [u32]) {
        let gray = index ^ (index >> 1);
        for (d, o) in self.dirs.iter().zip(out.iter_mut()) {
            let mut x = 0;
            let mut g = gray;
            let mut j = 0;
            while g != 0 {
                if g & 1 == 1 {
                    x ^= d[j];
                }
                g >>= 1;
                j += 1;
            }
            *o = x;
        }
    }

    /// Visits points `start..start + count` as shifted uniforms in (0, 1).
    /// The digital shift is XORed into the integer coordinates and each value
    /// is centered in its 2⁻³² cell, so 0 and 1 are never produced.
    pub fn for_each_shifted<F: FnMut(&[f64])>(&self, start: u32, count: u32, shift: &[u32], mut f: F) {
        let dims = self.dims();
        let mut bits = vec![0u32; dims];
        let mut u = vec![0.0; dims];
        self.point_bits(start, &mut bits);
        for i in 0..count {
            for d in 0..dims {
                u[d] = ((bits[d] ^ shift[d]) as f64 + 0.5) * (1.0 / 4_294_967_296.0);
            }
            f(&u);
            let idx = start.wrapping_add(i);
            // next Gray-code point flips the direction at idx's lowest zero bit
            let c = (!idx).trailing_zeros() as usize;
            if c < BITS {
                for d in 0..dims {
                    bits[d] ^= self.dirs[d][c];
                }
            }
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for task `index` of a run with `master` seed; independent of the
/// order in which tasks are scheduled.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5EED)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points_match_reference_table() {
        // unscrambled Joe–Kuo Sobol points, Gray-code order
        let expect: [[f64; 6]; 8] = [
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.5, 0.5, 0.5, 0.5],
            [0.75, 0.25, 0.25, 0.25, 0.75, 0.75],
            [0.25, 0.75, 0.75, 0.75, 0.25, 0.25],
            [0.375, 0.375, 0.625, 0.875, 0.375, 0.125],
            [0.875, 0.875, 0.125, 0.375, 0.875, 0.625],
            [0.625, 0.125, 0.875, 0.625, 0.625, 0.875],
            [0.125, 0.625, 0.375, 0.125, 0.125, 0.375],
        ];
        let s = Sobol::new(6);
        let mut out = [0u32; 6];
        for (i, row) in expect.iter().enumerate() {
            s.point_bits(i as u32, &mut out);
            for d in 0..6 {
                assert_eq!(out[d] as f64 / 4_294_967_296.0, row[d], "point {i}, dim {d}");
            }
        }
    }

    #[test]
    fn each_dimension_stratifies() {
        let s = Sobol::new(MAX_DIMS);
        let n = 1u32 << 10;
        let zero = vec![0u32; MAX_DIMS];
        let mut counts = vec![vec![0u32; n as usize]; MAX_DIMS];
        s.for_each_shifted(0, n, &zero, |u| {
            for (d, &x) in u.iter().enumerate() {
                counts[d][(x * n as f64) as usize] += 1;
            }
        });
        for c in counts {
            assert!(c.iter().all(|&k| k == 1));
        }
    }

    #[test]
    fn pairs_with_zero_quality_fill_every_cell() {
        // these projections are (0, m, 2)-nets, so 2^10 points hit each of 32 x 32 cells once
        let s = Sobol::new(5);
        let zero = vec![0u32; 5];
        let mut pts = Vec::new();
        s.for_each_shifted(0, 1024, &zero, |u| pts.push(u.to_vec()));
        for (a, b) in [(0, 1), (0, 3), (0, 4), (1, 2), (2, 4), (3, 4)] {
            let mut grid = [0u32; 1024];
            for p in &pts {
                grid[(p[a] * 32.0) as usize * 32 + (p[b] * 32.0) as usize] += 1;
            }
            assert!(grid.iter().all(|&k| k == 1), "dims ({a}, {b})");
        }
    }

    #[test]
    fn sequential_matches_random_access() {
        let s = Sobol::new(6);
        let shift = [3u32, 99, 12345, 0xdead_beef, 7, 1 << 31];
        let mut seq = Vec::new();
        s.for_each_shifted(1000, 50, &shift, |u| seq.push(u.to_vec()));
        let mut bits = [0u32; 6];
        for (i, p) in seq.iter().enumerate() {
            s.point_bits(1000 + i as u32, &mut bits);
            for d in 0..6 {
                let u = ((bits[d] ^ shift[d]) as f64 + 0.5) / 4_294_967_296.0;
                assert_eq!(u, p[d]);
            }
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
