//! Number-theoretic transforms over three 62-bit primes, used to expand
//! long products of q-series exactly.

/// Primes k 2^30 + 1 with a quadratic non-residue generator.
pub(crate) const PRIMES: [(u64, u64); 3] =
    [(4611685944339202049, 3), (4611685941117976577, 3), (4611685917495656449, 11)];

/// Montgomery arithmetic modulo an odd p < 2^62.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Mont {
    pub p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        // Newton iteration for p^-1 mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = (r as u128 * r as u128 % p as u128) as u64;
        Self { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    /// a^e for a in Montgomery form.
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
}

/// Precomputed floor(w 2^64 / p) for Shoup multiplication by fixed operands.
#[derive(Clone, Copy)]
struct ShoupQuotient {
    p: u64,
    a: u64,
    b: u64,
    ratio: f64,
}

impl ShoupQuotient {
    fn new(p: u64) -> Self {
        let a = ((1u128 << 64) / p as u128) as u64;
        let b = ((1u128 << 64) - a as u128 * p as u128) as u64;
        Self { p, a, b, ratio: b as f64 / p as f64 }
    }

    /// w 2^64 = a w p + w b, so the quotient is a w + floor(w b / p).
    #[inline(always)]
    fn of(&self, w: u64) -> u64 {
        let wb = w as u128 * self.b as u128;
        let mut e = (w as f64 * self.ratio) as u64;
        let mut rem = wb as i128 - e as i128 * self.p as i128;
        while rem < 0 {
            e -= 1;
            rem += self.p as i128;
        }
        while rem >= self.p as i128 {
            e += 1;
            rem -= self.p as i128;
        }
        self.a.wrapping_mul(w).wrapping_add(e)
    }
}

/// Twiddles for a length-n transform: entry h + j holds w_(2h)^j for j < h,
/// with its Shoup quotient alongside.
struct Roots {
    w: Vec<u64>,
    shoup: Vec<u64>,
}

impl Roots {
    fn new(p: u64, root: u64, n: usize) -> Self {
        let sq = ShoupQuotient::new(p);
        let mut w = vec![0u64; n.max(2)];
        let mut shoup = vec![0u64; n.max(2)];
        let half = n / 2;
        if half >= 1 {
            let rs = sq.of(root);
            w[half] = 1;
            shoup[half] = sq.of(1);
            for j in 1..half {
                let x = mul_shoup(w[half + j - 1], root, rs, p);
                w[half + j] = x;
                shoup[half + j] = sq.of(x);
            }
        }
        let mut h = half / 2;
        while h >= 1 {
            for j in 0..h {
                w[h + j] = w[2 * h + 2 * j];
                shoup[h + j] = shoup[2 * h + 2 * j];
            }
            h /= 2;
        }
        Self { w, shoup }
    }
}

/// a w mod p for a < 2p, via the precomputed quotient ws.
#[inline(always)]
fn mul_shoup(a: u64, w: u64, ws: u64, p: u64) -> u64 {
    let q = ((a as u128 * ws as u128) >> 64) as u64;
    reduce_once(a.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p)), p)
}

/// x mod p for x < 2p, without a data-dependent branch.
#[inline(always)]
fn reduce_once(x: u64, p: u64) -> u64 {
    let y = x.wrapping_sub(p);
    // y wraps past 2^63 exactly when x < p, since p < 2^62
    y.wrapping_add(p & 0u64.wrapping_sub(y >> 63))
}

/// Decimation in frequency: natural order in, bit-reversed order out.
fn forward(a: &mut [u64], roots: &Roots, p: u64) {
    let n = a.len();
    if n < 2 {
        return;
    }
    let h = n / 2;
    let (lo, hi) = a.split_at_mut(h);
    let (w, ws) = (&roots.w[h..2 * h], &roots.shoup[h..2 * h]);
    for j in 0..h {
        let (u, v) = (lo[j], hi[j]);
        lo[j] = reduce_once(u + v, p);
        hi[j] = mul_shoup(u + p - v, w[j], ws[j], p);
    }
    forward(lo, roots, p);
    forward(hi, roots, p);
}

/// Decimation in time with inverse roots: bit-reversed order in, natural order out (unscaled).
fn backward(a: &mut [u64], roots: &Roots, p: u64) {
    let n = a.len();
    if n < 2 {
        return;
    }
    let h = n / 2;
    let (lo, hi) = a.split_at_mut(h);
    backward(lo, roots, p);
    backward(hi, roots, p);
    let (w, ws) = (&roots.w[h..2 * h], &roots.shoup[h..2 * h]);
    for j in 0..h {
        let u = lo[j];
        let v = mul_shoup(hi[j], w[j], ws[j], p);
        lo[j] = reduce_once(u + v, p);
        hi[j] = reduce_once(u + p - v, p);
    }
}

/// The first `keep` coefficients of a(q)^2, inputs and outputs reduced mod p.
pub(crate) fn square_truncated(m: &Mont, g: u64, a: &[u64], keep: usize) -> Vec<u64> {
    let p = m.p;
    let n = (2 * a.len()).next_power_of_two().max(2);
    let root = m.from_mont(m.pow(m.to_mont(g), (p - 1) / n as u64));
    let inv_root = invmod(root, p);
    let mut buf = vec![0u64; n];
    buf[..a.len()].copy_from_slice(a);
    forward(&mut buf, &Roots::new(p, root, n), p);
    for x in buf.iter_mut() {
        *x = m.mul(*x, *x);
    }
    backward(&mut buf, &Roots::new(p, inv_root, n), p);
    // undo 1/n and the factor R^-1 left by the pointwise product
    let r = ((1u128 << 64) % p as u128) as u64;
    let scale = mulmod(invmod(n as u64 % p, p), r, p);
    let scale_s = ShoupQuotient::new(p).of(scale);
    buf.truncate(keep);
    for x in buf.iter_mut() {
        *x = mul_shoup(*x, scale, scale_s, p);
    }
    buf
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    r
}

/// Reconstruction of signed integers |x| < M/2 from residues modulo [`PRIMES`].
pub(crate) struct Garner {
    inv12: u64,
    inv13: u64,
    inv23: u64,
}

impl Garner {
    pub fn new() -> Self {
        let (p1, p2, p3) = (PRIMES[0].0, PRIMES[1].0, PRIMES[2].0);
        Self { inv12: invmod(p1 % p2, p2), inv13: invmod(p1 % p3, p3), inv23: invmod(p2 % p3, p3) }
    }

    /// x rounded to f64.
    pub fn to_f64(&self, r: [u64; 3]) -> f64 {
        let (p1, p2, p3) = (PRIMES[0].0, PRIMES[1].0, PRIMES[2].0);
        // mixed radix digits: x = y1 + p1 y2 + p1 p2 y3
        let y1 = r[0];
        let y2 = mulmod((r[1] + p2 - y1 % p2) % p2, self.inv12, p2);
        let t = mulmod((r[2] + p3 - y1 % p3) % p3, self.inv13, p3);
        let y3 = mulmod((t + p3 - y2 % p3) % p3, self.inv23, p3);
        let p12 = p1 as f64 * p2 as f64;
        if y3 < p3 / 2 {
            (y1 as u128 + p1 as u128 * y2 as u128) as f64 + p12 * y3 as f64
        } else {
            // M - x = 1 + (p1-1-y1) + p1 (p2-1-y2) + p1 p2 (p3-1-y3), all digits nonnegative
            let low = 1u128 + (p1 - 1 - y1) as u128 + p1 as u128 * (p2 - 1 - y2) as u128;
            -(low as f64 + p12 * (p3 - 1 - y3) as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_non_residues() {
        for (p, g) in PRIMES {
            let m = Mont::new(p);
            let half = m.from_mont(m.pow(m.to_mont(g), (p - 1) / 2));
            assert_eq!(half, p - 1);
            assert_eq!((p - 1) % (1 << 30), 0);
        }
    }

    #[test]
    fn squaring_matches_schoolbook() {
        let a: Vec<u64> = (0..37u64).map(|i| (i * i * 7919 + 13) % 1000).collect();
        for (p, g) in PRIMES {
            let m = Mont::new(p);
            let got = square_truncated(&m, g, &a, 50);
            for k in 0..50 {
                let mut want = 0u128;
                for i in 0..=k.min(36) {
                    if k - i < 37 {
                        want += a[i] as u128 * a[k - i] as u128;
                    }
                }
                assert_eq!(got[k] as u128, want % p as u128);
            }
        }
    }

    #[test]
    fn shoup_quotients_are_exact() {
        for (p, _) in PRIMES {
            let sq = ShoupQuotient::new(p);
            for w in [0u64, 1, 2, 12345, p / 3, p / 2, p - 2, p - 1] {
                assert_eq!(sq.of(w) as u128, ((w as u128) << 64) / p as u128);
            }
        }
    }

    #[test]
    fn crt_recovers_signed_values() {
        for x in [0i128, 1, -1, 123456789, -987654321987654321, 170141183460469231731687303715884105727] {
            let r = PRIMES.map(|(p, _)| x.rem_euclid(p as i128) as u64);
            let got = Garner::new().to_f64(r);
            assert!((got - x as f64).abs() <= 1e-15 * (x as f64).abs(), "{x}: {got}");
        }
    }
}
