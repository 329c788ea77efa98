#![allow(dead_code)]

use btj_core::bttree::Vertex;
use btj_core::localfield::{FieldDesc, FieldKind, LFElement};
use btj_core::sl2core::Mat2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn padic(p: u32) -> FieldDesc {
    FieldDesc::padic(p).unwrap()
}

pub fn laurent(p: u32) -> FieldDesc {
    FieldDesc::laurent(p).unwrap()
}

/// Exponent of `p` in `n != 0`.
pub fn int_valuation(mut n: i64, p: i64) -> i64 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let k = rng.gen_range(-bound..=bound);
        if k != 0 {
            return k;
        }
    }
}

/// A random nonzero element and its valuation, computed independently of the element.
pub fn random_element(
    rng: &mut ChaCha8Rng,
    f: FieldDesc,
    vmin: i64,
    vmax: i64,
) -> (LFElement, i64) {
    let e = rng.gen_range(vmin..=vmax);
    match f.kind {
        FieldKind::Padic => {
            let p = f.p as i64;
            let num = nonzero(rng, 10_000);
            let den = rng.gen_range(1..=10_000i64);
            let v = e + int_valuation(num, p) - int_valuation(den, p);
            let x = &f.from_rational(num, den).unwrap() * &f.uniformizer_pow(e);
            (x, v)
        }
        FieldKind::Laurent => {
            let len = rng.gen_range(1..=f.default_precision as usize);
            let mut digits: Vec<u32> = (0..len).map(|_| rng.gen_range(0..f.p)).collect();
            digits[0] = rng.gen_range(1..f.p);
            (LFElement::from_digits(f, e, &digits).unwrap(), e)
        }
    }
}

/// `k pi^e` with `0 < |k| < p`.
pub fn small_coeff(rng: &mut ChaCha8Rng, f: FieldDesc, emin: i64, emax: i64) -> LFElement {
    let k = nonzero(rng, (f.p as i64 - 1).max(1));
    &f.from_int(k) * &f.uniformizer_pow(rng.gen_range(emin..=emax))
}

pub fn upper(f: FieldDesc, x: LFElement) -> Mat2 {
    Mat2::new(f.one(), x, f.zero(), f.one()).unwrap()
}

pub fn lower(f: FieldDesc, x: LFElement) -> Mat2 {
    Mat2::new(f.one(), f.zero(), x, f.one()).unwrap()
}

/// Product of `len` random elementary and diagonal factors.
pub fn random_sl2(rng: &mut ChaCha8Rng, f: FieldDesc, len: usize) -> Mat2 {
    let mut g = Mat2::identity(f);
    for _ in 0..len {
        let m = match rng.gen_range(0..3) {
            0 => upper(f, small_coeff(rng, f, -2, 2)),
            1 => lower(f, small_coeff(rng, f, -2, 2)),
            _ => Mat2::diagonal(&f.uniformizer_pow(rng.gen_range(-1..=1))).unwrap(),
        };
        g = g.mul(&m);
    }
    g
}

/// `M diag(lambda, 1/lambda) M^-1` with `v(lambda) = -k`.
pub fn random_hyperbolic(rng: &mut ChaCha8Rng, f: FieldDesc, k: i64) -> Mat2 {
    let (u, v) = random_element(rng, f, 0, 0);
    let lambda = &u * &f.uniformizer_pow(-k - v);
    let m = random_sl2(rng, f, 3);
    Mat2::diagonal(&lambda).unwrap().conjugate_by(&m)
}

pub fn random_vertex(rng: &mut ChaCha8Rng, f: FieldDesc, steps: usize) -> Vertex {
    let mut v = Vertex::base(f);
    for _ in 0..steps {
        let nb = v.neighbors();
        v = nb[rng.gen_range(0..nb.len())].clone();
    }
    v
}
