//! Elementary arithmetic: factorization, prime sieve, Jacobi/Kronecker
//! symbols and square-root counts modulo prime powers.

use std::sync::{Arc, Mutex, OnceLock};

/// Prime factorization by trial division, ascending primes.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All primes `≤ limit`, shared between calls.
pub fn primes_up_to(limit: u64) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<(u64, Arc<Vec<u64>>)>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new((0, Arc::new(Vec::new()))));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if guard.0 < limit {
        let top = limit.max(2 * guard.0).max(1000) as usize;
        let mut sieve = vec![true; top + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= top {
            if sieve[i] {
                let mut j = i * i;
                while j <= top {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let primes: Vec<u64> = (0..=top).filter(|&k| sieve[k]).map(|k| k as u64).collect();
        *guard = (top as u64, Arc::new(primes));
    }
    let all = Arc::clone(&guard.1);
    drop(guard);
    let cut = all.partition_point(|&p| p <= limit);
    if cut == all.len() {
        all
    } else {
        Arc::new(all[..cut].to_vec())
    }
}

pub fn mobius(n: u64) -> i32 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d = vec![1u64];
    for (p, e) in factor(n) {
        let len = d.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                d.push(d[i] * pk);
            }
        }
    }
    d.sort_unstable();
    d
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "Jacobi symbol needs odd n");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut r = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Kronecker symbol `(d/m)`.
pub fn kronecker(d: i64, m: i64) -> i32 {
    if m == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut r = 1;
    let mut mm = m.unsigned_abs();
    if m < 0 && d < 0 {
        r = -1;
    }
    let mut twos = 0;
    while mm.is_multiple_of(2) {
        mm /= 2;
        twos += 1;
    }
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let d8 = d.rem_euclid(8);
            if d8 == 3 || d8 == 5 {
                r = -r;
            }
        }
    }
    r * jacobi(d, mm)
}

/// Legendre symbol `(n/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre_euler(n: i64, p: u64) -> i32 {
    let a = n.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn ord_p(n: i64, p: u64, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m.is_multiple_of(p) && v < cap {
        m /= p;
        v += 1;
    }
    v
}

/// `#{x mod p^k : x² ≡ n (mod p^k)}` for a prime `p`.
pub fn sqrt_count(n: i64, p: u64, k: u32) -> u64 {
    if k == 0 {
        return 1;
    }
    let v = ord_p(n, p, k);
    if v >= k {
        return p.pow(k / 2);
    }
    if v % 2 == 1 {
        return 0;
    }
    let j = k - v;
    let pv = p.pow(v) as i64;
    let u = n / pv;
    let lift = p.pow(v / 2);
    let base = if p == 2 {
        let u8 = u.rem_euclid(8);
        match j {
            1 => 1,
            2 => {
                if u8 % 4 == 1 {
                    2
                } else {
                    0
                }
            }
            _ => {
                if u8 == 1 {
                    4
                } else {
                    0
                }
            }
        }
    } else {
        (1 + legendre_euler(u, p)) as u64
    };
    base * lift
}

/// The factor of `ρ_q(n)` contributed by the prime power `p^k ‖ q`; for
/// `p = 2` this is `#{x mod 2^{k+1} : x² ≡ n (mod 2^{k+2})}`.
pub fn rho_local(n: i64, p: u64, k: u32) -> u64 {
    if p == 2 {
        sqrt_count(n, 2, k + 2) / 2
    } else {
        sqrt_count(n, p, k)
    }
}

/// Exponent beyond which `rho_local(n, p, ·)` is constant.
pub(crate) fn rho_stable_from(n: i64, p: u64) -> u32 {
    ord_p(n, p, 64) + 1
}

/// `ρ_q(n) = #{x mod 2q : x² ≡ n (mod 4q)}`.
pub fn rho_q(n: i64, q: u64) -> u64 {
    assert!(q > 0, "rho_q needs q ≥ 1");
    let f = factor(q);
    let e2 = f.iter().find(|&&(p, _)| p == 2).map(|&(_, e)| e).unwrap_or(0);
    let mut r = rho_local(n, 2, e2);
    for (p, e) in f {
        if p != 2 {
            if r == 0 {
                break;
            }
            r *= rho_local(n, p, e);
        }
    }
    r
}

/// `D` is 1 or the discriminant of a quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let squarefree = |m: u64| factor(m).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}
