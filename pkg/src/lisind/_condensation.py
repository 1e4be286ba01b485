"""Fast exact counting of permutations by longest-increasing-subsequence length.

Computes c(n, k) = #{permutations of n symbols with LIS length exactly k} for
all n <= n_max at once.  The route is Gessel's determinant identity

    sum_{n>=0} u_k(n) theta^n / (n!)^2  =  det( I_{i-j}(2 sqrt(theta)) )_{k x k},

where u_k(n) = #{pi in S_n : LIS(pi) <= k} and I_m denotes the modified
Bessel function of integer order, read as a formal power series in theta.
Writing T_k(r) = det( I_{i-j+r} ) for the r-shifted symbol and scaling
S_k(r) = theta^{-kr/2} T_k(r), the Desnanot-Jacobi (Dodgson condensation)
identity becomes a pyramid recurrence over power series in Q[[theta]]:

    S_k(r) * S_{k-2}(r) = S_{k-1}(r)^2 - S_{k-1}(r+1) * S_{k-1}(r-1),

seeded by S_0(r) = 1 and S_1(r) = sum_j theta^j / (j! (j+r)!).  The symmetry
S_k(-r) = theta^{kr} S_k(r) closes the r = 0 boundary, where the recurrence
needs S_{k-1}(-1) = theta^{k-1} S_{k-1}(1).  The constant term of S_k(r) is
prod_{i<k} i!/(r+i)! != 0, so dividing by S_{k-2}(r) is an exact power-series
long division, and u_k(n) = (n!)^2 * [theta^n] S_k(0).

All series are truncated at theta^{n_max} and computed modulo a battery of
31-bit primes in numba-compiled kernels; exact big integers are recovered via
the Chinese remainder theorem, and the caller re-validates row sums against
n! exactly.  Total work is O(n_max^4) word operations per prime battery —
a few seconds for n_max = 100 on a single core.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["lis_length_counts"]


@njit(cache=True, inline="always")
def _mulmod(a, b, p, pinv):
    """(a*b) mod p for 0 <= a,b < p < 2**31, via a float64 quotient estimate."""
    q = np.int64(a * pinv * b)
    r = a * b - q * p
    while r < 0:
        r += p
    while r >= p:
        r -= p
    return r


@njit(cache=True)
def _modpow(base, exp, p, pinv):
    result = np.int64(1)
    b = base % p
    e = exp
    while e > 0:
        if e & 1:
            result = _mulmod(result, b, p, pinv)
        b = _mulmod(b, b, p, pinv)
        e >>= 1
    return result


@njit(cache=True)
def _series_mul(a, b, out, p, pinv):
    """Truncated product of two power series mod p (coefficient arrays)."""
    length = out.shape[0]
    for m in range(length):
        acc = np.int64(0)
        for i in range(m + 1):
            # residues < 2**31; <= length terms keeps acc < 2**39, no overflow
            acc += _mulmod(a[i], b[m - i], p, pinv)
        out[m] = acc % p


@njit(cache=True)
def _series_div(num, den, out, p, pinv):
    """Exact power-series long division out = num/den mod p (den[0] invertible)."""
    length = out.shape[0]
    inv0 = _modpow(den[0], p - 2, p, pinv)
    for m in range(length):
        acc = np.int64(0)
        for i in range(1, m + 1):
            acc += _mulmod(den[i], out[m - i], p, pinv)
        out[m] = _mulmod((num[m] - acc) % p, inv0, p, pinv)


@njit(cache=True)
def _cdf_series_mod(nmax, p):
    """[theta^n] S_k(0) mod p for 0 <= k, n <= nmax, as an (nmax+1, nmax+1) array.

    Row k holds the series of S_k(0); u_k(n) = (n!)^2 * row[k][n] mod p.
    """
    length = nmax + 1
    pinv = 1.0 / p

    # factorials and inverse factorials up to 2*nmax (arguments j + r)
    fmax = 2 * nmax + 1
    fact = np.empty(fmax, np.int64)
    fact[0] = 1
    for i in range(1, fmax):
        fact[i] = _mulmod(fact[i - 1], np.int64(i) % p, p, pinv)
    inv_fact = np.empty(fmax, np.int64)
    inv_fact[fmax - 1] = _modpow(fact[fmax - 1], p - 2, p, pinv)
    for i in range(fmax - 1, 0, -1):
        inv_fact[i - 1] = _mulmod(inv_fact[i], np.int64(i) % p, p, pinv)

    out = np.zeros((length, length), np.int64)
    out[0, 0] = 1  # S_0(0) = 1
    if nmax == 0:
        return out

    # rolling levels: prev2 holds S_{k-2}(r), prev holds S_{k-1}(r)
    prev2 = np.zeros((length, length), np.int64)
    prev = np.zeros((length, length), np.int64)
    cur = np.zeros((length, length), np.int64)
    for r in range(length):
        prev2[r, 0] = 1  # S_0(r) = 1
    for r in range(nmax):  # S_1(r) needed for r = 0..nmax-1
        for j in range(length):
            prev[r, j] = _mulmod(inv_fact[j], inv_fact[j + r], p, pinv)
    out[1, :] = prev[0, :]

    t_sq = np.empty(length, np.int64)
    t_cross = np.empty(length, np.int64)
    t_num = np.empty(length, np.int64)
    for k in range(2, nmax + 1):
        rmax = nmax - k
        for r in range(rmax + 1):
            _series_mul(prev[r], prev[r], t_sq, p, pinv)
            if r == 0:
                # S_{k-1}(-1) * S_{k-1}(1) = theta^{k-1} * S_{k-1}(1)^2
                _series_mul(prev[1], prev[1], t_cross, p, pinv)
                shift = k - 1
                for j in range(length - 1, -1, -1):
                    t_cross[j] = t_cross[j - shift] if j >= shift else 0
            else:
                _series_mul(prev[r + 1], prev[r - 1], t_cross, p, pinv)
            for j in range(length):
                t_num[j] = (t_sq[j] - t_cross[j]) % p
            _series_div(t_num, prev2[r], cur[r], p, pinv)
        out[k, :] = cur[0, :]
        prev2, prev, cur = prev, cur, prev2
    return out


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.2e9 (bases 2, 3, 5, 7)."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_battery(n_max: int) -> list[int]:
    """Descending 31-bit primes whose product exceeds 4 * n_max! (CRT headroom)."""
    target = 4 * math.factorial(n_max)
    primes: list[int] = []
    modulus = 1
    candidate = 2**31 - 1
    while modulus <= target:
        if _is_prime(candidate):
            primes.append(candidate)
            modulus *= candidate
        candidate -= 2
    return primes


def lis_length_counts(n_max: int) -> list[list[int]]:
    """Exact counts rows[n-1][k-1] = #{pi in S_n : LIS(pi) = k} for n = 1..n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    primes = _prime_battery(n_max)
    mats = [_cdf_series_mod(n_max, np.int64(p)) for p in primes]

    modulus = math.prod(primes)
    # CRT basis: e_p = (M/p) * ((M/p)^-1 mod p); x = sum r_p e_p mod M
    basis = []
    for p in primes:
        m_over_p = modulus // p
        basis.append(m_over_p * pow(m_over_p, -1, p))

    # (n! mod p)^2 per prime, iteratively
    fact_sq = []
    for p in primes:
        per_n = np.empty(n_max + 1, dtype=np.int64)
        f = 1
        per_n[0] = 1
        for n in range(1, n_max + 1):
            f = f * n % p
            per_n[n] = f * f % p
        fact_sq.append(per_n)

    rows: list[list[int]] = []
    for n in range(1, n_max + 1):
        row: list[int] = []
        for k in range(1, n + 1):
            acc = 0
            for mat, p, e, fs in zip(mats, primes, basis, fact_sq):
                residue = int(mat[k, n] - mat[k - 1, n]) % p
                residue = residue * int(fs[n]) % p
                acc += residue * e
            row.append(acc % modulus)
        rows.append(row)
    return rows
