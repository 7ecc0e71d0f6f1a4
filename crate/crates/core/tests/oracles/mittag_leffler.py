"""Reference values of E_{alpha,mu}(z) for tests/fixtures/mittag_leffler.txt.

Three routes at extended precision, cross-checked wherever two apply:
  series      sum z^k / Gamma(alpha k + mu) with enough digits to absorb cancellation
  asymptotic  -sum z^-k / Gamma(mu - alpha k), truncated at the smallest term
  phi         integral over (0, alpha pi) of exp(-(x u)^(1/alpha)), u = sin p / sin(alpha pi - p)
"""
import sys
import mpmath as mp


def series(a, m, z):
    a, m, z = mp.mpf(a), mp.mpf(m), mp.mpf(z)
    growth = float(abs(z)) ** (1 / float(a))
    dps = int(growth / 2.302) + 50
    with mp.workdps(dps):
        s, k = mp.mpf(0), 0
        while True:
            t = z**k * mp.rgamma(a * k + m)
            s += t
            if k > 2 * growth / float(a) + 20 and abs(t) < mp.mpf(10) ** (-dps + 5) * abs(s):
                break
            k += 1
        return +s


def asymptotic(a, m, z):
    # truncate on the envelope Gamma(alpha k + 1 - mu) / (pi |z|^k), not on
    # individual terms, which are tiny next to poles of 1/Gamma
    a, m, z = mp.mpf(a), mp.mpf(m), mp.mpf(z)
    with mp.workdps(60):
        s, prev = mp.mpf(0), None
        for k in range(1, 5000):
            env = mp.gamma(a * k + 1 - m) / (mp.pi * abs(z) ** k) if a * k + 1 - m > 0 else None
            if env is not None and prev is not None and env > prev:
                break
            s += -(z ** (-k)) * mp.rgamma(m - a * k)
            if env is not None:
                prev = env
        return s, prev


def phi(a, m, z):
    a, m, x = mp.mpf(a), mp.mpf(m), -mp.mpf(z)
    with mp.workdps(40):
        def f(t):
            p = a * mp.pi * t
            w = (x * mp.sin(p) / mp.sin(a * mp.pi * (1 - t))) ** (1 / a)
            if m == 1:
                return mp.exp(-w)
            if m == a:
                return w / x * mp.exp(-w)
            return -mp.expm1(-w) / x
        pts = [mp.mpf(0)] + [mp.mpf(10) ** (-e) for e in range(16, 0, -1)] + mp.linspace(mp.mpf(0.1), 1, 30)[1:]
        return mp.quad(f, pts)


def value(a, m, z):
    if z == 0:
        return mp.rgamma(m), 0
    growth = float(abs(z)) ** (1 / a)
    routes = []
    if z > 0 or growth <= 300:
        routes.append(series(a, m, z))
    if z < 0 and a < 1:
        routes.append(phi(a, m, z))
    if z < 0 and growth > 40:
        s, last = asymptotic(a, m, z)
        if last < mp.mpf(10) ** -30 * abs(s):
            routes.append(s)
    spread = max(abs(r - routes[0]) for r in routes) / abs(routes[0])
    return routes[0], (len(routes), spread)


if __name__ == "__main__":
    mp.mp.dps = 30
    print("# alpha mu z value; generated by tests/oracles/mittag_leffler.py")
    for a in [0.1, 0.25, 0.5, 0.75, 0.9]:
        for m in [1, a, a + 1]:
            for z in [-0.5, -1, -3, -7, -15, -30, -50, -51, -120, -1000, -1e5, 0.5, 2]:
                if z > 0 and a < 0.3 and z > 1:
                    continue
                v, (n, spread) = value(a, m, z)
                if n < 2 and z < 0:
                    sys.stderr.write(f"single route only: {a} {m} {z}\n")
                if spread > 1e-20:
                    sys.stderr.write(f"routes disagree {a} {m} {z}: {mp.nstr(spread, 3)}\n")
                print(a, m, z, mp.nstr(v, 20), flush=True)
