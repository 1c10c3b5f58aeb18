"""Independent oracle for the unit-circle chord/arc ratio.

Brute-force minimum of  |X(a) - X(b)| / d(a, b)  over the torus, where
X(t) = (cos t, sin t) and d is the periodic distance (in (0, pi]); on the
circle the ratio depends only on d and equals 2 sin(d/2) / d.  Scans a dense
grid then a local refinement. Run once; value frozen into tests.
"""

import numpy as np

if __name__ == "__main__":
    d = np.linspace(1e-9, np.pi, 20_000_001)
    r = 2.0 * np.sin(d / 2.0) / d
    i = int(np.argmin(r))
    print(f"coarse min at d = {d[i]:.12f}: ratio = {r[i]:.15f}")
    lo, hi = d[max(i - 1, 0)], d[min(i + 1, len(d) - 1)]
    dd = np.linspace(lo, hi, 1_000_001)
    rr = 2.0 * np.sin(dd / 2.0) / dd
    j = int(np.argmin(rr))
    print(f"refined min at d = {dd[j]:.15f}: ratio = {rr[j]:.15f}")
    print(f"2/pi = {2.0 / np.pi:.15f}")
