"""Smoke test for the regge_area extension module.

Build and run from the repository root:

    cargo build --release -p regge-area-py --features extension-module
    cp target/release/libregge_area_py.so python/regge_area.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import regge_area  # noqa: E402


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    p = regge_area.ModelParams(1.0, "arcsin")
    assert close(p.rescaling, 1 + 1j, 1e-15)
    assert close(p.x0, -2j, 1e-15)
    for route in ("series_unrescaled", "series_rescaled", "integral_rep", "radial_quadrature"):
        assert close(p.moment(0, route), math.pi * (1 + 1j), 1e-12), route

    lin = regge_area.ModelParams(2.0, "linear")
    try:
        lin.moment(0, "integral_rep")
    except ValueError:
        pass
    else:
        raise AssertionError("integral route should be rejected for the linear variant")

    assert close(4 * math.pi**2 * regge_area.distribution(0.0, 10.0), 1.0, 1e-12)
    n, loc, order = regge_area.singular_points(1.0, 1)[0]
    assert (n, order) == (1, 2) and close(loc, -2j, 1e-14)

    peaks = sorted(regge_area.local_maxima(0.05, -0.1225, 0.0), key=lambda m: abs(m[0]))
    assert len(peaks) == 3 and all(b[1] < a[1] for a, b in zip(peaks, peaks[1:]))

    fitted, theory = regge_area.decay_rate(1.0, "spacelike")
    assert abs(fitted - theory) < 0.03 * theory

    s = regge_area.TruncatedSeries.elementary("sin", 9)
    asin = regge_area.TruncatedSeries.elementary("arcsin", 9)
    ident = asin.compose(s).coeffs
    assert close(ident[1], 1.0, 1e-15) and all(abs(c) < 1e-14 for c in ident[2:])

    assert close(regge_area.ki1(1.0), 0.32828647817112, 1e-12)

    reports = regge_area.verify(["table-integral", "measure-norm"])
    assert reports and all(r["passed"] for r in reports)

    print(f"smoke test ok: {len(reports)} checks, N~(0) at gamma=1 = {p.moment(0):.6f}")


if __name__ == "__main__":
    main()
