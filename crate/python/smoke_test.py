"""Smoke test for the spinwork Python extension.

Build and run:
    cargo build --release -p spinwork-py
    cp target/release/libspinwork_py.so python/spinwork.so
    python3 python/smoke_test.py
"""

import math

import spinwork


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    xx = spinwork.SpinModel("xx", 2)
    spec = xx.spectrum()
    assert all(close(a, b, 1e-9) for a, b in zip(spec, [-2.0, -1.0, 1.0, 2.0])), spec

    erg = xx.ergotropy()
    assert close(erg["mean_energy"], 1.0, 1e-9), erg
    assert close(erg["ergotropy"], 3.0, 1e-9), erg

    nc = spinwork.WorkCost(xx, "nc")
    top = [math.pi / 3, 2 * math.pi / 3]
    assert close(nc.work(top), 2.25, 1e-12)
    assert max(abs(g) for g in nc.gradient(top)) < 1e-12

    theta = [0.3, 1.7]
    ps = nc.gradient(theta)
    fd = nc.gradient(theta, method="finite-difference")
    assert all(close(a, b, 1e-6) for a, b in zip(ps, fd)), (ps, fd)

    run = nc.ascend([0.4, 2.5])
    assert close(run["work"], 2.25, 1e-3), run["work"]

    ens = spinwork.run_trials(xx, "lin", trials=200, seed=7)
    assert ens["final_mean"] > 2.25, ens["final_mean"]
    assert max(ens["final_values"]) <= 3.0 + 1e-9

    rows = spinwork.sweep("xy", ["nc"], "gamma", [-1.0, 1.0], n=4, trials=50)
    assert rows[1]["eta"] > rows[0]["eta"], rows

    grid = spinwork.landscape(xx, "lin", resolution=41)
    assert close(max(map(max, grid["work"])), 3.0, 1e-3)

    try:
        spinwork.SpinModel("xy", 4)
    except ValueError:
        pass
    else:
        raise AssertionError("xy without gamma should be rejected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
