"""Smoke test for the mlattice_py extension.

Build and run from the repository root:

    cargo build -p mlattice-py --features extension-module --release
    cp target/release/libmlattice_py.so python/mlattice_py.so
    python3 python/smoke_test.py
"""

import json
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import mlattice_py as ml  # noqa: E402

FIXTURES = HERE.parent / "crates" / "core" / "fixtures"


def main():
    b2 = ml.Arrangement.from_json((FIXTURES / "b2.json").read_text())
    assert len(b2) == 4, b2

    r = ml.exponents(b2, [1, 1, 1, 1])
    assert (r["d1"], r["d2"], r["delta"]) == (1, 3, 2), r
    assert r["theta_text"] == "(x)*dx + (y)*dy", r

    a, b, ok = ml.full_basis(b2, [2, 1, 1, 1])
    assert ok, (a, b)

    g2 = ml.Arrangement.coxeter("G2")
    solver = ml.Solver(g2)
    assert solver.delta([1] * 6) == 4
    assert len(solver) >= 1

    try:
        ml.exponents(b2, [1, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("wrong-length multiplicity accepted")

    scan = ml.scan_box(b2, [3, 3, 3, 3], jobs=2)
    assert len(scan) == 256
    assert scan.delta([1, 1, 1, 1]) == 2
    assert [1, 1, 1, 1] in [c["center"] for c in scan.centers()]
    verdicts = scan.verify()
    assert all(v["status"] != "fail" for v in verdicts), verdicts

    again = ml.Scan.from_json(scan.to_json())
    assert again.to_json() == scan.to_json()
    assert scan.to_csv().startswith("mu,d1,d2,delta,component,classification")

    row = ml.near_constant("G2", 0, [1, 0, 0, 0, 0, 0])
    assert row["computed"] == [2, 5], row

    print(json.dumps({"status": "ok", "points": len(scan), "checks": len(verdicts)}))


if __name__ == "__main__":
    main()
