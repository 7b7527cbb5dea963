"""Smoke test for the pyorderembed extension.

Build with `cargo build -p orderembed-py --release`, then run
`python3 python/smoke_test.py`; the script finds the compiled library under
target/ and loads it as `pyorderembed`.
"""

import importlib.machinery
import importlib.util
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libpyorderembed.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("pyorderembed", str(lib))
            spec = importlib.util.spec_from_loader("pyorderembed", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("libpyorderembed.so not found; run `cargo build -p orderembed-py` first")


def main():
    m = load()
    print("pyorderembed", m.__version__)

    order, divisors, forms = m.class_group(-23)
    assert order == 3 and divisors == [3], (order, divisors)
    assert (1, 1, 6) in forms

    sel = m.selectivity(-23, [(-1, 0), (-1, 0), (0, 0), (1, 0)])
    assert sel["ratio"] == (1, 3), sel
    assert sel["genus_class_count"] == 3

    config = (ROOT / "scenarios" / "hilbert_d23.json").read_text()
    report = json.loads(m.run_scenario(config))
    assert report["ratio"] == ["1", "3"], report["ratio"]
    assert report["oracle"]["verdict"] == "match"
    text = m.explain(json.dumps(report))
    assert "1 of 3 conjugacy classes admits the embedding" in text

    bad = (ROOT / "scenarios" / "reciprocity_violation.json").read_text()
    try:
        m.run_scenario(bad)
    except m.OrderEmbedError as e:
        code, _, exit_code = e.args
        assert code == "reciprocity_violation" and exit_code == 1
    else:
        raise AssertionError("expected a reciprocity error")

    print("smoke test passed")


if __name__ == "__main__":
    main()
