"""Smoke test for the pyisw extension module.

Build the module first, for example with
    cargo build -p isw-py --features extension-module --release
    cp target/release/libpyisw.so python/pyisw.so
or with `maturin develop -m crates/python/Cargo.toml`, then run
    python3 python/smoke_test.py
"""

import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)

import pyisw  # noqa: E402

FIX = os.path.join(HERE, "..", "crates", "core", "fixtures")


def fixture(name):
    return os.path.join(FIX, name)


def main():
    t = pyisw.System.load(fixture("T.isw"))
    ok, report = t.validate()
    assert ok and report.endswith("10/10 axioms hold\n"), report
    assert t.states() == [["Δ"]]
    assert all(t.check(c) for c in ("BC", "ALG", "SALG", "ALG+"))
    assert pyisw.System.parse(t.to_text()) == t

    im = pyisw.System.load(fixture("IM.isw"))
    assert not im.check("BC")
    assert len(im.states()) == 5

    m = pyisw.Poset.load(fixture("M.poset"))
    assert m.is_l_domain() and not m.is_bounded_complete()
    assert m.to_system() == im
    pairs = dict(m.roundtrip())
    assert pairs["t1"] == ["⊥", "a", "b", "t1"], pairs
    assert m.to_dot().startswith("digraph")

    c2 = pyisw.System.load(fixture("IC2.isw"))
    assert len(c2.product(c2).states()) == 4

    h = pyisw.Map.load(fixture(os.path.join("maps", "collapse.map")))
    assert h.validate()[0]
    assert h.apply(["⊥", "p"]) == ["b", "t"]

    code, out = pyisw.run_cli(["check", "--bc", fixture("IM.isw")])
    assert code == 1 and "FAILS" in out, out

    try:
        pyisw.System.parse("kind isw\ntokens d\ndelta d\ncon d : q\n")
    except pyisw.IswError as e:
        assert "line 4" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("pyisw smoke test passed")


if __name__ == "__main__":
    main()
