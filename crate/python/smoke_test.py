"""Smoke test for the oscu extension module.

Build and install first, e.g.

    cd crates/py && maturin build --release -o dist && pip install dist/oscu-*.whl

then run `python python/smoke_test.py` (or `pytest python/`).
"""

import oscu


def test_det3():
    f = oscu.Hypersurface.det3()
    forms = f.fubini()
    assert forms.dim == 7
    assert forms.form(2) == "2*y3*y6 + 2*y4*y7"
    assert forms.gauss_rank() == 4
    r = forms.rank()
    assert (r["rank_tilde"], r["rank_phi"]) == (7, 0)


def test_fermat_and_perm3():
    assert oscu.Hypersurface.fermat(3).fubini().rank()["rank_phi"] == 3
    assert oscu.Hypersurface.perm3(2, 3, 1).fubini().rank()["rank_phi"] == 3


def test_conic_and_oracle():
    conic = oscu.Hypersurface(["a", "b", "c"], "a*c - b^2", ["1", "0", "0"], order=2)
    forms = conic.fubini()
    assert forms.forms() == ["2*y1^2", "0"]
    o = forms.line_oracle(samples=50, seed=1)
    assert o["directions"] == 50 and o["mismatches"] == []


def test_family_and_hilbert():
    f = oscu.Hypersurface.family(["u", "v", "w"], ["u^2 + v^2 + w^2", "u*v*w"])
    forms = f.fubini()
    assert forms.form(3) == "-6*y1*y2*y3"
    assert forms.gauss_image()["phi_member"]
    h = oscu.hilbert(["a", "b", "c", "d"], ["a^2 + b^2 + c^2 + d^2", "a^3 - b*c*d + d^3"], 5)
    assert h["quotient_dims"] == [1, 4, 9, 15, 21, 27]
    assert not any(h["defects"])


def test_errors():
    try:
        oscu.Hypersurface(["a", "b", "c"], "a*c - b^", ["1", "0", "0"])
    except oscu.ParseError:
        pass
    else:
        raise AssertionError("expected a parse error")
    try:
        oscu.Hypersurface(["a", "b", "c"], "a*b*c", ["1", "0", "0"]).fubini()
    except oscu.PreconditionError:
        pass
    else:
        raise AssertionError("expected a singular point")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
