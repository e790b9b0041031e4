import math
import os

import pytest

from folsing import _flowcore_py, _kernel

compiled = pytest.importorskip("folsing._flowcore")

CASES = [
    # kind, lam1, lam2, pert1, pert2, p0, t_range, box
    (0, 1, -1, (), (), (0.5, 0.5), (0, math.log(2)), (2, 2)),
    (0, 1, -1, (), (), (0.5, 0.5), (0, 10), (1, 1)),
    (0, 1 + 2j, -0.5 + 1j, (), (), (0.3 + 0.1j, 0.2 - 0.4j), (0, -1.3), (10, 10)),
    (0, 1, math.sqrt(2), (), (), (0.1, 0.1), (0, 1), (1, 1)),
    (1, 1.2 + 0.3j, -0.8 - 0.2j, (((1, 0), 0.05), ((0, 1), 0.03j)), (((1, 1), -0.07),), (0.2, 0.3), (0, 50), (0.5, 0.5)),
    (1, 1.0, -2.0, (((4, 0), 0.02 - 0.01j), ((1, 3), 0.01j)), (((0, 4), 0.03),), (0.4 + 0.1j, 0.3 - 0.2j), (0, 50), (0.5, 0.5)),
    (2, 0, 0, (), (), (-0.2, 1e-6), (0, 100), (1, 0.5)),
]


def _run(mod, case, rtol=1e-10):
    kind, l1, l2, p1, p2, (x0, y0), (t0, t1), (a, b) = case
    return mod.integrate(
        kind, l1, l2, [p for p, _ in p1], [c for _, c in p1], [p for p, _ in p2], [c for _, c in p2],
        x0, y0, t0, t1, rtol, 1e-14, a, b, 0.0, 100_000,
    )


@pytest.mark.parametrize("case", CASES)
def test_backends_agree(case):
    ts_c, xs_c, ys_c, st_c, rej_c = _run(compiled, case)
    ts_p, xs_p, ys_p, st_p, rej_p = _run(_flowcore_py, case)
    # same operations in the same order, so the outputs are bit-identical
    assert (st_c, rej_c) == (st_p, rej_p)
    assert ts_c == ts_p and xs_c == xs_p and ys_c == ys_p


def test_zero_span():
    for mod in (compiled, _flowcore_py):
        ts, xs, ys, status, _ = mod.integrate(0, 1, -1, [], [], [], [], 0.5, 0.5, 1.0, 1.0,
                                               1e-10, 1e-14, 1, 1, 0.0, 10)
        assert (ts, status) == ([1.0], _kernel.DONE)


def test_step_budget():
    for mod in (compiled, _flowcore_py):
        *_, status, _ = mod.integrate(0, 1, -1, [], [], [], [], 0.5, 0.5, 0, 10,
                                      1e-10, 1e-14, 1e9, 1e9, 0.0, 3)
        assert status == _kernel.MAX_STEPS


def test_too_many_terms_rejected():
    pows = [(1, 0)] * 65
    with pytest.raises(ValueError):
        compiled.integrate(1, 1, -1, pows, [0.0] * 65, [], [], 0.1, 0.1, 0, 1, 1e-10, 1e-14, 1, 1, 0.0, 10)


def test_backend_selected():
    forced = os.environ.get("FOLSING_PURE_PYTHON") == "1"
    assert _kernel.BACKEND == ("python" if forced else "cython")
