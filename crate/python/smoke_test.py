"""Smoke test for the storder extension module.

Build and run from the repository root:

    cargo build -p storder-py --release
    cp target/release/libstorder.so python/storder.so
    python3 python/smoke_test.py
"""

import json
import math

import storder

g = storder.Distribution("gamma(3, 1.5)")
c = storder.Distribution("gconv(1:1, 2:2)")
assert g.expr == "gamma(3, 1.5)"
assert not g.is_discrete
assert math.isclose(g.mean(), 4.5)
assert math.isclose(g.cdf(1.0) + g.survival(1.0), 1.0)

st_thr, lr_thr = storder.gamma_convolution_thresholds([1.0, 2.0], [1.0, 2.0])
assert math.isclose(st_thr, 2 ** (2 / 3), rel_tol=1e-9)
assert math.isclose(lr_thr, 1.5, rel_tol=1e-12)

v = storder.check("st", g, c)
assert v and v.witness is None, v
v = storder.check("lr", storder.Distribution("gamma(3, 1.62)"), c)
assert not v and v.witness, v

st_up, lr_up, st_down, lr_down = storder.poisson_binomial_thresholds([0.2, 0.4, 0.6])
assert math.isclose(st_up, 1 - 0.192 ** (1 / 3), rel_tol=1e-9)
assert math.isclose(lr_up, 0.446153846154, rel_tol=1e-9)

nb_st, nb_lr = storder.negbin_convolution_thresholds([1.0, 2.0], [0.3, 0.6])
assert math.isclose(nb_lr, 0.5, rel_tol=1e-9)

m0, m1 = storder.dirichlet_negative_moments([1.0, 2.0], [1.0, 2.0])
assert math.isclose(m0, st_thr ** -3, rel_tol=1e-9)
assert math.isclose(m0 / m1, lr_thr, rel_tol=1e-9)

report = json.loads(storder.compare_report("gamma(3,1.5)", "gconv(1:1, 2:2)", ["st", "lr"]))
assert report["exit_code"] == 0 and report["rule"]["name"] == "gamma_convolution"
table = json.loads(storder.threshold_report("pbin(0.2, 0.4, 0.6)"))
assert len(table["thresholds"]) == 4

assert storder.canonical("mix( poisson ; 1:0.5, 3:0.5 )") == "mix(poisson; 1:0.5, 3:0.5)"
try:
    storder.Distribution("poisson(-1)")
except ValueError as e:
    assert "offset" in str(e) or "-1" in str(e) or str(e)
else:
    raise AssertionError("negative rate accepted")

print("storder", storder.__version__, "smoke test passed")
