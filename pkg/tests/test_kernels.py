import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hodnet import _kernels
from hodnet.criterion import _features
from hodnet.galois import laurent_value, mulmod, primitive_element, smallest_irreducible

BACKENDS = _kernels.backends()
IDS = [k.NAME for k in BACKENDS]


def test_compiled_backend_is_built():
    assert _kernels.compiled is not None, "the compiled extension failed to import"
    assert _kernels.BACKEND == _kernels.compiled.NAME


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("m", [1, 3, 6, 9])
def test_power_table_against_field_arithmetic(impl, m):
    p = smallest_irreducible(2, m)
    g = primitive_element(p)
    pw, logt, vals = impl.gf2_power_table(p.value, g.value, m)
    a = 1
    for e in range(2**m - 1):
        assert pw[e] == a
        assert logt[a] == e
        assert vals[e] == laurent_value(a, p.value, m, 2)
        a = mulmod(a, g.value, p.value, 2)
    assert logt[0] == -1


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
def test_span_against_xor_fold(impl):
    rng = np.random.default_rng(0)
    cols = rng.integers(0, 2**10, size=(3, 7))
    out = impl.gf2_span(cols)
    for c in range(3):
        for n in range(2**7):
            acc = 0
            for k in range(7):
                if (n >> k) & 1:
                    acc ^= int(cols[c, k])
            assert out[c, n] == acc


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("L", [1, 7, 63, 300])
def test_circulant_direct_against_dense(impl, L):
    rng = np.random.default_rng(L)
    w, x = rng.standard_normal(L), rng.standard_normal(L)
    idx = (np.arange(L)[:, None] - np.arange(L)[None, :]) % L
    np.testing.assert_allclose(impl.circulant_direct(w, x), w[idx] @ x, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("alpha", [2, 3])
def test_pair_sum_backends_agree(alpha):
    rng = np.random.default_rng(alpha)
    x = rng.random((200, 3))
    gamma = np.array([1.0, 0.5, 0.25])
    feat, tail = _features(x, alpha)
    vals = [impl.kernel_pair_sum(x, gamma, feat, tail) for impl in BACKENDS]
    for v in vals[1:]:
        assert v == pytest.approx(vals[0], rel=1e-12)


def test_backends_give_identical_constructions():
    code = (
        "from hodnet.cbc import cbc_construct_fast; from hodnet.criterion import Weights;"
        "import hodnet._kernels as k;"
        "r = cbc_construct_fast(2, 10, 4, 2, 2, Weights.from_product([1.0]*4));"
        "print(k.BACKEND, [q.value for q in r.lattice.q], repr(r.B_final))"
    )
    outs = []
    for pure in ("", "1"):
        env = dict(os.environ)
        env.pop("HODNET_PURE_PYTHON", None)
        if pure:
            env["HODNET_PURE_PYTHON"] = pure
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split(" ", 1))
    assert outs[1][0] == "numpy"
    assert outs[0][1] == outs[1][1]


def test_benchmark_script_runs(tmp_path):
    script = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    out = tmp_path / "bench.json"
    subprocess.run([sys.executable, script, "--repeat", "1", "--json", str(out)], check=True, capture_output=True)
    rows = json.loads(out.read_text())
    assert len(rows) == 5 and all(r["agree"] is not False for r in rows)
