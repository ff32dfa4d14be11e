import os
import subprocess
import sys

import numpy as np
import pytest

from raneylab import _backend, _pycore

try:
    from raneylab import _core
except ImportError:  # extension not built
    _core = None

SOLVERS = [pytest.param(_pycore.hermitian_eigh, id="python")]
if _core is not None:
    SOLVERS.append(pytest.param(_core.hermitian_eigh, id="compiled"))


def _random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


@pytest.mark.parametrize("eigh", SOLVERS)
@pytest.mark.parametrize("seed", range(5))
def test_reconstruction(eigh, seed):
    w = _random_hermitian(20, seed)
    lam, u = eigh(w, vectors=True)
    recon = (u * lam) @ u.conj().T
    assert np.linalg.norm(w - recon) <= 1e-10 * np.linalg.norm(w)
    assert np.linalg.norm(u.conj().T @ u - np.eye(20)) < 1e-12
    assert np.all(np.diff(lam) >= 0)


@pytest.mark.parametrize("eigh", SOLVERS)
@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33])
def test_against_lapack(eigh, n):
    w = _random_hermitian(n, n)
    lam, vec = eigh(w)
    assert vec is None
    assert np.allclose(lam, np.linalg.eigvalsh(w), rtol=0, atol=1e-12 * max(1, np.abs(lam).max()))


@pytest.mark.parametrize("eigh", SOLVERS)
def test_real_and_diagonal_inputs(eigh):
    d = np.diag([3.0, -1.0, 2.0])
    assert np.array_equal(eigh(d)[0], [-1.0, 2.0, 3.0])
    s = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(eigh(s)[0], [1.0, 3.0], atol=1e-15)


@pytest.mark.parametrize("eigh", SOLVERS)
def test_uses_upper_triangle(eigh):
    w = _random_hermitian(8, 1)
    junk = w.copy()
    junk[np.tril_indices(8, -1)] = 99.0
    assert np.allclose(eigh(junk)[0], eigh(w)[0], atol=1e-12)


@pytest.mark.parametrize("eigh", SOLVERS)
def test_rejects_non_square(eigh):
    with pytest.raises(ValueError):
        eigh(np.ones((2, 3)))


@pytest.mark.parametrize("eigh", SOLVERS)
def test_non_convergence(eigh):
    with pytest.raises(ArithmeticError):
        eigh(_random_hermitian(10, 0), max_sweeps=1)


@pytest.mark.skipif(_core is None, reason="compiled extension not built")
def test_backends_agree():
    w = _random_hermitian(40, 9)
    assert np.allclose(_core.hermitian_eigh(w)[0], _pycore.hermitian_eigh(w)[0], atol=1e-12)
    assert _backend.BACKEND == ("python" if os.environ.get("RANEYLAB_PURE") == "1" else "compiled")


def test_pure_env_selects_fallback():
    code = "import raneylab; print(raneylab.BACKEND)"
    env = dict(os.environ, RANEYLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "python"
