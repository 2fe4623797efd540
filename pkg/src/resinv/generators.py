"""Matrix and path generators, plus the JSON path format.

Rotation paths use ``Q(t) = exp(t S)`` for a skew-symmetric ``S``, evaluated
through the eigendecomposition of the Hermitian matrix ``iS``, so batches of
``t`` cost one complex product each.  ``||Q(t) - Q(s)|| <= ||S|| |t - s|``,
which gives every generator here an explicit Lipschitz constant.
"""

from __future__ import annotations

import json
import math

import numpy as np

from resinv.linalg import as_matrix, operator_norm
from resinv.paths import MatrixPath, constant_path, samples_path
from resinv.seeding import stream


class SkewFlow:
    """``t -> exp(t S)`` for skew-symmetric ``S``."""

    def __init__(self, S: np.ndarray):
        S = as_matrix(S)
        if np.abs(S + S.T).max() > 1e-12:
            raise ValueError("generator must be skew-symmetric")
        self.S = S
        mu, V = np.linalg.eigh(1j * S)
        self._mu = mu
        self._V = V
        self.speed = float(np.abs(mu).max()) if mu.size else 0.0

    def at(self, t: float) -> np.ndarray:
        return self.many(np.array([t]))[0]

    def many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        # exp(tS) = V diag(exp(-i mu t)) V^H since S = V diag(-i mu) V^H
        phase = np.exp(-1j * np.outer(ts, self._mu))
        Q = np.einsum("ij,tj,kj->tik", self._V, phase, self._V.conj())
        return Q.real


def random_skew(n: int, rng, speed: float = 1.0) -> np.ndarray:
    G = rng.standard_normal((n, n))
    S = G - G.T
    return S * (speed / np.linalg.norm(S, 2))


def plane_skew(n: int, speed: float = 1.0) -> np.ndarray:
    """Rotation generator turning the planes (e_1, e_2), (e_3, e_4), ... at ``speed``."""
    S = np.zeros((n, n))
    for i in range(0, n - 1, 2):
        S[i + 1, i] = speed
        S[i, i + 1] = -speed
    return S


def normalize_columns(A: np.ndarray) -> np.ndarray:
    return A / np.linalg.norm(A, axis=-2, keepdims=True)


def random_unit_matrix(n: int, seed: int = 0, spread: float = 0.3, rows: int | None = None):
    """``I + spread * G / sqrt(n)`` with unit columns; well conditioned for small ``spread``."""
    rng = stream(seed, "unit_matrix")
    rows = n if rows is None else rows
    base = np.eye(rows, n)
    return normalize_columns(base + spread * rng.standard_normal((rows, n)) / math.sqrt(n))


def gaussian_unit_matrix(n: int, seed: int = 0) -> np.ndarray:
    rng = stream(seed, "gaussian_unit")
    return normalize_columns(rng.standard_normal((n, n)))


def _flow_path(base: np.ndarray, flow: SkewFlow, domain, kind, conjugate=False) -> MatrixPath:
    a = float(domain[0])

    def batch(ts):
        Q = flow.many(np.asarray(ts) - a)
        out = Q @ base
        if conjugate:
            out = out @ Q.transpose(0, 2, 1)
        return out

    return MatrixPath(domain, base.shape, lambda t: batch(np.array([t]))[0], kind, batch)


def rotation_path(n: int = 2, speed: float = 1.0, domain=(0.0, 2 * math.pi)) -> MatrixPath:
    """``R(t)`` rotating the coordinate planes by angle ``speed * (t - a)``."""
    flow = SkewFlow(plane_skew(n, speed))
    kind = {"kind": "generator", "name": "rotation", "params": {"n": n, "speed": speed},
            "domain": list(domain)}
    return _flow_path(np.eye(n), flow, domain, kind)


def gen_unit_column_path(
    n: int,
    seed: int = 0,
    domain=(0.0, 1.0),
    speed: float = 0.25,
    spread: float = 0.3,
) -> MatrixPath:
    """``A(t) = Q(t - a) A0`` with ``A0`` unit-column and ``Q`` a rotation flow.

    Rotations preserve column norms, so every ``A(t)`` has unit columns, and
    ``||A(t)|| = ||A0||`` for all ``t``.  The Lipschitz constant is
    ``speed * ||A0||``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    A0 = random_unit_matrix(n, seed, spread)
    flow = SkewFlow(random_skew(n, stream(seed, "flow"), speed))
    kind = {"kind": "generator", "name": "random_smooth",
            "params": {"n": n, "speed": speed, "spread": spread},
            "domain": list(domain), "seed": seed}
    return _flow_path(A0, flow, domain, kind)


def lipschitz_constant(path: MatrixPath) -> float:
    """Analytic Lipschitz constant for the rotation-family generators."""
    kind = path.kind
    name = kind.get("name")
    p = kind.get("params", {})
    if name == "constant" or name == "adversarial":
        return 0.0
    if name == "rotation":
        return float(p["speed"])
    if name == "random_smooth":
        A0 = random_unit_matrix(p["n"], kind.get("seed", 0), p.get("spread", 0.3))
        return float(p["speed"]) * operator_norm(A0)
    if name == "spectral":
        return 2.0 * float(p["speed"])
    if name == "rotating_projection":
        return 2.0 * float(p["speed"])
    raise ValueError(f"no analytic Lipschitz constant for {name!r}")


def spectral_path(
    n: int,
    theta: float = 0.5,
    seed: int = 0,
    domain=(0.0, 1.0),
    speed: float = 0.25,
) -> MatrixPath:
    """``Q(t) diag(theta, ..., 1) Q(t)^T``: norm 1, column norms in ``[theta, 1]``."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    rng = stream(seed, "spectral")
    Q0 = np.linalg.qr(rng.standard_normal((n, n)))[0]
    base = Q0 @ np.diag(np.linspace(theta, 1.0, n)) @ Q0.T
    flow = SkewFlow(random_skew(n, stream(seed, "spectral_flow"), speed))
    kind = {"kind": "generator", "name": "spectral",
            "params": {"n": n, "theta": theta, "speed": speed},
            "domain": list(domain), "seed": seed}
    return _flow_path(base, flow, domain, kind, conjugate=True)


def rotating_projection(
    n: int = 2,
    k: int = 1,
    seed: int | None = None,
    domain=(0.0, 2 * math.pi),
    speed: float = 1.0,
) -> MatrixPath:
    """``Q(t) P0 Q(t)^T`` with ``P0`` of rank ``k``.

    With ``seed=None`` the flow turns coordinate planes and ``P0`` projects
    onto the first ``k`` coordinates, so ``n=2, k=1`` gives ``v(t) v(t)^T``
    with ``v(t) = (cos t, sin t)``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} outside [1, {n}]")
    if seed is None:
        S = plane_skew(n, speed)
        B = np.eye(n)[:, :k]
    else:
        S = random_skew(n, stream(seed, "proj_flow"), speed)
        B = np.linalg.qr(stream(seed, "proj_base").standard_normal((n, k)))[0]
    kind = {"kind": "generator", "name": "rotating_projection",
            "params": {"n": n, "k": k, "speed": speed},
            "domain": list(domain), "seed": seed}
    return _flow_path(B @ B.T, SkewFlow(S), domain, kind, conjugate=True)


def rank_step_projection(n: int = 3, switch: float = 0.5, domain=(0.0, 1.0)) -> MatrixPath:
    """Projection of rank 1 before ``switch`` and rank 2 after (not continuous)."""
    P1 = np.diag([1.0] + [0.0] * (n - 1))
    P2 = np.diag([1.0, 1.0] + [0.0] * (n - 2))

    def batch(ts):
        ts = np.asarray(ts)
        return np.where((ts < switch)[:, None, None], P1, P2)

    kind = {"kind": "generator", "name": "rank_step", "params": {"n": n, "switch": switch},
            "domain": list(domain)}
    return MatrixPath(domain, (n, n), lambda t: batch(np.array([t]))[0], kind, batch)


def adversarial_split(n: int, lam: float):
    """``(m, d, r)`` with ``m = ceil(n / lam^2)`` and ``n = d m + r``.

    When ``m`` divides ``n`` and ``d >= 2`` one frame copy is traded for
    ``r = m`` standard columns, so the remainder lies in ``[1, m]``.
    """
    if not 1.0 <= lam <= math.sqrt(n) + 1e-12:
        raise ValueError(f"lambda must lie in [1, sqrt(n)], got {lam}")
    m = math.ceil(n / lam**2 - 1e-12)
    d, r = divmod(n, m)
    if r == 0 and d >= 2:
        d, r = d - 1, m
    return m, d, r


def gen_adversarial(n: int, lam: float) -> np.ndarray:
    """Unit-column ``n x n`` matrix with norm at most ``lam`` and rank ``m + r``.

    The first ``r`` columns are ``e_1..e_r``; the remaining ``d m`` columns are
    ``d`` copies of ``e_{r+1}..e_{r+m}``.  Every column subset on which the
    matrix is injective has at most ``m + r < 4 n / lam^2`` elements.
    """
    m, d, r = adversarial_split(n, lam)
    I = np.eye(n)
    frame = I[:, r:r + m]
    return np.hstack([I[:, :r]] + [frame] * d)


def adversarial_path(n: int, lam: float, domain=(0.0, 1.0)) -> MatrixPath:
    P = constant_path(gen_adversarial(n, lam), domain)
    kind = {"kind": "generator", "name": "adversarial", "params": {"n": n, "lambda": lam},
            "domain": list(domain)}
    return MatrixPath(P.domain, P.shape, P.evaluator, kind, P.batch)


GENERATORS = ("constant", "rotation", "random_smooth", "adversarial", "spectral",
              "rotating_projection")


def path_from_json(obj) -> MatrixPath:
    """Build a path from its JSON description (dict or JSON text)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("path description must be an object with a 'kind' field")
    if obj["kind"] == "samples":
        return samples_path(obj["t"], obj["matrices"])
    if obj["kind"] != "generator":
        raise ValueError(f"unknown path kind {obj['kind']!r}")
    name = obj.get("name")
    p = dict(obj.get("params", {}))
    seed = int(obj.get("seed", 0))
    domain = tuple(obj.get("domain", (0.0, 1.0)))
    if name == "constant":
        M = p.get("matrix")
        M = np.eye(int(p.get("n", 2))) if M is None else np.asarray(M, dtype=float)
        return constant_path(M, domain)
    if name == "rotation":
        return rotation_path(int(p.get("n", 2)), float(p.get("speed", 1.0)), domain)
    if name == "random_smooth":
        return gen_unit_column_path(int(p["n"]), seed, domain, float(p.get("speed", 0.25)),
                                    float(p.get("spread", 0.3)))
    if name == "adversarial":
        return adversarial_path(int(p["n"]), float(p["lambda"]), domain)
    if name == "spectral":
        return spectral_path(int(p["n"]), float(p.get("theta", 0.5)), seed, domain,
                             float(p.get("speed", 0.25)))
    if name == "rotating_projection":
        return rotating_projection(int(p.get("n", 2)), int(p.get("k", 1)),
                                   obj.get("seed"), domain, float(p.get("speed", 1.0)))
    raise ValueError(f"unknown generator {name!r}; expected one of {GENERATORS}")
