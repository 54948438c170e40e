"""Tropical solutions, the flag-deformation homotopy and the localized toric residue.

Floating point lives here only.  Equations are p_j(u) = q_j with
p_j(u) = prod_i alpha_i(u)^<alpha_i, lambda_j> and q_j = z^lambda_j.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import exact
from .configuration import (Configuration, Flag, GalePair, basis_index_sets, enumerate_flags,
                            flags_for_xi, gale_dual, signed_volume, sum_regularity)
from .errors import InvalidConfiguration, NearSingularError, NotSumRegularError
from .polynomial import SparsePoly


@dataclass(frozen=True)
class HomotopySettings:
    ds_initial: float = 1 / 16
    ds_min: float = 2.0 ** -20
    ds_max: float = 1 / 4
    max_corrections: int = 8
    newton_tol: float = 1e-12
    residual_tol: float = 1e-10
    dedup_tol: float = 1e-6
    singular_margin: float = 1e-8
    multistart_attempts: int = 200
    threads: int = 1
    seed: int = 0


@dataclass(frozen=True)
class TropicalSolution:
    flag: Flag
    B: tuple        # decreasing stage values of the F-solution
    sol: tuple      # t_i = B_stage(i)
    ts: tuple       # log-corrected solution t_i = B'_stage(i) - log|m_i|
    m: tuple


@dataclass
class CriticalPoint:
    u: np.ndarray
    residual: float            # max_j |p_j(u) - q_j|
    relative_residual: float   # max_j |p_j(u)/q_j - 1|
    flag_index: int
    steps: int
    min_jacobian: float
    origin: str = "homotopy"


@dataclass
class BSideResult:
    value: complex
    points: list
    expected_count: int
    found_count: int
    verified: bool
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# basic maps

def l_map(A: Configuration, u) -> np.ndarray:
    vals = alpha_values(A, u)
    if np.any(vals == 0):
        raise InvalidConfiguration("u lies on a hyperplane alpha_i = 0")
    return -np.log(np.abs(vals))


def alpha_values(A: Configuration, u) -> np.ndarray:
    return np.array(A.alphas, dtype=float) @ np.asarray(u, dtype=complex)


def exponent_matrix(A: Configuration, Lam: Sequence) -> np.ndarray:
    """e[i, j] = <alpha_i, lambda_j>."""
    return np.array([[exact.dot(a, l) for l in Lam] for a in A.alphas], dtype=float)


def q_values(A: Configuration, Lam: Sequence, z: Sequence) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = []
    for l in Lam:
        v = complex(1)
        for zi, e in zip(z, A.pairings(l)):
            v *= zi ** e
        out.append(v)
    return np.array(out)


def log_q_values(A: Configuration, Lam: Sequence, z: Sequence) -> np.ndarray:
    """log q_j = sum_i <alpha_i, lambda_j> log z_i (a consistent branch)."""
    logz = np.log(np.asarray(z, dtype=complex))
    return exponent_matrix(A, Lam).T @ logz


def xi_of_z(A: Configuration, z: Sequence) -> tuple:
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise InvalidConfiguration("z has a zero coordinate")
    t = -np.log(np.abs(z))
    return tuple(float(x) for x in np.array(A.alphas, dtype=float).T @ t)


def default_lambda_basis(r: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def check_lambda_basis(Lam: Sequence, r: int) -> None:
    if len(Lam) != r or any(len(l) != r for l in Lam):
        raise InvalidConfiguration(f"lambda basis must be {r} x {r}")
    if exact.det(Lam) != 1:
        raise InvalidConfiguration("lambda basis must be a positively oriented lattice basis")


# ---------------------------------------------------------------------------
# tropical solutions

def _stage_solve(F: Flag, rhs) -> np.ndarray:
    """Solve sum_j B_j (kappa_j - kappa_{j-1}) = rhs for B."""
    r = len(F.kappas)
    cols = []
    prev = (0,) * r
    for k in F.kappas:
        cols.append([a - b for a, b in zip(k, prev)])
        prev = k
    M = np.array(cols, dtype=float).T
    return np.linalg.solve(M, np.asarray(rhs, dtype=float))


def ts_vector(A: Configuration, F: Flag, xi) -> np.ndarray:
    """The common solution of sum t_i alpha_i = xi and t_c - t_b = log|m_b/m_c| within stages."""
    logm = np.log(np.abs(np.array([float(m) for m in F.m])))
    shift = np.array(A.alphas, dtype=float).T @ logm
    Bp = _stage_solve(F, np.asarray(xi, dtype=float) + shift)
    return np.array([Bp[s - 1] for s in F.stage]) - logm


def _selection_point(A: Configuration, xi) -> tuple:
    """xi itself if sum-regular, else a deterministic small perturbation of it."""
    xi = tuple(float(x) for x in xi)
    scale = max(1.0, max(abs(x) for x in xi))
    if float(sum_regularity(A, xi)) > 1e-9 * scale:
        return xi
    r = A.r
    for p in range(3, 12):
        eps = scale * 10.0 ** (-p)
        for d in ([7.0 ** -k for k in range(r)], [(-1) ** k * 3.0 ** -k for k in range(r)]):
            cand = tuple(x + eps * y for x, y in zip(xi, d))
            if float(sum_regularity(A, cand)) > 1e-12 * scale:
                return cand
    raise NotSumRegularError("could not perturb xi to a sum-regular point")


def zero_flags(A: Configuration, xi) -> list:
    """FL^0 for a float xi, perturbing deterministically off sum-walls."""
    return flags_for_xi(A, _selection_point(A, xi), "zero")


def tropical_solutions(A: Configuration, xi) -> list:
    exact_input = all(isinstance(x, (int, Fraction)) for x in xi)
    out = []
    for F in enumerate_flags(A):
        if not F.proper:
            continue
        if exact_input:
            c = exact.coordinates(F.kappas, exact.frac_vector(xi))
            if any(x < 0 for x in c[:-1]):
                continue
            B = [c[-1]]
            for cj in reversed(c[:-1]):
                B.insert(0, B[0] + cj)
            B = tuple(B)
        else:
            B = tuple(float(b) for b in _stage_solve(F, xi))
            if any(B[j] < B[j + 1] for j in range(len(B) - 1)):
                continue
        sol = tuple(B[s - 1] for s in F.stage)
        ts = tuple(float(x) for x in ts_vector(A, F, [float(x) for x in xi]))
        out.append(TropicalSolution(F, B, sol, ts, F.m))
    return out


# ---------------------------------------------------------------------------
# monomial start systems

def stage_exponents(A: Configuration, F: Flag, Lam: Sequence) -> np.ndarray:
    """E[l, j] = <kappa_l - kappa_{l-1}, lambda_j> (integer matrix)."""
    r = A.r
    rows = []
    prev = (0,) * r
    for k in F.kappas:
        diff = [a - b for a, b in zip(k, prev)]
        rows.append([exact.dot(diff, l) for l in Lam])
        prev = k
    return rows


def monomial_start_solutions(F: Flag, A: Configuration, Lam: Sequence, z: Sequence) -> list:
    """All |det E| solutions y of prod_l y_l^E[l,j] = q_j / M_j, in flag coordinates.

    Solved in logarithms: with S = P E^T Q in Smith form, Y = Q Z and
    Z_l = ((P W)_l + 2 pi i k_l) / s_l for k_l = 0..s_l-1.
    """
    E = stage_exponents(A, F, Lam)
    ET = exact.transpose(E)
    S, P, Q = exact.smith(ET)
    r = A.r
    diag = [S[i][i] for i in range(r)]
    if any(s == 0 for s in diag):
        raise AssertionError("singular stage exponent matrix for a proper flag")
    e = exponent_matrix(A, Lam)
    logm = np.log(np.array([complex(float(m)) for m in F.m]))
    W = log_q_values(A, Lam, z) - e.T @ logm
    PW = np.array(P, dtype=float) @ W
    Qm = np.array(Q, dtype=float)
    out = []
    for ks in product(*[range(s) for s in diag]):
        Z = np.array([(PW[l] + 2j * math.pi * ks[l]) / diag[l] for l in range(r)])
        out.append(Qm @ Z)
    return out  # log y vectors


# ---------------------------------------------------------------------------
# the deformation and path tracking

class _FlagSystem:
    """p^F(s, y) = q in log coordinates Y = log y of the flag basis."""

    def __init__(self, A: Configuration, F: Flag, Lam: Sequence, z: Sequence):
        self.A = A
        self.F = F
        r = A.r
        self.r = r
        self.e = exponent_matrix(A, Lam)                     # n x r
        self.logq = log_q_values(A, Lam, z)
        self.C = np.array([[float(c) for c in row] for row in F.coeffs])  # n x r
        self.stage = np.array(F.stage) - 1
        # power of s multiplying y_k in alpha_i: stage(i) - k for k < stage(i)
        n = A.n
        self.pw = np.zeros((n, r))
        self.mask = np.zeros((n, r))
        for i in range(n):
            for k in range(self.stage[i] + 1):
                if self.C[i, k] != 0:
                    self.mask[i, k] = 1.0
                    self.pw[i, k] = self.stage[i] - k
        self.Ginv = np.array([[float(x) for x in row] for row in exact.inverse([list(g) for g in F.gamma])])

    def coef(self, s: float) -> np.ndarray:
        return self.C * self.mask * s ** self.pw

    def dcoef(self, s: float) -> np.ndarray:
        pw = self.pw
        d = np.zeros_like(pw)
        pos = pw > 0
        d[pos] = pw[pos] * s ** (pw[pos] - 1)
        return self.C * self.mask * d

    def eval(self, s: float, Y: np.ndarray):
        y = np.exp(Y)
        K = self.coef(s)
        al = K @ y
        if np.any(al == 0):
            return None
        logratio = self.e.T @ np.log(al) - self.logq
        ratio = np.exp(logratio)
        h = ratio - 1.0
        # d alpha_i / dY_l = K[i, l] y_l
        G = (K * y[None, :]) / al[:, None]
        J = ratio[:, None] * (self.e.T @ G)
        dal = self.dcoef(s) @ y
        hs = ratio * (self.e.T @ (dal / al))
        return h, J, hs

    def to_u(self, Y: np.ndarray) -> np.ndarray:
        return self.Ginv @ np.exp(Y)


def _newton(system: _FlagSystem, s: float, Y: np.ndarray, settings: HomotopySettings):
    minJ = math.inf
    for it in range(settings.max_corrections):
        out = system.eval(s, Y)
        if out is None:
            return None, it, minJ
        h, J, _ = out
        try:
            dY = np.linalg.solve(J, -h)
        except np.linalg.LinAlgError:
            return None, it, 0.0
        minJ = min(minJ, abs(np.linalg.det(J)))
        Y = Y + dY
        if np.max(np.abs(dY)) < settings.newton_tol * (1 + np.max(np.abs(Y.real))):
            return Y, it + 1, minJ
        if np.max(np.abs(dY)) > 1.0:
            return None, it + 1, minJ
    out = system.eval(s, Y)
    if out is not None and np.max(np.abs(out[0])) < 1e-10:
        return Y, settings.max_corrections, minJ
    return None, settings.max_corrections, minJ


def track_path(system: _FlagSystem, Y0: np.ndarray, settings: HomotopySettings):
    """Predictor-corrector from s = 0 to s = 1; returns (Y at s=1 or None, steps, min |det J|)."""
    s = 0.0
    Y = np.array(Y0, dtype=complex)
    ds = settings.ds_initial
    steps = 0
    minJ = math.inf
    streak = 0
    while s < 1.0:
        ds = min(ds, 1.0 - s)
        out = system.eval(s, Y)
        if out is None:
            return None, steps, 0.0
        h, J, hs = out
        try:
            dYds = np.linalg.solve(J, -hs)
        except np.linalg.LinAlgError:
            return None, steps, 0.0
        pred = Y + ds * dYds
        Yn, _, mj = _newton(system, s + ds, pred, settings)
        steps += 1
        if Yn is None or np.max(np.abs(Yn - pred)) > 0.25:
            ds /= 2
            streak = 0
            if ds < settings.ds_min:
                return None, steps, minJ
            continue
        minJ = min(minJ, mj)
        s += ds
        Y = Yn
        streak += 1
        if streak >= 3:
            ds = min(2 * ds, settings.ds_max)
            streak = 0
    return Y, steps, minJ


def _true_residuals(A: Configuration, Lam, z, u) -> tuple:
    al = alpha_values(A, u)
    e = exponent_matrix(A, Lam)
    logq = log_q_values(A, Lam, z)
    q = q_values(A, Lam, z)
    ratio = np.exp(e.T @ np.log(al) - logq)
    p = ratio * q
    return float(np.max(np.abs(p - q))), float(np.max(np.abs(ratio - 1)))


def polish(A: Configuration, Lam, z, u, iterations: int = 6) -> np.ndarray:
    """Newton on prod alpha_i(u)^e_ij / q_j - 1 = 0 directly in u."""
    e = exponent_matrix(A, Lam)
    logq = log_q_values(A, Lam, z)
    Amat = np.array(A.alphas, dtype=float)
    u = np.array(u, dtype=complex)
    for _ in range(iterations):
        al = Amat @ u
        ratio = np.exp(e.T @ np.log(al) - logq)
        h = ratio - 1
        J = ratio[:, None] * (e.T @ (Amat / al[:, None]))
        try:
            du = np.linalg.solve(J, -h)
        except np.linalg.LinAlgError:
            break
        u = u + du
        if np.max(np.abs(du)) <= 1e-15 * np.max(np.abs(u)):
            break
    return u


def _same_point(A: Configuration, u, v, tol: float) -> bool:
    au, av = alpha_values(A, u), alpha_values(A, v)
    return bool(np.max(np.abs(au - av) / np.abs(au)) < tol)


def track_homotopy(F: Flag, A: Configuration, Lam, z, starts: Sequence,
                   settings: HomotopySettings = HomotopySettings(), flag_index: int = 0) -> tuple:
    """Track every start; returns (accepted CriticalPoints, failure diagnostics)."""
    system = _FlagSystem(A, F, Lam, z)

    def run(Y0):
        Y, steps, minJ = track_path(system, Y0, settings)
        if Y is None:
            return None, {"steps": steps, "reason": "path failure"}
        u = polish(A, Lam, z, system.to_u(Y))
        res, rel = _true_residuals(A, Lam, z, u)
        if not (res < settings.residual_tol and rel < settings.residual_tol):
            return None, {"steps": steps, "reason": f"residual {rel:.3g}"}
        return CriticalPoint(u, res, rel, flag_index, steps, minJ), None

    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as ex:
            results = list(ex.map(run, starts))
    else:
        results = [run(Y0) for Y0 in starts]
    points = [p for p, _ in results if p is not None]
    failures = [d for _, d in results if d is not None]
    return points, failures


def _multistart(A: Configuration, flags: Sequence, Lam, z, points: list, expected: int,
                settings: HomotopySettings) -> list:
    """Random phases on the tropical torus of each flag, Newton on the true system."""
    rng = np.random.default_rng(settings.seed)
    found = list(points)
    for idx, F in enumerate(flags):
        starts = monomial_start_solutions(F, A, Lam, z)
        radii = np.exp(np.real(starts[0]))
        Ginv = np.array([[float(x) for x in row] for row in exact.inverse([list(g) for g in F.gamma])])
        for _ in range(settings.multistart_attempts):
            if len(found) >= expected:
                return found
            y = radii * np.exp(2j * math.pi * rng.random(A.r))
            u = polish(A, Lam, z, Ginv @ y, iterations=40)
            if not np.all(np.isfinite(u)):
                continue
            res, rel = _true_residuals(A, Lam, z, u)
            if res < settings.residual_tol and rel < settings.residual_tol:
                if not any(_same_point(A, u, p.u, settings.dedup_tol) for p in found):
                    found.append(CriticalPoint(u, res, rel, idx, 0, math.nan, origin="multistart"))
    return found


def critical_points(A: Configuration, Lam, z, settings: HomotopySettings = HomotopySettings()) -> BSideResult:
    """O_B(z) as the union of tracked roots over FL^0(xi(z)); value left at 0."""
    Lam = tuple(tuple(int(x) for x in l) for l in (Lam or default_lambda_basis(A.r)))
    check_lambda_basis(Lam, A.r)
    z = tuple(complex(x) for x in z)
    xi = xi_of_z(A, z)
    flags = zero_flags(A, xi)
    expected = sum(abs(F.dF) for F in flags)
    points: list = []
    failures = []
    for idx, F in enumerate(flags):
        starts = monomial_start_solutions(F, A, Lam, z)
        pts, fails = track_homotopy(F, A, Lam, z, starts, settings, idx)
        failures.extend(fails)
        for p in pts:
            if not any(_same_point(A, p.u, o.u, settings.dedup_tol) for o in points):
                points.append(p)
    used_fallback = False
    if len(points) < expected:
        used_fallback = True
        points = _multistart(A, flags, Lam, z, points, expected, settings)
    diag = {
        "xi": xi,
        "regularity": float(sum_regularity(A, xi)),
        "flags": [{"index": i, "nu": F.nu, "dF": F.dF, "kappa1": list(F.kappas[0])}
                  for i, F in enumerate(flags)],
        "path_failures": len(failures),
        "multistart": used_fallback,
    }
    return BSideResult(0j, points, expected, len(points), len(points) == expected, diag)


# ---------------------------------------------------------------------------
# Hessians and the residue sum

def hessian_DB(gale: GalePair) -> SparsePoly:
    """D^B(x) = sum over bases of the dual configuration of vol^2 prod x_i."""
    n = gale.A.n
    if gale.B is None:
        return SparsePoly.constant(n, 1)
    terms = {}
    for sb in basis_index_sets(gale.B):
        e = [0] * n
        for i in sb:
            e[i] = 1
        terms[tuple(e)] = signed_volume(gale.B, sb) ** 2
    return SparsePoly(n, terms)


def d_A(A: Configuration) -> SparsePoly:
    """D_A(x) = sum_sigma vol(sigma)^2 prod_{i in sigma} x_i^-1 as a Laurent polynomial."""
    terms = {}
    for s in basis_index_sets(A):
        e = [0] * A.n
        for i in s:
            e[i] = -1
        terms[tuple(e)] = signed_volume(A, s) ** 2
    return SparsePoly(A.n, terms)


def gram_determinant(betas: Sequence, x: Sequence, h: Optional[Sequence] = None):
    """det(sum_i x_i (h beta_i)(h beta_i)^T), exact for rational x."""
    d = len(betas[0])
    hb = [exact.matvec(h, b) if h is not None else list(b) for b in betas]
    M = [[sum(xi * v[j] * v[k] for xi, v in zip(x, hb)) for k in range(d)] for j in range(d)]
    return exact.det(M)


def evaluate_torus_data(gale: GalePair, h: Optional[Sequence], w: Sequence, z: Sequence) -> tuple:
    """(f, grad f, H_f) at x_i = z_i prod_k w_k^<h_k, beta_i>."""
    betas = np.array(gale.betas, dtype=float)
    d = gale.d
    H = np.eye(d) if h is None else np.array(h, dtype=float)
    hb = betas @ H.T                      # n x d, entries <h_k, beta_i>
    w = np.asarray(w, dtype=complex)
    x = np.asarray(z, dtype=complex) * np.prod(w[None, :] ** hb, axis=1)
    f = 1 - np.sum(x)
    grad = -(hb.T @ x)
    Hf = np.linalg.det((hb.T * x[None, :]) @ hb) if d else complex(1)
    return f, grad, Hf, x


def dlog_jacobian(A: Configuration, Lam, u) -> complex:
    """det(d log p_j / d u_k)."""
    e = exponent_matrix(A, Lam)
    Amat = np.array(A.alphas, dtype=float)
    al = Amat @ np.asarray(u, dtype=complex)
    return np.linalg.det(e.T @ (Amat / al[:, None]))


def toric_residue_sum(P: SparsePoly, A: Configuration, Lam, z,
                      settings: HomotopySettings = HomotopySettings(),
                      points: Optional[BSideResult] = None) -> BSideResult:
    """Sum of P(alpha(u)) / ((1 - kappa(u)) D^B(alpha(u))) over O_B(z)."""
    result = points if points is not None else critical_points(A, Lam, z, settings)
    DB = hessian_DB(gale_dual(A))
    kap = np.array(A.kappa, dtype=float)
    total = 0j
    for p in result.points:
        x = alpha_values(A, p.u)
        one_minus = 1 - complex(kap @ p.u)
        db = complex(DB.evaluate(list(x)))
        db_size = float(DB.evaluate(list(np.abs(x))))
        if abs(one_minus) < settings.singular_margin:
            raise NearSingularError(f"1 - kappa(u) = {one_minus:.3g} at u = {p.u.tolist()}", p.u)
        if not np.isfinite(db) or abs(db) <= settings.singular_margin * db_size:
            raise NearSingularError(f"D^B(alpha(u)) is near zero at u = {p.u.tolist()}", p.u)
        total += complex(P.evaluate(list(x))) / (one_minus * db)
    result.value = total
    return result
