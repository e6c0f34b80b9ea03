"""The T_n trigonometric approximation operator.

    T_n(f)(x) = int_{-pi}^{pi} [(-1)^(r+1) Delta_t^r(f, x) + f(x)] K_{n,r}(t) dt
              = sum_{k=1}^{r} (-1)^(k+1) binom(r, k) int f(x + kt) K_{n,r}(t) dt.

Substituting u = x + kt and summing the k full periods collapses each term
to ordinary Fourier integrals of f: only frequencies l = jk survive and the
1/k Jacobian cancels against the k periods, so

    T_n(f)(x) = sum_{j=0}^{n} alpha_j [ (int f cos(ju) du) cos(jx)
                                      + (int f sin(ju) du) sin(jx) ],
    alpha_j   = sum_{k=1}^{r} (-1)^(k+1) binom(r, k) a_{jk, r},

with a_{l,r} the kernel's cosine coefficients (zero for l > n).  Note there
is no 1/k factor: alpha_0 = a_0 = 1/(2 pi), which is exactly what makes
T_n reproduce constants; this is cross-checked numerically against the
difference-integral definition in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np
from scipy.special import comb

from .jackson import jackson_kernel
from .targets import parity_decompose  # noqa: F401  (re-exported)

__all__ = ["TrigOperatorCoeffs", "alpha_coeffs", "trig_operator_1d",
           "apply_Tn", "trig_operator_nd", "apply_Tn_nd", "fourier_integrals",
           "parity_decompose"]

DEFAULT_NODES = 4096


@dataclass
class TrigOperatorCoeffs:
    d: int
    n: int
    r: int
    alpha: np.ndarray          # alpha_0..alpha_n (shared across dimensions)
    parity: tuple = ()         # eta in {0,1}^d; empty for the plain 1-d case
    a: dict = field(default_factory=dict)   # multi-index -> coefficient
    cos_part: np.ndarray = None  # d=1: alpha_j * int f cos(ju) du
    sin_part: np.ndarray = None  # d=1: alpha_j * int f sin(ju) du
    scale: float = 1.0           # input scale: evaluation uses cos(j*scale*x)
    meta: dict = field(default_factory=dict)


def alpha_coeffs(n, r):
    """alpha_j for j = 0..n from the kernel's cosine coefficients."""
    K = jackson_kernel(n, r)
    alpha = np.zeros(n + 1)
    for j in range(n + 1):
        s = 0.0
        for k in range(1, r + 1):
            l = j * k
            if j == 0:
                a_l = K.a[0]
            elif l <= n:
                a_l = K.a[l]
            else:
                a_l = 0.0
            s += (-1.0) ** (k + 1) * comb(r, k, exact=True) * a_l
        alpha[j] = s
    return alpha, K


def fourier_integrals(fn, n, nodes=DEFAULT_NODES, half_width=math.pi):
    """int f(u) cos(j w u) du and int f(u) sin(j w u) du over the periodic
    cell [-T, T], w = pi/T, by the composite trapezoid rule (periodic, so
    the uniform grid is spectrally accurate for smooth integrands)."""
    T = half_width
    u = -T + 2.0 * T * np.arange(nodes) / nodes
    f = np.asarray(fn(u[:, None]), dtype=float)
    w = math.pi / T
    js = np.arange(n + 1)
    cosM = np.cos(np.outer(js, w * u))
    sinM = np.sin(np.outer(js, w * u))
    h = 2.0 * T / nodes
    return cosM @ f * h, sinM @ f * h


def trig_operator_1d(target, n, r, nodes=DEFAULT_NODES):
    """T_n coefficients for a target on [-pi, pi] (d = 1)."""
    n, r = int(n), int(r)
    if n < r:
        raise ValueError("need n >= r")
    alpha, K = alpha_coeffs(n, r)
    C, S = fourier_integrals(target, n, nodes=nodes)
    coeffs = TrigOperatorCoeffs(d=1, n=n, r=r, alpha=alpha,
                                cos_part=alpha * C, sin_part=alpha * S,
                                scale=1.0,
                                meta={"kernel_m": K.m})
    return coeffs


def apply_Tn(coeffs, x):
    """Evaluate the d = 1 trigonometric polynomial T_n(f) at points x."""
    x = np.asarray(x, dtype=float).reshape(-1)
    js = np.arange(coeffs.n + 1)
    ang = np.outer(x * coeffs.scale, js)
    return np.cos(ang) @ coeffs.cos_part + np.sin(ang) @ coeffs.sin_part


def trig_operator_nd(target, n, r, d, parity, nodes=None):
    """Tensor T_n coefficients for one parity component on [-1, 1]^d.

    The component (even/odd per coordinate per parity[k]) is rescaled to
    [-pi, pi]^d; its tensor expansion uses phase-shifted cosines

        Phi(x) = sum_j a_j prod_k cos(j_k pi x_k - eta_k pi / 2),

    a_j = (prod_k alpha_{j_k}) * int F(u) prod_k phi_{j_k}(u_k) du, with
    phi = cos for even coordinates and sin for odd ones.
    """
    n, r, d = int(n), int(r), int(d)
    parity = tuple(int(e) for e in parity)
    if len(parity) != d:
        raise ValueError("parity must have one entry per dimension")
    if nodes is None:
        nodes = DEFAULT_NODES if d == 1 else 1024
    alpha, K = alpha_coeffs(n, r)
    T = math.pi
    u = -T + 2.0 * T * np.arange(nodes) / nodes
    h = 2.0 * T / nodes
    js = np.arange(n + 1)
    mats = []
    for eta in parity:
        if eta == 0:
            mats.append(np.cos(np.outer(js, u)))
        else:
            mats.append(np.sin(np.outer(js, u)))
    if d == 1:
        F = np.asarray(target(u[:, None] / math.pi), dtype=float)
        I = mats[0] @ F * h
        coeff_arr = alpha * I
    else:
        grids = np.meshgrid(*([u] * d), indexing="ij")
        pts = np.column_stack([g.ravel() for g in grids]) / math.pi
        F = np.asarray(target(pts), dtype=float).reshape([nodes] * d)
        C = F
        for axis in range(d):
            C = np.tensordot(mats[axis] * h, C, axes=([1], [axis]))
            C = np.moveaxis(C, 0, axis)
        coeff_arr = C
        for axis in range(d):
            shape = [1] * d
            shape[axis] = n + 1
            coeff_arr = coeff_arr * alpha.reshape(shape)
    a = {}
    it = iproduct(range(n + 1), repeat=d)
    arr = np.atleast_1d(coeff_arr)
    for j in it:
        v = float(arr[j] if d > 1 else arr[j[0]])
        if v != 0.0:
            a[j] = v
    return TrigOperatorCoeffs(d=d, n=n, r=r, alpha=alpha, parity=parity,
                              a=a, scale=math.pi,
                              meta={"kernel_m": K.m, "nodes": nodes})


def apply_Tn_nd(coeffs, pts):
    """Evaluate the tensor trig polynomial of one parity component on
    points in [-1, 1]^d."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    d, n = coeffs.d, coeffs.n
    js = np.arange(n + 1)
    axes = []
    for k in range(d):
        ang = np.outer(pts[:, k], js) * math.pi
        if coeffs.parity[k] == 0:
            axes.append(np.cos(ang))
        else:
            axes.append(np.sin(ang))
    total = np.zeros(pts.shape[0])
    for j, a in coeffs.a.items():
        term = np.full(pts.shape[0], a)
        for k in range(d):
            term = term * axes[k][:, j[k]]
        total += term
    return total
