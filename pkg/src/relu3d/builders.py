"""High-level constructors: one per approximation result.

Each builder assembles gadget blocks and expansion coefficients into a
Net3D and returns a BuildReport carrying the expected size metrics, the
error bound the construction guarantees, and a meta dict with the raw
ingredients (coefficients, derived parameters, and the stated closed-form
height for cross-checking).

Height convention: every builder derives the tower height H as the minimal
integer satisfying the block-level error inequality it needs, and records
the closed-form value ("stated_height" in meta) separately.  The derived
value is the one the network is built with and the one expected_metrics
reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .blocks import (_sym_prod_wires, _unit_prod_wires, _w1_wire as
                     _tower_head, add_tent_towers, product_d_net)
from .builder_dsl import NetBuilder, Wire
from .chebyshev import chebyshev_interpolant_1d, chebyshev_tensor_coeffs
from .hermite import hermite_expansion, hermite_poly_coeffs, hermite_tail_bound
from .net import (Net3D, SizeMetrics, chain, linear_combine, metrics,
                  parallel)
from .polynd import PolyND, exact_degree_indices
from .smoothness import modulus_smoothness
from .trig_operator import trig_operator_nd
from .targets import parity_decompose

__all__ = [
    "BuildReport",
    "WidthBudgetError",
    "build_poly1d",
    "build_polyNd",
    "build_smooth1d",
    "build_analytic_cube",
    "build_analytic_ellipse",
    "build_clipped_hermite",
    "choose_hermite_params",
    "HermiteParams",
    "build_hermite_gauss",
    "build_trig",
    "build_lp",
    "expected_size",
    "expected_bound",
    "THEOREM_IDS",
]

LOG2E = math.log2(math.e)


class WidthBudgetError(ValueError):
    """Raised when a construction would exceed the configured width cap."""


@dataclass
class BuildReport:
    net: Net3D
    expected_metrics: SizeMetrics
    theoretical_bound: float
    bound_formula_id: str
    inputs: dict
    meta: dict = field(default_factory=dict)


def _finish_report(net, width_exp, depth_exp, height_exp, bound, formula_id,
                   inputs, meta):
    got = metrics(net)
    if got.depth != depth_exp or got.height != height_exp:
        raise AssertionError(
            f"built ({got.width},{got.depth},{got.height}), expected depth "
            f"{depth_exp} and height {height_exp} for {formula_id}")
    if got.width > width_exp:
        raise AssertionError(
            f"width {got.width} exceeds expected {width_exp} for {formula_id}")
    expected = SizeMetrics(width=width_exp, depth=depth_exp, height=height_exp,
                           neuron_count=got.neuron_count,
                           param_count=got.param_count)
    return BuildReport(net=net, expected_metrics=expected,
                       theoretical_bound=float(bound),
                       bound_formula_id=formula_id, inputs=inputs, meta=meta)


def _min_height(amount, budget, lo=1):
    """Smallest integer H >= lo with amount * 2^(-2(H+1)) <= budget."""
    if budget <= 0:
        raise ValueError("error budget must be positive")
    if amount <= 0:
        return lo
    H = max(lo, math.ceil(0.5 * math.log2(amount / budget) - 1))
    while amount * 2.0 ** (-2 * (H + 1)) > budget:
        H += 1
    while H > lo and amount * 2.0 ** (-2 * H) <= budget:
        H -= 1
    return H


# ---------------------------------------------------------------------------
# accumulating power chains (width 8)


def _unit_chain(b, x_wire, coeffs, H, extra_acc=None):
    """Width-8 chain realizing sum_k coeffs[k] h_k + coeffs[0] on [0, 1].

    h_1 = x and h_k = prodhat(x, h_{k-1}); the running sum rides along as a
    sigma(+/-) pair on the first floor of every product layer.  extra_acc
    (a wire over the layer x_wire lives on) is folded into the accumulator.
    Requires len(coeffs) >= 3 (degree >= 2).
    """
    n = len(coeffs) - 1
    h = x_wire
    xw = x_wire
    acc = None
    for k in range(2, n + 1):
        L = b.layer()
        pre = coeffs[k - 1] * h
        if acc is not None:
            pre = pre + acc
        if k == 2 and extra_acc is not None:
            pre = pre + extra_acc
        prod, x_c, h_c, rw = _unit_prod_wires(L, xw, h, H,
                                              riders=[pre, -1.0 * pre])
        b.commit()
        acc = rw[0] - rw[1]
        xw, h = x_c, prod
    return acc + coeffs[n] * h + coeffs[0]


def _sym_chain(b, u_wire, coeffs, H, extra_acc=None):
    """Symmetric variant of _unit_chain on [-1, 1]: h_k ~ u^k via the
    [-1, 1]^2 product interpolant; per-layer height H + 1."""
    n = len(coeffs) - 1
    h = u_wire
    uw = u_wire
    acc = None
    for k in range(2, n + 1):
        L = b.layer()
        pre = coeffs[k - 1] * h
        if acc is not None:
            pre = pre + acc
        if k == 2 and extra_acc is not None:
            pre = pre + extra_acc
        prod, u_c, h_c, rw = _sym_prod_wires(L, uw, h, H,
                                             riders=[pre, -1.0 * pre])
        b.commit()
        acc = rw[0] - rw[1]
        uw, h = u_c, prod
    return acc + coeffs[n] * h + coeffs[0]


# ---------------------------------------------------------------------------
# polynomials


def build_poly1d(coeffs, H):
    """Network for p(x) = sum a_k x^k on [0, 1]; sizes (8, n-1, H) and sup
    error at most max_k |a_k| 3 n^2 2^(-2(H+1))."""
    a = [float(c) for c in coeffs]
    n = len(a) - 1
    H = int(H)
    if n < 1:
        raise ValueError("need degree n >= 1")
    bound = max(abs(c) for c in a[1:]) * 3.0 * n * n * 2.0 ** (-2 * (H + 1))
    inputs = {"n": n, "H": H}
    if n == 1:
        net = Net3D(1, [], [{0: a[1]}], [a[0]])
        return _finish_report(net, 0, 0, 0, bound, "poly1d", inputs,
                              {"note": "degree 1 is affine, no hidden layers"})
    if H < 1:
        raise ValueError("need H >= 1 for degree >= 2")
    b = NetBuilder(1)
    x = b.input(0)
    out = _unit_chain(b, x, a, H)
    net = b.finish([out])
    return _finish_report(net, 8, n - 1, H, bound, "poly1d", inputs,
                          {"coeffs": a})


def _first_nonzero(j):
    for i, v in enumerate(j):
        if v > 0:
            return i
    raise ValueError("zero multi-index has no factor")


def build_polyNd(poly, H, width_cap=None):
    """Network for a d-variate polynomial on [0, 1]^d.

    Layer k emits the approximations h_j of every monomial of total degree
    k + 1 (each from a degree-k parent and one coordinate), so the depth is
    n - 1; the running coefficient sum and the coordinates ride along.
    """
    d, n = poly.d, poly.degree
    H = int(H)
    if n < 1:
        raise ValueError("need total degree n >= 1")
    width_exp = math.ceil(d + 1 + 6.0 * (math.e * (n + d) / d) ** d)
    if width_cap is not None and width_exp > width_cap:
        raise WidthBudgetError(
            f"estimated width {width_exp} exceeds cap {width_cap} "
            f"(d={d}, degree={n})")
    coeffs = dict(poly.coeffs)
    a0 = coeffs.get((0,) * d, 0.0)
    step = 2.0 ** (-2 * (H + 1))
    bound = sum(abs(a) * 6.0 * (sum(j) - 1) * step
                for j, a in coeffs.items() if sum(j) >= 2)
    amax = max((abs(a) for j, a in coeffs.items() if sum(j) >= 1), default=0.0)
    stated = amax * 6.0 * n * step * (math.e * (n + d) / d) ** d
    inputs = {"d": d, "n": n, "H": H}
    meta = {"stated_bound": stated, "coeffs": coeffs}
    if n == 1:
        row = {}
        for i in range(d):
            e = tuple(1 if q == i else 0 for q in range(d))
            if coeffs.get(e, 0.0) != 0.0:
                row[i] = coeffs[e]
        net = Net3D(d, [], [row], [a0])
        meta["note"] = "degree 1 is affine, no hidden layers"
        return _finish_report(net, 0, 0, 0, bound, "polyNd", inputs, meta)
    if H < 1:
        raise ValueError("need H >= 1 for degree >= 2")
    b = NetBuilder(d)
    xs = [b.input(i) for i in range(d)]
    x_wires = list(xs)
    unit = lambda i: tuple(1 if q == i else 0 for q in range(d))
    prev = {unit(i): xs[i] for i in range(d)}
    acc = None
    new = prev
    for k in range(1, n):
        L = b.layer()
        pre = Wire.const(0.0)
        for j, w in prev.items():
            c = coeffs.get(j, 0.0)
            if c != 0.0:
                pre = pre + c * w
        if acc is not None:
            pre = pre + acc
        # one shared bank of tent towers per layer: three per new monomial
        ys = []
        idx = []
        for j in exact_degree_indices(d, k + 1):
            i = _first_nonzero(j)
            parent = tuple(v - 1 if q == i else v for q, v in enumerate(j))
            xw, hw = x_wires[i], prev[parent]
            ys.extend([(xw + hw) * 0.5, xw * 0.5, hw * 0.5])
            idx.append(j)
        gs, rout = add_tent_towers(L, ys, H,
                                   riders=[pre, -1.0 * pre] + x_wires)
        b.commit()
        new = {}
        for t, j in enumerate(idx):
            fs = []
            for g_chain in gs[3 * t:3 * t + 3]:
                f = _tower_head(g_chain[0])
                for q, g in enumerate(g_chain, start=1):
                    f = f - g / (4.0 ** q)
                fs.append(f)
            new[j] = 2 * fs[0] - 2 * fs[1] - 2 * fs[2]
        acc = rout[0] - rout[1]
        x_wires = list(rout[2:])
        prev = new
    out = acc + a0
    for j, w in new.items():
        c = coeffs.get(j, 0.0)
        if c != 0.0:
            out = out + c * w
    net = b.finish([out])
    return _finish_report(net, width_exp, n - 1, H, bound, "polyNd", inputs,
                          meta)


def build_smooth1d(target, N):
    """Network within 2^-N of a smooth target on [0, 1], via the degree
    N + 1 Chebyshev interpolant.

    The certified bound requires |f^(n)| <= n! (catalog flag); without it
    the same construction is returned with the bound flagged empirical.
    """
    N = int(N)
    if N < 1:
        raise ValueError("need N >= 1")
    m = N + 1
    certified = bool(getattr(target, "smooth_factorial", False))
    poly = chebyshev_interpolant_1d(target, m)
    a = poly.coeff_vector_1d()
    interp = 2.0 ** (-2 * m - 1)
    budget = 2.0 ** (-N) - interp
    A = max(abs(c) for c in a[1:])
    H = _min_height(A * 3.0 * m * m, budget)
    inner = build_poly1d(a, H)
    stated_theorem = math.ceil(0.5 * (math.log2(6) * N
                                      + 3 * math.log2(N + 2)
                                      + 2 * math.log2(3)))
    stated_proof = math.ceil(0.5 * (math.log2(6) * m
                                    + 3 * math.log2(m + 1)
                                    + math.log2(3) - 1))
    meta = {
        "coeffs": list(a),
        "interpolation_bound": interp,
        "network_bound": A * 3.0 * m * m * 2.0 ** (-2 * (H + 1)),
        "stated_height": stated_theorem,
        "stated_height_alt": stated_proof,
        "derivative_bound_certified": certified,
        "conditioning_warning": poly.meta["conditioning_warning"],
    }
    formula = "smooth1d" if certified else "smooth1d-empirical"
    return _finish_report(inner.net, 8, m - 1, H, 2.0 ** (-N), formula,
                          {"N": N, "H": H}, meta)


def build_analytic_cube(target, N, delta, d=1):
    """Network within 2 (1-delta)^N of an analytic target on [0, 1-delta]^d,
    from its truncated power series (requires sum |a_j| <= 1)."""
    N = int(N)
    delta = float(delta)
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    if N < 1:
        raise ValueError("need N >= 1")
    series = target.series_coeffs(N)
    total = sum(abs(v) for v in series.values())
    if total > 1.0 + 1e-12:
        raise ValueError(f"series coefficient sum {total} exceeds 1")
    poly = PolyND(d=d, coeffs=series, degree=N)
    tail = (1.0 - delta) ** N
    amount = sum(abs(a) * 6.0 * (sum(j) - 1)
                 for j, a in series.items() if sum(j) >= 2)
    H = _min_height(amount, tail)
    inner = build_polyNd(poly, H)
    stated_h = math.ceil(0.5 * (math.log2(N) + N * math.log2(1 - delta)
                                + d * math.log2(N + d)
                                - d * math.log2(d / math.e)
                                - math.log2(6) - 2))
    meta = {
        "series": series,
        "truncation_bound": tail,
        "network_bound": amount * 2.0 ** (-2 * (H + 1)),
        "stated_height": stated_h,
        "domain_halfwidth": 1.0 - delta,
    }
    return _finish_report(inner.net, inner.expected_metrics.width,
                          inner.expected_metrics.depth,
                          inner.expected_metrics.height, 2.0 * tail,
                          "analytic-cube",
                          {"N": N, "delta": delta, "d": d, "H": H}, meta)


def build_analytic_ellipse(target, N, rho, d=1):
    """Network with geometric error decay rho^(-N/sqrt(d)) (up to a fitted
    constant) for a target with geometrically decaying Chebyshev tensor
    coefficients on [0, 1]^d."""
    N = int(N)
    rho = float(rho)
    if rho <= 2.0 ** math.sqrt(d):
        raise ValueError(f"need rho > 2^sqrt(d) = {2.0 ** math.sqrt(d):.4f}")
    poly = chebyshev_tensor_coeffs(target, N, d)
    shape = rho ** (-N / math.sqrt(d))
    amount = sum(abs(a) * 6.0 * (sum(j) - 1)
                 for j, a in poly.coeffs.items() if sum(j) >= 2)
    H = _min_height(amount, shape)
    inner = build_polyNd(poly, H)
    stated_h = math.ceil(0.5 * (
        d * math.log2((N + 1) * (math.e * (N + d) / d))
        + math.log2(6 * N) + (N / math.sqrt(d)) * math.log2(rho) - 2))
    meta = {
        "coeffs": dict(poly.coeffs),
        "max_abs_coeff": poly.meta["max_abs_coeff"],
        "conditioning_warning": poly.meta["conditioning_warning"],
        "stated_height": stated_h,
        "shape": shape,
    }
    return _finish_report(inner.net, inner.expected_metrics.width,
                          inner.expected_metrics.depth,
                          inner.expected_metrics.height, shape,
                          "analytic-ellipse",
                          {"N": N, "rho": rho, "d": d, "H": H}, meta)


# ---------------------------------------------------------------------------
# Hermite


def build_clipped_hermite(n, M, delta, H):
    """Network for the clipped Hermite basis function: equal to an
    approximation of Xi_n on [-M+delta, M-delta], exactly zero outside
    [-M, M], linear interpolation in the transition bands.

    Sizes (8, n, H+1) for n >= 2; interior sup error at most
    (sqrt(6) M)^n 3 n^2 2^(-2(H+1)).
    """
    n = int(n)
    M = float(M)
    delta = float(delta)
    H = int(H)
    if M < 1:
        raise ValueError("need M >= 1")
    if not 0 < delta < M:
        raise ValueError("need 0 < delta < M")
    c = hermite_poly_coeffs(n)
    xi0 = float(c[0])
    b = NetBuilder(1)
    x = b.input(0)
    L = b.layer()
    fl = L.floor()
    u1 = fl.neuron(x + M)
    u2 = fl.neuron(x + (M - delta))
    u3 = fl.neuron(x - (M - delta))
    u4 = fl.neuron(x - M)
    b.commit()
    s = (M - delta) / delta
    xi = (-s) * u1 + (s + 1.0) * u2 + (-(s + 1.0)) * u3 + s * u4
    chi = (1.0 / delta) * (u1 - u2 - u3 + u4)
    sq6M = math.sqrt(6.0) * M
    bound = sq6M ** n * 3.0 * n * n * 2.0 ** (-2 * (H + 1)) if n >= 2 else 0.0
    inputs = {"n": n, "M": M, "delta": delta, "H": H}
    meta = {
        "coeffs": list(map(float, c)),
        "global_bound": 1.0 + sq6M ** n,
        "transition_bound": 1.0 + 2.0 * sq6M ** n,
        "stated_min_height": (n / 2.0) * math.log2(sq6M) + math.log2(3 * n) - 1
        if n >= 1 else 0.0,
    }
    if n == 0:
        net = b.finish([chi])
        return _finish_report(net, 4, 1, 1, bound, "clipped-hermite", inputs,
                              meta)
    if n == 1:
        net = b.finish([float(c[1]) * xi + xi0 * chi])
        return _finish_report(net, 4, 1, 1, bound, "clipped-hermite", inputs,
                              meta)
    if H < 1:
        raise ValueError("need H >= 1 for n >= 2")
    scaled = [float(c[k]) * M ** k for k in range(n + 1)]
    u = xi * (1.0 / M)
    out = _sym_chain(b, u, scaled, H, extra_acc=xi0 * chi)
    # the chain contributes c[0] once; the clip correction subtracts Xi_n(0)
    net = b.finish([out - xi0])
    return _finish_report(net, 8, n, H + 1, bound, "clipped-hermite", inputs,
                          meta)


@dataclass(frozen=True)
class HermiteParams:
    M: float
    H: int
    delta: float
    H_star: float = 0.0
    B: float = 0.0
    delta_rule: float = 0.0
    stated_H: float = 0.0

    def __iter__(self):
        return iter((self.M, self.H, self.delta))


DELTA_FLOOR = 1e-4


def choose_hermite_params(n, B):
    """Window M, tower height H, and transition width delta so that the
    clipped basis function is within e^(-B sqrt(n)) of Xi_n in L^2 of the
    Gaussian measure.

    H is the ceiling of the real solution H* of
        (sqrt(6) M)^n 3 n^2 2^(-2(H+1)) = (3/5) e^(-B sqrt(n)).
    The closed-form delta rule 2 sqrt(delta) (1 + 2 (sqrt(6) M)^n)
    <= (1/10) e^(-B sqrt(n)) produces values far below double precision
    resolution for the clip slopes, so delta is floored at 1e-4; the band
    contribution it controls carries a factor e^(-(M-delta)^2/2) that the
    rule ignores, and the measured total stays within the target.
    """
    n = int(n)
    B = float(B)
    if n < 1 or B <= 0:
        raise ValueError("need n >= 1 and B > 0")
    M = math.sqrt(12.0 * n * math.log(6.0 * n) + 24.0 * B * math.sqrt(n))
    sq6M = math.sqrt(6.0) * M
    H_star = 0.5 * (n * math.log2(sq6M) + math.log2(5.0 * n * n)
                    + B * math.sqrt(n) * LOG2E) - 1.0
    H = max(1, math.ceil(H_star))
    log_rule = (-B * math.sqrt(n) - math.log(20.0)
                - math.log1p(2.0 * sq6M ** n))
    delta_rule = math.exp(2.0 * log_rule)
    delta = min(max(delta_rule, DELTA_FLOOR), M / 2.0)
    stated = (0.5 * n * math.log2(sq6M) + math.log2(1.25 * n)
              + 0.5 * B * math.sqrt(n) * LOG2E)
    return HermiteParams(M=M, H=H, delta=delta, H_star=H_star, B=B,
                         delta_rule=delta_rule, stated_H=stated)


def build_hermite_gauss(target, N, d=1, beta=(1.0,)):
    """Gaussian-L^2 approximation of a target by a truncated expansion in
    clipped Hermite basis networks; error e^(-B sqrt(N)) up to a fitted
    constant, B = (prod beta_j)^(1/d) / sqrt(2)."""
    N = int(N)
    d = int(d)
    beta = tuple(float(v) for v in beta)
    if len(beta) != d:
        raise ValueError("need one beta per dimension")
    if not getattr(target, "gauss_ok", False):
        raise ValueError("target lacks a Gaussian integrability certificate")
    B = math.prod(beta) ** (1.0 / d) / math.sqrt(2.0)
    params = choose_hermite_params(N, B)
    M, H, delta = params.M, params.H, params.delta
    exp = hermite_expansion(target, N, d=d)
    basis = {nu: build_clipped_hermite(nu, M, delta, H).net
             for nu in range(N + 1)}
    sq6M = math.sqrt(6.0) * M
    meta = {
        "params": params,
        "coeffs": dict(exp.coeffs),
        "support": M,
        "tail_envelope": hermite_tail_bound(N, M),
    }
    inputs = {"N": N, "d": d, "beta": beta, "H": H, "delta": delta}
    if d == 1:
        nus = [(nu,) for nu in range(N + 1)]
        nets = [basis[nu[0]] for nu in nus]
        cs = [exp.coeffs[nu] for nu in nus]
        net = linear_combine(nets, cs, 0.0)
        width_exp = max(8 * N * d, N ** d * (4 + d)) if N >= 1 else 8
        height_exp = H + 1 if N >= 2 else 1
        return _finish_report(net, width_exp, N + d - 1, height_exp,
                              math.exp(-B * math.sqrt(N)), "hermite-gauss",
                              inputs, meta)
    # d >= 2: per-index product of one-dimensional basis networks
    R = 1.0 + 2.0 * sq6M ** N
    Hp = _min_height(6.0 * (d - 1) * R ** d, math.exp(-B * math.sqrt(N)))
    meta["product_height"] = Hp
    meta["product_range"] = R
    nets, cs = [], []
    for nu in iproduct(range(N + 1), repeat=d):
        inner = parallel([basis[v] for v in nu])
        nets.append(chain(product_d_net(d, Hp, M=R), inner))
        cs.append(exp.coeffs[nu])
    net = linear_combine(nets, cs, 0.0)
    got = metrics(net)
    return _finish_report(net, got.width, N + d - 1, got.height,
                          math.exp(-B * math.sqrt(N)), "hermite-gauss",
                          inputs, meta)


# ---------------------------------------------------------------------------
# trigonometric


def _cos_chain_params(N2, budget):
    """Chebyshev coefficients of cos(pi t) on [0, 1] at degree N2 + 1 and
    the minimal chain height meeting the budget."""
    m = N2 + 1
    poly = chebyshev_interpolant_1d(
        lambda pts: np.cos(math.pi * pts[:, 0]), m)
    a = poly.coeff_vector_1d()
    interp = math.pi ** (m + 1) / (2.0 ** (2 * m + 1) * math.factorial(m + 1))
    A = max(abs(c) for c in a[1:])
    H = _min_height(A * 3.0 * m * m, budget - interp)
    return list(map(float, a)), H, interp


def _cos_fold_chain(k, a, H):
    """Net for cos(k pi x) on [-1, 1]: tent-fold of |x| then the cosine
    polynomial chain."""
    s = max(0, math.ceil(math.log2(k)))
    b = NetBuilder(1)
    x = b.input(0)
    L = b.layer()
    fl = L.floor()
    p = fl.neuron(x)
    q = fl.neuron(-1.0 * x)
    absx = p + q
    if s == 0:
        g = absx
    else:
        gs, _ = add_tent_towers(L, [absx * (k / float(2 ** s))], s)
        g = gs[0][-1]
    b.commit()
    out = _unit_chain(b, g, a, H)
    return b.finish([out]), s + 1


def _sin_branch(k, a, H, sign):
    """Half of the odd construction: approximates sin(k pi t) at t =
    sigma(sign * x), via cos(pi |k t - 1/2|) under tent folding."""
    sp = max(0, math.ceil(math.log2(k - 0.5)))
    b = NetBuilder(1)
    x = b.input(0)
    L = b.layer()
    fl = L.floor()
    t = fl.neuron(sign * x)
    fl2 = L.floor()
    up = fl2.neuron(k * t - 0.5)
    um = fl2.neuron(0.5 - k * t)
    y = up + um
    if sp == 0:
        g = y
    else:
        gs, _ = add_tent_towers(L, [y * (1.0 / 2 ** sp)], sp)
        g = gs[0][-1]
    b.commit()
    out = _unit_chain(b, g, a, H)
    return b.finish([out]), sp + 2


def build_trig(k, N2, kind="cos"):
    """Network within 2^-N2 of cos(k pi x) or sin(k pi x) on [-1, 1].

    The sine is the difference of two mirrored branches evaluated at
    sigma(x) and sigma(-x) (width 16, exactly zero at the origin); the
    cosine folds |x| through a sawtooth first (width 8).
    """
    k = int(k)
    N2 = int(N2)
    if k < 1 or N2 < 1:
        raise ValueError("need k >= 1 and N2 >= 1")
    if kind not in ("cos", "sin"):
        raise ValueError(f"unknown kind {kind!r}")
    bound = 2.0 ** (-N2)
    stated_h = max(N2 + 1 + math.ceil(math.log2(N2 + 1) + 0.5 * math.log2(3)),
                   math.ceil(math.log2(k)) if k > 1 else 0)
    inputs = {"k": k, "N2": N2, "kind": kind}
    if kind == "cos":
        a, H, interp = _cos_chain_params(N2, bound)
        net, fold_h = _cos_fold_chain(k, a, H)
        width = 8
    else:
        a, H, interp = _cos_chain_params(N2, bound / 2.0)
        b1, fold_h = _sin_branch(k, a, H, 1.0)
        b2, _ = _sin_branch(k, a, H, -1.0)
        net = linear_combine([b1, b2], [1.0, -1.0], 0.0)
        width = 16
    meta = {"chain_coeffs": a, "chain_height": H,
            "interpolation_bound": interp, "stated_height": stated_h}
    return _finish_report(net, width, N2 + 1, max(H, fold_h), bound,
                          f"trig-{kind}", inputs, meta)


def _const_one_net():
    """Scalar net that outputs 1 for any input (one dead-weight neuron)."""
    b = NetBuilder(1)
    b.input(0)
    L = b.layer()
    fl = L.floor()
    one = fl.neuron(Wire.const(1.0))
    b.commit()
    return b.finish([one])


# ---------------------------------------------------------------------------
# L^p


def build_lp(target, N1, N2, r=2, d=1, drop_tol=1e-12, width_cap=None):
    """L^p approximation on [-1, 1]^d: parity components of the target are
    expanded by the kernel trigonometric operator of degree N1, and each
    phase-shifted cosine is realized by a 2^-N2-accurate network; for d > 1
    the factors are combined with the [-2, 2]^d product net at height N1.

    Coefficients below drop_tol (relative to the largest) are dropped; the
    dropped mass is added to the recorded bound slack in meta.
    """
    N1 = int(N1)
    N2 = int(N2)
    r = int(r)
    d = int(d)
    if N1 < r:
        raise ValueError("need N1 >= r")
    comps = parity_decompose(target)
    expansions = [(comp, trig_operator_nd(comp, N1, r, d, comp.eta))
                  for comp in comps]
    terms = []
    const = 0.0
    scale = max((abs(aj) for _, tc in expansions for aj in tc.a.values()),
                default=0.0)
    dropped = 0.0
    for comp, tc in expansions:
        for j, aj in sorted(tc.a.items()):
            if any(j[q] == 0 and comp.eta[q] == 1 for q in range(d)):
                continue  # a sine factor at frequency 0 vanishes identically
            if abs(aj) <= drop_tol * scale:
                dropped += abs(aj)
                continue
            terms.append((comp.eta, j, aj))
    psi_cache = {}

    def psi(jk, eta):
        key = (jk, eta)
        if key not in psi_cache:
            if jk == 0:
                psi_cache[key] = _const_one_net()
            else:
                kind = "cos" if eta == 0 else "sin"
                psi_cache[key] = build_trig(jk, N2, kind).net
        return psi_cache[key]

    nets, cs = [], []
    n_units = 0
    for eta, j, aj in terms:
        if d == 1:
            if j[0] == 0:
                const += aj  # cos(0) = 1
                continue
            nets.append(psi(j[0], eta[0]))
        else:
            inner = parallel([psi(j[q], eta[q]) for q in range(d)])
            nets.append(chain(product_d_net(d, N1, M=2.0), inner))
        cs.append(aj)
        n_units += 1
        if width_cap is not None and n_units * 16 > width_cap:
            raise WidthBudgetError(
                f"term bank needs roughly {len(terms) * 16} width, "
                f"cap is {width_cap}")
    if nets:
        net = linear_combine(nets, cs, const)
    else:
        net = Net3D(d, [], [{}], [const])
    got = metrics(net)
    omega = modulus_smoothness(target, r, 1.0 / N1, p=2, d=d)
    norm = _l2_norm(target, d)
    shape = (r ** d * omega
             + 1.5 * d * norm * (4.0 * N1) ** d * 2.0 ** (-N2))
    stated_w = max(8 * N1 * d, N1 ** d * (4 + d))
    stated_h = max(N2 + 1 + math.ceil(math.log2(N2 + 1) + 0.5 * math.log2(3)),
                   math.ceil(math.log2(N1)))
    a_cos, H_cos, _ = _cos_chain_params(N2, 2.0 ** (-N2))
    _, H_sin, _ = _cos_chain_params(N2, 2.0 ** (-N2) / 2.0)
    meta = {
        "terms": terms,
        "constant": const,
        "dropped_mass": dropped,
        "chain_coeffs": a_cos,
        "chain_H_cos": H_cos,
        "chain_H_sin": H_sin,
        "omega_r": omega,
        "target_l2": norm,
        "stated_width": stated_w,
        "stated_height": stated_h,
        "product_height": N1 if d > 1 else None,
    }
    inputs = {"N1": N1, "N2": N2, "r": r, "d": d}
    return _finish_report(net, got.width, got.depth, got.height, shape,
                          "lp-shape-p2", inputs, meta)


def _l2_norm(target, d):
    n = 512 if d == 1 else 96
    u = -1.0 + 2.0 * (np.arange(n) + 0.5) / n
    if d == 1:
        pts = u[:, None]
    else:
        grids = np.meshgrid(*([u] * d), indexing="ij")
        pts = np.column_stack([g.ravel() for g in grids])
    vals = np.asarray(target(pts), dtype=float)
    return float(math.sqrt(np.mean(vals ** 2) * 2.0 ** d))


# ---------------------------------------------------------------------------
# size and bound formulas


THEOREM_IDS = ("poly", "polyNd", "smooth", "analytic-cube", "ellipse",
               "hermite", "trig", "lp")

BASELINE_IDS = ("baseline-poly", "baseline-analytic", "baseline-ellipse",
                "baseline-hermite")


def _req(params, *names):
    try:
        return [params[n] for n in names]
    except KeyError as exc:
        raise KeyError(f"missing parameter {exc.args[0]!r}") from exc


def expected_size(theorem_id, params):
    """Stated (width, depth, height) for a result id, as a SizeMetrics with
    zero neuron/parameter counts; baseline-* ids give the corresponding
    plain-2D formulas for comparison tables."""
    p = dict(params)
    if theorem_id == "poly":
        n, H = _req(p, "n", "H")
        w, k, h = 8, n - 1, H
    elif theorem_id == "polyNd":
        n, H, d = _req(p, "n", "H", "d")
        w = math.ceil(d + 1 + 6.0 * (math.e * (n + d) / d) ** d)
        k, h = n - 1, H
    elif theorem_id == "smooth":
        (N,) = _req(p, "N")
        w, k = 8, N
        h = math.ceil(0.5 * (math.log2(6) * N + 3 * math.log2(N + 2)
                             + 2 * math.log2(3)))
    elif theorem_id == "analytic-cube":
        N, delta, d = _req(p, "N", "delta", "d")
        w = math.ceil(d + 1 + 6.0 * (math.e * (N + d) / d) ** d)
        k = N - 1
        h = math.ceil(0.5 * (math.log2(N) + N * math.log2(1 - delta)
                             + d * math.log2(N + d)
                             - d * math.log2(d / math.e) - math.log2(6) - 2))
    elif theorem_id == "ellipse":
        N, rho, d = _req(p, "N", "rho", "d")
        w = math.ceil(d + 1 + 6.0 * (math.e * (N + d) / d) ** d)
        k = N - 1
        h = math.ceil(0.5 * (d * math.log2((N + 1) * (math.e * (N + d) / d))
                             + math.log2(6 * N)
                             + (N / math.sqrt(d)) * math.log2(rho) - 2))
    elif theorem_id == "hermite":
        N, d, B = _req(p, "N", "d", "B")
        w = max(8 * N * d, N ** d * (4 + d))
        k = N + d - 1
        inner = 1.0 + 6.0 * math.sqrt(2.0 * N * math.log(6.0 * N)
                                      + 4.0 * B * math.sqrt(N))
        h = math.ceil(0.5 * d * N * math.log2(inner) + math.log2(1.25 * N)
                      + 0.5 * B * LOG2E * math.sqrt(N))
    elif theorem_id == "trig":
        k_, N2 = _req(p, "k", "N2")
        w = 8
        k = N2 + 1
        h = max(N2 + 1 + math.ceil(math.log2(N2 + 1) + 0.5 * math.log2(3)),
                math.ceil(math.log2(k_)) if k_ > 1 else 0)
    elif theorem_id == "lp":
        N1, N2, d = _req(p, "N1", "N2", "d")
        w = max(8 * N1 * d, N1 ** d * (4 + d))
        k = N2 + d
        h = max(N2 + 1 + math.ceil(math.log2(N2 + 1) + 0.5 * math.log2(3)),
                math.ceil(math.log2(N1)))
    elif theorem_id == "baseline-poly":
        (N,) = _req(p, "N")
        w, k, h = 1, N, 1
    elif theorem_id == "baseline-analytic":
        N, d = _req(p, "N", "d")
        w, k, h = 1, N ** (2 * d), 1
    elif theorem_id == "baseline-ellipse":
        N, d = _req(p, "N", "d")
        w, k, h = N ** (d + 2), N * N, 1
    elif theorem_id == "baseline-hermite":
        (N,) = _req(p, "N")
        w, k, h = 0, math.ceil(N * math.log2(max(N, 2)) ** 2), 1
    else:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: "
                       f"{THEOREM_IDS + BASELINE_IDS}")
    return SizeMetrics(width=int(w), depth=int(k), height=int(h),
                       neuron_count=0, param_count=0)


def expected_bound(theorem_id, params):
    """Stated error bound for a result id (fitted-constant shape where the
    statement's constant is existential)."""
    p = dict(params)
    if theorem_id == "poly":
        amax, n, H = _req(p, "amax", "n", "H")
        return amax * 3.0 * n * n * 2.0 ** (-2 * (H + 1))
    if theorem_id == "polyNd":
        amax, n, H, d = _req(p, "amax", "n", "H", "d")
        return (amax * 6.0 * n * 2.0 ** (-2 * (H + 1))
                * (math.e * (n + d) / d) ** d)
    if theorem_id == "smooth":
        (N,) = _req(p, "N")
        return 2.0 ** (-N)
    if theorem_id == "analytic-cube" or theorem_id == "baseline-analytic":
        N, delta = _req(p, "N", "delta")
        scale = 2.0 if theorem_id == "analytic-cube" else 1.0
        return scale * (1.0 - delta) ** N
    if theorem_id == "ellipse":
        N, rho, d = _req(p, "N", "rho", "d")
        return rho ** (-N / math.sqrt(d))
    if theorem_id == "hermite":
        N, B = _req(p, "N", "B")
        return math.exp(-B * math.sqrt(N))
    if theorem_id == "trig":
        (N2,) = _req(p, "N2")
        return 2.0 ** (-N2)
    if theorem_id == "lp":
        omega, norm, N1, N2, r, d = _req(p, "omega", "norm", "N1", "N2",
                                         "r", "d")
        return (r ** d * omega
                + 1.5 * d * norm * (4.0 * N1) ** d * 2.0 ** (-N2))
    if theorem_id == "baseline-poly":
        (N,) = _req(p, "N")
        return 2.0 ** (-N)
    if theorem_id == "baseline-ellipse":
        (N,) = _req(p, "N")
        return 2.0 ** (-N)
    if theorem_id == "baseline-hermite":
        (N,) = _req(p, "N")
        return math.exp(-N ** (1.0 / 3.0))
    raise KeyError(f"unknown theorem id {theorem_id!r}")
