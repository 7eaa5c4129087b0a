"""Two-packet wave illustration of the disjunction.

Each concept is a 2D Gaussian wave packet on the plane, items sit at points,
and an item's collapse probability is the packet density integrated over a
small cell of area ``cell_area`` around it (midpoint rule). The phase
difference field ``theta(x, y)`` between the packets is a 24-term bivariate
polynomial fitted so that, with ``cos theta`` linearized to ``theta``, the
interference term at each item reproduces its excess disjunction probability::

    cell_area * f(x_k, y_k) * theta(x_k, y_k) = mu_k(A or B) - (mu_k(A) + mu_k(B)) / 2

with ``f = |psi_A| |psi_B|``. The disjunction density is
``(|psi_A|^2 + |psi_B|^2)/2 + |psi_A psi_B| cos theta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, PlacementError
from .numerics import solve_dense_linear

DEFAULT_CELL_AREA = 0.1

# Exponents (i, j) of x**i * y**j, in coefficient order F_1 ... F_24.
PHASE_BASIS: tuple[tuple[int, int], ...] = (
    (0, 0),
    (1, 0), (0, 1),
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
    (4, 0), (3, 1), (2, 2), (1, 3), (0, 4),
    (5, 0), (4, 1), (3, 2), (2, 3), (1, 4), (0, 5),
    (6, 0), (5, 1), (4, 2),
)
N_PHASE_TERMS = len(PHASE_BASIS)


@dataclass(frozen=True)
class GaussianPacket:
    amplitude: float
    center: tuple[float, float]
    widths: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "widths", tuple(float(v) for v in self.widths))
        if self.amplitude <= 0 or min(self.widths) <= 0:
            raise DomainError("packet amplitude and widths must be positive")

    def exponent(self, x, y):
        (cx, cy), (sx, sy) = self.center, self.widths
        return (np.asarray(x) - cx) ** 2 / (2 * sx * sx) + (np.asarray(y) - cy) ** 2 / (2 * sy * sy)

    def density(self, x, y):
        return self.amplitude * np.exp(-self.exponent(x, y))

    def magnitude(self, x, y):
        """|psi| = sqrt(density)."""
        return math.sqrt(self.amplitude) * np.exp(-0.5 * self.exponent(x, y))


def gaussian_density(p: GaussianPacket, x, y):
    return p.density(x, y)


def collapse_probability_midpoint(p: GaussianPacket, position, delta: float = DEFAULT_CELL_AREA):
    if delta < 0:
        raise DomainError("cell area must be non-negative")
    x, y = position
    return delta * p.density(x, y)


def overlap_envelope(packet_a: GaussianPacket, packet_b: GaussianPacket, x, y):
    """|psi_A psi_B|, the envelope multiplying cos(theta)."""
    return packet_a.magnitude(x, y) * packet_b.magnitude(x, y)


@dataclass(frozen=True, eq=False)
class WaveFieldSpec:
    packet_a: GaussianPacket
    packet_b: GaussianPacket
    positions: np.ndarray
    cell_area: float = DEFAULT_CELL_AREA
    phase_coeffs: np.ndarray | None = None
    labels: tuple[str, ...] = ()
    published_phase_coeffs: np.ndarray | None = None
    grid_size: tuple[int, int] = (512, 512)
    extent: tuple[float, float, float, float] = (-10.0, -4.0, 16.0, 12.0)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "positions", pos)
        if self.cell_area <= 0:
            raise DomainError("cell area must be positive")
        if len({tuple(p) for p in pos}) != len(pos):
            raise DomainError("item positions must be distinct")
        for name in ("phase_coeffs", "published_phase_coeffs"):
            coeffs = getattr(self, name)
            if coeffs is not None:
                coeffs = np.asarray(coeffs, dtype=float)
                if coeffs.shape != (N_PHASE_TERMS,):
                    raise DomainError(f"{name} must have {N_PHASE_TERMS} entries")
                object.__setattr__(self, name, coeffs)

    def with_coeffs(self, coeffs) -> "WaveFieldSpec":
        return replace(self, phase_coeffs=np.asarray(coeffs, dtype=float))


def _packet_from_json(obj) -> GaussianPacket:
    return GaussianPacket(float(obj["amplitude"]), tuple(obj["center"]), tuple(obj["widths"]))


def _packet_to_json(p: GaussianPacket) -> dict:
    return {"amplitude": p.amplitude, "center": list(p.center), "widths": list(p.widths)}


def spec_from_json(text: str) -> WaveFieldSpec:
    obj = json.loads(text)
    try:
        items = obj["items"]
        grid = obj.get("grid", {})
        kwargs = {}
        if "width" in grid and "height" in grid:
            kwargs["grid_size"] = (int(grid["width"]), int(grid["height"]))
        if "extent" in grid:
            kwargs["extent"] = tuple(float(v) for v in grid["extent"])
        return WaveFieldSpec(
            packet_a=_packet_from_json(obj["packet_a"]),
            packet_b=_packet_from_json(obj["packet_b"]),
            positions=np.array([[it["x"], it["y"]] for it in items], dtype=float),
            cell_area=float(obj.get("cell_area", DEFAULT_CELL_AREA)),
            phase_coeffs=obj.get("phase_coeffs"),
            labels=tuple(str(it.get("label", "")) for it in items),
            published_phase_coeffs=obj.get("published_phase_coeffs"),
            **kwargs,
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"wave-field spec is missing or has a malformed field: {exc}") from None


def spec_to_json(spec: WaveFieldSpec) -> str:
    obj = {
        "packet_a": _packet_to_json(spec.packet_a),
        "packet_b": _packet_to_json(spec.packet_b),
        "cell_area": spec.cell_area,
        "items": [
            {"index": k + 1, "label": spec.labels[k] if k < len(spec.labels) else "", "x": float(x), "y": float(y)}
            for k, (x, y) in enumerate(spec.positions)
        ],
        "grid": {"width": spec.grid_size[0], "height": spec.grid_size[1], "extent": list(spec.extent)},
    }
    if spec.phase_coeffs is not None:
        obj["phase_coeffs"] = [float(v) for v in spec.phase_coeffs]
    if spec.published_phase_coeffs is not None:
        obj["published_phase_coeffs"] = [float(v) for v in spec.published_phase_coeffs]
    return json.dumps(obj, indent=2) + "\n"


def load_spec(path) -> WaveFieldSpec:
    with open(path, encoding="utf-8") as fh:
        return spec_from_json(fh.read())


def load_bundled_spec() -> WaveFieldSpec:
    text = resources.files("qconcepts").joinpath("data", "table2_wavefield.json").read_text(encoding="utf-8")
    return spec_from_json(text)


# -- item placement ----------------------------------------------------------

def _level(packet: GaussianPacket, mu: float, delta: float, label: str) -> float:
    """Exponent value r where delta * density = mu, i.e. density exponent == r."""
    peak = delta * packet.amplitude
    if mu <= 0.0 or mu > peak * (1.0 + 1e-12):
        raise PlacementError(f"item {label!r}: probability {mu:.6g} unreachable (peak is {peak:.6g})", item=label)
    return max(math.log(peak / mu), 0.0)


def _ellipse_candidates(packet_a, packet_b, ra, rb, samples=4096):
    """Intersections of the level ellipses exponent_A = ra and exponent_B = rb."""
    (cx, cy), (sx, sy) = packet_a.center, packet_a.widths
    if ra == 0.0:
        pt = np.array([cx, cy])
        return [pt] if abs(packet_b.exponent(*pt) - rb) <= 1e-9 * max(rb, 1.0) else []
    rad_x, rad_y = sx * math.sqrt(2 * ra), sy * math.sqrt(2 * ra)

    def point(t):
        return cx + rad_x * math.cos(t), cy + rad_y * math.sin(t)

    def g(t):
        return float(packet_b.exponent(*point(t))) - rb

    ts = np.linspace(0.0, 2 * math.pi, samples + 1)
    gs = np.array([g(t) for t in ts])
    roots = []
    for i in range(samples):
        if gs[i] == 0.0:
            roots.append(ts[i])
        elif gs[i] * gs[i + 1] < 0.0:
            roots.append(brentq(g, ts[i], ts[i + 1], xtol=1e-14))
    # tangency: a touching minimum of |g| without a sign change
    for i in range(1, samples):
        if abs(gs[i]) < abs(gs[i - 1]) and abs(gs[i]) <= abs(gs[i + 1]) and gs[i - 1] * gs[i + 1] > 0:
            lo, hi = ts[i - 1], ts[i + 1]
            for _ in range(100):
                m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
                if abs(g(m1)) < abs(g(m2)):
                    hi = m2
                else:
                    lo = m1
            t = 0.5 * (lo + hi)
            if abs(g(t)) <= 1e-9 * max(rb, 1.0):
                roots.append(t)
    return [np.array(point(t)) for t in roots]


def fit_item_positions(data, packet_a: GaussianPacket, packet_b: GaussianPacket,
                       delta: float = DEFAULT_CELL_AREA, reference=None) -> np.ndarray:
    """Place each item where both midpoint probabilities equal its data values.

    Among the level-ellipse intersections, pick the one nearest the matching
    ``reference`` point when given, otherwise the one nearest the origin.
    """
    mu_a, mu_b, labels = data.mu_a, data.mu_b, data.labels
    ref = None if reference is None else np.asarray(reference, dtype=float).reshape(-1, 2)
    out = np.empty((len(labels), 2))
    for k, label in enumerate(labels):
        ra = _level(packet_a, mu_a[k], delta, label)
        rb = _level(packet_b, mu_b[k], delta, label)
        cands = _ellipse_candidates(packet_a, packet_b, ra, rb)
        if not cands:
            raise PlacementError(f"item {label!r}: level sets of the two packets do not intersect", item=label)
        target = ref[k] if ref is not None else np.zeros(2)
        out[k] = min(cands, key=lambda p: (float(np.sum((p - target) ** 2)), p[0], p[1]))
    return out


# -- phase field -------------------------------------------------------------

def phase_design_matrix(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    return np.stack([x ** i * y ** j for i, j in PHASE_BASIS], axis=1)


def evaluate_phase(spec_or_coeffs, x, y):
    """theta(x, y) over the fixed monomial basis; accepts a spec or a coefficient vector."""
    coeffs = spec_or_coeffs.phase_coeffs if isinstance(spec_or_coeffs, WaveFieldSpec) else spec_or_coeffs
    if coeffs is None:
        raise DomainError("spec has no phase coefficients")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    for c, (i, j) in zip(coeffs, PHASE_BASIS):
        out = out + c * x ** i * y ** j
    return out


def _unscale_coeffs(g, scale, shift) -> np.ndarray:
    """Coefficients over (x, y) of sum g_ij u^i v^j with u = (x - shift_x)/scale_x, v likewise."""
    from math import comb

    index = {ij: n for n, ij in enumerate(PHASE_BASIS)}
    (ax, ay), (bx, by) = scale, shift
    out = np.zeros(N_PHASE_TERMS)
    for coef, (i, j) in zip(g, PHASE_BASIS):
        if coef == 0.0:
            continue
        for p in range(i + 1):
            cx = comb(i, p) * (-bx) ** (i - p) / ax ** i
            for q in range(j + 1):
                cy = comb(j, q) * (-by) ** (j - q) / ay ** j
                out[index[(p, q)]] += coef * cx * cy
    return out


@dataclass(frozen=True, eq=False)
class PhaseSolution:
    coeffs: np.ndarray
    theta_targets: np.ndarray
    theta_points: np.ndarray
    envelope: np.ndarray
    f_values: np.ndarray
    relative_residual: float
    rescaled: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def cos_theta_points(self) -> np.ndarray:
        return np.cos(self.theta_points)

    def to_dict(self, labels: Sequence[str] = ()) -> dict:
        def r(v):
            return float(f"{v:.6g}")

        obj = {
            "rescaled": self.rescaled,
            "relative_residual": r(self.relative_residual),
            "coefficients": [r(c) for c in self.coeffs],
            "points": [
                {
                    "index": k + 1,
                    "label": labels[k] if k < len(labels) else "",
                    "f_k": r(self.f_values[k]),
                    "envelope": r(self.envelope[k]),
                    "theta_target": r(self.theta_targets[k]),
                    "theta": r(self.theta_points[k]),
                    "cos_theta": r(math.cos(self.theta_points[k])),
                }
                for k in range(len(self.theta_points))
            ],
        }
        return obj

    def to_json(self, labels: Sequence[str] = ()) -> str:
        return json.dumps(self.to_dict(labels), indent=2) + "\n"


def build_phase_field(spec: WaveFieldSpec, f_values, *, rescale: bool = False) -> PhaseSolution:
    """Solve for the 24 phase coefficients that interpolate the linearized targets."""
    f_values = np.asarray(f_values, dtype=float)
    pos = spec.positions
    if pos.shape[0] != N_PHASE_TERMS or f_values.shape != (N_PHASE_TERMS,):
        raise DomainError(f"phase field needs exactly {N_PHASE_TERMS} items and f values")
    x, y = pos[:, 0], pos[:, 1]
    env = overlap_envelope(spec.packet_a, spec.packet_b, x, y)
    if np.any(env <= 0.0):
        raise DomainError("overlap envelope vanishes at an item position")
    targets = f_values / (spec.cell_area * env)

    if rescale:
        lo, hi = pos.min(axis=0), pos.max(axis=0)
        half = np.where(hi > lo, 0.5 * (hi - lo), 1.0)
        mid = 0.5 * (hi + lo)
        u, v = (x - mid[0]) / half[0], (y - mid[1]) / half[1]
        g = solve_dense_linear(phase_design_matrix(u, v), targets)
        coeffs = _unscale_coeffs(g, tuple(half), tuple(mid))
    else:
        coeffs = solve_dense_linear(phase_design_matrix(x, y), targets)

    theta = evaluate_phase(coeffs, x, y)
    lhs = spec.cell_area * env * theta
    denom = max(float(np.max(np.abs(f_values))), np.finfo(float).tiny)
    resid = float(np.max(np.abs(lhs - f_values)) / denom) if np.any(f_values) else float(np.max(np.abs(lhs)))
    return PhaseSolution(coeffs, targets, theta, env, f_values, resid, rescale)


def interference_excess(data) -> np.ndarray:
    """mu(A or B) - (mu(A) + mu(B))/2 per item."""
    return data.mu_ab - 0.5 * (data.mu_a + data.mu_b)


# -- rendering ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Raster:
    values: np.ndarray  # shape (height, width); row 0 is the top edge (largest y)
    extent: tuple[float, float, float, float]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def pixel_centers(width: int, height: int, extent):
    x0, y0, x1, y1 = extent
    xs = x0 + (np.arange(width) + 0.5) * (x1 - x0) / width
    ys = y1 - (np.arange(height) + 0.5) * (y1 - y0) / height
    return np.meshgrid(xs, ys)


def density_at(spec: WaveFieldSpec, which: str, x, y):
    if which == "A":
        return spec.packet_a.density(x, y)
    if which == "B":
        return spec.packet_b.density(x, y)
    if which == "AorB":
        theta = evaluate_phase(spec, x, y)
        return (0.5 * (spec.packet_a.density(x, y) + spec.packet_b.density(x, y))
                + overlap_envelope(spec.packet_a, spec.packet_b, x, y) * np.cos(theta))
    raise DomainError(f"unknown density {which!r}; expected A, B or AorB")


def render_intensity(spec: WaveFieldSpec, which: str, width: int | None = None, height: int | None = None,
                     extent=None) -> Raster:
    width = spec.grid_size[0] if width is None else width
    height = spec.grid_size[1] if height is None else height
    extent = tuple(float(v) for v in (spec.extent if extent is None else extent))
    if width < 1 or height < 1:
        raise DomainError("grid dimensions must be positive")
    x0, y0, x1, y1 = extent
    if not (x1 > x0 and y1 > y0):
        raise DomainError(f"extent {extent} has zero area")
    X, Y = pixel_centers(width, height, extent)
    return Raster(np.asarray(density_at(spec, which, X, Y), dtype=float), extent)


def to_pgm(raster: Raster, clamp_negative: bool = True) -> bytes:
    """Binary 8-bit PGM, linearly min-max normalized."""
    v = np.maximum(raster.values, 0.0) if clamp_negative else raster.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        img = np.rint((v - lo) / (hi - lo) * 255.0)
    else:
        img = np.zeros_like(v)
    header = f"P5\n{raster.width} {raster.height}\n255\n".encode("ascii")
    return header + img.astype(np.uint8).tobytes()


def to_csv_grid(raster: Raster) -> str:
    return "\n".join(",".join(f"{v:.6g}" for v in row) for row in raster.values) + "\n"


def read_pgm(blob: bytes) -> np.ndarray:
    parts = blob.split(b"\n", 3)
    if parts[0] != b"P5":
        raise DomainError("not a binary PGM")
    w, h = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)
