"""Zero-moment control force polytopes and their offline look-up table"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import semantic_version
from scipy import linalg

from tilthex.errors import ContractViolation, LutFormatError
from tilthex.methods.base import Base
from tilthex.params import ALPHA_MIN

logger = logging.getLogger(__name__)

LUT_VERSION = semantic_version.Version("1.0.0")
# containment slack for points on the boundary
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ForcePolytope:
    """Zero-moment force polytope at one cant angle

    The polytope is the image of the box [0, omega_max^2]^3 of pair inputs
    under the three generators, i.e. a parallelepiped unless degenerate.

    Attributes:
        alpha: cant angle [rad]
        generators: 3x3, row k is the force per unit pair input [N/Hz^2]
        vertices: extreme points [N], 8 unless degenerate
        normals: unit outward face normals, one per row
        offsets: feasible set is {f : normals @ f <= offsets}
        degenerate: generators have rank < 3, no half-spaces are stored
    """

    alpha: float
    generators: np.ndarray
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    degenerate: bool

    @property
    def halfspaces(self) -> List[tuple]:
        """Half-spaces as (unit outward normal, offset) pairs"""
        return [(n, float(d)) for n, d in zip(self.normals, self.offsets)]

    @property
    def apex(self) -> np.ndarray:
        """Vertex of largest vertical force"""
        return self.vertices[int(np.argmax(self.vertices[:, 2]))]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible mapping"""
        return {
            "alpha_rad": float(self.alpha),
            "generators": self.generators.tolist(),
            "vertices": self.vertices.tolist(),
            "halfspaces": [
                {"n": n.tolist(), "d": float(d)}
                for n, d in zip(self.normals, self.offsets)
            ],
            "degenerate": bool(self.degenerate),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ForcePolytope":
        """Inverse of to_dict"""
        halfspaces = data["halfspaces"]
        degenerate = bool(data["degenerate"])
        normals = np.array([h["n"] for h in halfspaces], dtype=float)
        offsets = np.array([h["d"] for h in halfspaces], dtype=float)
        generators = np.array(data["generators"], dtype=float)
        vertices = np.array(data["vertices"], dtype=float)
        if generators.shape != (3, 3) or vertices.ndim != 2 or vertices.shape[1] != 3:
            raise LutFormatError("Polytope entry has malformed generators or vertices")
        if degenerate and not halfspaces:
            normals = np.zeros((0, 3))
        elif normals.shape != (6, 3) or offsets.shape != (6,):
            raise LutFormatError(
                f"Polytope entry needs 6 half-spaces of 3-vectors, got normals of "
                f"shape { normals.shape }"
            )
        return cls(
            alpha=float(data["alpha_rad"]),
            generators=generators,
            vertices=vertices,
            normals=normals,
            offsets=offsets,
            degenerate=degenerate,
        )


def contains_ball(poly: ForcePolytope, center: np.ndarray, r: float) -> bool:
    """
    Whether the ball of radius r around center lies inside the polytope

    Args:
        poly: polytope to test
        center: ball center [N]
        r: ball radius [N]

    Returns:
        True iff every half-space keeps a margin of at least r. A degenerate
        polytope only contains zero-radius balls centered on it.

    Examples:
        >>> poly = hexa.build_polytope(np.deg2rad(25))
        >>> contains_ball(poly, np.array([0.0, 0.0, 34.335]), 1.0)
        True
        >>> contains_ball(poly, np.zeros(3), 0.5)
        False
    """
    if r < 0:
        raise ContractViolation(f"Radius must be nonnegative, got { r }")
    center = np.asarray(center, dtype=float)
    if poly.degenerate:
        distance = _distance_to_hull_segment(poly.vertices, center)
        return r == 0 and distance <= BOUNDARY_TOL
    margins = poly.offsets - poly.normals @ center
    return bool(np.all(margins >= r - BOUNDARY_TOL))


def _distance_to_hull_segment(points: np.ndarray, query: np.ndarray) -> float:
    """Distance from query to the segment spanned by collinear points"""
    start, end = points[0], points[-1]
    span = end - start
    length_sq = float(span @ span)
    if length_sq == 0.0:
        return float(np.linalg.norm(query - start))
    t = float(np.clip((query - start) @ span / length_sq, 0.0, 1.0))
    return float(np.linalg.norm(query - (start + t * span)))


def section_at_height(poly: ForcePolytope, height: float) -> np.ndarray:
    """
    Cross-section of the polytope with the plane f_z = height

    Args:
        poly: polytope to cut
        height: vertical force of the cutting plane [N]

    Returns:
        Polygon vertices (x, y) [N] ordered counter-clockwise, empty when the
        plane misses the polytope

    Examples:
        >>> poly = hexa.build_polytope(np.deg2rad(25))
        >>> section_at_height(poly, 34.335).shape
        (6, 2)
    """
    if poly.degenerate:
        return np.zeros((0, 2))
    u_max = _pair_input_bound(poly)
    corners = {
        bits: np.array(bits, dtype=float) @ poly.generators * u_max
        for bits in product((0, 1), repeat=3)
    }
    points = []
    for bits, start in corners.items():
        for k in range(3):
            if bits[k]:
                continue
            flipped = tuple(1 if j == k else b for j, b in enumerate(bits))
            end = corners[flipped]
            dz = end[2] - start[2]
            if abs(dz) < 1e-15:
                continue
            t = (height - start[2]) / dz
            if 0.0 <= t <= 1.0:
                points.append(start[:2] + t * (end[:2] - start[:2]))
    if len(points) < 3:
        return np.zeros((0, 2))
    pts = np.unique(np.round(np.array(points), 12), axis=0)
    centroid = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0]))
    return pts[order]


def _pair_input_bound(poly: ForcePolytope) -> float:
    """Largest pair input, recovered from the vertex furthest from the origin"""
    corner = poly.generators.sum(axis=0)
    reach = poly.vertices @ corner
    return float(reach.max() / (corner @ corner))


@dataclass(frozen=True, eq=False)
class PolytopeLUT:
    """Polytopes on a uniform cant-angle grid over [-pi/3, pi/3)

    The half-spaces of all entries are also kept stacked so that a whole scan
    is one array expression.
    """

    delta_alpha: float
    alphas: np.ndarray
    entries: List[ForcePolytope]
    version: semantic_version.Version = LUT_VERSION
    _normals: np.ndarray = field(init=False, repr=False)
    _offsets: np.ndarray = field(init=False, repr=False)
    _degenerate: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        normals = np.zeros((len(self.entries), 6, 3))
        offsets = np.full((len(self.entries), 6), -np.inf)
        for k, poly in enumerate(self.entries):
            if not poly.degenerate:
                normals[k] = poly.normals
                offsets[k] = poly.offsets
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_offsets", offsets)
        object.__setattr__(
            self, "_degenerate", np.array([p.degenerate for p in self.entries])
        )

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def degenerate_mask(self) -> np.ndarray:
        """Which grid entries are degenerate"""
        return self._degenerate

    def index_of(self, alpha: float) -> int:
        """Index of the grid angle nearest to alpha"""
        return int(np.argmin(np.abs(self.alphas - alpha)))

    def nearest(self, alpha: float) -> ForcePolytope:
        """Polytope of the grid angle nearest to alpha, no interpolation"""
        return self.entries[self.index_of(alpha)]

    def margins(self, center: np.ndarray) -> np.ndarray:
        """
        Smallest half-space margin of center for every entry

        Degenerate entries report -inf.
        """
        slack = self._offsets - self._normals @ np.asarray(center, dtype=float)
        return slack.min(axis=1)


def _parse_version(raw: Any) -> semantic_version.Version:
    """Version tag of a LUT file, an integer major release or a full tag"""
    if isinstance(raw, int) and not isinstance(raw, bool):
        return semantic_version.Version(major=raw, minor=0, patch=0)
    text = str(raw)
    if not semantic_version.validate(text):
        raise LutFormatError(f"Invalid LUT version tag '{ text }'")
    return semantic_version.Version(text)


def lut_save(lut: PolytopeLUT, path: Union[str, Path]) -> None:
    """
    Write a LUT to a versioned JSON file

    Floats are written with their shortest round-trip representation, so a
    reload reproduces every value bit for bit.
    """
    doc = {
        "version": lut.version.major,
        "delta_alpha_rad": float(lut.delta_alpha),
        "entries": [poly.to_dict() for poly in lut.entries],
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="UTF-8")
    logger.info("Saved %d polytopes to %s", len(lut), path)


def lut_load(path: Union[str, Path]) -> PolytopeLUT:
    """
    Read a LUT written by lut_save

    Raises:
        LutFormatError: unreadable, truncated or malformed file, or a file of
            another major version
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="UTF-8"))
    except OSError as err:
        raise LutFormatError(f"Cannot read LUT file { path }: { err }") from err
    except json.JSONDecodeError as err:
        raise LutFormatError(f"LUT file { path } is not valid JSON: { err }") from err

    try:
        version = _parse_version(doc["version"])
        if version.major != LUT_VERSION.major:
            raise LutFormatError(
                f"LUT version { version } is incompatible with { LUT_VERSION }"
            )
        entries = [ForcePolytope.from_dict(entry) for entry in doc["entries"]]
        delta_alpha = float(doc["delta_alpha_rad"])
        if not entries:
            raise LutFormatError(f"LUT file { path } has no entries")
        alphas = np.array([poly.alpha for poly in entries])
        return PolytopeLUT(
            delta_alpha=delta_alpha, alphas=alphas, entries=entries, version=version
        )
    except (KeyError, TypeError, ValueError) as err:
        raise LutFormatError(f"Malformed LUT file { path }: { err }") from err


class ForcePolytopes(Base):
    """Responsible for the zero-moment force space and its LUT"""

    def zero_moment_generators(self, alpha: float) -> np.ndarray:
        """
        Force per unit pair input of the three opposite-rotor pairs

        Opposite rotors spin at equal rate in the zero-moment space and share
        one thrust direction, so pair k contributes 2 c_f times the axis of
        rotor k.

        Args:
            alpha: cant angle [rad]

        Returns:
            3x3 array, row k is generator k [N/Hz^2]

        Examples:
            >>> gens = hexa.zero_moment_generators(np.deg2rad(25))
            >>> [round(float(x), 5) for x in gens[1] / np.linalg.norm(gens[1])]
            [0.42262, 0.0, 0.90631]
        """
        self._check_alpha(alpha)
        return 2.0 * self.params.c_f * self._rotor_axes(alpha)[:3]

    def build_polytope(self, alpha: float) -> ForcePolytope:
        """
        Vertex and half-space description of the zero-moment force space

        Args:
            alpha: cant angle [rad]

        Returns:
            The polytope, flagged degenerate when its generators span less
            than three dimensions

        Examples:
            >>> poly = hexa.build_polytope(np.deg2rad(25))
            >>> [round(float(x), 3) for x in poly.apex]
            [0.0, 0.0, 95.139]
            >>> hexa.build_polytope(0.0).degenerate
            True
        """
        gens = self.zero_moment_generators(alpha)
        u_max = self.params.u_max
        scaled = gens * u_max
        sigma_min = linalg.svdvals(gens)[-1]
        degenerate = bool(sigma_min < 1e-9 * 2.0 * self.params.c_f)

        corners = np.array(
            [np.array(bits, dtype=float) @ scaled for bits in product((0, 1), repeat=3)]
        )
        # snap round-off so that symmetric vertices compare exactly
        corners[np.abs(corners) < 1e-12] = 0.0

        if degenerate:
            direction = scaled.sum(axis=0)
            reach = corners @ direction
            vertices = corners[[int(np.argmin(reach)), int(np.argmax(reach))]]
            return ForcePolytope(
                alpha=alpha,
                generators=gens,
                vertices=vertices,
                normals=np.zeros((0, 3)),
                offsets=np.zeros(0),
                degenerate=True,
            )

        normals, offsets = [], []
        for (j, k), i in zip(combinations(range(3), 2), (2, 1, 0)):
            normal = np.cross(gens[j], gens[k])
            normal /= np.linalg.norm(normal)
            # the two faces parallel to g_j, g_k sit at 0 and at g_i * u_max
            extent = float(normal @ scaled[i])
            low, high = min(0.0, extent), max(0.0, extent)
            normals.extend((normal, -normal))
            offsets.extend((high, -low))

        return ForcePolytope(
            alpha=alpha,
            generators=gens,
            vertices=corners,
            normals=np.array(normals),
            offsets=np.array(offsets),
            degenerate=False,
        )

    def build_lut(self, delta_alpha: Optional[float] = None) -> PolytopeLUT:
        """
        Polytopes on the grid -60 deg, -60 deg + step, ... below 60 deg

        Args:
            delta_alpha: grid step [rad], defaults to the instance's LUT step

        Returns:
            The look-up table, one polytope per grid angle

        Examples:
            >>> lut = hexa.build_lut(np.deg2rad(1))
            >>> len(lut), round(float(np.rad2deg(lut.alphas[-1])), 6)
            (120, 59.0)
        """
        step = self.lut_step if delta_alpha is None else delta_alpha
        self._validate_lut_step(step)
        count = int(round((2.0 * np.pi / 3.0) / step))
        alphas = ALPHA_MIN + step * np.arange(count)
        alphas[np.abs(alphas) < 1e-12] = 0.0
        entries = [self.build_polytope(float(alpha)) for alpha in alphas]
        logger.debug(
            "Built LUT with %d entries, step %.4f deg", count, np.rad2deg(step)
        )
        return PolytopeLUT(delta_alpha=step, alphas=alphas, entries=entries)

    def membership_oracle(
        self, alpha: float, force: np.ndarray, n_grid: int = 21
    ) -> bool:
        """
        Brute-force membership test on a lattice of pair inputs

        Args:
            alpha: cant angle [rad]
            force: force to test [N]
            n_grid: lattice points per pair input

        Returns:
            True iff a lattice point lies within half a lattice cell diagonal
            of the force

        Examples:
            >>> hexa.membership_oracle(np.deg2rad(25), np.array([0.0, 0.0, 34.335]))
            True
            >>> hexa.membership_oracle(np.deg2rad(25), np.array([0.0, 0.0, 150.0]))
            False
        """
        if n_grid < 10:
            raise ContractViolation(f"Lattice needs at least 10 points, got { n_grid }")
        gens = self.zero_moment_generators(alpha)
        levels = np.linspace(0.0, self.params.u_max, n_grid)
        lattice = np.stack(np.meshgrid(levels, levels, levels, indexing="ij"), -1)
        points = lattice.reshape(-1, 3) @ gens
        spacing = levels[1] - levels[0]
        tolerance = 0.5 * spacing * max(
            np.linalg.norm(np.array(signs) @ gens)
            for signs in product((-1.0, 1.0), repeat=3)
        )
        distances = np.linalg.norm(points - np.asarray(force, dtype=float), axis=1)
        return bool(distances.min() <= tolerance)
