"""Path-space wavelet families, their transforms, and the Markov variant.

For a shape J with positive entries, each vertex v carries the paths D_v^J
of degree J into v.  Under the measure inner product on coefficient vectors,
the constant vector spans the scaling direction and any orthonormal basis of
its complement gives the wavelet functions f^{m,v}.  Shifting the f^{m,v} by
the prefixing isometries S_lambda over paths of degree jJ produces mutually
orthogonal layers whose union with the normalized vertex indicators is an
orthonormal basis of the level-nJ cylinder functions, for every depth n.

The same recipe on the one-vertex bouquet with a Bernoulli measure gives the
word-shift wavelet system for the full shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadShape, BadWeights, EmptyDv, ShapeMismatch
from .kgraph import (
    Degree,
    KGraph,
    Path,
    as_degree,
    bouquet_graph,
    deg_scale,
    enumerate_paths,
    normal_form,
    vertex_path,
)
from .measure import CylinderFn, MeasureSpec, cylinder_measure, refine
from .orthobasis import complement_basis, constant_unit_vector
from .perron import PFData, pf_data
from .sbfs import LevelSpace, level_space, s_apply


@dataclass(frozen=True)
class VertexBlock:
    """Per-vertex wavelet data: the ordered path list D_v^J and the
    orthonormal coefficient vectors (row 0 constant, rows 1.. zero-mean)."""

    vertex: str
    paths: tuple[Path, ...]
    c_vectors: np.ndarray


@dataclass(frozen=True)
class WaveletFamily:
    """Scaling functions and level-zero wavelets for one shape J."""

    graph: KGraph
    spec: MeasureSpec
    shape: Degree
    blocks: dict
    scaling: tuple[CylinderFn, ...]          # per vertex, = Theta_v / sqrt(x_v)
    wavelets: tuple[tuple[tuple[int, str], CylinderFn], ...]  # ((m, v), f^{m,v})

    def wavelet(self, m: int, vertex: str) -> CylinderFn:
        block = self.blocks[vertex]
        return CylinderFn.combination(zip(block.paths, block.c_vectors[m]))


def build_wavelet_family(graph: KGraph, pf: PFData | None = None,
                         shape: Sequence[int] = None,
                         spec: MeasureSpec | None = None) -> WaveletFamily:
    """Construct the shape-J scaling functions and wavelets f^{m,v}."""
    if shape is None:
        raise BadShape("a wavelet shape is required, e.g. shape=(1, 1)")
    if spec is None:
        spec = MeasureSpec.perron_frobenius(graph, pf if pf is not None else pf_data(graph))
    shape = as_degree(shape, graph.k)
    if any(j < 1 for j in shape):
        raise BadShape(f"every shape entry must be >= 1, got {shape}")

    blocks = {}
    scaling = []
    wavelets = []
    for v in graph.vertices:
        paths = tuple(enumerate_paths(graph, shape, range=v))
        if not paths:
            raise EmptyDv(f"no paths of shape {shape} reach vertex {v}")
        weights = np.array([float(cylinder_measure(spec, p)) for p in paths])
        c = np.vstack([constant_unit_vector(weights)[None, :], complement_basis(weights)])
        blocks[v] = VertexBlock(v, paths, c)
        # the constant row rebuilds Theta_v / sqrt(M(Z(v))) after coarsening
        scaling.append(CylinderFn(graph, {vertex_path(graph, v): float(c[0, 0])}))
        for m in range(1, len(paths)):
            wavelets.append(((m, v), CylinderFn.combination(zip(paths, c[m]))))
    return WaveletFamily(graph, spec, shape, blocks, tuple(scaling), tuple(wavelets))


@dataclass(frozen=True)
class WaveletBasis:
    """The depth-n orthonormal basis at cylinder level nJ.

    ``labels`` is one record per basis vector; ``matrix`` holds its
    coefficients over ``space.basis`` in the unnormalized indicator basis.
    """

    family: WaveletFamily
    depth: int
    space: LevelSpace
    labels: tuple[dict, ...]
    matrix: np.ndarray

    def functions(self) -> list[CylinderFn]:
        return [self.space.function_of(row) for row in self.matrix]

    def gram(self) -> np.ndarray:
        weighted = self.matrix * self.space.weights[None, :]
        return weighted @ self.matrix.T

    def to_records(self) -> list[dict]:
        out = []
        for label, row in zip(self.labels, self.matrix):
            fn = self.space.function_of(row)
            out.append({**label, "terms": fn.to_records()})
        return out


def wavelet_basis(family: WaveletFamily, depth: int) -> WaveletBasis:
    """Orthonormal basis of level-nJ cylinder functions: the normalized
    vertex indicators plus all S_lambda f^{m,v} with d(lambda) = jJ, j < n."""
    if depth < 1:
        raise BadShape(f"depth must be >= 1, got {depth}")
    graph = family.graph
    spec = family.spec
    level = deg_scale(depth, family.shape)
    space = level_space(spec, level)

    labels: list[dict] = []
    rows: list[np.ndarray] = []

    def add(label: dict, fn: CylinderFn):
        labels.append(label)
        rows.append(space.vector_of(fn))

    for v, fn in zip(graph.vertices, family.scaling):
        add({"kind": "scaling", "vertex": v}, fn)
    for j in range(depth):
        step = deg_scale(j, family.shape)
        for v in graph.vertices:
            block = family.blocks[v]
            shifts = [vertex_path(graph, v)] if j == 0 else \
                enumerate_paths(graph, step, source=v)
            for lam in shifts:
                for m in range(1, len(block.paths)):
                    fn = s_apply(spec, lam, family.wavelet(m, v))
                    add({"kind": "wavelet", "j": j, "vertex": v, "m": m,
                         "shift": list(lam.word)}, fn)

    return WaveletBasis(family, depth, space, tuple(labels), np.array(rows))


def analyze(basis: WaveletBasis, f: CylinderFn) -> np.ndarray:
    """Coefficients <b_i, f> of f against the basis vectors."""
    vec = basis.space.vector_of(refine(f, basis.space.level))
    return basis.matrix @ (basis.space.weights * vec)


def synthesize(basis: WaveletBasis, coeffs: Sequence[float]) -> CylinderFn:
    """The combination sum_i coeffs_i b_i as a level-nJ cylinder function."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (len(basis.labels),):
        raise ShapeMismatch(f"need {len(basis.labels)} coefficients")
    return basis.space.function_of(coeffs @ basis.matrix)


# -- Markov (Bernoulli full-shift) wavelets --------------------------------

@dataclass(frozen=True)
class MarkovWaveletSystem:
    """Scaling functions and shifted wavelets on words over 0..N-1.

    ``level`` is the common word length n+1 every member refines to; the
    system is an orthonormal basis of the level-(n+1) cylinder functions.
    """

    graph: KGraph
    spec: MeasureSpec
    depth: int
    level: int
    labels: tuple[dict, ...]
    functions: tuple[CylinderFn, ...]

    def gram(self) -> np.ndarray:
        space = level_space(self.spec, (self.level,))
        mat = np.array([space.vector_of(f) for f in self.functions])
        return (mat * space.weights[None, :]) @ mat.T

    def to_records(self) -> list[dict]:
        return [{**label, "terms": fn.to_records()}
                for label, fn in zip(self.labels, self.functions)]


def markov_wavelets(n_letters: int, weights: Sequence[float], depth: int) -> MarkovWaveletSystem:
    """The word-shift wavelet system for the full shift on n_letters symbols.

    Scaling functions are the normalized letter indicators; base wavelets
    combine two-letter cylinders through the zero-mean vectors of the
    weighted inner product; deeper layers are word shifts.  The combined
    system has n_letters**(depth+1) members.
    """
    if n_letters < 2:
        raise BadWeights("need at least two letters")
    if depth < 0:
        raise BadWeights("depth must be >= 0")
    graph = bouquet_graph(n_letters)
    spec = MeasureSpec.bernoulli(graph, weights)
    letters = spec.alphabet
    p = np.array([float(w) for w in spec.weights])
    c_rows = complement_basis(p)

    labels: list[dict] = []
    functions: list[CylinderFn] = []
    for k, a in enumerate(letters):
        phi = CylinderFn(graph, {normal_form(graph, [a]): 1.0 / np.sqrt(p[k])})
        labels.append({"kind": "scaling", "letter": a})
        functions.append(phi)

    base: dict[tuple[int, str], CylinderFn] = {}
    for k, a in enumerate(letters):
        for j in range(1, n_letters):
            psi = CylinderFn.combination(
                (normal_form(graph, [a, b]), c_rows[j - 1, i] / np.sqrt(p[k]))
                for i, b in enumerate(letters))
            base[(j, a)] = psi

    for m in range(depth):
        words = [()] if m == 0 else [w.word for w in enumerate_paths(graph, (m,))]
        for w in words:
            shift = None if not w else normal_form(graph, list(w))
            for k, a in enumerate(letters):
                for j in range(1, n_letters):
                    psi = base[(j, a)]
                    fn = psi if shift is None else s_apply(spec, shift, psi)
                    labels.append({"kind": "wavelet", "layer": m,
                                   "word": list(w), "letter": a, "m": j})
                    functions.append(fn)

    level = depth + 1
    functions = [refine(f, (level,)) for f in functions]
    return MarkovWaveletSystem(graph, spec, depth, level, tuple(labels), tuple(functions))


# -- subspace comparison (shape J versus shape lJ) --------------------------

def _principal_angles(u_rows: np.ndarray, v_rows: np.ndarray) -> np.ndarray:
    """Principal angles between the row spans of two orthonormal row sets.

    Small angles come from the singular values of the projection residual
    (their sines), which stays accurate where arccos of a cosine near 1
    cannot resolve below ~1e-8.
    """
    cosines = np.sort(np.linalg.svd(u_rows @ v_rows.T, compute_uv=False))[::-1]
    resid = v_rows - (v_rows @ u_rows.T) @ u_rows
    sines = np.sort(np.linalg.svd(resid, compute_uv=False))
    count = min(u_rows.shape[0], v_rows.shape[0])
    angles = np.empty(count)
    for i in range(count):
        c = min(cosines[i], 1.0) if i < len(cosines) else 0.0
        s = min(sines[i], 1.0) if i < len(sines) else 1.0
        angles[i] = np.arcsin(s) if c * c > 0.5 else np.arccos(c)
    return np.sort(angles)


@dataclass(frozen=True)
class SubspaceComparison:
    equal: bool
    principal_angles: tuple[float, ...]
    dim_fine: int
    dim_coarse: int

    def to_record(self) -> dict:
        return {"equal": self.equal, "principal_angles": list(self.principal_angles),
                "dim_multiscale": self.dim_fine, "dim_single_scale": self.dim_coarse}


def subspace_compare(family: WaveletFamily, coarse_family: WaveletFamily,
                     angle_tol: float = 1e-8) -> SubspaceComparison:
    """Compare the single-scale wavelet space of shape lJ with the direct sum
    of the first l layers of the shape-J decomposition, via principal angles.

    Both spans are refined to level lJ; equality is reported, never assumed.
    """
    if family.graph is not coarse_family.graph:
        raise ShapeMismatch("families live on different graphs")
    ratios = {cj // j for cj, j in zip(coarse_family.shape, family.shape)
              if cj % j == 0}
    rem = [cj % j for cj, j in zip(coarse_family.shape, family.shape)]
    if any(rem) or len(ratios) != 1:
        raise ShapeMismatch(
            f"{coarse_family.shape} is not an integer multiple of {family.shape}")
    ell = ratios.pop()

    fine = wavelet_basis(family, ell)
    wavelet_rows = np.array([i for i, lab in enumerate(fine.labels)
                             if lab["kind"] == "wavelet"], dtype=int)
    u_fine = fine.matrix[wavelet_rows] * np.sqrt(fine.space.weights)[None, :]

    coarse = wavelet_basis(coarse_family, 1)
    rows = np.array([i for i, lab in enumerate(coarse.labels)
                     if lab["kind"] == "wavelet"], dtype=int)
    u_coarse = coarse.matrix[rows] * np.sqrt(coarse.space.weights)[None, :]

    angles = _principal_angles(u_fine, u_coarse)
    equal = (u_fine.shape[0] == u_coarse.shape[0]
             and bool(np.all(angles < angle_tol)))
    return SubspaceComparison(equal, tuple(float(a) for a in angles),
                              u_fine.shape[0], u_coarse.shape[0])
