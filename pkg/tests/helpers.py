"""Shared property-suite helpers, reused by module tests and the acceptance
gate.  Each function returns the worst deviation it saw (0.0 for exact
combinatorial checks) and raises AssertionError on failure."""

from itertools import permutations, product

import numpy as np

from kgraphwave import (
    cylinder_measure,
    enumerate_paths,
    extensions,
    inner_product,
    level_space,
    normal_form,
    refine,
    s_matrix,
)


def words_with_pattern(graph, pattern):
    """All composable edge words whose color sequence equals `pattern`."""
    out = []

    def extend(word):
        pos = len(word)
        if pos == len(pattern):
            out.append(tuple(word))
            return
        color = pattern[pos]
        if pos == 0:
            candidates = [e for e in sorted(graph.edges) if graph.color(e) == color]
        else:
            candidates = graph.edges_into(graph.edge(word[-1]).source, color)
        for eid in candidates:
            word.append(eid)
            extend(word)
            word.pop()

    extend([])
    return out


def all_rewrite_terminals(graph, word):
    """Explore every rewriting order of `word`; return the set of terminal
    (inversion-free) words."""
    seen = {tuple(word)}
    frontier = [tuple(word)]
    terminals = set()
    while frontier:
        w = frontier.pop()
        moves = [i for i in range(len(w) - 1)
                 if graph.color(w[i]) > graph.color(w[i + 1])]
        if not moves:
            terminals.add(w)
            continue
        for i in moves:
            a, b = graph._swap[(w[i], w[i + 1])]
            nxt = w[:i] + (a, b) + w[i + 2:]
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return terminals


def check_confluence(graph, max_census=(2, 2)):
    """Every composable word of census <= max_census rewrites to one normal
    form regardless of swap order."""
    counts = 0
    for census in product(*(range(c + 1) for c in max_census)):
        if sum(census) == 0:
            continue
        letters = [c + 1 for c, n in enumerate(census) for _ in range(n)]
        for pattern in sorted(set(permutations(letters))):
            for word in words_with_pattern(graph, pattern):
                terminals = all_rewrite_terminals(graph, word)
                assert len(terminals) == 1, f"word {word} has terminals {terminals}"
                (terminal,) = terminals
                assert terminal == normal_form(graph, word).word
                counts += 1
    return counts


def check_measure_additivity(spec, max_level=(2, 2), tol=1e-12):
    """M(Z(lambda)) equals the sum over its extensions to any higher level."""
    graph = spec.graph
    worst = 0.0
    for base in product(*(range(c + 1) for c in max_level)):
        for step in product(*(range(c + 1) for c in max_level)):
            if sum(step) == 0:
                continue
            for lam in enumerate_paths(graph, base):
                total = sum(float(cylinder_measure(spec, tau))
                            for tau in extensions(lam, step))
                worst = max(worst, abs(total - float(cylinder_measure(spec, lam))))
    assert worst < tol, worst
    return worst


def check_ip_refinement_invariance(spec, fns, levels, tol=1e-12):
    """<f, g> is unchanged when either argument is refined."""
    worst = 0.0
    for f in fns:
        for g in fns:
            base = inner_product(spec, f, g)
            for level in levels:
                worst = max(worst, abs(inner_product(spec, refine(f, level), g) - base))
                worst = max(worst, abs(inner_product(spec, f, refine(g, level)) - base))
    assert worst < tol, worst
    return worst


def check_isometry_columns(spec, path_degrees, domain_level, tol=1e-12):
    """Columns of s_matrix have unit norm exactly on source-compatible paths,
    zero otherwise."""
    graph = spec.graph
    dom = level_space(spec, domain_level)
    worst = 0.0
    for deg in path_degrees:
        for lam in enumerate_paths(graph, deg):
            mat = s_matrix(spec, lam, domain_level).matrix
            norms = np.linalg.norm(mat, axis=0)
            for j, mu in enumerate(dom.basis):
                target = 1.0 if mu.range == lam.source else 0.0
                worst = max(worst, abs(norms[j] - target))
    assert worst < tol, worst
    return worst


def path_count(graph, degree):
    """|Lambda^degree| from the vertex matrices: an independent count oracle."""
    from kgraphwave import vertex_matrices

    mats = vertex_matrices(graph)
    n = len(graph.vertices)
    acc = np.eye(n, dtype=object)
    for m, d in zip(mats, degree):
        acc = acc @ np.linalg.matrix_power(m.astype(object), d)
    return int(np.ones(n) @ acc @ np.ones(n))
