import itertools
import random

import pytest

from gac import _canon_py, canon
from gac.graph import INF, Graph, graphs_isomorphic

KERNELS = [pytest.param(_canon_py, id="python")]
if canon.BACKEND == "compiled":
    from gac import _canon_ext

    KERNELS.append(pytest.param(_canon_ext, id="compiled"))


def brute_force_key(g):
    """Minimum row-major code over color-respecting orders, shell by shell."""
    n = len(g)
    flat = [canon._encode(m) for row in g.mult for m in row]
    colors = canon.refine_colors(n, flat)
    best = None
    for perm in itertools.permutations(range(n)):
        if [colors[p] for p in perm] != sorted(colors):
            continue
        code = []
        for k in range(n):
            code += [flat[perm[k] * n + perm[j]] for j in range(k + 1)]
            code += [flat[perm[j] * n + perm[k]] for j in range(k)]
        code = tuple(code)
        if best is None or code < best:
            best = code
    return (n, best if best is not None else ())


def random_graph(rng, n, inf_rate=0.2):
    m = [[rng.choice([0, 0, 1, 2]) for _ in range(n)] for _ in range(n)]
    if rng.random() < inf_rate:
        m[rng.randrange(n)][rng.randrange(n)] = INF
    return Graph.from_matrix(m, [f"v{i}" for i in range(n)])


def shuffled(rng, g):
    n = len(g)
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_matrix([[g.mult[perm[i]][perm[j]] for j in range(n)] for i in range(n)],
                             [f"w{i}" for i in range(n)])


@pytest.mark.parametrize("kernel", KERNELS)
def test_kernel_matches_brute_force(kernel):
    rng = random.Random(41)
    for _ in range(150):
        g = random_graph(rng, rng.randint(1, 6))
        assert canon.canonical_key(g, kernel) == brute_force_key(g)


@pytest.mark.parametrize("kernel", KERNELS)
def test_key_is_a_complete_invariant(kernel):
    rng = random.Random(42)
    sample = [random_graph(rng, rng.randint(1, 4)) for _ in range(60)]
    sample += [shuffled(rng, g) for g in sample[:30]]
    keys = [canon.canonical_key(g, kernel) for g in sample]
    for (a, ka), (b, kb) in itertools.combinations(zip(sample, keys), 2):
        assert (ka == kb) == graphs_isomorphic(a, b)


@pytest.mark.parametrize("kernel", KERNELS)
def test_order_realizes_key(kernel):
    rng = random.Random(43)
    for _ in range(50):
        g = random_graph(rng, rng.randint(1, 5))
        key, order = canon.canonical_form(g, kernel)
        h = g.reorder(order)
        assert canon.canonical_key(h, kernel) == key


def test_kernels_agree_on_hard_case():
    g = Graph.from_matrix([[1] * 7 for _ in range(7)])
    keys = {canon.canonical_key(g, k.values[0]) for k in KERNELS}
    assert len(keys) == 1


def test_empty_graph():
    g = Graph((), ())
    assert canon.canonical_key(g) == (0, ())
