import itertools
import re
from contextlib import contextmanager

import numpy as np
import pytest
from PIL import Image

from vsumeval.matching import FrameFeatures, SummarySet

_ACCEPTANCE: dict[str, str] = {}


@contextmanager
def criterion(key: str):
    """Record PASS/FAIL for an acceptance criterion, re-raising failures."""
    try:
        yield
    except BaseException:
        _ACCEPTANCE[key] = "FAIL"
        raise
    _ACCEPTANCE.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        terminalreporter.write_line(f"{_ACCEPTANCE[key]:4}  criterion {key}")


@pytest.fixture
def write_png(tmp_path):
    def _write(name, rgb, subdir="frames"):
        d = tmp_path / subdir
        d.mkdir(parents=True, exist_ok=True)
        p = d / name
        Image.fromarray(np.asarray(rgb, dtype=np.uint8)).save(p)
        return p

    return _write


def random_distribution(rng, n):
    return rng.dirichlet(np.ones(n))


def clustered_instance(rng, max_frames=6, n_protos=3, max_noise=0.1):
    """Random (auto, user) summary pair with prototype-clustered features.

    Every frame picks a color prototype and, independently, a texture
    prototype, then mixes in up to ``max_noise`` of random mass.
    """
    color_protos = [random_distribution(rng, 256) for _ in range(n_protos)]
    texture_protos = [random_distribution(rng, 192) for _ in range(n_protos)]

    def frame(i):
        ec, et = rng.uniform(0, max_noise, 2)
        c = (1 - ec) * color_protos[rng.integers(n_protos)] + ec * random_distribution(rng, 256)
        t = (1 - et) * texture_protos[rng.integers(n_protos)] + et * random_distribution(rng, 192)
        return FrameFeatures(i, c / c.sum(), t / t.sum())

    na, nu = rng.integers(1, max_frames + 1, 2)
    auto = SummarySet("v", "automatic", "a", [frame(i) for i in range(na)])
    user = SummarySet("v", "user", "u", [frame(i) for i in range(nu)])
    return auto, user


def max_bipartite_matching(adj):
    """Size of a maximum matching by exhaustive search; ``adj[i][j]`` is bool."""
    n_a = len(adj)
    n_u = len(adj[0]) if n_a else 0
    for k in range(min(n_a, n_u), 0, -1):
        for autos in itertools.combinations(range(n_a), k):
            for users in itertools.permutations(range(n_u), k):
                if all(adj[a][u] for a, u in zip(autos, users)):
                    return k
    return 0
