from __future__ import annotations

import pytest

from helpers import chain_marking, demo_lpn, demo_secret


@pytest.fixture(scope="session")
def demo():
    return demo_lpn()


@pytest.fixture(scope="session")
def secret():
    return demo_secret()


@pytest.fixture(scope="session")
def M():
    """Chain markings by index: M[i] has one token in place p(i+1)."""
    return {i: chain_marking(i) for i in range(7)}


@pytest.fixture(scope="session")
def corpus():
    from gen import generate_corpus

    return generate_corpus(200)
