from __future__ import annotations

import pytest

import golden


@pytest.fixture
def fig1_chain():
    return golden.golden_chain()


@pytest.fixture
def fig1_specs():
    return golden.golden_specs()


@pytest.fixture
def fig1_scenario():
    return golden.golden_scenario()
