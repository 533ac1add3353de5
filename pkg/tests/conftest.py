"""Shared fixtures: small solver setups and the seeded synthetic suite."""

import numpy as np
import pytest

from scseg import (
    BasisSpec,
    SegmentationEngine,
    SegmentationMask,
    SegmenterConfig,
    SolverConfig,
    SynthConfig,
    build_basis,
    build_diff_operator,
    generate_suite,
)
from scseg.segment import ImagePlane

# Lines recorded by the acceptance tests, replayed after the run summary so
# they are visible even though pytest captures stdout.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def basis8():
    return build_basis(BasisSpec(block_size=8, num_bases=6))


@pytest.fixture(scope="session")
def diff8():
    return build_diff_operator(8)


@pytest.fixture(scope="session")
def default_engine():
    """One engine with the default 64-block model, shared across tests."""
    return SegmentationEngine(SegmenterConfig(basis=BasisSpec(), solver=SolverConfig()))


@pytest.fixture(scope="session")
def synth_suite():
    """The canonical seeded 50-block suite used by the benchmark tests."""
    return generate_suite(SynthConfig())


@pytest.fixture(scope="session")
def suite_pairs(synth_suite):
    return [
        (
            str(i),
            ImagePlane.from_array(image),
            SegmentationMask.from_array(truth.astype(bool)),
        )
        for i, (image, truth) in enumerate(synth_suite)
    ]


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
