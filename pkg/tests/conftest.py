import math
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ingham.spectra import FrequencyFamily, PartitionedFamily, residue_partition  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE: list[str] = []


def single_class(points) -> PartitionedFamily:
    fam = FrequencyFamily(np.asarray(points, dtype=float))
    return PartitionedFamily(fam, (1,) * len(fam))


def acceptance_families() -> dict:
    k = np.arange(21.0)
    perturbed = k + 0.2 * np.sin(k)
    lattice = [[i, j] for i in range(5) for j in range(5)]
    return {
        "a_integers": single_class(k),
        "b_perturbed": single_class(perturbed),
        "c_residue_m2": residue_partition(FrequencyFamily(perturbed), 2),
        "d_lattice5x5": single_class(lattice),
    }


@pytest.fixture(scope="session")
def families():
    return acceptance_families()


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        _ACCEPTANCE.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
