import pytest

from muscale.recognizer import build_hierarchy
from muscale.synthgen import nested_triads_spec, broad_middle_spec, generate


@pytest.fixture(scope="session")
def nested_triads():
    """Nested-triads preset: (doc, ground truth). 3 scales, clusters [1, 3, 3]."""
    return generate(nested_triads_spec())


@pytest.fixture(scope="session")
def broad_middle():
    """Broad-middle preset: 3 scales, clusters [1, 7, 2]."""
    return generate(broad_middle_spec())


@pytest.fixture(scope="session")
def nested_triads_hierarchy(nested_triads):
    doc, _ = nested_triads
    return build_hierarchy(doc)
