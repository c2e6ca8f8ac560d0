from __future__ import annotations

from importlib.resources import files

import pytest

from cptgen.document import load_document


def fixture_bytes(name: str) -> bytes:
    return (files("cptgen") / "fixtures" / name).read_bytes()


@pytest.fixture(scope="session")
def efficiency_bytes() -> bytes:
    return fixture_bytes("fig1.cpt.json")


@pytest.fixture(scope="session")
def efficiency_doc(efficiency_bytes):
    """The shipped business-efficiency document: three five-state parents,
    diagonal compatibility, five anchors."""
    return load_document(efficiency_bytes)


@pytest.fixture(scope="session")
def training3_bytes() -> bytes:
    return fixture_bytes("pt3.cpt.json")


@pytest.fixture(scope="session")
def training3_doc(training3_bytes):
    """The variant with a three-state training parent and an explicit
    compatibility map needing seven anchors."""
    return load_document(training3_bytes)
