"""
Shared fixtures: the bundled diagonals and a few built in code
"""

from fractions import Fraction
from pathlib import Path

import pytest

from src.core.diagonal import chordal_diagonal, diagonal_from_hat, identity_diagonal
from src.services.diag_file_service import DiagFileConfig, DiagFileService

DIAGONALS_DIR = Path(__file__).resolve().parent.parent / "diagonals"


@pytest.fixture(scope="session")
def diag_files():
    return DiagFileService(DiagFileConfig(directory=str(DIAGONALS_DIR)))


@pytest.fixture(scope="session")
def ex412(diag_files):
    return diag_files.read("ex412.diag")


@pytest.fixture(scope="session")
def kca(diag_files):
    return diag_files.read("exKCA.diag")


@pytest.fixture(scope="session")
def plateau(diag_files):
    return diag_files.read("plateau.diag")


@pytest.fixture(scope="session")
def w_diag(diag_files):
    return diag_files.read("w.diag")


@pytest.fixture(scope="session")
def m_diag():
    return identity_diagonal()


@pytest.fixture(scope="session")
def zigzag_base(diag_files):
    return diag_files.read("dhat.diag")


@pytest.fixture(scope="session")
def x2_chords():
    """x^2 sampled at k/16; 3/8, 5/8 and 1/2 are breakpoints"""
    return chordal_diagonal(lambda x: x * x, 16, provenance="x2")


@pytest.fixture(scope="session")
def lying_rectangle():
    return diagonal_from_hat(
        [(0, 0), (Fraction(1, 10), Fraction(1, 10)), (Fraction(3, 20), Fraction(1, 20)),
         (Fraction(17, 20), Fraction(1, 20)), (Fraction(9, 10), Fraction(1, 10)), (1, 0)],
        provenance="lying-rectangle",
    )
