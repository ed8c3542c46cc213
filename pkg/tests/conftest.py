import pathlib

import pytest

from chowops.chow import elem_abelian_ring, truncate
from chowops.modules import (brown_gitler, finite_to_presentation,
                             point_module, point_presentation,
                             suspension_presentation)

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def fp_test_modules(p):
    """The five fixed presented test modules used across the suite."""
    line = finite_to_presentation(truncate(elem_abelian_ring(1, p), 4),
                                  name="trunc-line")
    plane = finite_to_presentation(truncate(elem_abelian_ring(2, p), 3),
                                   name="trunc-plane")
    return [
        point_presentation(2, p),
        finite_to_presentation(brown_gitler(3, 10, p), name="bg3"),
        line,
        suspension_presentation(
            finite_to_presentation(truncate(elem_abelian_ring(1, p), 3),
                                   name="short-line"), 2),
        plane,
    ]


def mixed_test_modules(p):
    """Three bounded modules with nilpotence degrees 1, 2, 3."""
    line = finite_to_presentation(truncate(elem_abelian_ring(1, p), 4),
                                  name="trunc-line")
    m1 = suspension_presentation(line, 1)
    m2 = suspension_presentation(
        finite_to_presentation(truncate(elem_abelian_ring(1, p), 3)), 2)
    m3 = finite_to_presentation(
        point_module(3, p).direct_sum(point_module(5, p)), name="two-points")
    return [(m1, 1), (m2, 2), (m3, 3)]
