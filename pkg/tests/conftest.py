#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Shared graph fixtures for the motif_agm tests.
"""
from __future__ import print_function, absolute_import, division

import itertools

import numpy as np
import pytest

from motif_agm.config import TrainConfig
from motif_agm.graph import Graph


def complete_edges(vertices):
    return list(itertools.combinations(vertices, 2))


def write_edges(path, edges, offset=0):
    with open(str(path), 'w') as f:
        f.write("# test graph\n")
        for u, v in edges:
            f.write("%d\t%d\n" % (u + offset, v + offset))
    return str(path)


def two_k5_edges():
    # The bridges 0-5 and 1-6 close no triangle across the two halves
    return complete_edges(range(5)) + complete_edges(range(5, 10)) + \
        [(0, 5), (1, 6)]


@pytest.fixture
def triangle():
    return Graph.from_edges(3, complete_edges(range(3)))


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, complete_edges(range(3)) +
                            complete_edges(range(3, 6)) + [(2, 3)])


@pytest.fixture
def two_k4():
    return Graph.from_edges(8, complete_edges(range(4)) +
                            complete_edges(range(4, 8)) + [(3, 4)])


@pytest.fixture
def two_k5():
    return Graph.from_edges(10, two_k5_edges())


@pytest.fixture
def path4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def quick_config():
    return TrainConfig(clique_size=3, communities=2, init='locally-minimal',
                       max_iterations=3, validation_pairs=20)
