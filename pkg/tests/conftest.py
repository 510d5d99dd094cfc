"""Shared test fixtures: the four named instances and a seeded corpus."""

import pytest

from gwhitehead.fixtures import all_fixtures, random_instance

HORIZON = 4

FIXTURE_NAMES = sorted(all_fixtures())


@pytest.fixture(params=FIXTURE_NAMES)
def named_instance(request):
    return all_fixtures()[request.param]


@pytest.fixture
def fixtures_dict():
    return all_fixtures()


def random_corpus(seed, count):
    return [random_instance(seed * 1000 + i) for i in range(count)]
