import pytest

from elrepair.fixtures import mini_galen_oracle, mini_galen_tbox, mini_galen_wrong


@pytest.fixture
def galen():
    """(ontology, wrong axioms, fresh oracle) for the worked example."""
    return mini_galen_tbox(), mini_galen_wrong(), mini_galen_oracle()
