import pytest

from multispread import parse_multilayer_edgelist

# two-layer example: six actors, ten nodes, eleven edges; n5 is absent from
# the second layer and n6 from the first
TWO_LAYER_TEXT = """\
n1 n2 l1
n1 n5 l1
n2 n5 l1
n2 n3 l1
n2 n4 l1
n3 n4 l1
n1 n4 l2
n1 n6 l2
n2 n3 l2
n2 n4 l2
n3 n4 l2
"""


@pytest.fixture
def two_layer_net():
    return parse_multilayer_edgelist(TWO_LAYER_TEXT, "l1")
