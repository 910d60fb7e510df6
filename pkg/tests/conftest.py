import pytest

from conceptprobe import parse_cxt

# The worked 4x6 film/actor example used throughout: rows Brad, Angelina,
# Cate, Leonardo; columns Film1..Film6.
TABLE1_CXT = """B
table1
4
6
Brad
Angelina
Cate
Leonardo
Film1
Film2
Film3
Film4
Film5
Film6
XXX.X.
X.X.X.
X..X..
.X.XXX
"""


@pytest.fixture(scope="session")
def table1():
    return parse_cxt(TABLE1_CXT)


@pytest.fixture()
def table1_text():
    return TABLE1_CXT
