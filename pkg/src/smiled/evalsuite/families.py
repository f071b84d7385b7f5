"""Carbon-chain family dataset for the compositionality study.

Six families (suffix atom C, O, N, S, F, P); member j of a family is j
carbons followed by the suffix, j = 1..10, giving 60 molecules.  A triple
takes a pure-carbon chain a and a family member b and composes them into
the member c whose carbon count is the sum of both: for example
(CC, CCO, CCCCO) -- 2 carbons plus "CCO"'s 2 carbons makes the 4-carbon
member of the O family.  The index set n in 1..4, k in 1..5 yields 20
triples per family, 120 total.
"""

from __future__ import annotations

from dataclasses import dataclass

FAMILY_TAGS = ("CC", "CO", "CN", "CS", "CF", "CP")
_SUFFIX = {"CC": "C", "CO": "O", "CN": "N", "CS": "S", "CF": "F", "CP": "P"}
MAX_CHAIN = 10


@dataclass(frozen=True)
class FamilyTriple:
    a: str
    b: str
    c: str
    family: str
    n: int   # carbon prefix count of a (a has n+1 carbons in total)
    k: int   # carbon prefix count of b


def family_member(family: str, j: int) -> str:
    """j carbons followed by the family's suffix atom."""
    return "C" * j + _SUFFIX[family]


def generate_families() -> tuple[list[str], list[FamilyTriple]]:
    """All 60 family molecules and the 120 composition triples."""
    molecules = [
        family_member(fam, j) for fam in FAMILY_TAGS for j in range(1, MAX_CHAIN + 1)
    ]
    triples = []
    for fam in FAMILY_TAGS:
        for n in range(1, 5):
            for k in range(1, 6):
                a = family_member("CC", n)          # n + 1 carbons
                b = family_member(fam, k)           # k carbons + suffix
                c = family_member(fam, n + 1 + k)   # carbon counts add
                triples.append(FamilyTriple(a=a, b=b, c=c, family=fam, n=n, k=k))
    return molecules, triples
