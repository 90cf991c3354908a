"""JSON tuple files: generating sets of direct sums on disk.

Matrices are row-major nested arrays of canonical element strings, so
arbitrary-precision integers, rationals and extension-field coefficient
vectors travel through JSON uniformly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .domains import DomainError, domain_from_json, domain_to_json
from .generation import DirectSumShape
from .linalg import Mat


@dataclass(frozen=True)
class TupleFile:
    domain: object
    shape: DirectSumShape
    generators: tuple  # each generator a tuple of Mat

    @property
    def is_homogeneous(self) -> bool:
        return len(self.shape.blocks) == 1


def family_to_tuplefile(family) -> dict:
    """Serialize a GeneratorFamily (or TupleFile) to the JSON document."""
    domain = family.generators[0][0].domain
    sizes = family.shape.copy_sizes
    return {
        "coeff": domain_to_json(domain),
        "n": family.shape.blocks[0][0],
        "shape": [[n_i, m_i] for n_i, m_i in family.shape.blocks],
        "generators": [
            [[[domain.format_elem(x) for x in row] for row in a.rows]
             for a in elem]
            for elem in family.generators
        ],
    }


def tuplefile_from_json(data: dict) -> TupleFile:
    try:
        domain = domain_from_json(data["coeff"])
        shape = DirectSumShape(tuple((int(n_i), int(m_i))
                                     for n_i, m_i in data["shape"]))
        sizes = shape.copy_sizes
        generators = []
        for elem in data["generators"]:
            if len(elem) != len(sizes):
                raise DomainError("generator does not match the shape")
            mats = []
            for rows, n_i in zip(elem, sizes):
                if len(rows) != n_i or any(len(r) != n_i for r in rows):
                    raise DomainError("matrix does not match its block size")
                mats.append(Mat(domain, n_i,
                                tuple(tuple(domain.parse_elem(x) for x in row)
                                      for row in rows)))
            generators.append(tuple(mats))
        if not generators:
            raise DomainError("no generators in file")
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed tuple file: {exc}") from exc
    return TupleFile(domain=domain, shape=shape, generators=tuple(generators))


def dumps(obj) -> str:
    return json.dumps(family_to_tuplefile(obj), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> TupleFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    return tuplefile_from_json(data)


def load_path(path) -> TupleFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
