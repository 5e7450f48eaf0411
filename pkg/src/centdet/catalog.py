"""Group catalog, .pcp file format, and the resolution cache.

Hall-Senior numbers are labels, not trust anchors: every shipped entry
carries the fingerprint (order, center rank, p-rank, p-centrality) it
must reproduce, and entries with published invariants also carry the
expected type and detection numbers for self-identification.  An entry
whose computed fingerprint disagrees is refused.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .pgroup import (
    PcPresentation,
    PcPresentationError,
    direct_product,
    is_p_central,
    omega1_center,
    p_rank,
    pc_structure,
)
from .resolution import MinimalResolution

CACHE_ENV = "CENTDET_CACHE_DIR"


class CatalogError(ValueError):
    """Unknown id or an entry that failed self-identification."""


@dataclass
class CatalogEntry:
    id: str
    pres: PcPresentation
    expected: dict = field(default_factory=dict)
    notes: str = ""

    def fingerprint(self) -> dict:
        return {
            "order": self.pres.order,
            "center_rank": omega1_center(self.pres).rank,
            "rank": p_rank(self.pres),
            "p_central": is_p_central(self.pres),
        }

    def check_fingerprint(self):
        got = self.fingerprint()
        for key in ("order", "center_rank", "rank", "p_central"):
            if key in self.expected and self.expected[key] != got[key]:
                raise CatalogError(
                    f"{self.id}: fingerprint mismatch on {key}: "
                    f"expected {self.expected[key]}, computed {got[key]}"
                )

    def check_invariants(self, report_dict: dict):
        """Compare a computed report against the published values."""
        for key in ("type", "e", "d0", "d1", "e_prime"):
            if key not in self.expected or report_dict.get(key) is None:
                continue
            want = self.expected[key]
            if key == "type":
                want = list(want)
            if want != report_dict[key]:
                raise CatalogError(
                    f"{self.id}: self-identification failed on {key}: "
                    f"expected {want}, computed {report_dict[key]}"
                )


# ---------------------------------------------------------------------------
# presentation builders


def cyclic_presentation(p: int, k: int) -> PcPresentation:
    rels = []
    for i in range(k):
        w = [0] * k
        if i + 1 < k:
            w[i + 1] = 1
        rels.append(tuple(w))
    return PcPresentation(p, k, rels, {})


def elementary_abelian_presentation(p: int, n: int) -> PcPresentation:
    return PcPresentation(p, n, [(0,) * n] * n, {})


def _two_generator_2group(k: int, s_squared_last: bool, semidihedral: bool):
    """Common scaffold for dihedral / quaternion / semidihedral of order 2^k:
    a1 the outer involution-like generator, a_i = r^(2^(i-2)) for i >= 2."""
    n = k
    pow_rels = []
    first = [0] * n
    if s_squared_last:
        first[n - 1] = 1
    pow_rels.append(tuple(first))
    for i in range(1, n):
        w = [0] * n
        if i + 1 < n:
            w[i + 1] = 1
        pow_rels.append(tuple(w))
    comm = {}
    w = [0] * n
    stop = n - 1 if semidihedral else n
    for t in range(2, stop):
        w[t] = 1
    comm[(1, 0)] = tuple(w)
    for i in range(2, n - 1):
        w = [0] * n
        for t in range(i + 1, n):
            w[t] = 1
        comm[(i, 0)] = tuple(w)
    return PcPresentation(2, n, pow_rels, comm)


def dihedral_presentation(order: int) -> PcPresentation:
    k = order.bit_length() - 1
    return _two_generator_2group(k, s_squared_last=False, semidihedral=False)


def quaternion_presentation(order: int) -> PcPresentation:
    k = order.bit_length() - 1
    return _two_generator_2group(k, s_squared_last=True, semidihedral=False)


def semidihedral_presentation(order: int) -> PcPresentation:
    k = order.bit_length() - 1
    return _two_generator_2group(k, s_squared_last=False, semidihedral=True)


def w32_presentation() -> PcPresentation:
    """Order-32 group with center (Z/2)^3, quotient (Z/2)^2, squares and the
    commutator of the two lifts generating the center (32#18)."""
    return PcPresentation(
        2, 5,
        [(0, 0, 1, 0, 0), (0, 0, 0, 0, 1), (0,) * 5, (0,) * 5, (0,) * 5],
        {(1, 0): (0, 0, 0, 1, 0)},
    )


class _GF2k:
    """Tiny GF(2^k) arithmetic on integer bit masks."""

    def __init__(self, k: int, modulus: int):
        self.k = k
        self.size = 1 << k
        self.modulus = modulus

    def mul(self, a: int, b: int) -> int:
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & self.size:
                a ^= self.modulus
        return acc

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out


def su34_sylow_presentation() -> PcPresentation:
    """Sylow 2-subgroup of SU(3,4), order 64 (64#187): unitary unitriangular
    pairs (a, b) in F16 x F16 with b + b^4 = a^5 and product
    (a, b)(a', b') = (a + a', b + b' + a * a'^4)."""
    F = _GF2k(4, 0b10011)  # x^4 + x + 1
    elems = [
        (a, b)
        for a in range(16)
        for b in range(16)
        if (b ^ F.pow(b, 4)) == F.pow(a, 5)
    ]
    assert len(elems) == 64

    def mult(x, y):
        a, b = x
        c, d = y
        return (a ^ c, b ^ d ^ F.mul(a, F.pow(c, 4)))

    def inv(x):
        a, b = x
        return (a, b ^ F.pow(a, 5))

    pres, _, _ = pc_structure(elems, mult, inv, 2)
    return pres


def sz8_sylow_presentation() -> PcPresentation:
    """Sylow 2-subgroup of Sz(8), order 64 (64#153): pairs (a, b) in F8 x F8
    with product (a, b)(a', b') = (a + a', b + b' + a^4 * a')."""
    F = _GF2k(3, 0b1011)  # x^3 + x + 1
    elems = [(a, b) for a in range(8) for b in range(8)]

    def mult(x, y):
        a, b = x
        c, d = y
        return (a ^ c, b ^ d ^ F.mul(F.pow(a, 4), c))

    def inv(x):
        a, b = x
        return (a, b ^ F.mul(F.pow(a, 4), a))

    pres, _, _ = pc_structure(elems, mult, inv, 2)
    return pres


# ---------------------------------------------------------------------------
# the shipped catalog

def _entry(id, builder, notes="", **expected):
    return (id, builder, expected, notes)


_BUILTINS = {}
for _k in range(1, 7):
    _BUILTINS[f"Z{2 ** _k}"] = _entry(
        f"Z{2 ** _k}", (lambda kk: (lambda: cyclic_presentation(2, kk)))(_k),
        notes=f"cyclic of order {2 ** _k}",
        order=2 ** _k, center_rank=1, rank=1, p_central=True,
        type=[1] if _k == 1 else [2], e=0 if _k == 1 else 1,
        d0=0 if _k == 1 else 1, d1=0 if _k == 1 else 2,
    )
for _k in range(2, 5):
    _BUILTINS[f"E{2 ** _k}"] = _entry(
        f"E{2 ** _k}", (lambda kk: (lambda: elementary_abelian_presentation(2, kk)))(_k),
        notes=f"elementary abelian of rank {_k}",
        order=2 ** _k, center_rank=_k, rank=_k, p_central=True,
        type=[1] * _k, e=0, d0=0, d1=0,
    )
for _o, _depth in ((8, 2), (16, 1), (32, 2)):
    _BUILTINS[f"D{_o}"] = _entry(
        f"D{_o}", (lambda oo: (lambda: dihedral_presentation(oo)))(_o),
        notes=f"dihedral of order {_o}",
        order=_o, center_rank=1, rank=2, p_central=False,
        type=[2], e=1, e_prime=-1, d0=0, depth=_depth,
    )
for _o in (8, 16, 32, 64):
    _BUILTINS[f"Q{_o}"] = _entry(
        f"Q{_o}", (lambda oo: (lambda: quaternion_presentation(oo)))(_o),
        notes=f"generalized quaternion of order {_o}",
        order=_o, center_rank=1, rank=1, p_central=True,
        type=[4], e=3, d0=3, d1=5,
    )
for _o in (16, 32):
    _BUILTINS[f"SD{_o}"] = _entry(
        f"SD{_o}", (lambda oo: (lambda: semidihedral_presentation(oo)))(_o),
        notes=f"semidihedral of order {_o}",
        order=_o, center_rank=1, rank=2, p_central=False,
        type=[4], e=3, e_prime=2, d0=2, depth=1,
    )
_BUILTINS["32#18"] = _entry(
    "32#18", w32_presentation, notes="universal 2-central group over (Z/2)^2",
    order=32, center_rank=3, rank=3, p_central=True,
    type=[2, 2, 2], e=3, d0=3, d1=4,
)
_BUILTINS["64#187"] = _entry(
    "64#187", su34_sylow_presentation, notes="2-Sylow of SU(3,4)",
    order=64, center_rank=2, rank=2, p_central=True,
    type=[8, 8], e=14, d0=14, d1=18,
)
_BUILTINS["64#153"] = _entry(
    "64#153", sz8_sylow_presentation, notes="2-Sylow of Sz(8)",
    order=64, center_rank=3, rank=3, p_central=True,
    type=[4, 4, 4], e=9, d0=9, d1=11,
)
_BUILTINS["W2"] = _BUILTINS["32#18"]
_BUILTINS["Q64#267"] = _BUILTINS["Q64"]


def builtin_ids() -> list[str]:
    return sorted(k for k in _BUILTINS if k not in ("W2", "Q64#267"))


def builtin(id: str) -> CatalogEntry:
    """A shipped entry (or an 'AxB' direct product of shipped entries),
    with its cheap fingerprint verified before it is served."""
    if id in _BUILTINS:
        eid, builder, expected, notes = _BUILTINS[id]
        entry = CatalogEntry(id, builder(), dict(expected), notes)
        entry.check_fingerprint()
        return entry
    if "x" in id:
        left, _, right = id.partition("x")
        if left in _BUILTINS or "x" in left:
            a = builtin(left)
            b = builtin(right)
            pres = direct_product(a.pres, b.pres)
            expected: dict = {
                "order": a.pres.order * b.pres.order,
                "center_rank": a.expected.get("center_rank", 0)
                + b.expected.get("center_rank", 0),
                "rank": a.expected.get("rank", 0) + b.expected.get("rank", 0),
                "p_central": a.expected.get("p_central", False)
                and b.expected.get("p_central", False),
            }
            if "type" in a.expected and "type" in b.expected:
                expected["type"] = sorted(
                    a.expected["type"] + b.expected["type"], reverse=True
                )
                expected["e"] = a.expected["e"] + b.expected["e"]
            if "d0" in a.expected and "d0" in b.expected:
                expected["d0"] = a.expected["d0"] + b.expected["d0"]
            if expected["p_central"] and "d1" in a.expected and "d1" in b.expected:
                expected["d1"] = max(
                    a.expected["d1"] + b.expected["d0"],
                    a.expected["d0"] + b.expected["d1"],
                )
            entry = CatalogEntry(id, pres, expected, f"{a.notes} x {b.notes}")
            entry.check_fingerprint()
            return entry
    raise CatalogError(f"unknown catalog id: {id!r}")


# ---------------------------------------------------------------------------
# .pcp files


class PcpFormatError(PcPresentationError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _parse_word(text: str, n: int, line_no: int) -> tuple:
    text = text.strip()
    w = [0] * n
    if text == "1":
        return tuple(w)
    for factor in text.split():
        if not factor.startswith("g") or "^" not in factor:
            raise PcpFormatError(line_no, f"bad word factor {factor!r}")
        gpart, _, epart = factor[1:].partition("^")
        try:
            k, e = int(gpart), int(epart)
        except ValueError:
            raise PcpFormatError(line_no, f"bad word factor {factor!r}") from None
        if not (1 <= k <= n):
            raise PcpFormatError(line_no, f"generator g{k} out of range")
        w[k - 1] += e
    return tuple(w)


def parse_pcp(text: str) -> PcPresentation:
    p = None
    n = None
    pow_rels: dict[int, tuple] = {}
    comm_rels: dict[tuple, tuple] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 2 or not parts[1].isdigit():
                raise PcpFormatError(line_no, "expected 'p <prime>'")
            p = int(parts[1])
        elif parts[0] == "gens":
            if len(parts) != 2 or not parts[1].isdigit():
                raise PcpFormatError(line_no, "expected 'gens <n>'")
            n = int(parts[1])
        elif parts[0] == "pow":
            if p is None or n is None:
                raise PcpFormatError(line_no, "pow before p/gens header")
            if len(parts) < 4 or parts[2] != "=":
                raise PcpFormatError(line_no, "expected 'pow i = <word>'")
            i = int(parts[1])
            if not (1 <= i <= n):
                raise PcpFormatError(line_no, f"generator g{i} out of range")
            word = _parse_word(line.split("=", 1)[1], n, line_no)
            if any(word[: i]):
                raise PcpFormatError(
                    line_no, f"power word of g{i} may only use later generators"
                )
            pow_rels[i - 1] = word
        elif parts[0] == "comm":
            if p is None or n is None:
                raise PcpFormatError(line_no, "comm before p/gens header")
            if len(parts) < 5 or parts[3] != "=":
                raise PcpFormatError(line_no, "expected 'comm j i = <word>'")
            j, i = int(parts[1]), int(parts[2])
            if not (1 <= i < j <= n):
                raise PcpFormatError(line_no, f"need j > i, got comm {j} {i}")
            word = _parse_word(line.split("=", 1)[1], n, line_no)
            if any(word[: j]):
                raise PcpFormatError(
                    line_no, f"commutator word [g{j},g{i}] may only use later generators"
                )
            comm_rels[(j - 1, i - 1)] = word
        else:
            raise PcpFormatError(line_no, f"unrecognized directive {parts[0]!r}")
    if p is None or n is None:
        raise PcpFormatError(0, "missing 'p' or 'gens' header")
    rels = [pow_rels.get(i, (0,) * n) for i in range(n)]
    return PcPresentation(p, n, rels, comm_rels)


def format_word(w) -> str:
    parts = [f"g{k + 1}^{e}" for k, e in enumerate(w) if e]
    return " ".join(parts) if parts else "1"


def format_pcp(pres: PcPresentation, header: str = "") -> str:
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append(f"p {pres.p}")
    lines.append(f"gens {pres.n}")
    for i, w in enumerate(pres.power_rels):
        if any(w):
            lines.append(f"pow {i + 1} = {format_word(w)}")
    for (j, i), w in sorted(pres.comm_rels.items()):
        if any(w):
            lines.append(f"comm {j + 1} {i + 1} = {format_word(w)}")
    return "\n".join(lines) + "\n"


def load_pcp(path: str) -> PcPresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pcp(fh.read())


def save_pcp(pres: PcPresentation, path: str, header: str = ""):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pcp(pres, header))


# ---------------------------------------------------------------------------
# resolution cache


def cache_dir() -> str | None:
    return os.environ.get(CACHE_ENV)


def _cache_path(directory: str, pres: PcPresentation) -> str:
    return os.path.join(directory, f"cohres-{pres.hash_key()}.txt")


def save_resolution(res: MinimalResolution, directory: str):
    """Versioned text dump; written atomically next to its final name."""
    os.makedirs(directory, exist_ok=True)
    path = _cache_path(directory, res.pres)
    lines = [
        "COHRES v1",
        f"hash {res.pres.hash_key()}",
        f"p {res.p}",
        f"order {res.order}",
        f"N {res.top_degree}",
        "betti " + " ".join(str(b) for b in res.betti),
    ]
    for i in range(1, res.top_degree + 1):
        gens = res._gen_images[i]
        lines.append(f"deg {i} rows {gens.shape[0]} cols {gens.shape[1]}")
        for row in gens:
            lines.append(bytes(row).hex())
    tmp_fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(tmp_fd, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp_path, path)


def load_resolution(pres: PcPresentation, directory: str,
                    budget: int = 20000) -> MinimalResolution | None:
    """Rebuild a cached resolution; None on miss or stale hash/version."""
    path = _cache_path(directory, pres)
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "COHRES v1":
        return None
    meta = {}
    idx = 1
    while idx < len(lines) and not lines[idx].startswith("deg "):
        key, _, value = lines[idx].partition(" ")
        meta[key] = value
        idx += 1
    if meta.get("hash") != pres.hash_key():
        return None
    betti = [int(x) for x in meta["betti"].split()]
    res = MinimalResolution(pres, budget=budget)
    res.betti = [1]
    for i in range(1, int(meta["N"]) + 1):
        head = lines[idx].split()
        assert head[0] == "deg" and int(head[1]) == i
        rows, cols = int(head[3]), int(head[5])
        idx += 1
        mat = np.zeros((rows, cols), dtype=np.uint8)
        for r in range(rows):
            mat[r] = np.frombuffer(bytes.fromhex(lines[idx]), dtype=np.uint8)
            idx += 1
        res._gen_images.append(mat)
        res.betti.append(rows)
    if res.betti != betti:
        return None
    return res
