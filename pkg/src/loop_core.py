"""
Loop Core: Cayley Tables
========================

The universal loop representation for LoopWorks.

A finite loop of order n is stored as an n×n Latin square of uint16 element
indices (entry [i][j] = i·j) with a two-sided identity. Every table the
engine stores or emits has its identity at element 0.

`.tbl` text format:
    # optional comment lines
    3
    0 1 2
    1 2 0
    2 0 1
"""

import hashlib
import logging
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CapacityError, NoIdentity, NotLatin, TableSyntaxError
from .limits import EngineConstants


logger = logging.getLogger(__name__)

Element = int
INDEX_DTYPE = np.uint16


# =============================================================================
# PERMUTATION
# =============================================================================

class Permutation:
    """
    A bijection on [0, n), stored as its image array.

    Composition follows function notation: (p * q)(x) = p(q(x)).
    """

    __slots__ = ("images",)

    def __init__(self, images: Union[Sequence[int], np.ndarray]):
        arr = np.asarray(images, dtype=np.int64)
        if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise ValueError(f"Not a permutation: {list(arr)}")
        arr.setflags(write=False)
        self.images = arr

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    def __call__(self, x: Element) -> Element:
        return int(self.images[x])

    def __len__(self) -> int:
        return int(self.images.size)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(self.images[other.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size)
        return Permutation(inv)

    def fixes(self, x: Element) -> bool:
        return int(self.images[x]) == x

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.images.size)))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting from its smallest point."""
        seen = np.zeros(self.images.size, dtype=bool)
        result = []
        for start in range(self.images.size):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            x = int(self.images[start])
            while x != start:
                cycle.append(x)
                seen[x] = True
                x = int(self.images[x])
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __repr__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "Permutation(())"
        return "Permutation(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) + ")"


# =============================================================================
# CAYLEY TABLE
# =============================================================================

class CayleyTable:
    """
    An immutable loop multiplication table.

    Build instances through `validate()` or `parse_table()`; the constructor
    itself only copies the array and trusts the caller.

    Attributes:
        table: n×n read-only uint16 array, table[i, j] = i·j
        identity: The two-sided identity element
        relabeling: Transposition (0, e) applied by normalize_identity, if any
    """

    def __init__(self, table: np.ndarray, identity: Element = 0,
                 relabeling: Optional[Tuple[int, int]] = None):
        arr = np.array(table, dtype=INDEX_DTYPE, copy=True)
        arr.setflags(write=False)
        self.table = arr
        self.identity = int(identity)
        self.relabeling = relabeling

    @property
    def n(self) -> int:
        return int(self.table.shape[0])

    def __len__(self) -> int:
        return self.n

    # -------------------------------------------------------------------------
    # Cached division tables (int64 for safe fancy indexing)
    # -------------------------------------------------------------------------

    @cached_property
    def mul_table(self) -> np.ndarray:
        arr = self.table.astype(np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def ldiv_table(self) -> np.ndarray:
        """ldiv_table[x, y] = x\\y, the unique z with x·z = y."""
        n = self.n
        arr = np.empty((n, n), dtype=np.int64)
        arr[np.arange(n)[:, None], self.mul_table] = np.arange(n)[None, :]
        arr.setflags(write=False)
        return arr

    @cached_property
    def rdiv_table(self) -> np.ndarray:
        """rdiv_table[x, y] = y/x, the unique z with z·x = y."""
        n = self.n
        arr = np.empty((n, n), dtype=np.int64)
        arr[np.arange(n)[None, :], self.mul_table] = np.arange(n)[:, None]
        arr.setflags(write=False)
        return arr

    @cached_property
    def digest(self) -> str:
        """Stable content hash, used to key checkpoints."""
        return hashlib.sha256(self.table.astype("<u2").tobytes()).hexdigest()

    def mul(self, x: Element, y: Element) -> Element:
        return int(self.table[x, y])

    def left_div(self, x: Element, y: Element) -> Element:
        return int(self.ldiv_table[x, y])

    def right_div(self, x: Element, y: Element) -> Element:
        return int(self.rdiv_table[x, y])

    def as_lists(self) -> List[List[int]]:
        return self.table.astype(int).tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CayleyTable):
            return NotImplemented
        return self.identity == other.identity and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        return f"CayleyTable(n={self.n}, identity={self.identity})"


# =============================================================================
# VALIDATION
# =============================================================================

def validate(table: Union[Sequence[Sequence[int]], np.ndarray]) -> CayleyTable:
    """
    Check the loop axioms and wrap the table.

    Args:
        table: Raw n×n integer array with entries in [0, n)

    Returns:
        CayleyTable whose identity is the two-sided identity found (not
        necessarily 0; see normalize_identity)

    Raises:
        NotLatin: A row or column is not a permutation, or the array is not square
        NoIdentity: No element is both a left and a right identity
        CapacityError: n exceeds EngineConstants.MAX_ORDER
    """
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotLatin(f"Table must be a nonempty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if n > EngineConstants.MAX_ORDER:
        raise CapacityError("order", EngineConstants.MAX_ORDER, n)
    if not np.issubdtype(arr.dtype, np.integer):
        raise NotLatin(f"Table entries must be integers, got dtype {arr.dtype}")
    arr = arr.astype(np.int64)
    if arr.min() < 0 or arr.max() >= n:
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        raise NotLatin(f"Entry [{bad[0]}][{bad[1]}] = {arr[bad[0], bad[1]]} outside [0, {n})")

    expected = np.arange(n)
    rows_ok = np.all(np.sort(arr, axis=1) == expected[None, :], axis=1)
    if not rows_ok.all():
        row = int(np.flatnonzero(~rows_ok)[0])
        raise NotLatin(f"Row {row} is not a permutation of 0..{n - 1}")
    cols_ok = np.all(np.sort(arr, axis=0) == expected[:, None], axis=0)
    if not cols_ok.all():
        col = int(np.flatnonzero(~cols_ok)[0])
        raise NotLatin(f"Column {col} is not a permutation of 0..{n - 1}")

    left_units = np.all(arr == expected[None, :], axis=1)
    right_units = np.all(arr == expected[:, None], axis=0)
    units = np.flatnonzero(left_units & right_units)
    if units.size == 0:
        raise NoIdentity(f"Latin square of order {n} has no two-sided identity")

    return CayleyTable(arr, identity=int(units[0]))


def normalize_identity(L: CayleyTable) -> CayleyTable:
    """
    Relabel L so its identity is element 0.

    The transposition swapping 0 and the identity is applied to rows, columns
    and entries; it is recorded in `relabeling`. A table already normalized is
    returned unchanged.
    """
    e = L.identity
    if e == 0:
        return L
    sigma = np.arange(L.n)
    sigma[0], sigma[e] = e, 0
    T = L.mul_table
    relabeled = sigma[T[np.ix_(sigma, sigma)]]
    logger.debug(f"Normalized identity {e} -> 0")
    return CayleyTable(relabeled, identity=0, relabeling=(0, e))


# =============================================================================
# .tbl TEXT FORMAT
# =============================================================================

def parse_table(text: str) -> CayleyTable:
    """
    Parse `.tbl` text into a validated, identity-normalized CayleyTable.

    Raises:
        TableSyntaxError: Malformed text (line numbers are 1-based)
        NotLatin, NoIdentity: The parsed square is not a loop
    """
    lines: List[Tuple[int, str]] = []
    for line_num, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        lines.append((line_num, stripped))

    if not lines:
        raise TableSyntaxError("Empty table: expected the order n on the first line")

    line_num, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise TableSyntaxError(f"Line {line_num}: expected integer order, got '{header}'")
    if n < 1:
        raise TableSyntaxError(f"Line {line_num}: order must be positive, got {n}")
    if n > EngineConstants.MAX_ORDER:
        raise CapacityError("order", EngineConstants.MAX_ORDER, n)

    body = lines[1:]
    if len(body) != n:
        raise TableSyntaxError(f"Expected {n} rows after the order line, found {len(body)}")

    rows = []
    for line_num, line in body:
        parts = line.split()
        if len(parts) != n:
            raise TableSyntaxError(f"Line {line_num}: expected {n} entries, found {len(parts)}")
        try:
            rows.append([int(p) for p in parts])
        except ValueError:
            raise TableSyntaxError(f"Line {line_num}: non-integer entry in '{line}'")

    return normalize_identity(validate(rows))


def serialize_table(L: CayleyTable) -> str:
    """Render L in `.tbl` format (no trailing newline), relabeled so the identity is 0."""
    rows = [" ".join(str(v) for v in row) for row in normalize_identity(L).as_lists()]
    return "\n".join([str(L.n)] + rows)


def read_table(path: str) -> CayleyTable:
    with open(path, 'r') as f:
        return parse_table(f.read())


def write_table(L: CayleyTable, path: str, comments: Iterable[str] = ()) -> None:
    with open(path, 'w') as f:
        for comment in comments:
            f.write(f"# {comment}\n")
        f.write(serialize_table(L) + "\n")


# =============================================================================
# PRIMITIVE OPERATIONS
# =============================================================================

def mul(L: CayleyTable, x: Element, y: Element) -> Element:
    return L.mul(x, y)


def left_div(L: CayleyTable, x: Element, y: Element) -> Element:
    """The unique z with x·z = y."""
    return L.left_div(x, y)


def right_div(L: CayleyTable, x: Element, y: Element) -> Element:
    """The unique z with z·x = y."""
    return L.right_div(x, y)


def inverse_array(L: CayleyTable) -> np.ndarray:
    """
    Two-sided inverses of all elements, -1 where the left and right inverses differ.
    """
    e = L.identity
    right_inv = L.ldiv_table[:, e]   # x·r = e
    left_inv = L.rdiv_table[:, e]    # l·x = e
    return np.where(right_inv == left_inv, right_inv, -1)


def two_sided_inverse(L: CayleyTable, x: Element) -> Optional[Element]:
    """Return y with x·y = y·x = e, or None if no such y exists."""
    y = int(inverse_array(L)[x])
    return None if y < 0 else y


def left_translation(L: CayleyTable, x: Element) -> Permutation:
    """L_x: y -> x·y."""
    return Permutation(L.mul_table[x, :])


def right_translation(L: CayleyTable, x: Element) -> Permutation:
    """R_x: y -> y·x."""
    return Permutation(L.mul_table[:, x])
