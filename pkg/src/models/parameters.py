"""Altruism and friendship parameters of the extension models."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from ..errors import ParameterError

RationalLike = Union[Fraction, int, str]


def _in_unit_interval(value: Fraction) -> bool:
    return 0 <= value <= 1


@dataclass(frozen=True)
class AltruismVector:
    """Per-player altruism levels α_i.

    Standard vectors live in [0, 1]; ``extended`` vectors accept any rational,
    including players who want to hurt society.
    """
    values: tuple[Fraction, ...]
    extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(a) for a in self.values))
        if not self.extended:
            for i, a in enumerate(self.values):
                if not _in_unit_interval(a):
                    raise ParameterError(f"altruism level of player {i} is {a}, outside [0, 1]")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, player: int) -> Fraction:
        return self.values[player]

    @classmethod
    def uniform(cls, n: int, level: RationalLike) -> "AltruismVector":
        return cls(tuple(Fraction(level) for _ in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "AltruismVector":
        return cls.uniform(n, 0)


@dataclass(frozen=True)
class FriendshipMatrix:
    """Affection levels α_ij with α_ii = 1, stored as sparse rows.

    Attributes:
        n: Number of players
        rows: Per player, the off-diagonal nonzero entries (j, α_ij) sorted by j
    """
    n: int
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ParameterError(f"expected {self.n} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            for j, a in row:
                if j == i:
                    raise ParameterError("diagonal entries are implicit and always 1")
                if not 0 <= j < self.n:
                    raise ParameterError(f"friend index {j} of player {i} is out of range")
                if not _in_unit_interval(a):
                    raise ParameterError(f"affection α[{i}][{j}] = {a} is outside [0, 1]")

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[tuple[int, int], RationalLike]) -> "FriendshipMatrix":
        """Build from {(i, j): α_ij}; a diagonal entry must equal 1."""
        rows: list[dict[int, Fraction]] = [{} for _ in range(n)]
        for (i, j), value in entries.items():
            a = Fraction(value)
            if not (0 <= i < n and 0 <= j < n):
                raise ParameterError(f"entry ({i}, {j}) is out of range for {n} players")
            if i == j:
                if a != 1:
                    raise ParameterError(f"diagonal entry α[{i}][{i}] must be 1, got {a}")
                continue
            if a != 0:
                rows[i][j] = a
        return cls(n, tuple(tuple(sorted(row.items())) for row in rows))

    @classmethod
    def from_dense(cls, matrix: Sequence[Sequence[RationalLike]]) -> "FriendshipMatrix":
        n = len(matrix)
        entries = {}
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise ParameterError(f"row {i} has {len(row)} entries, expected {n}")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls.from_entries(n, entries)

    @classmethod
    def identity(cls, n: int) -> "FriendshipMatrix":
        return cls(n, tuple(() for _ in range(n)))

    @classmethod
    def uniform(cls, n: int, level: RationalLike) -> "FriendshipMatrix":
        """α_ij = level for every pair of distinct players."""
        a = Fraction(level)
        if a == 0:
            return cls.identity(n)
        return cls(n, tuple(tuple((j, a) for j in range(n) if j != i) for i in range(n)))

    @classmethod
    def from_altruism(cls, alpha: AltruismVector) -> "FriendshipMatrix":
        """The friendship matrix with α_ij = α_i for all j != i."""
        n = len(alpha)
        return cls(n, tuple(
            tuple((j, alpha[i]) for j in range(n) if j != i) if alpha[i] != 0 else ()
            for i in range(n)
        ))

    def friends(self, player: int) -> tuple[tuple[int, Fraction], ...]:
        """Off-diagonal nonzero entries of a row."""
        return self.rows[player]

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        if i == j:
            return Fraction(1)
        for friend, a in self.rows[i]:
            if friend == j:
                return a
        return Fraction(0)

    def entries(self) -> Iterable[tuple[int, int, Fraction]]:
        for i, row in enumerate(self.rows):
            for j, a in row:
                yield i, j, a

    def to_dense(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]
