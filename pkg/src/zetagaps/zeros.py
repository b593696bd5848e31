"""Zero ordinate tables: parsing, binary cache, counting function, gaps.

Indices follow the usual numbering of zeros: ``n = 1`` is the lowest
ordinate in the table.
"""
from __future__ import annotations

import hashlib
import io
import math
import os
import struct
import tempfile
import urllib.error
import urllib.request
import warnings
import zlib
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from .errors import (
    CoverageError,
    DomainError,
    EmptyInputError,
    FetchError,
    IntegrityError,
    ParseError,
    ValidationError,
)

TWO_PI = 2.0 * math.pi

CACHE_MAGIC = b"ZGC1"
_HEADER = struct.Struct("<4sQ")
_CRC = struct.Struct("<I")

FORMATS = ("plain", "offset")


class LowHeightWarning(UserWarning):
    """Main term evaluated at T <= 2*pi, where log(T/2pi) <= 0."""


@dataclass(frozen=True)
class OrdinateTable:
    """Immutable, nondecreasing sequence of zero ordinates.

    ``height_max`` is the height up to which the table is claimed complete;
    it defaults to the last ordinate. ``height_min`` is the height above
    which it is complete (0 for tables starting at the first zero).
    """

    ordinates: np.ndarray
    height_min: float = 0.0
    height_max: float | None = None
    source_id: str = "<memory>"
    precision_digits: int = 15

    def __post_init__(self):
        arr = np.array(self.ordinates, dtype=np.float64).ravel()
        if arr.size == 0:
            raise EmptyInputError("ordinate table is empty")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("ordinates must be finite")
        bad = np.nonzero(np.diff(arr) < 0)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"ordinates decrease at index {i + 2}: {arr[i]!r} > {arr[i + 1]!r}"
            )
        hmax = float(arr[-1]) if self.height_max is None else float(self.height_max)
        if not arr[0] > self.height_min:
            raise ValidationError(
                f"first ordinate {arr[0]!r} not above height_min {self.height_min!r}"
            )
        if arr[-1] > hmax:
            raise ValidationError(f"last ordinate {arr[-1]!r} above height_max {hmax!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "ordinates", arr)
        object.__setattr__(self, "height_min", float(self.height_min))
        object.__setattr__(self, "height_max", hmax)

    def __len__(self) -> int:
        return self.ordinates.size

    def __getitem__(self, n: int) -> float:
        """The ordinate gamma_n (1-based)."""
        if not 1 <= n <= len(self):
            raise CoverageError(f"index {n} outside table of {len(self)} ordinates")
        return float(self.ordinates[n - 1])

    def with_coverage(self, height_min: float | None = None,
                      height_max: float | None = None) -> "OrdinateTable":
        return OrdinateTable(
            self.ordinates,
            self.height_min if height_min is None else height_min,
            self.height_max if height_max is None else height_max,
            self.source_id,
            self.precision_digits,
        )

    def check_covers(self, lo: float, hi: float) -> None:
        """Raise CoverageError unless the table is complete on [lo, hi]."""
        if hi > self.height_max:
            raise CoverageError(
                f"height {hi!r} beyond table coverage (height_max={self.height_max!r})"
            )
        if lo < self.height_min:
            raise CoverageError(
                f"height {lo!r} below table coverage (height_min={self.height_min!r})"
            )


@dataclass(frozen=True)
class GapSequence:
    base_index: int
    gaps: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.gaps.size


# -- text formats -----------------------------------------------------------


def _decode(data: Union[bytes, str, BinaryIO]) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"payload is not UTF-8: {exc}") from None
    return data


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _decimal(token: str, lineno: int) -> Decimal:
    try:
        value = Decimal(token)
    except InvalidOperation:
        raise ParseError(f"malformed number {token!r}", lineno) from None
    if not value.is_finite():
        raise ParseError(f"non-finite number {token!r}", lineno)
    return value


def _places(value: Decimal) -> int:
    return max(0, -value.as_tuple().exponent)


def parse_ordinates(data: Union[bytes, str, BinaryIO], fmt: str = "plain",
                    source_id: str = "<stream>", **coverage) -> OrdinateTable:
    """Parse a text table of ordinates.

    ``plain``: one decimal ordinate per line. ``offset``: the first data line
    is a base height and every later line an offset added to it (the sum is
    formed in decimal, then rounded once to binary64). Lines starting with
    ``#`` and blank lines are skipped. Extra keyword arguments
    (``height_min``, ``height_max``) are passed to :class:`OrdinateTable`.
    """
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    lines = list(_data_lines(_decode(data)))
    if not lines:
        raise EmptyInputError("no data lines in payload")

    base = Decimal(0)
    if fmt == "offset":
        base_line, base_tok = lines[0]
        base = _decimal(base_tok, base_line)
        lines = lines[1:]
        if not lines:
            raise EmptyInputError("offset table has a base height but no offsets")

    values = np.empty(len(lines))
    places = 0
    prev = None
    for i, (lineno, tok) in enumerate(lines):
        d = _decimal(tok, lineno)
        places = max(places, _places(d))
        d = base + d
        if d <= 0:
            raise ValidationError(f"line {lineno}: ordinate {d} is not positive")
        if prev is not None and d < prev:
            raise ValidationError(f"line {lineno}: ordinate {d} below previous {prev}")
        prev = d
        values[i] = float(d)
    return OrdinateTable(values, source_id=source_id, precision_digits=places, **coverage)


def load_table(path: Union[str, os.PathLike], fmt: str | None = None, **coverage) -> OrdinateTable:
    """Load a table from disk; ``.zgc`` files are read as binary caches."""
    path = Path(path)
    if fmt is None:
        fmt = "cache" if path.suffix == ".zgc" else "plain"
    if fmt == "cache":
        return OrdinateTable(read_cache(path), source_id=str(path), **coverage)
    with open(path, "rb") as fh:
        return parse_ordinates(fh, fmt, source_id=str(path), **coverage)


# -- binary cache -----------------------------------------------------------


def serialize_cache(ordinates) -> bytes:
    """ZGC1 layout: magic, u64 count, binary64 values, CRC-32 of the values (all LE)."""
    payload = np.ascontiguousarray(ordinates, dtype="<f8").tobytes()
    count = len(payload) // 8
    return _HEADER.pack(CACHE_MAGIC, count) + payload + _CRC.pack(zlib.crc32(payload))


def deserialize_cache(blob: bytes) -> np.ndarray:
    if len(blob) < _HEADER.size + _CRC.size:
        raise IntegrityError("cache file truncated")
    magic, count = _HEADER.unpack_from(blob)
    if magic != CACHE_MAGIC:
        raise IntegrityError(f"bad cache magic {magic!r}")
    expected = _HEADER.size + 8 * count + _CRC.size
    if len(blob) != expected:
        raise IntegrityError(f"cache length {len(blob)} does not match count {count}")
    payload = blob[_HEADER.size:_HEADER.size + 8 * count]
    (crc,) = _CRC.unpack_from(blob, expected - _CRC.size)
    if zlib.crc32(payload) != crc:
        raise IntegrityError("cache checksum mismatch")
    return np.frombuffer(payload, dtype="<f8").astype(np.float64)


def write_cache(path: Union[str, os.PathLike], ordinates) -> Path:
    """Write atomically (temp file + rename) so concurrent readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = serialize_cache(ordinates)
    fd, tmp = tempfile.mkstemp(prefix=path.name, suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_cache(path: Union[str, os.PathLike]) -> np.ndarray:
    with open(path, "rb") as fh:
        return deserialize_cache(fh.read())


def cache_path_for(url: str, cache_dir: Union[str, os.PathLike]) -> Path:
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()[:20]
    return Path(cache_dir) / f"{digest}.zgc"


def fetch_remote(url: str | None = None, cache_dir: Union[str, os.PathLike, None] = None,
                 fmt: str = "plain", timeout: float = 60.0) -> OrdinateTable:
    """Return the table at ``url``, going through a ZGC1 cache in ``cache_dir``.

    A warm cache is served without touching the network. ``url`` and
    ``cache_dir`` default to ``$ZETAGAPS_DATA_URL`` and ``$ZETAGAPS_CACHE_DIR``.
    """
    url = url or os.environ.get("ZETAGAPS_DATA_URL")
    if not url:
        raise ValidationError("no source URL given and ZETAGAPS_DATA_URL is unset")
    if cache_dir is None:
        cache_dir = os.environ.get("ZETAGAPS_CACHE_DIR") or Path.home() / ".cache" / "zetagaps"
    target = cache_path_for(url, cache_dir)
    if target.exists():
        return OrdinateTable(read_cache(target), source_id=url)

    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            raw = resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise FetchError(f"cannot fetch {url}: {exc}") from exc
    table = parse_ordinates(io.BytesIO(raw), fmt, source_id=url)
    write_cache(target, table.ordinates)
    return table


# -- counting function ------------------------------------------------------


def count_upto(table: OrdinateTable, T):
    """N(T): the number of ordinates <= T. Accepts scalars or arrays."""
    T_arr = np.asarray(T, dtype=float)
    if T_arr.size:
        table.check_covers(float(T_arr.min()), float(T_arr.max()))
    counts = np.searchsorted(table.ordinates, T_arr, side="right")
    return int(counts) if counts.ndim == 0 else counts


def rvm_main_term(T):
    """(T/2pi) log(T/2pi) - T/2pi + 7/8."""
    T_arr = np.asarray(T, dtype=float)
    if np.any(~np.isfinite(T_arr)) or np.any(T_arr <= 1.0):
        raise DomainError("main term requires finite T > 1")
    if np.any(T_arr <= TWO_PI):
        warnings.warn("T <= 2*pi: log(T/2pi) is not positive", LowHeightWarning, stacklevel=2)
    x = T_arr / TWO_PI
    value = x * np.log(x) - x + 0.875
    return float(value) if value.ndim == 0 else value


def s_of_t(table: OrdinateTable, t):
    """N(t) minus the main term; equals S(t) + O(1/t)."""
    return count_upto(table, t) - rvm_main_term(t)


def gap_sequence(table: OrdinateTable, n: int, r: int) -> GapSequence:
    """The r consecutive gaps gamma_{n+j+1} - gamma_{n+j}, j = 0..r-1."""
    if n < 1 or r < 0:
        raise ValidationError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    if n + r > len(table):
        raise CoverageError(
            f"gaps {n}..{n + r - 1} need ordinate {n + r}, table has {len(table)}"
        )
    seg = table.ordinates[n - 1:n + r]
    gaps = np.diff(seg)
    gaps.setflags(write=False)
    return GapSequence(n, gaps)
