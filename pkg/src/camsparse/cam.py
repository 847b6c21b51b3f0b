"""Bit-level functional model of one acceleration module's CAM/RAM pair.

One array holds up to ``height`` (index, value) records: the index bits
live in the content-addressable side, the value in the juxtaposed RAM.  A
compare presents a key (optionally masked) to every row at once; the single
matching row drives the RAM word line, so a search-and-read returns the
stored value on a hit and 0.0 on a miss.

The model also keeps the bookkeeping the analytical energy/endurance models
need: per-row write counters and tallies of compare bit operations, RAM
reads and cell writes.  A compare always charges height * popcount(mask)
bit operations, match or not, because every row participates in every
compare cycle; storing an entry never happens outside load_segment, which
is why write endurance is consumed only by vector (re)loads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CamCapacityError, CamCorruptionError, ValidationError

#: Returned by compare_select when no valid row matches the key.
NO_MATCH = None


@dataclass
class EnergyTally:
    compare_bit_ops: int = 0
    ram_reads: int = 0
    writes: int = 0


@dataclass(frozen=True)
class CompareKey:
    """Key bits plus a mask; mask bit 1 = compared, 0 = ignored.

    An all-zero mask matches every valid row.
    """

    key_bits: int
    mask: int

    @classmethod
    def exact(cls, key_bits: int, width: int) -> "CompareKey":
        """Key comparing all ``width`` bits."""
        return cls(key_bits, (1 << width) - 1)


class CamRamArray:
    """State of one acceleration module: stored indices, values, validity."""

    def __init__(self, height: int, index_width: int):
        if height < 1:
            raise ValidationError("array height must be >= 1")
        if not 1 <= index_width <= 64:
            raise ValidationError("index width must be in 1..64")
        self.height = height
        self.index_width = index_width
        self.stored_index = [0] * height
        self.value = [0.0] * height
        self.valid = [False] * height
        self.write_count = [0] * height
        self.energy = EnergyTally()

    # -- initialization ----------------------------------------------------

    def load_segment(self, entries) -> None:
        """Store (index, value) pairs in rows 0..len-1 and invalidate the rest.

        Rejects more entries than the height (the caller must tile), any
        duplicate index, and any index that does not fit the array width.
        Each written row's write counter goes up by one.
        """
        entries = list(entries)
        if len(entries) > self.height:
            raise CamCapacityError(
                f"{len(entries)} entries exceed array height {self.height}; tile the load"
            )
        limit = 1 << self.index_width
        seen = set()
        for idx, _ in entries:
            if not 0 <= idx < limit:
                raise ValidationError(
                    f"index {idx} does not fit in {self.index_width} bits"
                )
            if idx in seen:
                raise ValidationError(f"duplicate index {idx} in load")
            seen.add(idx)
        for row, (idx, val) in enumerate(entries):
            self.stored_index[row] = int(idx)
            self.value[row] = float(val)
            self.valid[row] = True
            self.write_count[row] += 1
        for row in range(len(entries), self.height):
            self.valid[row] = False
        self.energy.writes += len(entries)

    # -- compare -----------------------------------------------------------

    def compare_select(self, key: CompareKey):
        """Position of the unique valid row matching the key, else NO_MATCH.

        Faults if more than one row matches: stored indices are supposed to
        be unique, so a multi-match means corrupted contents (or a mask so
        wide the question is ill-posed).
        """
        limit = 1 << self.index_width
        if not 0 <= key.key_bits < limit or not 0 <= key.mask < limit:
            raise ValidationError(
                f"key/mask must fit in {self.index_width} bits"
            )
        self.energy.compare_bit_ops += self.height * key.mask.bit_count()
        match = NO_MATCH
        for row in range(self.height):
            if not self.valid[row]:
                continue
            if (self.stored_index[row] ^ key.key_bits) & key.mask == 0:
                if match is not NO_MATCH:
                    raise CamCorruptionError(
                        f"rows {match} and {row} both match; stored indices not unique"
                    )
                match = row
        return match

    def search_and_read(self, index: int) -> float:
        """Value stored under ``index``, or exactly 0.0 when absent.

        A miss is a defined value, not an error: the downstream multiplier
        consumes the zero like any other operand.  Only hits count a RAM
        read.
        """
        row = self.compare_select(CompareKey.exact(index, self.index_width))
        if row is NO_MATCH:
            return 0.0
        self.energy.ram_reads += 1
        return self.value[row]

    # -- wear --------------------------------------------------------------

    def endurance_headroom(self, budget: int) -> float:
        """Fraction of the write budget left on the most-worn row."""
        if budget <= 0:
            raise ValidationError("write budget must be positive")
        return max(0.0, 1.0 - max(self.write_count) / budget)

    # -- debugging ---------------------------------------------------------

    def dump(self) -> str:
        """Valid rows as 'row bits value' lines, index bits in binary."""
        w = self.index_width
        lines = [
            f"{row} {self.stored_index[row]:0{w}b} {self.value[row]!r}"
            for row in range(self.height)
            if self.valid[row]
        ]
        return "\n".join(lines)


def load_dump(text: str, height: int, index_width: int) -> CamRamArray:
    """Rebuild an array from dump() text (test-fixture helper)."""
    arr = CamRamArray(height, index_width)
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        _, bits, value = line.split()
        entries.append((int(bits, 2), float(value)))
    arr.load_segment(entries)
    return arr
