"""Grids of percentage errors of the large-λ expansion, with CSV and text output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .asymptotic import percent_errors
from .model import CmpParams

CSV_HEADER = ("lambda", "nu", "order", "percent_error")
OVERFLOW_SENTINEL = 101


def _grid(start, step, count):
    return [round(start + step * i, 1) for i in range(count)]


PRESETS = {
    "table1": (_grid(0.1, 0.2, 10), _grid(0.1, 0.2, 10), [1, 2, 3]),
    "table2": ([float(v) for v in range(3, 11)], [2.5, 3.0, 3.5, 4.0, 4.5, 5.0], [1, 2, 3]),
}


def format_cell(value: float, clamp_threshold: float = 100.0) -> str:
    """Three significant figures, at most three decimals, ±101 beyond the clamp."""
    if math.isnan(value):
        return "nan"
    if abs(value) > clamp_threshold:
        return f"{OVERFLOW_SENTINEL}" if value > 0 else f"-{OVERFLOW_SENTINEL}"
    rounded = float(f"{value:.3g}")
    if rounded == 0:
        return "0.000"
    magnitude = math.floor(math.log10(abs(rounded)))
    decimals = min(3, max(0, 2 - magnitude))
    text = f"{rounded:.{decimals}f}"
    if text.startswith("-") and float(text) == 0:
        text = text[1:]
    return text


@dataclass
class ErrorTable:
    lambda_grid: List[float]
    nu_grid: List[float]
    orders: List[int]
    cells: Dict[Tuple[float, float, int], float] = field(default_factory=dict)
    clamp_threshold: float = 100.0

    def cell(self, lam, nu, order) -> float:
        return self.cells[(float(lam), float(nu), int(order))]

    def keys(self):
        """Cells in grid order: λ, then order, then ν."""
        for lam in self.lambda_grid:
            for order in self.orders:
                for nu in self.nu_grid:
                    yield (lam, nu, order)

    def display(self, lam, nu, order) -> str:
        return format_cell(self.cell(lam, nu, order), self.clamp_threshold)

    def to_csv(self, raw: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for lam, nu, order in self.keys():
            value = self.cells[(lam, nu, order)]
            text = repr(value) if raw else format_cell(value, self.clamp_threshold)
            writer.writerow((repr(lam), repr(nu), order, text))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, clamp_threshold: float = 100.0) -> ErrorTable:
        reader = csv.reader(io.StringIO(text))
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        lams, nus, orders, cells = [], [], [], {}
        for row in reader:
            if not row:
                continue
            lam, nu, order, value = float(row[0]), float(row[1]), int(row[2]), float(row[3])
            for seen, item in ((lams, lam), (nus, nu), (orders, order)):
                if item not in seen:
                    seen.append(item)
            cells[(lam, nu, order)] = value
        return cls(lams, nus, orders, cells, clamp_threshold)

    def render(self) -> str:
        """Plain-text table: one block of rows per λ, one row per order, ν across."""
        head = ["lambda", "order"] + [f"nu={nu:g}" for nu in self.nu_grid]
        rows = [head]
        for lam in self.lambda_grid:
            for order in self.orders:
                rows.append(
                    [f"{lam:g}", str(order)] + [self.display(lam, nu, order) for nu in self.nu_grid]
                )
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        return "\n".join(
            "  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows
        ) + "\n"


def compute_table(lambda_grid, nu_grid, orders, rel_tol: float = 1e-14, clamp_threshold: float = 100.0) -> ErrorTable:
    """Percentage error of each truncation order at every grid point.

    Grid values are taken at their shortest decimal spelling, so 0.1 means
    one tenth.  A point whose expansion overflows is stored as NaN.
    """
    table = ErrorTable(
        [float(v) for v in lambda_grid], [float(v) for v in nu_grid], [int(o) for o in orders],
        clamp_threshold=clamp_threshold,
    )
    for lam in table.lambda_grid:
        for nu in table.nu_grid:
            params = CmpParams(repr(lam), repr(nu))
            try:
                values = percent_errors(params, table.orders, rel_tol)
            except OverflowError:
                values = [math.nan] * len(table.orders)
            for order, value in zip(table.orders, values):
                table.cells[(lam, nu, order)] = value
    return table


def preset_table(name: str, rel_tol: float = 1e-14) -> ErrorTable:
    try:
        lams, nus, orders = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return compute_table(lams, nus, orders, rel_tol)
