"""Architecture collections: the 45 benchmark networks and plain-text spec files.

Test accuracies and parameter counts are frozen reference data. Accuracy
tuples are ``(mean, std)`` over ten training runs.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import csvio
from .core import DomainError
from .propagation import Architecture, predict_finite, predict_infinite

DATASETS = ("mnist", "fmnist", "cifar10")
MNIST_INPUT_DIM = 784
CIFAR_INPUT_DIM = 3072

REPORT_HEADER = (
    "id", "depth", "avg_width", "widths", "x_final_finite", "x_final_infinite",
    "acc_mnist_mean", "acc_mnist_std", "acc_fmnist_mean", "acc_fmnist_std",
    "acc_cifar_mean", "acc_cifar_std",
)


class SpecParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_widths(text: str) -> tuple[int, ...]:
    """Expand ``"256x30"`` / ``"20,30"`` / ``"40x5,20x3"`` into a width tuple."""
    widths = []
    for token in text.replace(" ", "").split(","):
        if not token:
            raise ValueError(f"empty width in {text!r}")
        if "x" in token:
            w, k = token.split("x", 1)
            widths.extend([int(w)] * int(k))
        else:
            widths.append(int(token))
    return tuple(widths)


# id, depth, avg width, params (F)MNIST, params CIFAR, mnist, fmnist, cifar10, widths
_TABLE = [
    (1, 2, 50, 58880, 165790, (0.924, 0.007), (0.79, 0.02), (0.211, 0.029), "50x2"),
    (2, 2, 85, 57350, 135510, (0.837, 0.051), (0.709, 0.028), (0.276, 0.011), "85x2"),
    (3, 2, 200, 19930, 54250, (0.878, 0.009), (0.721, 0.098), (0.163, 0.048), "200x2"),
    (4, 2, 25, 138300, 201600, (0.94, 0.004), (0.812, 0.009), (0.229, 0.025), "20,30"),
    (5, 2, 125, 31725, 88925, (0.89, 0.005), (0.768, 0.013), (0.199, 0.027), "100,150"),
    (6, 3, 25, 43990, 114550, (0.928, 0.008), (0.812, 0.013), (0.167, 0.022), "25x3"),
    (7, 3, 50, 62830, 173280, (0.916, 0.002), (0.79, 0.012), (0.224, 0.019), "50x3"),
    (8, 3, 100, 59700, 96756, (0.952, 0.004), (0.839, 0.003), (0.27, 0.016), "100x3"),
    (9, 3, 67.67, 87200, 309900, (0.924, 0.006), (0.799, 0.011), (0.281, 0.011), "64,75,64"),
    (10, 3, 50, 17310, 189100, (0.553, 0.181), (0.599, 0.119), (0.263, 0.022), "75,50,25"),
    (11, 4, 30, 369400, 366150, (0.877, 0.052), (0.757, 0.026), (0.192, 0.029), "40x2,20x2"),
    (12, 4, 75, 99400, 105060, (0.957, 0.003), (0.842, 0.006), (0.23, 0.025), "50,100,100,50"),
    (13, 5, 21, 74700, 51630, (0.931, 0.005), (0.811, 0.009), (0.146, 0.029), "15x3,30x2"),
    (14, 6, 55, 8840, 976400, (0.715, 0.088), (0.569, 0.146), (0.337, 0.008), "80,70,60,50,40,30"),
    (15, 6, 87.5, 169400, 398200, (0.949, 0.008), (0.833, 0.007), (0.332, 0.018), "25,50,75,100,125,150"),
    (16, 10, 10, 79020, 180010, (0.951, 0.003), (0.832, 0.01), (0.278, 0.018), "10x10"),
    (17, 10, 100, 64850, 122050, (0.939, 0.004), (0.824, 0.008), (0.262, 0.059), "100x10"),
    (18, 10, 200, 54170, 262060, (0.933, 0.005), (0.81, 0.014), (0.335, 0.016), "200x10"),
    (19, 10, 17.5, 49920, 1002300, (0.794, 0.052), (0.648, 0.106), (0.184, 0.026), "20x5,15x5"),
    (20, 11, 34.55, 518800, 31720, (0.955, 0.006), (0.835, 0.011), (0.14, 0.037), "55,30x9,55"),
    (21, 11, 35, 21100, 269195, (0.93, 0.005), (0.823, 0.007), (0.363, 0.016),
     ",".join(str(w) for w in range(40, 29, -1))),
    (22, 13, 42, 36420, 328200, (0.91, 0.008), (0.789, 0.01), (0.364, 0.016),
     ",".join(str(w) for w in range(24, 61, 3))),
    (23, 15, 30, 41844, 174100, (0.92, 0.004), (0.805, 0.011), (0.349, 0.015), "30x15"),
    (24, 15, 50, 13860, 235650, (0.909, 0.005), (0.8, 0.012), (0.328, 0.02), "50x15"),
    (25, 15, 75, 16580, 206848, (0.927, 0.003), (0.823, 0.007), (0.359, 0.009), "75x15"),
    (26, 16, 35, 42200, 159100, (0.943, 0.004), (0.838, 0.004), (0.343, 0.021),
     ",".join(str(w) for w in range(50, 19, -2))),
    (27, 16, 22.5, 198800, 656400, (0.963, 0.003), (0.845, 0.01), (0.37, 0.016),
     ",".join(str(w) for w in range(15, 31))),
    (28, 20, 25, 94900, 323700, (0.955, 0.002), (0.843, 0.006), (0.367, 0.006), "25x20"),
    (29, 20, 50, 60416, 62340, (0.951, 0.003), (0.837, 0.005), (0.163, 0.058), "50x20"),
    (30, 20, 37.5, 44700, 156600, (0.948, 0.003), (0.834, 0.008), (0.346, 0.028), "45x5,40x5,35x5,30x5"),
    (31, 23, 31.30, 194550, 598200, (0.927, 0.005), (0.788, 0.008), (0.17, 0.004), "40x13,20x10"),
    (32, 25, 15, 64050, 48180, (0.951, 0.002), (0.84, 0.004), (0.186, 0.071), "15x25"),
    (33, 25, 75, 55160, 125880, (0.899, 0.014), (0.748, 0.033), (0.274, 0.048), "75x25"),
    (34, 25, 150, 53760, 64390, (0.782, 0.077), (0.676, 0.064), (0.206, 0.041), "150x25"),
    (35, 28, 35.71, 74715, 78300, (0.953, 0.001), (0.844, 0.001), (0.244, 0.075),
     "25x4,50x4,25x4,50x4,25x4,50x4,25x4"),
    (36, 30, 15, 60860, 152380, (0.819, 0.08), (0.719, 0.033), (0.17, 0.02), "15x30"),
    (37, 30, 30, 18630, 145280, (0.862, 0.08), (0.772, 0.017), (0.168, 0.02), "30x30"),
    (38, 30, 100, 34360, 146680, (0.941, 0.003), (0.826, 0.009), (0.165, 0.022), "100x30"),
    (39, 30, 26.67, 659100, 118560, (0.932, 0.014), (0.785, 0.011), (0.175, 0.007), "40x5,20x20,40x5"),
    (40, 30, 31.67, 18435, 52755, (0.313, 0.131), (0.349, 0.109), (0.158, 0.026), "40x5,30x25"),
    (41, 35, 40, 86160, 276600, (0.753, 0.074), (0.586, 0.11), (0.148, 0.029), "40x35"),
    (42, 35, 75, 250800, 450525, (0.725, 0.163), (0.608, 0.077), (0.165, 0.007), "75x35"),
    (43, 40, 50, 137200, 251600, (0.522, 0.141), (0.513, 0.089), (0.167, 0.007), "50x40"),
    (44, 40, 75, 278925, 422400, (0.467, 0.123), (0.466, 0.09), (0.161, 0.022), "75x40"),
    (45, 50, 50, 162200, 177680, (0.242, 0.064), (0.22, 0.042), (0.161, 0.019), "50x50"),
]


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    arch: Architecture
    depth: int
    avg_width: float
    accuracies: dict
    param_counts: dict

    @property
    def widths(self) -> tuple[int, ...]:
        return self.arch.hidden_widths


def builtin_catalog() -> list[CatalogEntry]:
    entries = []
    for idx, depth, avg, p_mn, p_cf, acc_mn, acc_fm, acc_cf, widths in _TABLE:
        arch = Architecture(MNIST_INPUT_DIM, parse_widths(widths), label=f"#{idx}")
        entries.append(CatalogEntry(
            id=idx,
            arch=arch,
            depth=depth,
            avg_width=float(avg),
            accuracies={"mnist": acc_mn, "fmnist": acc_fm, "cifar10": acc_cf},
            param_counts={"mnist": p_mn, "cifar10": p_cf},
        ))
    return entries


def catalog_entry(idx: int) -> CatalogEntry:
    for entry in builtin_catalog():
        if entry.id == idx:
            return entry
    raise DomainError(f"catalog id must be in 1..{len(_TABLE)}, got {idx}")


def dense_param_count(input_dim: int, widths, outputs: int = 10, biases: bool = True) -> int:
    dims = (input_dim,) + tuple(widths) + (outputs,)
    return sum(a * b + (b if biases else 0) for a, b in zip(dims, dims[1:]))


def param_count_report(entries=None) -> list[dict]:
    """Printed vs. computed parameter counts. Informational only: many printed
    counts do not follow from the width lists."""
    rows = []
    for e in entries or builtin_catalog():
        mn = dense_param_count(MNIST_INPUT_DIM, e.widths)
        cf = dense_param_count(CIFAR_INPUT_DIM, e.widths)
        rows.append({
            "id": e.id,
            "printed_mnist": e.param_counts["mnist"], "computed_mnist": mn,
            "printed_cifar10": e.param_counts["cifar10"], "computed_cifar10": cf,
            "matches": e.param_counts["mnist"] == mn and e.param_counts["cifar10"] == cf,
        })
    return rows


def parse_spec_text(text: str) -> list[Architecture]:
    """Parse ``label; input_dim; w1,w2,...`` records, one per line."""
    archs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 3:
            raise SpecParseError(lineno, "expected 'label; input_dim; widths'")
        label, dim, widths = parts
        if not label:
            raise SpecParseError(lineno, "empty label")
        if label in seen:
            raise SpecParseError(lineno, f"duplicate label {label!r}")
        try:
            dim = int(dim)
            widths = parse_widths(widths)
        except ValueError as exc:
            raise SpecParseError(lineno, f"malformed number ({exc})") from None
        try:
            archs.append(Architecture(dim, widths, label))
        except DomainError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
        seen.add(label)
    return archs


def parse_spec(path) -> list[Architecture]:
    return parse_spec_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ReportRow:
    id: str
    depth: int
    avg_width: float
    widths: tuple[int, ...]
    x_final_finite: float
    x_final_infinite: float
    accuracies: dict | None

    def as_record(self) -> list:
        acc = []
        for name in DATASETS:
            pair = (self.accuracies or {}).get(name)
            acc.extend(pair if pair else (None, None))
        return [
            self.id, self.depth, self.avg_width, " ".join(map(str, self.widths)),
            self.x_final_finite, self.x_final_infinite, *acc,
        ]


def degeneracy_report(entries, theta0: float = np.pi / 2) -> list[ReportRow]:
    """Final-layer ``ln sin^2`` predictions, finite and infinite width, per entry."""
    rows = []
    for e in entries:
        if isinstance(e, CatalogEntry):
            arch, ident, acc = e.arch, str(e.id), e.accuracies
        else:
            arch, ident, acc = e, e.label, None
        rows.append(ReportRow(
            id=ident,
            depth=arch.depth,
            avg_width=round(arch.avg_width, 2),
            widths=arch.hidden_widths,
            x_final_finite=predict_finite(arch, theta0).final_x,
            x_final_infinite=predict_infinite(arch, theta0).final_x,
            accuracies=acc,
        ))
    return rows


def report_csv(rows) -> str:
    return csvio.to_csv(REPORT_HEADER, [r.as_record() for r in rows])
