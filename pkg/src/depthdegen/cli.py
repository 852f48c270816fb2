"""Command line entry point: ``depthdegen <command> [options]``.

Commands write CSV files (canonical) plus optional SVG charts and a
``manifest.json`` into ``--out``. Exit codes: 0 success, 2 validation error,
3 NaN outside the absorbing state.
"""

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, catalog, csvio
from .core import DomainError
from .montecarlo import McConfig, distributions_from_x, simulate_x
from .propagation import (
    Architecture,
    GaussianChainConfig,
    predict_finite,
    predict_infinite,
    predicted_density,
    sample_gaussian_chain,
)
from .streams import default_threads, stream
from .svg import Plot


class NumericError(RuntimeError):
    pass


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _theta(text):
    return float(np.pi / 2) if text is None else float(text)


def _architectures(args) -> list[tuple[Architecture, object]]:
    """Resolve the architecture source into ``(arch, catalog_entry_or_None)`` pairs."""
    if args.widths:
        try:
            widths = catalog.parse_widths(args.widths)
        except ValueError as exc:
            raise DomainError(f"bad --widths: {exc}") from None
        return [(Architecture(args.input_dim, widths, label="widths"), None)]
    if args.spec:
        return [(a, None) for a in catalog.parse_spec(args.spec)]
    if args.catalog:
        if args.catalog == "all":
            return [(e.arch, e) for e in catalog.builtin_catalog()]
        try:
            idx = int(args.catalog)
        except ValueError:
            raise DomainError("--catalog takes an id in 1..45 or 'all'") from None
        e = catalog.catalog_entry(idx)
        return [(e.arch, e)]
    return []


def _single(args) -> Architecture:
    archs = _architectures(args)
    if len(archs) != 1:
        raise DomainError("this command needs exactly one architecture")
    return archs[0][0]


def _write(out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8", newline="")


def _check_nan(values, what):
    arr = np.asarray(values, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise NumericError(f"NaN in {what} outside the absorbing state")


def cmd_predict(args, out):
    theta0 = _theta(args.theta0)
    methods = ["finite-full", "finite-simple", "infinite"] if args.method == "all" else [args.method]
    if theta0 == 0:
        _warn("theta0 = 0: inputs are collinear, the trace stays in the absorbing state x = -inf")
    for arch, entry in _architectures(args):
        traces = {}
        for m in methods:
            if m == "infinite":
                traces[m] = predict_infinite(arch, theta0)
            else:
                traces[m] = predict_finite(arch, theta0, m.split("-", 1)[1])
            _check_nan(traces[m].x, f"{m} trace")
        if len(methods) == 1:
            header = ["layer", "theta", "x", "sigma_sq"]
        else:
            header = ["layer"] + [f"{c}_{m}" for m in methods for c in ("theta", "x", "sigma_sq")]
        rows = []
        for layer in range(arch.depth + 1):
            row = [layer]
            for m in methods:
                t = traces[m]
                row += [t.theta[layer], t.x[layer], t.variance[layer]]
            rows.append(row)
        stem = "predict" if entry is None and arch.label == "widths" else f"predict_{arch.label.strip('#') or 'arch'}"
        _write(out, stem + ".csv", csvio.to_csv(header, rows))
        if args.svg:
            plot = Plot(f"Predicted ln sin^2(theta) per layer ({arch.label})", "layer", "ln sin^2(theta)")
            for m in methods:
                plot.line(range(arch.depth + 1), traces[m].x, m)
            _write(out, stem + ".svg", plot.render())


def cmd_simulate(args, out):
    arch = _single(args)
    theta0 = _theta(args.theta0)
    threads = args.threads
    xs = simulate_x(arch, McConfig(args.replicas, args.seed, theta0=theta0,
                                   sampler=args.sampler, threads=threads))
    dists = distributions_from_x(xs)
    fin = predict_finite(arch, theta0)
    inf = predict_infinite(arch, theta0)
    chain = sample_gaussian_chain(
        arch, theta0, GaussianChainConfig(args.samples or args.replicas, args.seed, threads=threads))
    cm, cs = chain.layer_mean(), chain.layer_std()
    rows = []
    for d in dists:
        rows.append([d.layer, d.mean, d.std if d.samples.size > 1 else None, d.count_absorbed,
                     fin.x[d.layer], inf.x[d.layer], cm[d.layer], cs[d.layer]])
    header = ["layer", "mc_mean", "mc_std", "mc_absorbed", "finite_x", "infinite_x",
              "chain_mean", "chain_std"]
    _write(out, "simulate.csv", csvio.to_csv(header, rows))
    sample_header = ["replica"] + [f"x_{k}" for k in range(arch.depth + 1)]
    _write(out, "samples.csv", csvio.to_csv(
        sample_header, ([r, *xs[r]] for r in range(xs.shape[0]))))
    absorbed = sum(d.count_absorbed for d in dists[1:])
    if absorbed:
        _warn(f"{dists[-1].count_absorbed} of {args.replicas} replicas absorbed by the last layer")
    if args.svg:
        layers = [d.layer for d in dists]
        mean = [d.mean for d in dists]
        std = [d.std if d.samples.size > 1 else 0.0 for d in dists]
        plot = Plot("Monte Carlo vs predictions", "layer", "ln sin^2(theta)")
        plot.line(layers, mean, "Monte Carlo (mean +- std)",
                  band=([m - s for m, s in zip(mean, std)], [m + s for m, s in zip(mean, std)]))
        plot.line(layers, cm, "Gaussian chain (mean +- std)", band=(cm - cs, cm + cs))
        plot.line(layers, fin.x, "finite width")
        plot.line(layers, inf.x, "infinite width")
        _write(out, "simulate.svg", plot.render())


def cmd_compare(args, out):
    theta0 = _theta(args.theta0)
    pairs = _architectures(args) or [(e.arch, e) for e in catalog.builtin_catalog()]
    entries = [e if e is not None else a for a, e in pairs]
    rows = catalog.degeneracy_report(entries, theta0)
    _write(out, "report.csv", catalog.report_csv(rows))
    if any(r.accuracies is None for r in rows):
        _warn("entries without recorded accuracies: CSV only, no scatter")
        return
    if args.svg:
        for name in catalog.DATASETS:
            plot = Plot(f"Predicted ln sin^2(theta^L) vs {name} accuracy", "ln sin^2(theta^L)", "test accuracy")
            plot.scatter([r.x_final_finite for r in rows], [r.accuracies[name][0] for r in rows],
                         "finite width", yerr=[r.accuracies[name][1] for r in rows])
            _write(out, f"scatter_{name}.svg", plot.render())
        plot = Plot("Finite vs infinite width prediction", "infinite width ln sin^2(theta^L)",
                    "finite width ln sin^2(theta^L)")
        xi = [r.x_final_infinite for r in rows]
        plot.scatter(xi, [r.x_final_finite for r in rows], "architectures")
        plot.line([min(xi), max(xi)], [min(xi), max(xi)], "y = x")
        _write(out, "finite_vs_infinite.svg", plot.render())


def cmd_density(args, out):
    arch = _single(args)
    theta0 = _theta(args.theta0)
    layers = [int(t) for t in str(args.layer).split(",")]
    for layer in layers:
        if not 1 <= layer <= arch.depth:
            raise DomainError(f"--layer must lie in [1, {arch.depth}]")
    xs = simulate_x(arch.truncated(max(layers)),
                    McConfig(args.replicas, args.seed, theta0=theta0, threads=args.threads))
    for layer in layers:
        col = xs[:, layer]
        col = col[np.isfinite(col)]
        if col.size < 2:
            raise NumericError("too few finite Monte Carlo samples for a histogram")
        edges = np.histogram_bin_edges(col, bins="fd")
        hist, edges = np.histogram(col, bins=edges, density=True)
        centers = 0.5 * (edges[1:] + edges[:-1])
        pred = predicted_density(
            arch, theta0, layer, centers,
            GaussianChainConfig(args.samples, args.seed, threads=args.threads),
            exact_first_layer=True)
        _write(out, f"density_layer{layer}.csv", csvio.to_csv(
            ["x", "mc_density", "predicted_density"], zip(centers, hist, pred)))
        if args.svg:
            plot = Plot(f"Density of ln sin^2(theta) at layer {layer}", "ln sin^2(theta)", "density")
            plot.bars(edges, hist, "Monte Carlo")
            plot.line(centers, pred, "Gaussian chain")
            _write(out, f"density_layer{layer}.svg", plot.render())


def cmd_sweep(args, out):
    """Final finite-width prediction under random permutations of the widths."""
    arch = _single(args)
    theta0 = _theta(args.theta0)
    rng = stream(args.seed, 0, 5)
    rows = [[0, " ".join(map(str, arch.hidden_widths)), predict_finite(arch, theta0).final_x]]
    for k in range(1, args.permutations + 1):
        widths = tuple(int(w) for w in rng.permutation(arch.hidden_widths))
        rows.append([k, " ".join(map(str, widths)),
                     predict_finite(Architecture(arch.input_dim, widths), theta0).final_x])
    _write(out, "sweep.csv", csvio.to_csv(["permutation", "widths", "x_final_finite"], rows))


COMMANDS = {
    "predict": cmd_predict,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "density": cmd_density,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depthdegen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_seed=False):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--widths", help="e.g. 256x30 or 20,30 or 40x5,20x3")
        src.add_argument("--catalog", help="builtin catalog id (1..45) or 'all'")
        src.add_argument("--spec", help="architecture spec file")
        p.add_argument("--input-dim", type=int, default=catalog.MNIST_INPUT_DIM)
        p.add_argument("--theta0", default=None, help="initial angle in radians (default pi/2)")
        p.add_argument("--out", default="depthdegen-out")
        p.add_argument("--svg", action=argparse.BooleanOptionalAction, default=True)
        if needs_seed:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--threads", type=int, default=default_threads())

    p = sub.add_parser("predict", help="deterministic per-layer predictions")
    common(p)
    p.add_argument("--method", default="all",
                   choices=["finite-full", "finite-simple", "infinite", "all"])
    p = sub.add_parser("simulate", help="Monte Carlo over random networks")
    common(p, needs_seed=True)
    p.add_argument("--replicas", type=int, default=5000)
    p.add_argument("--samples", type=int, default=None, help="Gaussian chain samples")
    p.add_argument("--sampler", choices=["projected", "dense"], default="projected")
    p = sub.add_parser("compare", help="degeneracy report against recorded accuracies")
    common(p)
    p = sub.add_parser("density", help="MC histogram vs predicted density")
    common(p, needs_seed=True)
    p.add_argument("--layer", default="1", help="layer index or comma list")
    p.add_argument("--replicas", type=int, default=5000)
    p.add_argument("--samples", type=int, default=20000)
    p = sub.add_parser("sweep", help="final prediction under width permutations")
    common(p, needs_seed=True)
    p.add_argument("--permutations", type=int, default=10)
    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)
    return parser


def _manifest(argv, args) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("out", "threads")}
    replay = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--out", "--threads"):
            skip = True
            continue
        if tok.startswith(("--out=", "--threads=")):
            continue
        replay.append(tok)
    return {
        "command": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "argv": replay,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        out = args.out or str(Path(args.manifest).parent)
        return main(manifest["argv"] + ["--out", out])
    out = Path(args.out)
    try:
        if getattr(args, "threads", 1) < 1:
            raise DomainError("--threads must be >= 1")
        COMMANDS[args.command](args, out)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(out, "manifest.json", json.dumps(_manifest(argv, args), indent=2, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
