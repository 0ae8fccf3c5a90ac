"""Main CLI application using Typer."""

from __future__ import annotations

import warnings
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import numpy as np
import typer
from rich.panel import Panel
from rich.table import Table

from featurelens import __version__
from featurelens.config import Config, load_config
from featurelens.core.errors import FeatureLensError
from featurelens.core.feature_names import FEATURE_NAMES, N_STRUCTURAL, group_of
from featurelens.core.verbosity import (
    VerbosityLevel,
    console,
    emit,
    err_console,
    normalize_verbose,
)
from featurelens.detectors.base import DETECTOR_KINDS, FORMAT_VERSION, predict_scores, train
from featurelens.synth.attacks import ATTACKS
from featurelens.synth.benchmark import MIXED
from featurelens.synth.generators import CLEAN_KINDS

SYNTH_KINDS = CLEAN_KINDS + (MIXED,)

app = typer.Typer(
    name="featurelens",
    help="FeatureLens - interpretable feature-based adversarial example detection",
    add_completion=False,
)


def _version_callback(value: bool) -> None:
    if value:
        console.print(f"featurelens {__version__} (model format_version {FORMAT_VERSION})")
        raise typer.Exit()


@app.callback()
def main_callback(
    version: bool = typer.Option(
        False,
        "--version",
        callback=_version_callback,
        is_eager=True,
        help="Show version and model format",
    ),
):
    """Synthesize benchmarks, extract features, train and evaluate detectors."""


@contextmanager
def _runtime_errors() -> Iterator[None]:
    """Map library failures to exit code 1 and surface numerical warnings."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            yield
        except (FeatureLensError, OSError, ValueError) as e:
            err_console.print(f"[bold red]Error:[/bold red] {e}")
            raise typer.Exit(code=1) from e
        finally:
            for w in caught:
                err_console.print(f"[yellow]Warning: {w.message}[/yellow]")


def _setup(config_path: Optional[Path], verbose: int, quiet: bool) -> Tuple[Config, int]:
    config = load_config(custom_path=config_path)
    return config, 0 if quiet else normalize_verbose(verbose)


def _manifest_path(source: Path) -> Path:
    return source / "manifest.csv" if source.is_dir() else source


def _check_choice(value: str, choices, hint: str) -> None:
    if value not in choices:
        raise typer.BadParameter(f"{value!r} is not one of {', '.join(choices)}", param_hint=hint)


ConfigOpt = typer.Option(None, "--config", help="Path to custom config file")
VerboseOpt = typer.Option(
    2, "--verbose", "-v", help="Verbosity level: 0=silent, 1=basic, 2=detail (default), 3=debug"
)
QuietOpt = typer.Option(False, "--quiet", "-q", help="Quiet mode (equivalent to --verbose=0)")
JobsOpt = typer.Option(None, "--jobs", "-j", help="Extraction threads (default: logical cores)")


# Workflow steps shared by the commands and by `run`


def _synth_spec(n: int, kind: str, attack: str, eps: float, seed: int, size: int):
    """Validate synth options up front; a bad value is a usage error."""
    from pydantic import ValidationError

    from featurelens.synth.benchmark import SynthSpec

    try:
        return SynthSpec(n=n, kind=kind, attack=attack, epsilon=eps, seed=seed, size=size)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else "n"
        hint = {"epsilon": "--eps"}.get(field, f"--{field}")
        raise typer.BadParameter(first["msg"], param_hint=hint) from e


def _synth(spec, out: Path, jobs: int, verbose: int):
    from featurelens.synth.benchmark import make_benchmark

    return make_benchmark(spec, out, jobs=jobs, verbose=verbose)


def _extract_raw(manifest: Path, config: Config, jobs: Optional[int], verbose: int):
    from featurelens.features.pipeline import extract_matrix
    from featurelens.synth.benchmark import read_manifest, resolve_paths

    rows = read_manifest(manifest)
    emit(verbose, VerbosityLevel.BASIC, f"Extracting features from {len(rows)} images")
    raw50 = extract_matrix(resolve_paths(rows, manifest), config, jobs, verbose)
    return rows, raw50


def _fit_and_write_raw(
    rows, raw50: np.ndarray, out: Path, scaler_out: Path, ref_out: Path, seed: int, config: Config
):
    from featurelens.features.pipeline import fit_artifacts, save_artifact, write_feature_csv

    labels = np.array([r.label for r in rows], dtype=np.int64)
    train_mask = np.array([r.split == "train" for r in rows])
    if not train_mask.any():
        train_mask = np.ones(len(rows), dtype=bool)
    scaler, reference = fit_artifacts(raw50, labels, train_mask, seed, config.mmd_reference_size)
    X = np.hstack([raw50, np.full((raw50.shape[0], 1), np.nan)])
    write_feature_csv(out, [r.path for r in rows], labels, X)
    save_artifact(scaler, scaler_out)
    save_artifact(reference, ref_out)
    return scaler, reference


def _write_standardized(
    rows, raw50: np.ndarray, scaler, reference, out: Path, split: Optional[str]
) -> int:
    from featurelens.features.pipeline import apply_artifacts, write_feature_csv

    keep = [i for i, r in enumerate(rows) if split is None or r.split == split]
    X = apply_artifacts(raw50[keep], scaler, reference) if keep else np.empty((0, len(FEATURE_NAMES)))
    write_feature_csv(
        out, [rows[i].path for i in keep], [rows[i].label for i in keep], X
    )
    return len(keep)


def _fit(
    features: Path,
    valid: Optional[Path],
    kind: str,
    out: Path,
    seed: int,
    mask_path: Optional[Path],
    scaler_path: Optional[Path],
    ref_path: Optional[Path],
    config: Config,
    verbose: int,
):
    from featurelens.analysis.attribution import read_mask_csv
    from featurelens.detectors.persistence import save_model
    from featurelens.features.pipeline import (
        load_reference,
        load_scaler,
        read_feature_csv,
        select_columns,
    )

    mask = read_mask_csv(mask_path) if mask_path else None
    table = read_feature_csv(features)
    valid_data = None
    if valid is not None:
        vt = read_feature_csv(valid)
        valid_data = (select_columns(vt.X, mask), vt.labels)

    model = train(
        kind,
        select_columns(table.X, mask),
        table.labels,
        valid=valid_data,
        seed=seed,
        config=config,
        scaler=load_scaler(scaler_path) if scaler_path else None,
        reference=load_reference(ref_path) if ref_path else None,
        feature_mask=mask,
        verbose=verbose,
    )
    save_model(model, out)
    return model


def _eval(features: Path, model_path: Path, report: Path, roc: Path):
    from featurelens.analysis.metrics import evaluate, write_report, write_roc_csv
    from featurelens.detectors.base import select_features
    from featurelens.detectors.persistence import load_model
    from featurelens.features.pipeline import read_feature_csv

    model = load_model(model_path)
    table = read_feature_csv(features)
    result = evaluate(predict_scores(model, select_features(model, table.X)), table.labels)
    write_report(result, report)
    write_roc_csv(result.roc, roc)
    return result


def _report_panel(title: str, result) -> Panel:
    c = result.confusion
    return Panel.fit(
        f"[bold cyan]Accuracy:[/bold cyan] {result.accuracy:.4f}\n"
        f"[bold cyan]Precision:[/bold cyan] {result.precision:.4f}\n"
        f"[bold cyan]Recall:[/bold cyan] {result.recall:.4f}\n"
        f"[bold cyan]F1:[/bold cyan] {result.f1:.4f}\n"
        f"[bold cyan]AUC:[/bold cyan] {result.auc:.4f}\n"
        f"[bold cyan]Confusion:[/bold cyan] tp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn}",
        title=title,
        border_style="green",
    )


# Commands


@app.command()
def version():
    """Show version information."""
    console.print(
        Panel.fit(
            f"[bold cyan]FeatureLens[/bold cyan]\n"
            f"Version: [yellow]{__version__}[/yellow]\n"
            f"Model format_version: [yellow]{FORMAT_VERSION}[/yellow]",
            title="Version Info",
        )
    )


@app.command()
def features(
    out: Optional[Path] = typer.Option(None, "--out", help="Write the dictionary as CSV"),
):
    """Print the 51-feature dictionary with index and group."""
    import pandas as pd

    from featurelens.core.tables import write_table

    table = Table(title="Feature dictionary")
    table.add_column("index", justify="right")
    table.add_column("name")
    table.add_column("group")
    for i, name in enumerate(FEATURE_NAMES):
        table.add_row(str(i), name, group_of(i))
    console.print(table)

    if out is not None:
        frame = pd.DataFrame(
            {
                "index": range(len(FEATURE_NAMES)),
                "name": list(FEATURE_NAMES),
                "group": [group_of(i) for i in range(len(FEATURE_NAMES))],
            }
        )
        with _runtime_errors():
            write_table(frame, out)


@app.command()
def synth(
    out: Path = typer.Option(..., "--out", help="Output directory for images and manifest"),
    n: int = typer.Option(1200, "--n", help="Number of images (even)"),
    kind: str = typer.Option(
        "mixed", "--kind", help="smooth | blobs | sinusoid | blurred_noise | mixed"
    ),
    attack: str = typer.Option("sign", "--attack", help="sign | iterative | bandpass"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Per-pixel budget (default: config)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed (default: config)"),
    size: Optional[int] = typer.Option(None, "--size", help="Image side (default: canonical size)"),
    jobs: Optional[int] = JobsOpt,
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """
    Generate a balanced synthetic benchmark.

    Example:
        featurelens synth --out bench/sign --n 1200 --attack sign --eps 0.031 --seed 7
    """
    _check_choice(kind, SYNTH_KINDS, "--kind")
    _check_choice(attack, ATTACKS, "--attack")
    config, level = _setup(config_path, verbose, quiet)
    spec = _synth_spec(
        n,
        kind,
        attack,
        eps if eps is not None else config.attack_epsilon,
        seed if seed is not None else config.seed,
        size if size is not None else config.canonical_size,
    )
    with _runtime_errors():
        rows = _synth(spec, out, jobs if jobs is not None else config.jobs, level)
    emit(level, VerbosityLevel.BASIC, f"[green]✓ Wrote {len(rows)} images to {out}[/green]")


@app.command()
def extract(
    manifest: Path = typer.Option(..., "--manifest", help="Manifest CSV (or benchmark directory)"),
    out: Path = typer.Option(..., "--out", help="Feature CSV to write"),
    scaler_path: Optional[Path] = typer.Option(
        None, "--scaler", help="Fitted scaler (evaluation mode)"
    ),
    ref_path: Optional[Path] = typer.Option(
        None, "--ref", help="Fitted MMD reference (evaluation mode)"
    ),
    split: Optional[str] = typer.Option(
        None, "--split", help="Only rows of this split (evaluation mode)"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Reference subsampling seed"),
    jobs: Optional[int] = JobsOpt,
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """
    Extract features for every image of a manifest.

    Without --scaler/--ref, writes raw features (MMD column empty) and fits
    scaler.json and ref.json next to the output from the training split.
    With them, writes standardized 51-dim features.
    """
    config, level = _setup(config_path, verbose, quiet)
    if (scaler_path is None) != (ref_path is None):
        raise typer.BadParameter("--scaler and --ref must be given together", param_hint="--scaler")

    with _runtime_errors():
        from featurelens.features.pipeline import load_reference, load_scaler

        rows, raw50 = _extract_raw(_manifest_path(manifest), config, jobs, level)
        if scaler_path is None:
            _fit_and_write_raw(
                rows,
                raw50,
                out,
                out.parent / "scaler.json",
                out.parent / "ref.json",
                seed if seed is not None else config.seed,
                config,
            )
            emit(
                level,
                VerbosityLevel.BASIC,
                f"[green]✓ Raw features → {out}; scaler.json, ref.json fitted[/green]",
            )
        else:
            count = _write_standardized(
                rows, raw50, load_scaler(scaler_path), load_reference(ref_path), out, split
            )
            emit(level, VerbosityLevel.BASIC, f"[green]✓ {count} standardized rows → {out}[/green]")


@app.command()
def fit(
    features_csv: Path = typer.Option(..., "--features", help="Standardized training features"),
    valid: Optional[Path] = typer.Option(None, "--valid", help="Standardized validation features"),
    model_kind: str = typer.Option("gbt", "--model", help="svm | mlp | gbt"),
    out: Path = typer.Option(..., "--out", help="Model JSON to write"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Training seed (default: config)"),
    mask: Optional[Path] = typer.Option(None, "--mask", help="Feature mask CSV"),
    scaler_path: Optional[Path] = typer.Option(None, "--scaler", help="Scaler to embed in the model"),
    ref_path: Optional[Path] = typer.Option(None, "--ref", help="MMD reference to embed in the model"),
    svm_c: Optional[float] = typer.Option(None, "--svm-c", help="SVM box constraint"),
    svm_gamma: Optional[float] = typer.Option(None, "--svm-gamma", help="SVM kernel width"),
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """Train one detector on a feature CSV."""
    _check_choice(model_kind, DETECTOR_KINDS, "--model")
    config, level = _setup(config_path, verbose, quiet)
    overrides = {}
    if svm_c is not None:
        overrides["svm_c"] = svm_c
    if svm_gamma is not None:
        overrides["svm_gamma"] = svm_gamma

    with _runtime_errors():
        if overrides:
            config = Config.model_validate({**config.model_dump(), **overrides})
        model = _fit(
            features_csv,
            valid,
            model_kind,
            out,
            seed if seed is not None else config.seed,
            mask,
            scaler_path,
            ref_path,
            config,
            level,
        )
    emit(
        level,
        VerbosityLevel.BASIC,
        f"[green]✓ {model.kind} model ({model.input_dim} features, "
        f"{model.parameter_count()} parameters) → {out}[/green]",
    )


@app.command(name="eval")
def eval_cmd(
    features_csv: Path = typer.Option(..., "--features", help="Standardized test features"),
    model_path: Path = typer.Option(..., "--model", help="Model JSON"),
    report: Path = typer.Option(..., "--report", help="Report JSON to write"),
    roc: Path = typer.Option(..., "--roc", help="ROC CSV to write"),
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
):
    """Score a feature CSV and write the metrics report and ROC curve."""
    level = 0 if quiet else normalize_verbose(verbose)
    with _runtime_errors():
        result = _eval(features_csv, model_path, report, roc)
    if level >= VerbosityLevel.BASIC:
        console.print(_report_panel("Evaluation", result))


@app.command()
def score(
    images: List[Path] = typer.Argument(..., help="Image files (PNG, JPEG, BMP or raw)"),
    model_path: Path = typer.Option(..., "--model", help="Model JSON with embedded artifacts"),
    out: Optional[Path] = typer.Option(None, "--out", help="Scores CSV to write"),
    threshold: float = typer.Option(0.5, "--threshold", help="Adversarial when score ≥ threshold"),
    jobs: Optional[int] = JobsOpt,
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """
    Score image files with a trained model.

    The model must carry the scaler and MMD reference it was fitted against
    (``fit --scaler ... --ref ...``).

    Example:
        featurelens score suspect.png --model runs/sign/model.json --out scores.csv
    """
    config, level = _setup(config_path, verbose, quiet)
    with _runtime_errors():
        import pandas as pd

        from featurelens.core.tables import write_table
        from featurelens.detectors.base import score_images
        from featurelens.detectors.persistence import load_model

        model = load_model(model_path)
        scores = score_images(model, images, config, jobs)
        frame = pd.DataFrame(
            {
                "path": [str(p) for p in images],
                "score": scores,
                "adversarial": (scores >= threshold).astype(np.int64),
            }
        )
        if out is not None:
            write_table(frame, out)

    if level >= VerbosityLevel.BASIC:
        table = Table(title=f"Scores ({model.kind})")
        table.add_column("image")
        table.add_column("score", justify="right")
        table.add_column("verdict")
        for path, s, flag in frame.itertuples(index=False, name=None):
            verdict = "[red]adversarial[/red]" if flag else "[green]clean[/green]"
            table.add_row(path, f"{s:.4f}", verdict)
        console.print(table)


@app.command(name="cross-eval")
def cross_eval(
    benchmarks: str = typer.Option(
        ..., "--benchmarks", help="Comma-separated manifests or benchmark directories"
    ),
    model_kind: str = typer.Option("gbt", "--model-kind", help="svm | mlp | gbt"),
    out: Path = typer.Option(..., "--out", help="Matrix CSV to write"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Training seed (default: config)"),
    hybrid_train: bool = typer.Option(
        False, "--hybrid-train", help="Add a row trained on every benchmark"
    ),
    jobs: Optional[int] = JobsOpt,
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """Train on each benchmark and test on every other one."""
    from featurelens.analysis.protocols import (
        EXCLUDED,
        HYBRID,
        cross_evaluate,
        load_benchmark,
        write_matrix_csv,
    )

    config, level = _setup(config_path, verbose, quiet)
    sources = [Path(s.strip()) for s in benchmarks.split(",") if s.strip()]
    if len(sources) < 2:
        raise typer.BadParameter("need at least two benchmarks", param_hint="--benchmarks")
    _check_choice(model_kind, DETECTOR_KINDS, "--model-kind")

    with _runtime_errors():
        loaded = {}
        for source in sources:
            manifest = _manifest_path(source)
            name = source.name if source.is_dir() else manifest.parent.name
            if name in loaded:
                name = f"{name}_{len(loaded)}"
            loaded[name] = load_benchmark(manifest, name, config, jobs, level)
        matrix = cross_evaluate(
            loaded,
            model_kind,
            seed if seed is not None else config.seed,
            config,
            hybrid_train=hybrid_train,
            verbose=level,
        )
        write_matrix_csv(matrix, out)

    if level >= VerbosityLevel.BASIC:
        table = Table(title=f"Cross-evaluation accuracy ({model_kind})")
        table.add_column("train \\ test")
        for name in matrix.benchmarks + [HYBRID]:
            table.add_column(name, justify="right")
        table.add_column("mean ± std", justify="right")
        for train_name in matrix.train_rows:
            cells = matrix.cells[train_name]
            row: List[str] = [train_name]
            for name in matrix.benchmarks + [HYBRID]:
                if name == train_name:
                    row.append(EXCLUDED)
                else:
                    row.append(f"{cells[name].accuracy:.4f}" if name in cells else "")
            mean, std = matrix.row_stats(train_name)
            row.append(f"{mean:.4f} ± {std:.4f}")
            table.add_row(*row)
        console.print(table)


@app.command()
def explain(
    model_path: Path = typer.Option(..., "--model", help="Model JSON"),
    features_csv: Path = typer.Option(..., "--features", help="Standardized features with labels"),
    repeats: Optional[int] = typer.Option(None, "--repeats", help="Shuffles per feature"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Shuffle seed"),
    out: Path = typer.Option(..., "--out", help="Importance CSV to write"),
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """Write gain, cover, weight and permutation importance per feature."""
    from featurelens.analysis.attribution import explain as explain_model
    from featurelens.analysis.attribution import write_importance_csv
    from featurelens.detectors.base import select_features
    from featurelens.detectors.gbt import GbtParams
    from featurelens.detectors.persistence import load_model
    from featurelens.features.pipeline import read_feature_csv

    config, level = _setup(config_path, verbose, quiet)
    with _runtime_errors():
        model = load_model(model_path)
        table = read_feature_csv(features_csv)
        result = explain_model(
            model,
            select_features(model, table.X),
            table.labels,
            repeats if repeats is not None else config.permutation_repeats,
            seed if seed is not None else config.seed,
        )
        write_importance_csv(result, out)

    if not isinstance(model.params, GbtParams):
        emit(
            level,
            VerbosityLevel.BASIC,
            f"[yellow]{model.kind} model: gain/cover/weight left empty, permutation only[/yellow]",
        )
    if level >= VerbosityLevel.DETAIL:
        order = result.sort_order()[:10]
        key = result.gain if result.gain is not None else result.perm_auc_drop
        top = "\n".join(f"{result.names[i]}: {key[i]:.4g}" for i in order)
        console.print(Panel.fit(top, title="Top features", border_style="cyan"))
    emit(level, VerbosityLevel.BASIC, f"[green]✓ Importances → {out}[/green]")


@app.command()
def reduce(
    importances: Path = typer.Option(..., "--importances", help="Importance CSV from explain"),
    k: Optional[int] = typer.Option(None, "--k", help="Features to keep (default: config)"),
    column: str = typer.Option("gain", "--column", help="Importance column to rank by"),
    out: Path = typer.Option(..., "--out", help="Mask CSV to write"),
    config_path: Optional[Path] = ConfigOpt,
):
    """Turn an importance CSV into a top-k feature mask."""
    from featurelens.analysis.attribution import read_importance_csv, reduce_features, write_mask_csv

    config = load_config(custom_path=config_path)
    with _runtime_errors():
        values = read_importance_csv(importances, column)
        if np.all(np.isnan(values)):
            raise ValueError(f"column {column!r} is empty in {importances}")
        mask = reduce_features(values, k if k is not None else config.reduced_dims)
        write_mask_csv(mask, out)
    console.print(f"[green]✓ Kept {sum(mask)} of {len(mask)} features → {out}[/green]")


@app.command()
def separability(
    features_csv: Path = typer.Option(..., "--features", help="Feature CSV (raw or standardized)"),
    pairs: int = typer.Option(1000, "--pairs", help="Random clean/adversarial pairs"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Pair sampling seed"),
    out: Path = typer.Option(..., "--out", help="Per-pair diagnostic CSV"),
    config_path: Optional[Path] = ConfigOpt,
):
    """Check the pairwise separator and report the dataset separation ratio."""
    from featurelens.analysis.separability import pair_diagnostics, separation_ratio, write_pair_csv
    from featurelens.features.pipeline import read_feature_csv

    config = load_config(custom_path=config_path)
    seed = seed if seed is not None else config.seed
    with _runtime_errors():
        table = read_feature_csv(features_csv)
        # raw CSVs leave the MMD column empty
        X = table.X if np.all(np.isfinite(table.X)) else table.X[:, :N_STRUCTURAL]
        diagnostics = pair_diagnostics(X, table.labels, pairs, seed)
        ratio = separation_ratio(X, table.labels, pairs, seed)
        write_pair_csv(diagnostics, out)

    separated = sum(1 for d in diagnostics if d.f_clean < 0.0 < d.f_adv)
    console.print(
        Panel.fit(
            f"[bold cyan]Pairs separated:[/bold cyan] {separated}/{len(diagnostics)}\n"
            f"[bold cyan]Separation ratio:[/bold cyan] {ratio:.4f}",
            title="Separability",
            border_style="green",
        )
    )


@app.command()
def run(
    out: Path = typer.Option(..., "--out", help="Working directory for every artifact"),
    attack: str = typer.Option("sign", "--attack", help="sign | iterative | bandpass"),
    n: int = typer.Option(1200, "--n", help="Number of images (even)"),
    kind: str = typer.Option("mixed", "--kind", help="Clean image kind"),
    model_kind: str = typer.Option("gbt", "--model", help="svm | mlp | gbt"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Per-pixel budget (default: config)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed (default: config)"),
    size: Optional[int] = typer.Option(None, "--size", help="Image side (default: canonical size)"),
    jobs: Optional[int] = JobsOpt,
    verbose: int = VerboseOpt,
    quiet: bool = QuietOpt,
    config_path: Optional[Path] = ConfigOpt,
):
    """
    One-shot pipeline: synth → extract → fit → eval.

    Example:
        featurelens run --out work --attack sign --n 1200 --seed 42 --model gbt
    """
    _check_choice(attack, ATTACKS, "--attack")
    _check_choice(kind, SYNTH_KINDS, "--kind")
    _check_choice(model_kind, DETECTOR_KINDS, "--model")
    config, level = _setup(config_path, verbose, quiet)
    seed = seed if seed is not None else config.seed
    spec = _synth_spec(
        n,
        kind,
        attack,
        eps if eps is not None else config.attack_epsilon,
        seed,
        size if size is not None else config.canonical_size,
    )
    with _runtime_errors():
        bench = out / "bench"
        _synth(spec, bench, jobs if jobs is not None else config.jobs, level)
        rows, raw50 = _extract_raw(bench / "manifest.csv", config, jobs, level)
        scaler, reference = _fit_and_write_raw(
            rows, raw50, out / "features_raw.csv", out / "scaler.json", out / "ref.json", seed, config
        )
        for split in ("train", "valid", "test"):
            _write_standardized(rows, raw50, scaler, reference, out / f"{split}.csv", split)
        model = _fit(
            out / "train.csv",
            out / "valid.csv",
            model_kind,
            out / "model.json",
            seed,
            None,
            out / "scaler.json",
            out / "ref.json",
            config,
            level,
        )
        result = _eval(out / "test.csv", out / "model.json", out / "report.json", out / "roc.csv")

    if level >= VerbosityLevel.BASIC:
        console.print(
            _report_panel(f"{model.kind} on {attack} ({model.parameter_count()} parameters)", result)
        )


def main() -> None:
    app()


if __name__ == "__main__":
    main()
