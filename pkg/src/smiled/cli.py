"""Command-line interface.

Exit codes: 0 success, 2 usage errors, 3 data errors, 4 numerical
errors.  Failures print one line to stderr: ``error: <Category>: <what>``.
Machine-readable output goes to the paths named by flags; stdout carries
human-readable summaries.  Report-writing commands also render a figure
next to their output unless ``--no-figures`` is given.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import errors as err
from .curation import curate, length_cutoff_analysis
from .evalsuite import dump_embeddings, generate_families, generation_metrics, latent_space_study
from .model import load_checkpoint, save_checkpoint
from .moe import load_ensemble, moe_finetune, save_gating
from .nn import Tensor, grad_check, seeded_rng
from .runconfig import ConfigError, RunConfig, echo_config, load_run_config
from .tokenizer import Vocabulary, build_vocab, tokenize
from .training import (
    CLASSIFY,
    LATENT,
    MEAN_POOL,
    FinetuneConfig,
    MaskingPolicy,
    OptimizerSettings,
    PretrainSchedule,
    embed,
    encode_corpus,
    finetune_frozen,
    finetune_full,
    greedy_decode,
    pretrain,
    predict,
    rmse,
    roc_auc,
    write_loss_log,
)

USAGE_EXIT, DATA_EXIT, NUM_EXIT = 2, 3, 4


class NumericalFailure(err.SmiledError):
    pass


_USAGE_ERRORS = (ConfigError, err.KTooLarge, ValueError)
_DATA_ERRORS = (
    err.SmilesError,
    err.ValenceViolation,
    err.EmptyCorpus,
    err.TooLong,
    err.UnknownId,
    err.CorruptCheckpoint,
    err.ConfigMismatch,
    err.LabelShapeMismatch,
    err.EmptyInput,
    err.ShapeMismatch,
    FileNotFoundError,
    OSError,
)
_NUMERICAL_ERRORS = (err.DegenerateSystem, err.SingleClass, NumericalFailure)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _load_model(checkpoint, vocab_path):
    vocab = Vocabulary.load(vocab_path)
    params, config = load_checkpoint(checkpoint)
    if config.vocab_size != len(vocab):
        raise err.ConfigMismatch(
            f"checkpoint vocab size {config.vocab_size} != vocabulary file {len(vocab)}"
        )
    return params, config, vocab


def _limit_threads(n: int) -> None:
    if n <= 0:
        raise ConfigError("--threads must be positive")
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:
        pass  # plain numpy builds are already effectively single-threaded


# ---------------------------------------------------------------------------
# subcommands


def cmd_curate(args) -> int:
    with open(args.infile, encoding="utf-8") as src, open(args.out, "w", encoding="utf-8") as dst:
        report = curate(src, dst)
    payload = json.loads(report.to_json())
    print(report.to_text())
    if args.cutoff:
        fraction = length_cutoff_analysis(_read_lines(args.out), args.cutoff)
        payload["length_cutoff"] = {"max_len": args.cutoff, "fraction_under": fraction}
        print(f"length_fraction_under_{args.cutoff}={fraction}")
    Path(args.report).write_text(json.dumps(payload, indent=2) + "\n")
    if args.figures and report.token_length_histogram:
        from .plotting import plot_length_histogram

        figure = args.figure or str(Path(args.report).with_suffix("")) + "_lengths.png"
        plot_length_histogram(report.token_length_histogram, figure)
        print(f"figure: {figure}")
    return 0


def cmd_build_vocab(args) -> int:
    vocab = build_vocab(_read_lines(args.infile))
    vocab.save(args.out)
    print(f"vocabulary: {len(vocab)} tokens ({args.out})")
    return 0


def cmd_tokenize(args) -> int:
    lines = [args.smiles] if args.smiles else _read_lines(args.infile)
    rows = [" ".join(tokenize(line).tokens) for line in lines]
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n")
        print(f"tokenized {len(rows)} lines -> {args.out}")
    else:
        for row in rows:
            print(row)
    return 0


def cmd_pretrain(args) -> int:
    cfg = load_run_config(args.config, args.profile)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo_config(cfg, out_dir)

    lines = _read_lines(args.corpus)
    vocab = Vocabulary.load(args.vocab)
    model_cfg = cfg.model_config(len(vocab))
    sequences = encode_corpus(lines, vocab, model_cfg.max_len)
    schedule = PretrainSchedule(cfg.phase1_epochs, cfg.phase2_epochs)
    opt = OptimizerSettings(lr=cfg.lr, batch_size=cfg.batch_size)
    policy = MaskingPolicy(
        select_frac=cfg.select_frac,
        mask_frac=cfg.mask_frac,
        random_frac=cfg.random_frac,
        keep_frac=cfg.keep_frac,
    )
    max_steps = args.steps or (cfg.max_steps or None)
    params, log = pretrain(
        sequences, model_cfg, schedule, opt, seed=args.seed,
        policy=policy, max_steps=max_steps,
    )
    save_checkpoint(params, model_cfg, out_dir / "checkpoint.ckpt")
    write_loss_log(log, out_dir / "loss_log.csv")
    if args.figures and log:
        from .plotting import plot_loss_curve

        plot_loss_curve(log, out_dir / "loss_curve.png")
    print(
        f"pretrained {len(lines)} molecules for {log[-1].step if log else 0} steps; "
        f"outputs in {out_dir}"
    )
    return 0


def cmd_embed(args) -> int:
    params, config, vocab = _load_model(args.checkpoint, args.vocab)
    lines = _read_lines(args.infile)
    dump_embeddings(lines, params, config, vocab, args.out, mode=args.mode)
    print(f"embedded {len(lines)} molecules ({args.mode}) -> {args.out}")
    return 0


def cmd_decode(args) -> int:
    params, config, vocab = _load_model(args.checkpoint, args.vocab)
    decoded = []
    with open(args.infile, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        vec_cols = [i for i, name in enumerate(header) if name.startswith("e")]
        if len(vec_cols) != config.hidden:
            raise err.ConfigMismatch(
                f"{args.infile}: {len(vec_cols)} vector columns, expected {config.hidden}"
            )
        for row in reader:
            z = np.array([float(row[i]) for i in vec_cols])
            decoded.append(greedy_decode(z, params, config, vocab))
    Path(args.out).write_text("\n".join(decoded) + "\n")
    print(f"decoded {len(decoded)} vectors -> {args.out}")
    return 0


def cmd_finetune(args) -> int:
    cfg = load_run_config(args.config, args.profile)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo_config(cfg, out_dir)
    params, config, vocab = _load_model(args.checkpoint, args.vocab)

    smiles, labels = _read_labeled_csv(args.data, args.target)
    task = args.task
    fte = FinetuneConfig(
        lr=cfg.finetune_lr, batch_size=cfg.finetune_batch,
        epochs=args.epochs or cfg.finetune_epochs,
    )
    rng = seeded_rng(args.seed)
    if args.mode == "frozen":
        features = np.stack(
            [embed(s, params, config, vocab, mode=args.embedding) for s in smiles]
        )
        head, history = finetune_frozen(features, labels, task, fte, rng)
    else:
        head, params, history = finetune_full(
            smiles, labels, task, fte, params, config, vocab, rng, mode=args.embedding
        )
        save_checkpoint(params, config, out_dir / "model.ckpt")
    save_checkpoint(head, config, out_dir / "head.ckpt")
    summary = {"task": task, "mode": args.mode, "final_loss": history[-1]}
    features = np.stack(
        [embed(s, params, config, vocab, mode=args.embedding) for s in smiles]
    )
    scores = predict(features, head, task)
    if task == CLASSIFY:
        if scores.ndim == 1 and len(set(labels.tolist())) == 2:
            summary["train_roc_auc"] = roc_auc(scores, labels.astype(int))
    else:
        summary["train_rmse"] = rmse(scores, labels)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return 0


def cmd_moe_finetune(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ensemble = load_ensemble(args.manifest)
    vocab = Vocabulary.load(args.vocab)
    if ensemble.config.vocab_size != len(vocab):
        raise err.ConfigMismatch(
            f"ensemble vocab size {ensemble.config.vocab_size} != {len(vocab)}"
        )
    smiles, labels = _read_labeled_csv(args.data, args.target)
    fte = FinetuneConfig(epochs=args.epochs or 200, lr=args.lr)
    wg, head, history = moe_finetune(
        smiles, labels, ensemble, vocab, args.task, fte, seed=args.seed
    )
    save_gating(wg, ensemble.config, out_dir / "gating.ckpt")
    save_checkpoint(head, ensemble.config, out_dir / "head.ckpt")
    summary = {
        "task": args.task,
        "n_experts": ensemble.n,
        "k": ensemble.k,
        "final_loss": history[-1],
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return 0


def cmd_eval_latent(args) -> int:
    params, config, vocab = _load_model(args.checkpoint, args.vocab)
    modes = [LATENT, MEAN_POOL] if args.mode == "both" else [args.mode]
    report = latent_space_study(params, config, vocab, seed=args.seed, modes=modes)
    Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    for mode, block in report["modes"].items():
        print(
            f"{mode}: R^2={block['r_squared']:.4f}  MSE={block['mse']:.6f}  "
            f"mean TS={block['mean_tanimoto']:.4f}"
        )
    if args.embeddings_csv:
        molecules, _ = generate_families()
        dump_embeddings(molecules, params, config, vocab, args.embeddings_csv, mode=modes[0])
    if args.figures:
        from .plotting import plot_metric_bars

        bars = {}
        for mode, block in report["modes"].items():
            bars[f"{mode} R^2"] = max(block["r_squared"], 0.0)
            bars[f"{mode} TS"] = block["mean_tanimoto"]
        figure = args.figure or str(Path(args.out).with_suffix("")) + "_scores.png"
        plot_metric_bars(bars, figure)
        print(f"figure: {figure}")
    return 0


def cmd_gen_metrics(args) -> int:
    generated = _read_lines(args.generated)
    reference = _read_lines(args.reference)
    metrics = generation_metrics(generated, reference)
    Path(args.out).write_text(json.dumps(metrics, indent=2) + "\n")
    width = max(len(k) for k in metrics)
    for key, value in metrics.items():
        print(f"{key:<{width}}  {value:.4f}")
    if args.figures:
        from .plotting import plot_metric_bars

        figure = args.figure or str(Path(args.out).with_suffix("")) + "_bars.png"
        plot_metric_bars(metrics, figure)
        print(f"figure: {figure}")
    return 0


def cmd_grad_check(args) -> int:
    from .nn import (
        cross_entropy,
        gelu,
        layernorm,
        matmul,
        mse,
        mul,
        softmax,
        tensor_sum,
    )

    rng = seeded_rng(args.seed)
    worst = 0.0
    cases = []
    for case in range(args.cases):
        x = Tensor(rng.standard_normal((3, 4)))
        cases.append(("sum(x*x)", grad_check(lambda t: tensor_sum(mul(t, t)), x)))
        x = Tensor(rng.standard_normal((4, 5)))
        t_idx = rng.integers(0, 5, size=(4,))
        cases.append(
            ("softmax+cross_entropy", grad_check(lambda t: cross_entropy(t, t_idx), x))
        )
        g = Tensor(np.ones(6), requires_grad=True)
        b = Tensor(np.zeros(6), requires_grad=True)
        w = Tensor(rng.standard_normal((6, 2)))
        target = rng.standard_normal((5, 2))
        x = Tensor(rng.standard_normal((5, 6)))
        cases.append(
            (
                "layernorm>matmul>mse",
                grad_check(lambda t: mse(matmul(layernorm(gelu(t), g, b), w), Tensor(target)), x),
            )
        )
    for name, error in cases:
        worst = max(worst, error)
    print(f"grad-check: {len(cases)} cases, max relative error {worst:.3e}")
    if worst >= args.tolerance:
        raise NumericalFailure(
            f"gradient check failed: {worst:.3e} >= {args.tolerance:.1e}"
        )
    return 0


def _read_labeled_csv(path, target: str) -> tuple[list[str], np.ndarray]:
    smiles, labels = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "smiles" not in reader.fieldnames:
            raise err.LabelShapeMismatch(f"{path}: missing 'smiles' column")
        if target not in reader.fieldnames:
            raise err.LabelShapeMismatch(f"{path}: missing target column {target!r}")
        for row in reader:
            smiles.append(row["smiles"])
            labels.append(float(row[target]))
    return smiles, np.asarray(labels)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smiled",
        description="SMILES encoder-decoder language model pipelines",
    )
    parser.add_argument("--threads", type=int, default=1, help="BLAS thread cap")
    sub = parser.add_subparsers(dest="command", required=True)

    def figures_flags(p, default_name):
        p.add_argument(
            "--figures",
            action=argparse.BooleanOptionalAction,
            default=True,
            help="render a figure next to the output",
        )
        p.add_argument("--figure", help=f"figure path (default: {default_name})")

    p = sub.add_parser("curate", help="canonicalize, validate, deduplicate a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", required=True, help="JSON report path")
    p.add_argument("--cutoff", type=int, help="also report the framed-length fraction under this cap")
    figures_flags(p, "<report>_lengths.png")
    p.set_defaults(func=cmd_curate)

    p = sub.add_parser("build-vocab", help="build a vocabulary TSV from a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("tokenize", help="tokenize SMILES lines")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--in", dest="infile")
    group.add_argument("--smiles")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("pretrain", help="two-phase masked-LM pre-training")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--profile", default="desk", choices=("desk", "paper-fidelity"))
    p.add_argument("--steps", type=int, help="hard step cap")
    p.add_argument(
        "--figures", action=argparse.BooleanOptionalAction, default=True
    )
    p.set_defaults(func=cmd_pretrain)

    p = sub.add_parser("embed", help="dump molecule embeddings to CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default=LATENT, choices=(LATENT, MEAN_POOL))
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("decode", help="greedy-decode embedding vectors to SMILES")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--in", dest="infile", required=True, help="CSV with e0..eL-1 columns")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("finetune", help="train a 2-layer task head")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--data", required=True, help="CSV with smiles + target columns")
    p.add_argument("--target", required=True)
    p.add_argument("--task", required=True, choices=("classify", "regress"))
    p.add_argument("--mode", default="frozen", choices=("frozen", "full"))
    p.add_argument("--embedding", default=LATENT, choices=(LATENT, MEAN_POOL))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--profile", default="desk", choices=("desk", "paper-fidelity"))
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("moe-finetune", help="train top-k gating over frozen experts")
    p.add_argument("--manifest", required=True, help="expert ensemble JSON")
    p.add_argument("--vocab", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--task", required=True, choices=("classify", "regress"))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float, default=1e-2)
    p.set_defaults(func=cmd_moe_finetune)

    p = sub.add_parser("eval-latent", help="latent-space compositionality study")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--mode", default="both", choices=("both", LATENT, MEAN_POOL))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embeddings-csv", help="also dump the 60 family embeddings")
    figures_flags(p, "<out>_scores.png")
    p.set_defaults(func=cmd_eval_latent)

    p = sub.add_parser("gen-metrics", help="generation quality metrics")
    p.add_argument("--generated", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--out", required=True, help="JSON report path")
    figures_flags(p, "<out>_bars.png")
    p.set_defaults(func=cmd_gen_metrics)

    p = sub.add_parser("grad-check", help="finite-difference gradient verification")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=7)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.set_defaults(func=cmd_grad_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _limit_threads(args.threads)
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: NumericalError: {exc}", file=sys.stderr)
        return NUM_EXIT
    except _DATA_ERRORS as exc:
        print(f"error: DataError: {exc}", file=sys.stderr)
        return DATA_EXIT
    except _USAGE_ERRORS as exc:
        print(f"error: UsageError: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
