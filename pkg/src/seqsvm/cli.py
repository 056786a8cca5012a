"""Pipeline orchestration: dataset in, artifacts and reports out.

Every stage persists its result as JSON (or line text for HDL and vectors),
so stages can be re-run independently and byte-identically. Artifacts embed
the config hash and seed; nothing else varies between runs, so reruns with
the same config produce identical bytes.

Exit codes: 0 success, 1 usage, 2 stage failure.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import modelio
from .archsim import ArchConfig, compile_storage, simulate, simulate_batch, trace_to_text
from .cost import TechConfig, compare_parallel, compare_storage, estimate, format_report_table, load_tech, report_to_dict
from .dataset import Dataset, SplitSpec, load_csv, split
from .ddag import build_ddag, ddag_predict_float, ddag_predict_quant
from .fxp import FxpFormat
from .hdlgen import emit_golden_vectors, generate, write_bundle
from .quant import quantize_inputs, search_param_bits
from .trainer import Hyper, accuracy, random_search, train_ova, train_ovo


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage} failed: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


# ---------------------------------------------------------------------------
# Pipeline phases (shared by `run` and the individual subcommands)
# ---------------------------------------------------------------------------


def _ingest(config: dict) -> tuple[Dataset, Dataset]:
    ds = load_csv(config["dataset"], config["label_column"])
    return split(ds, SplitSpec(config["train_fraction"], config["seed"]))


def _input_fmt(config: dict) -> FxpFormat:
    bits = config["input_bits"]
    return FxpFormat(total_bits=bits, frac_bits=bits, signed=False)


def _train_phase(config: dict, out: Path) -> dict:
    train, test = _ingest(config)
    hyper = random_search(train, budget=config["budget"], seed=config["seed"])
    model = train_ovo(train, hyper)
    doc = {
        "format": modelio.FORMAT,
        "version": modelio.VERSION,
        "seed": config["seed"],
        "config": config,
        "config_hash": modelio.config_hash(config),
        "dataset": {
            "label_names": train.label_names,
            "feature_names": train.feature_names,
            "normalization": [list(pair) for pair in train.normalization],
            "split": {"train_fraction": config["train_fraction"], "seed": config["seed"]},
        },
        "hyper": {"lam": hyper.lam, "epochs": hyper.epochs, "seed": hyper.seed},
        "float_model": modelio.float_model_to_dict(model),
    }
    out.mkdir(parents=True, exist_ok=True)
    modelio.save_model_doc(out / "float_model.json", doc)
    print(f"trained OvO model: {model.n_classes} classes, {len(model.vectors)} vectors "
          f"(lam={hyper.lam:.5g}, epochs={hyper.epochs})")
    return doc


def _quantize_phase(doc: dict, config: dict, out: Path) -> dict:
    train, test = _ingest(config)
    fmodel = modelio.float_model_from_dict(doc["float_model"])
    dag = build_ddag(fmodel.n_classes)
    qm, report = search_param_bits(
        fmodel, train, test, _input_fmt(config), config["max_param_bits"], dag
    )
    doc = dict(doc)
    doc["config"] = config
    doc["config_hash"] = modelio.config_hash(config)
    doc["quantized"] = modelio.quantized_to_dict(qm)
    doc["ddag"] = modelio.ddag_to_dict(dag)
    modelio.save_model_doc(out / "model.json", doc)
    modelio.save_model_doc(
        out / "quant_report.json",
        {
            "config_hash": doc["config_hash"],
            "seed": doc["seed"],
            "param_bits": report.param_bits,
            "float_accuracy": report.float_accuracy,
            "quantized_accuracy": report.quantized_accuracy,
            "accuracy_drop": report.accuracy_drop,
            "acc_width": report.acc_width,
            "partial_min": report.partial_min,
            "partial_max": report.partial_max,
            "max_precision_flag": report.max_precision_flag,
        },
    )
    print(f"quantized to {report.param_bits}-bit parameters "
          f"(float {report.float_accuracy:.4f} -> quant {report.quantized_accuracy:.4f}, "
          f"acc_width={report.acc_width}"
          + (", max-precision flag" if report.max_precision_flag else "") + ")")
    return doc


def _model_parts(doc: dict):
    fmodel = modelio.float_model_from_dict(doc["float_model"])
    qm = modelio.quantized_from_dict(doc["quantized"], fmodel.n_classes, fmodel.n_features)
    dag = modelio.ddag_from_dict(doc["ddag"])
    return fmodel, qm, dag


def _simulate_phase(doc: dict, config: dict, out: Path, trace_n: int, storage_kind: str) -> dict:
    _, test = _ingest(config)
    _, qm, dag = _model_parts(doc)
    storage = compile_storage(qm, ArchConfig(storage_kind))
    codes = quantize_inputs(test, qm.input_fmt)
    batch = simulate_batch(qm, dag, storage, codes, test.labels)
    sim_report = {
        "config_hash": doc["config_hash"],
        "seed": doc["seed"],
        "storage": storage_kind,
        "accuracy": batch.accuracy,
        "overflows": batch.overflows,
        "mean_cycles": batch.mean_cycles,
        "n_test": int(len(test.labels)),
    }
    modelio.save_model_doc(out / "sim_report.json", sim_report)
    if trace_n > 0:
        trace_dir = out / "traces"
        trace_dir.mkdir(parents=True, exist_ok=True)
        for i, row in enumerate(codes[:trace_n]):
            _, trace = simulate(qm, dag, storage, row, record=True)
            (trace_dir / f"trace_{i:03d}.txt").write_text(trace_to_text(trace))
    print(f"simulated {sim_report['n_test']} samples: accuracy {batch.accuracy:.4f}, "
          f"{batch.overflows} overflows, {batch.mean_cycles:.0f} cycles each")
    return sim_report


def _hdl_phase(doc: dict, config: dict, out: Path, storage_kind: str, n_vectors: int) -> None:
    _, test = _ingest(config)
    _, qm, dag = _model_parts(doc)
    arch = ArchConfig(storage_kind)
    storage = compile_storage(qm, arch)
    bundle = generate(qm, dag, arch)
    codes = quantize_inputs(test, qm.input_fmt)
    stim, expect, vectors = emit_golden_vectors(qm, dag, storage, codes, n_vectors)
    bundle.golden_vectors = vectors
    hdl_dir = out / "hdl"
    write_bundle(bundle, hdl_dir)
    (hdl_dir / "vectors.stim").write_text(stim)
    (hdl_dir / "vectors.expect").write_text(expect)
    print(f"wrote HDL bundle and {len(vectors)} golden vectors to {hdl_dir}")


def _cost_phase(doc: dict, out: Path, storage_kind: str, tech: TechConfig) -> dict:
    _, qm, dag = _model_parts(doc)
    both = compare_storage(qm, dag, tech)
    parallel = compare_parallel(qm, tech)
    chosen = both[storage_kind]
    report = report_to_dict(chosen)
    report["config_hash"] = doc["config_hash"]
    report["seed"] = doc["seed"]
    modelio.save_model_doc(out / "cost_report.json", report)
    table = format_report_table(
        [("seq-mux", both["mux"]), ("seq-rom", both["rom"]), ("parallel", parallel)]
    )
    print(table, end="")
    return report


def _summary(doc: dict, config: dict, sim_report: dict, cost_report: dict, out: Path) -> None:
    train, test = _ingest(config)
    fmodel, qm, dag = _model_parts(doc)
    vote_acc = accuracy(fmodel, test)
    float_ddag_acc = float(np.mean(ddag_predict_float(fmodel, dag, test.features) == test.labels))
    lines = [
        f"dataset      : {config['dataset']} ({fmodel.n_classes} classes, {fmodel.n_features} features)",
        f"accuracy     : vote {vote_acc:.4f} | ddag {float_ddag_acc:.4f} | quantized {sim_report['accuracy']:.4f}",
        f"quantization : {qm.param_bits}-bit params, {qm.acc_width}-bit accumulator",
        f"cycles       : {cost_report['latency_cycles']} per classification "
        f"({cost_report['latency_seconds']:.3f} s at {cost_report['f_clk']:.0f} Hz)",
        f"cost         : {cost_report['area_cm2']:.2f} cm2, {cost_report['power_mw']:.2f} mW "
        f"({cost_report['design']})",
    ]
    text = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(text)
    print(text, end="")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _pipeline_config(args) -> dict:
    return {
        "dataset": args.dataset,
        "label_column": args.label_col,
        "seed": args.seed,
        "train_fraction": args.split,
        "budget": args.budget,
    }


def _with_quant_keys(config: dict, args) -> dict:
    config = dict(config)
    config["input_bits"] = args.input_bits
    config["max_param_bits"] = args.max_param_bits
    return config


def _tech(args) -> TechConfig:
    return load_tech(args.tech) if args.tech else TechConfig()


def cmd_train(args) -> int:
    out = Path(args.out)
    with _stage("ingest"):
        _ingest(_pipeline_config(args))
    with _stage("train"):
        _train_phase(_pipeline_config(args), out)
    return 0


def cmd_quantize(args) -> int:
    out = Path(args.out)
    with _stage("quantize"):
        doc = modelio.load_model_doc(out / "float_model.json")
        config = _with_quant_keys(doc["config"], args)
        _quantize_phase(doc, config, out)
    return 0


def cmd_simulate(args) -> int:
    out = Path(args.out)
    with _stage("simulate"):
        doc = modelio.load_model_doc(out / "model.json")
        _simulate_phase(doc, doc["config"], out, args.trace, args.storage)
    return 0


def cmd_gen_hdl(args) -> int:
    out = Path(args.out)
    with _stage("gen-hdl"):
        doc = modelio.load_model_doc(out / "model.json")
        _hdl_phase(doc, doc["config"], out, args.storage, args.vectors)
    return 0


def cmd_cost(args) -> int:
    out = Path(args.out)
    with _stage("cost"):
        doc = modelio.load_model_doc(out / "model.json")
        _cost_phase(doc, out, args.storage, _tech(args))
    return 0


def cmd_compare(args) -> int:
    out = Path(args.out)
    with _stage("compare"):
        doc = modelio.load_model_doc(out / "model.json")
        config = doc["config"]
        train, test = _ingest(config)
        fmodel, qm, dag = _model_parts(doc)
        hyper = Hyper(**doc["hyper"])
        ova = train_ova(train, hyper)
        codes = quantize_inputs(test, qm.input_fmt)
        acc_rows = [
            ("ovo-vote (float)", accuracy(fmodel, test)),
            ("ovo-ddag (float)", float(np.mean(ddag_predict_float(fmodel, dag, test.features) == test.labels))),
            ("ovo-ddag (quant)", float(np.mean(ddag_predict_quant(qm, dag, codes) == test.labels))),
            ("ova      (float)", accuracy(ova, test)),
        ]
        print(f"accuracy on {len(test.labels)} test samples "
              f"({len(fmodel.vectors)} OvO vs {len(ova.vectors)} OvA vectors):")
        for name, acc in acc_rows:
            print(f"  {name}: {acc:.4f}")
        tech = _tech(args)
        seq = estimate(qm, dag, ArchConfig(args.storage), tech)
        par = compare_parallel(qm, tech)
        print(format_report_table([(f"seq-{args.storage}", seq), ("parallel", par)]), end="")
        print(f"parallel/sequential area ratio: {par.area_cm2 / seq.area_cm2:.2f}x")
        modelio.save_model_doc(
            out / "compare_report.json",
            {
                "config_hash": doc["config_hash"],
                "seed": doc["seed"],
                "accuracy": {name.strip(): acc for name, acc in acc_rows},
                "sequential": report_to_dict(seq),
                "parallel": report_to_dict(par),
            },
        )
    return 0


def cmd_run(args) -> int:
    out = Path(args.out)
    config = _pipeline_config(args)
    with _stage("ingest"):
        _ingest(config)
    with _stage("train"):
        doc = _train_phase(config, out)
    with _stage("quantize"):
        config = _with_quant_keys(config, args)
        doc = _quantize_phase(doc, config, out)
    with _stage("simulate"):
        sim_report = _simulate_phase(doc, config, out, args.trace, args.storage)
    with _stage("gen-hdl"):
        _hdl_phase(doc, config, out, args.storage, args.vectors)
    with _stage("cost"):
        cost_report = _cost_phase(doc, out, args.storage, _tech(args))
    with _stage("summary"):
        _summary(doc, config, sim_report, cost_report, out)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_dataset_flags(p):
    p.add_argument("--dataset", required=True, help="CSV file with a header row")
    p.add_argument("--label-col", default="label", help="name of the label column")
    p.add_argument("--seed", type=int, required=True, help="pipeline seed (mandatory)")
    p.add_argument("--split", type=float, default=0.8, help="training fraction")
    p.add_argument("--budget", type=int, default=8, help="random-search budget")


def _add_quant_flags(p):
    p.add_argument("--input-bits", type=int, default=4, help="unsigned input code width")
    p.add_argument("--max-param-bits", type=int, default=8, help="precision search ceiling")


def _add_storage_flag(p):
    p.add_argument("--storage", choices=("mux", "rom"), default="mux")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqsvm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline: train, quantize, simulate, gen-hdl, cost")
    _add_dataset_flags(p)
    _add_quant_flags(p)
    _add_storage_flag(p)
    p.add_argument("--tech", help="technology config file (key=value)")
    p.add_argument("--trace", type=int, default=0, metavar="N", help="write N per-cycle traces")
    p.add_argument("--vectors", type=int, default=20, help="golden vector count")
    p.add_argument("--out", required=True, help="artifact directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("train", help="train the float OvO model")
    _add_dataset_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("quantize", help="precision search + accumulator profiling")
    _add_quant_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("simulate", help="cycle-accurate batch simulation of the test split")
    _add_storage_flag(p)
    p.add_argument("--trace", type=int, default=0, metavar="N")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen-hdl", help="emit Verilog and golden vectors")
    _add_storage_flag(p)
    p.add_argument("--vectors", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_hdl)

    p = sub.add_parser("cost", help="area/power/latency estimation")
    _add_storage_flag(p)
    p.add_argument("--tech")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("compare", help="OvO-vs-OvA accuracy and sequential-vs-parallel cost")
    _add_storage_flag(p)
    p.add_argument("--tech")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"seqsvm: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
