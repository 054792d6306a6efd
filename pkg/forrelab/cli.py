"""
Command-line interface.

Every subcommand takes ``--seed``, ``--trials``, ``--profile`` and
``--event-log``. Exit status is 0 on success, 2 when an input violates a
precondition and 1 on any other failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from forrelab.agents.registry import AdversaryRef
from forrelab.core.config.settings import settings
from forrelab.core.errors import PreconditionError
from forrelab.core.bits import bits_to_int
from forrelab.services.ac0 import BlockMatrixShape, eq3_identity_check
from forrelab.services.crypto import key_exchange, ot_run
from forrelab.services.experiments import (
    CircuitRef,
    EventLog,
    ExperimentReport,
    GameKind,
    GameSpec,
    InvertMode,
    ResampleConfig,
    build_circuit,
    load_report,
    run_game,
    run_trials,
)
from forrelab.services.forrelation.decoder import calibrate_threshold
from forrelab.services.forrelation.samplers import SamplerKind
from forrelab.services.oracle_world import (
    REGION_F,
    BlockKey,
    OracleHandle,
    ScaleProfile,
    WorldKind,
    block_prefix,
    decode_bit,
    find_witness,
    load_profile,
    load_world,
    parse_block_prefix,
    resample_block,
    sample_world,
    save_world,
    world_digest,
)

logger = logging.getLogger(__name__)


def _profile(args) -> ScaleProfile:
    """--profile, with --kind / --n / --ell overrides where the subcommand has them."""
    base = load_profile(args.profile).model_dump()
    for field in ("kind", "n", "ell"):
        value = getattr(args, field, None)
        if value is not None:
            base[field] = value
    try:
        return ScaleProfile.model_validate(base)
    except ValueError as e:
        raise PreconditionError(f"invalid profile: {e}") from e


def _adversary(args) -> AdversaryRef:
    if getattr(args, "netlist", None):
        ref = AdversaryRef(kind="netlist", path=args.netlist, window=args.window or [])
    elif getattr(args, "external", None):
        ref = AdversaryRef(kind="external", command=args.external)
    else:
        ref = AdversaryRef(name=getattr(args, "adversary", "constant0"), address=getattr(args, "address", None))
    return ref.model_copy(update={
        "inverter": getattr(args, "inverter", "trivial"),
        "squaring": getattr(args, "squaring", False),
    })


def _spec(args, game: GameKind, **fields) -> GameSpec:
    try:
        return GameSpec(
            game=game,
            profile=_profile(args),
            adversary=_adversary(args),
            trials=args.trials,
            seed=args.seed,
            cap=getattr(args, "cap", None),
            repetitions=getattr(args, "repetitions", None),
            workers=args.workers,
            **fields,
        )
    except ValueError as e:
        raise PreconditionError(f"invalid experiment: {e}") from e


def _finish(args, report: ExperimentReport) -> int:
    print(report.summary())
    json_path, csv_path = report.write(args.out_dir or settings.report_dir)
    print(f"report: {json_path} {csv_path}")
    return 0


def _event_log(args) -> EventLog:
    return EventLog(args.event_log)


def cmd_sample_world(args) -> int:
    profile = _profile(args)
    world = sample_world(profile, args.seed)
    print(f"{profile.describe()} seed={args.seed} digest={world_digest(world)}")
    print(f"blocks: {profile.block_count}, encoded bits: {profile.encoded_bits}")
    if args.out:
        size = save_world(world, args.out)
        print(f"snapshot: {args.out} ({size} bytes)")
    return 0


def cmd_save(args) -> int:
    """Re-save a snapshot, optionally after replacing one slice's pattern."""
    world = load_world(args.world)
    if args.region:
        if args.row is None or args.pattern is None:
            raise PreconditionError("replacing a slice needs --row and --pattern")
        row = tuple(int(v) for v in args.row.split(","))
        world = resample_block(world, args.region, row, args.pattern, args.seed)
    size = save_world(world, args.out)
    print(f"snapshot: {args.out} ({size} bytes) digest={world_digest(world)}")
    return 0


def cmd_load(args) -> int:
    world = load_world(args.world)
    print(f"{world.profile.describe()} seed={world.seed} digest={world_digest(world)}")
    print(f"stored blocks: {len(world.stored)}")
    return 0


def cmd_decode(args) -> int:
    world = load_world(args.world)
    if world.profile.kind is WorldKind.PRF:
        n = world.profile.n
        if args.k is None or args.x is None or len(args.k) != n or len(args.x) != n:
            raise PreconditionError(f"PRF worlds decode with {n}-bit --k and --x")
        key = BlockKey(REGION_F, (bits_to_int(args.k),), bits_to_int(args.x))
    else:
        if args.region is None or args.row is None:
            raise PreconditionError("trapdoor worlds decode with --region, --row and --col")
        key = BlockKey(args.region, tuple(int(v) for v in args.row.split(",")), args.col)
        try:
            parsed = parse_block_prefix(world.profile, block_prefix(world.profile, key))
        except ValueError:
            parsed = None
        if parsed != key:
            raise PreconditionError(f"no block {key} in a {world.profile.describe()} world")
    repetitions = args.repetitions or settings.decode_repetitions
    bit = decode_bit(world, key, repetitions, seed=args.seed)
    plain = world.pattern_bit(key)
    print(f"decoded {bit} (plaintext {plain}, {'match' if bit == plain else 'MISMATCH'})")
    return 0


def cmd_calibrate(args) -> int:
    result = calibrate_threshold(args.ell, SamplerKind(args.sampler), args.trials, args.seed, progress=args.progress)
    print(f"ell={result.ell} sampler={result.sampler.value} samples={result.samples}")
    print(f"uniform     mean {result.uniform_mean:.6f} std {result.uniform_std:.6f}")
    print(f"forrelated  mean {result.forrelated_mean:.6f} std {result.forrelated_std:.6f}")
    print(f"threshold   {result.threshold:.6f} (configured {settings.decode_threshold})")
    return 0


def cmd_prf_game(args) -> int:
    game = GameKind.OWF_INVERT if args.owf else GameKind.PRF_DISTINGUISH
    spec = _spec(args, game, rigged=args.rigged)
    return _finish(args, run_game(spec, _event_log(args), args.progress))


def cmd_towf_game(args) -> int:
    game = GameKind.PK_PSEUDORANDOM if args.pk_pseudorandom else GameKind.TOWF_INVERT
    spec = _spec(args, game, mode=InvertMode(args.mode))
    return _finish(args, run_game(spec, _event_log(args), args.progress))


def cmd_resample(args) -> int:
    spec = _spec(args, GameKind.RESAMPLE, resample=ResampleConfig(args.config))
    return _finish(args, run_game(spec, _event_log(args), args.progress))


def _circuit_ref(args, num_inputs: int) -> CircuitRef:
    try:
        return CircuitRef(
            builder=args.builder,
            path=args.circuit,
            num_inputs=num_inputs,
            param=args.param,
            size=args.size,
            depth=args.depth,
            circuit_seed=args.seed,
        )
    except ValueError as e:
        raise PreconditionError(f"invalid circuit: {e}") from e


def cmd_sensitivity(args) -> int:
    spec = _spec(args, GameKind.SENSITIVITY_TAIL, circuit=_circuit_ref(args, args.inputs), t=args.t)
    return _finish(args, run_game(spec, _event_log(args)))


def cmd_gw_check(args) -> int:
    shape = BlockMatrixShape(args.K, args.M)
    circuit = build_circuit(_circuit_ref(args, shape.size))
    result = eq3_identity_check(circuit, shape)
    verdict = "PASS" if result.passed else "FAIL"
    print(f"Eq(3) identity: {verdict}")
    print(f"inputs checked: {result.inputs_checked}, max |lhs - rhs|: {result.max_abs_error:.3g}")
    return 0 if result.passed else 1


def cmd_np_demo(args) -> int:
    world = load_world(args.world)
    try:
        text = Path(args.target).read_text(encoding="utf-8")
    except OSError as e:
        raise PreconditionError(f"cannot read target {args.target}: {e}") from e
    witness = find_witness(world.oracle_b, text)
    print(f"witness: {'none' if witness is None else witness or '(empty)'}")
    return 0


def cmd_pke(args) -> int:
    profile = _profile(args)
    if profile.kind is not WorldKind.TRAPDOOR:
        raise PreconditionError("key exchange needs a trapdoor profile")

    def run(i, seed_seq):
        world_seq, handle_seq, run_seq = seed_seq.spawn(3)
        handle = OracleHandle(sample_world(profile, world_seq), repetitions=args.repetitions, seed=handle_seq)
        return key_exchange(handle, run_seq)

    results = run_trials(run, args.trials, args.seed, workers=args.workers, progress=args.progress, desc="pke")
    agreed = sum(r.agreed for r in results)
    print(results[0].transcript.format_hex())
    print(f"key agreement: {agreed}/{len(results)} (error budget {results[0].error_budget:.3g})")
    return 0


def cmd_ot(args) -> int:
    profile = _profile(args)
    if profile.kind is not WorldKind.TRAPDOOR:
        raise PreconditionError("oblivious transfer needs a trapdoor profile")

    def run(i, seed_seq):
        world_seq, handle_seq, run_seq = seed_seq.spawn(3)
        handle = OracleHandle(sample_world(profile, world_seq), repetitions=args.repetitions, seed=handle_seq)
        return ot_run(handle, args.x0, args.x1, args.y, run_seq)

    results = run_trials(run, args.trials, args.seed, workers=args.workers, progress=args.progress, desc="ot")
    correct = sum(r.correct for r in results)
    print(results[0].transcript.format_hex())
    print(f"receiver output x_y: {correct}/{len(results)} (error budget {results[0].error_budget:.3g})")
    print("security: structural and frequency checks only; the sender view holds pk_0 and pk_1, never td")
    return 0


def cmd_run(args) -> int:
    try:
        spec = GameSpec.model_validate_json(Path(args.spec).read_text(encoding="utf-8"))
    except ValueError as e:
        raise PreconditionError(f"invalid spec file {args.spec}: {e}") from e
    if args.workers:
        spec = spec.model_copy(update={"workers": args.workers})
    return _finish(args, run_game(spec, _event_log(args), args.progress))


def cmd_report(args) -> int:
    report = load_report(args.path)
    if args.csv:
        sys.stdout.write(report.to_csv())
    else:
        print(report.summary())
    return 0 if report.consistent else 1


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("forrelab.api.main:app", host=args.host, port=args.port)
    return 0


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed")
    common.add_argument("--trials", type=int, default=200, help="number of trials or samples")
    common.add_argument("--profile", default="desk", help="profile preset name or JSON file")
    common.add_argument("--event-log", default=None, help="JSON-lines event log path")
    common.add_argument("--workers", type=int, default=None, help="worker threads (default FORRELAB_WORKERS)")
    common.add_argument("--repetitions", type=int, default=None, help="decoder repetitions")
    common.add_argument("--progress", action="store_true", help="show a progress bar")
    return common


def _game_options(parser: argparse.ArgumentParser):
    parser.add_argument("--adversary", default="constant0", help="built-in adversary name")
    parser.add_argument("--address", default=None, help="A address for read-bit")
    parser.add_argument("--netlist", default=None, help="netlist adversary file")
    parser.add_argument("--window", nargs="*", default=None, help="A addresses read by the netlist")
    parser.add_argument("--external", default=None, help="external adversary command line")
    parser.add_argument("--inverter", default="trivial", help="inverter name")
    parser.add_argument("--squaring", action="store_true", help="wrap in the advantage-squaring wrapper")
    parser.add_argument("--cap", type=int, default=None, help="query cap T")
    parser.add_argument("--out-dir", default=None, help="report directory")


def _circuit_options(parser: argparse.ArgumentParser):
    parser.add_argument("--builder", default="parity", help="circuit builder")
    parser.add_argument("--circuit", default=None, help="netlist file instead of a builder")
    parser.add_argument("--param", type=int, default=0, help="builder parameter")
    parser.add_argument("--size", type=int, default=12, help="random circuit size")
    parser.add_argument("--depth", type=int, default=3, help="random circuit depth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forrelab",
        description="Forrelation-encoded oracle worlds: sampling, decoding, games and experiments.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--log-level", default=settings.log_level)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("sample-world", cmd_sample_world, "sample a world and optionally save it")
    p.add_argument("--kind", choices=[k.value for k in WorldKind], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--out", default=None, help="snapshot path")

    p = add("save", cmd_save, "re-save a snapshot, optionally replacing one slice")
    p.add_argument("--world", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--region", default=None, help="f, G or F")
    p.add_argument("--row", default=None, help="comma-separated slice arguments")
    p.add_argument("--pattern", default=None, help="new pattern bits")

    p = add("load", cmd_load, "load a snapshot and print its digest")
    p.add_argument("--world", required=True)

    p = add("decode", cmd_decode, "decode one block of a saved world")
    p.add_argument("--world", required=True)
    p.add_argument("--k", default=None, help="PRF key bits")
    p.add_argument("--x", default=None, help="PRF input bits")
    p.add_argument("--region", choices=["G", "F", "I"], default=None)
    p.add_argument("--row", default=None, help="comma-separated slice arguments")
    p.add_argument("--col", type=int, default=0)

    p = add("calibrate", cmd_calibrate, "measure acceptance under uniform and Forrelated instances")
    p.add_argument("--ell", type=int, default=8)
    p.add_argument("--sampler", choices=[s.value for s in SamplerKind], default=SamplerKind.EXACT.value)

    p = add("prf-game", cmd_prf_game, "PRF distinguishing (or OWF inversion) game")
    _game_options(p)
    p.add_argument("--rigged", action="store_true", help="force f_k(0) = 0 in every row")
    p.add_argument("--owf", action="store_true", help="run the OWF inversion game instead")

    p = add("towf-game", cmd_towf_game, "trapdoor inversion (or pk pseudorandomness) game")
    _game_options(p)
    p.add_argument("--mode", choices=[m.value for m in InvertMode], default=InvertMode.GEN.value)
    p.add_argument("--pk-pseudorandom", action="store_true", help="run the pk pseudorandomness game instead")

    p = add("resample-exp", cmd_resample, "plant a fresh slice and compare a distinguisher on both worlds")
    _game_options(p)
    p.add_argument("--config", choices=[c.value for c in ResampleConfig], default=ResampleConfig.PRF.value)

    p = add("sensitivity", cmd_sensitivity, "sensitivity tail of a circuit")
    _circuit_options(p)
    p.add_argument("--inputs", type=int, default=8)
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--out-dir", default=None, help="report directory")

    p = add("gw-check", cmd_gw_check, "exhaustive check of the block-resampling sensitivity identity")
    _circuit_options(p)
    p.add_argument("--K", type=int, default=3)
    p.add_argument("--M", type=int, default=2)

    p = add("np-demo", cmd_np_demo, "extract a witness with B queries only")
    p.add_argument("--world", required=True)
    p.add_argument("--target", required=True, help="B query circuit text file")

    add("pke", cmd_pke, "key exchange from the trapdoor PKE")
    p = add("ot", cmd_ot, "semi-honest oblivious transfer")
    p.add_argument("--x0", type=int, choices=(0, 1), default=0)
    p.add_argument("--x1", type=int, choices=(0, 1), default=1)
    p.add_argument("--y", type=int, choices=(0, 1), default=1)

    p = add("run", cmd_run, "run any game from a GameSpec JSON file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out-dir", default=None, help="report directory")

    p = add("report", cmd_report, "print a saved report")
    p.add_argument("path")
    p.add_argument("--csv", action="store_true", help="print CSV rows")

    p = add("serve", cmd_serve, "serve the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level)
    try:
        return args.func(args)
    except PreconditionError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
