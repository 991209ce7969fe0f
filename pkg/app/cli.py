# app/cli.py
"""
Command-line front end.

  python -m app.cli solve --instance game.json [--method auto] [--out result.json]
  python -m app.cli bounds --instance game.json
  python -m app.cli conjecture --instance game.json --max-support 8
  python -m app.cli simulate --instance game.json --trials 1000000 --seed 7
  python -m app.cli verify --family n4k2 --count 500 --seed 1

Exit codes: 0 ok, 1 unreadable/invalid input, 2 regime or capacity error
(also 2 when verify finds a mismatch or conjecture finds a gap).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.config import SolverLimits
from app.core.errors import BoobyTrapError, CapacityError, RegimeError
from app.ops.instance_io import InstanceParseError, load_instance, write_json
from app.services import solve_service
from app.services.verify_service import FAMILIES, verify_family

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_REGIME = 2


def _status(msg: str) -> None:
    print(f"[OK] {msg}", file=sys.stderr)


def _emit(data: object, out: Optional[str]) -> None:
    if out:
        path = write_json(data, Path(out))
        _status(f"wrote JSON → {path}")
    else:
        print(json.dumps(data, ensure_ascii=False, indent=2))


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(prog="boobytrap", description="Solve booby-trap search games exactly.")
    p.add_argument("--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--method", default="auto", choices=["auto", "one-uniform", "equal", "k1", "n4k2", "lp"])
    s.add_argument("--out", default=None)

    b = sub.add_parser("bounds", help="value bounds for a complete-hypergraph instance")
    b.add_argument("--instance", required=True)
    b.add_argument("--out", default=None)

    c = sub.add_parser("conjecture", help="best proportional support vs. the exact value")
    c.add_argument("--instance", required=True)
    c.add_argument("--max-support", type=int, default=None)
    c.add_argument("--out", default=None)

    m = sub.add_parser("simulate", help="Monte Carlo check of the optimal pair")
    m.add_argument("--instance", required=True)
    m.add_argument("--trials", type=int, default=1_000_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="closed forms vs. the LP oracle on random instances")
    v.add_argument("--family", required=True, choices=sorted(FAMILIES))
    v.add_argument("--count", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out-dir", default=None, help="write per-instance rows as JSON + CSV here")

    return p.parse_args(argv)


def _run(args: argparse.Namespace, limits: SolverLimits) -> int:
    if args.command == "verify":
        result = verify_family(args.family, args.count, args.seed, args.out_dir, args.workers, limits)
        print(result["summary"])
        if result["files"]:
            _status(f"wrote JSON → {result['files']['json']}")
            _status(f"wrote CSV → {result['files']['csv']}")
        return EXIT_OK if result["ok"] else EXIT_REGIME

    instance = load_instance(args.instance)
    _status(f"loaded n={instance.n} k={instance.k} ({instance.hypergraph.kind.value})")

    if args.command == "solve":
        data = solve_service.solve(instance, args.method, limits)
        _status(f"value={data['value']} method={data['method']}")
        _emit(data, args.out)
        return EXIT_OK
    if args.command == "bounds":
        data = solve_service.bounds(instance, limits)
        _status(f"lower={data['lower']['exact']} upper={data['upper']['exact']}")
        _emit(data, args.out)
        return EXIT_OK
    if args.command == "conjecture":
        data = solve_service.conjecture(instance, args.max_support, limits)
        _status(f"gap={data['gap']} verdict={data['verdict']}")
        _emit(data, args.out)
        return EXIT_OK if data["verdict"] == "consistent" else EXIT_REGIME
    data = solve_service.simulate_optimal(instance, args.trials, args.seed, args.workers, limits)
    _status(f"mean={data['mean']:.6f} exact={data['exact']['exact']} passed={data['passed']}")
    _emit(data, args.out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    limits = SolverLimits()
    try:
        return _run(args, limits)
    except InstanceParseError as e:
        print(f"[ERR] parse error at {e.field}: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except (RegimeError, CapacityError) as e:
        print(f"[ERR] {e}", file=sys.stderr)
        return EXIT_REGIME
    except BoobyTrapError as e:
        print(f"[ERR] {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
