"""Command-line front end.

Every command builds a request model, hands it to the service layer (in
process by default, over HTTP with --server) and renders the response.
Scalar results print as key=value records (--format csv switches to
key,value rows); tables print as CSV. Identical invocations produce
byte-identical stdout; timing and failure diagnostics go to stderr.

Exit codes: 0 success, 1 usage error, 2 mathematical precondition failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import service

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_VERIFY = 3


class CliError(Exception):
    def __init__(self, category: str, message: str):
        self.category = category
        self.message = message
        super().__init__(message)

    @property
    def exit_code(self) -> int:
        return EXIT_USAGE if self.category == "usage" else EXIT_PRECONDITION


def _call(handler, request, path: str, response_model, server: Optional[str]):
    if server is None:
        try:
            return handler(request)
        except Exception as exc:  # noqa: BLE001 - domain errors become exit codes
            raise CliError(service.error_category(exc), str(exc))
    import httpx

    response = httpx.post(
        server.rstrip("/") + path, json=request.model_dump(), timeout=600.0
    )
    if response.status_code in (400, 422):
        detail = response.json().get("detail", {})
        if isinstance(detail, dict) and "category" in detail:
            raise CliError(detail["category"], detail["message"])
        raise CliError("usage", str(detail))
    response.raise_for_status()
    return response_model.model_validate(response.json())


def _render_record(pairs: list[tuple[str, str]], fmt: str) -> str:
    if fmt == "csv":
        lines = ["key,value"] + [f"{k},{v}" for k, v in pairs]
    else:
        lines = [f"{k}={v}" for k, v in pairs]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_graph(args) -> str:
    path = args.graph or args.graph_pos
    if not path:
        raise CliError("usage", "a graph file is required (--graph FILE)")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError("usage", f"cannot read graph file: {exc}")


def _profile_csv(resp: service.ProfileResponse) -> str:
    lines = ["id,a"]
    lines += [f"{i},{a}" for i, a in zip(resp.ids, resp.a)]
    lines.append(f"mld,{resp.mld}")
    lines.append(f"index,{resp.index}")
    return "\n".join(lines) + "\n"


def _add_common(sub, graph: bool = False) -> None:
    sub.add_argument("--out", help="write stdout content to this file")
    sub.add_argument("--format", choices=("record", "csv"), default="record")
    sub.add_argument("--server", help="base URL of a running service; default in-process")
    if graph:
        sub.add_argument("graph_pos", nargs="?", help="graph file")
        sub.add_argument("--graph", help="graph file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logdisc",
        description="Exact log discrepancies, complements and blow-up towers "
        "on resolution dual graphs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("solve", "classify", "mld", "index"):
        sub = commands.add_parser(name)
        _add_common(sub, graph=True)

    sub = commands.add_parser("complement")
    _add_common(sub)
    sub.add_argument("--b", default="", help="comma-separated coefficients, '' for none")
    sub.add_argument("--delta", required=True)

    sub = commands.add_parser("dtau")
    _add_common(sub)
    sub.add_argument("--b", required=True, help="comma-separated coefficients")
    sub.add_argument("--tau", required=True)
    sub.add_argument("--mode", choices=("smallest-k", "biggest-a"), default="smallest-k")
    sub.add_argument("--targets", help="comma-separated target set for biggest-a")

    sub = commands.add_parser("subboundary")
    _add_common(sub, graph=True)
    sub.add_argument("--delta", required=True)

    sub = commands.add_parser("tower")
    _add_common(sub, graph=True)
    sub.add_argument("--script", required=True, help="tower script file")

    sub = commands.add_parser("atlas")
    _add_common(sub)
    sub.add_argument("--p-max", type=int, default=8)

    sub = commands.add_parser("verify")
    _add_common(sub)
    sub.add_argument("--suite", default=None)
    sub.add_argument("--properties", help="comma-separated property ids")
    sub.add_argument("--seed", type=int, default=1)
    sub.add_argument("--max-r", type=int)
    sub.add_argument("--max-weight", type=int)
    sub.add_argument("--max-p", type=int)
    sub.add_argument("--max-denominator", type=int)
    sub.add_argument("--max-points", type=int)
    sub.add_argument("--depth", type=int)
    sub.add_argument("--towers", type=int, dest="tower_count")
    sub.add_argument("--deltas", help="comma-separated delta list")

    sub = commands.add_parser("serve")
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8437)

    return parser


def _split_list(text: Optional[str]) -> list[str]:
    if not text:
        return []
    return [part for part in text.split(",") if part.strip()]


def run(args) -> int:
    server = getattr(args, "server", None)
    fmt = getattr(args, "format", "record")
    out = getattr(args, "out", None)

    if args.command in ("solve", "mld", "index", "classify"):
        request = service.GraphRequest(graph=_read_graph(args))
        if args.command == "solve":
            resp = _call(service.do_solve, request, "/solve", service.ProfileResponse, server)
            _emit(_profile_csv(resp), out)
        elif args.command == "classify":
            resp = _call(
                service.do_classify, request, "/classify", service.ClassifyResponse, server
            )
            _emit(_render_record([("class", resp.rendered)], fmt), out)
        elif args.command == "mld":
            resp = _call(service.do_mld, request, "/mld", service.ScalarResponse, server)
            _emit(_render_record([("mld", resp.value)], fmt), out)
        else:
            resp = _call(service.do_index, request, "/index", service.ScalarResponse, server)
            _emit(_render_record([("index", resp.value)], fmt), out)
        return EXIT_OK

    if args.command == "complement":
        request = service.ComplementRequest(
            coefficients=_split_list(args.b), delta=args.delta
        )
        resp = _call(
            service.do_complement, request, "/complement", service.ComplementResponse, server
        )
        pairs = [
            ("n", str(resp.n)),
            ("k", str(resp.k)),
            ("m", str(resp.m)),
            ("tried", ",".join(str(t) for t in resp.tried)),
            ("plus", ",".join(resp.plus)),
            ("padding", ",".join(resp.padding)),
            ("eps", resp.eps),
            ("sum", resp.total),
        ]
        _emit(_render_record(pairs, fmt), out)
        return EXIT_OK

    if args.command == "dtau":
        request = service.DtauRequest(
            coefficients=_split_list(args.b),
            tau=args.tau,
            mode=args.mode,
            targets=_split_list(args.targets) or None,
        )
        resp = _call(service.do_dtau, request, "/dtau", service.DtauResponse, server)
        _emit(_render_record([("result", ",".join(resp.result))], fmt), out)
        return EXIT_OK

    if args.command == "subboundary":
        request = service.SubboundaryRequest(graph=_read_graph(args), delta=args.delta)
        resp = _call(
            service.do_subboundary,
            request,
            "/subboundary",
            service.SubboundaryResponse,
            server,
        )
        pairs = [
            ("chain", ",".join(resp.chain)),
            ("u", ",".join(resp.u)),
            ("path", resp.path),
            ("bound", str(resp.denominator_bound)),
        ]
        _emit(_render_record(pairs, fmt), out)
        return EXIT_OK

    if args.command == "tower":
        try:
            with open(args.script, "r", encoding="utf-8") as fh:
                script = fh.read()
        except OSError as exc:
            raise CliError("usage", f"cannot read script file: {exc}")
        request = service.TowerRequest(graph=_read_graph(args), script=script)
        resp = _call(service.do_tower, request, "/tower", service.TowerResponse, server)
        _emit(resp.trace_csv, out)
        return EXIT_OK

    if args.command == "atlas":
        request = service.AtlasRequest(p_max=args.p_max)
        resp = _call(service.do_atlas, request, "/atlas", service.AtlasResponse, server)
        _emit(resp.csv, out)
        return EXIT_OK

    if args.command == "verify":
        request = service.VerifyRequest(
            suite=args.suite or ("default" if not args.properties else None),
            properties=_split_list(args.properties) or None,
            seed=args.seed,
            max_r=args.max_r,
            max_weight=args.max_weight,
            max_p=args.max_p,
            max_denominator=args.max_denominator,
            max_points=args.max_points,
            depth=args.depth,
            tower_count=args.tower_count,
            deltas=_split_list(args.deltas) or None,
        )
        resp = _call(service.do_verify, request, "/verify", service.VerifyResponse, server)
        _emit(resp.csv, out)
        for failure in resp.failure_details:
            sys.stderr.write(
                f"fail: property={failure.property} instance={failure.instance!r} "
                f"witness={failure.witness!r}\n"
            )
        return EXIT_OK if resp.ok else EXIT_VERIFY

    if args.command == "serve":
        import uvicorn

        uvicorn.run(service.app, host=args.host, port=args.port)
        return EXIT_OK

    raise CliError("usage", f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return run(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc.category}: {exc.message}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
