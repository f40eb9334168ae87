# main.py
import argparse
import json
import logging
import sys
from typing import List, Optional

from config import APP_VERSION, CONFIG_PATH, get_setting
from controller import LwcController
from logger import setup_logger, logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lwclab", description="Locally rewritable codes for stuck-at memory cells")
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("--log-dir", help="Directory for rotating log files")
    parser.add_argument("--debug", action="store_true", help="Verbose logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="d*, per-coordinate rewriting locality and optimality of an LWC")
    p.add_argument("--code", required=True, help="Stock name (flip4, groupflip6, hamming7-lwc, ...), JSON file or inline JSON")

    p = sub.add_parser("weights", help="Weight distribution of a linear code")
    p.add_argument("--code", required=True)

    p = sub.add_parser("encode", help="Initial write of a message into all-zero cells")
    p.add_argument("--code", required=True)
    p.add_argument("--msg", required=True, help="Message bits, e.g. 101")
    p.add_argument("--state", required=True, help="Cell states over {0,1,*}, '*' = normal cell")

    p = sub.add_parser("update", help="Rewrite a stored codeword to carry a new message")
    p.add_argument("--code", required=True)
    p.add_argument("--prev", required=True, help="Currently stored codeword")
    p.add_argument("--msg", required=True)
    p.add_argument("--state", required=True)

    p = sub.add_parser("decode", help="Recover the message from a stored word")
    p.add_argument("--code", required=True)
    p.add_argument("--word", required=True)

    p = sub.add_parser("duality", help="Compare an LRC with the LWC built from its parity-check matrix")
    p.add_argument("--lrc", required=True)

    p = sub.add_parser("repair", help="Repair one erased symbol ('?') of an LRC codeword")
    p.add_argument("--lrc", required=True)
    p.add_argument("--observed", required=True, help="e.g. 1?01011")

    p = sub.add_parser("bounds", help="Locality Singleton-type bound, or Kuznetsov's bounds with --kuznetsov")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--kuznetsov", action="store_true")

    p = sub.add_parser("simulate", help="Monte Carlo write/rewrite cost simulation")
    p.add_argument("--config", required=True, help="SimConfig JSON file")
    p.add_argument("--out", help="CSV file or directory (default: timestamped file in the current directory)")

    p = sub.add_parser("config", help="Show or persist user settings (enumeration caps, simulation defaults, logging)")
    p.add_argument("--set", dest="assignments", action="append", default=[], metavar="KEY=VALUE",
                   help="Setting to store, repeatable, e.g. --set coset_search_cap_bits=16")
    p.add_argument("--path", help=f"Settings file (default: {CONFIG_PATH})")
    return parser


def _command_kwargs(args: argparse.Namespace) -> dict:
    skip = {"command", "log_dir", "debug"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    level = getattr(logging, str(get_setting("log_level")).upper(), logging.INFO)
    setup_logger(log_dir=args.log_dir or get_setting("log_dir"), level=level, debug=args.debug)
    logger.info(f"命令行启动: {args.command}")

    result = LwcController().dispatch(args.command, **_command_kwargs(args))
    exit_code = 0 if result.get("success") else result.pop("exit_code", 1)
    print(json.dumps(result, ensure_ascii=False, indent=2))
    if exit_code:
        logger.error(f"{args.command} 退出码 {exit_code}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
