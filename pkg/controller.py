from typing import Dict, List, Optional

from codes import CodeSpec, parse_code_spec, weight_distribution
from config import CONFIG_PATH, apply_defaults, coerce_setting, load_settings, reset_settings_cache, save_settings
from defectchan import ChannelState
from duality import repair_symbol, verify_duality
from file_namer import resolve_output_path
from gf2core import BitVector
from harness import load_sim_config, run, write_csv
from logger import logger, log_exception
from lwc import AdditiveCode, build, decode, encode_initial, encode_update, kuznetsov_bounds, singleton_bound
from models import LwcError, MaskingFailure, RunStatus, UsageError


class LwcController:
    """命令编排：解析码规格 → 调用各模块 → 返回可序列化的结果字典。"""

    def __init__(self):
        self._codes: Dict[str, AdditiveCode] = {}

    def dispatch(self, command: str, **kwargs) -> dict:
        """
        Run one CLI command. Domain errors become {'success': False, 'error': ..., 'exit_code': ...};
        a masking failure is a successful command whose payload says so.
        """
        handler = getattr(self, f"handle_{command}", None)
        if handler is None:
            return {"success": False, "error": f"unknown command {command!r}", "exit_code": UsageError.exit_code}
        try:
            result = handler(**kwargs)
        except LwcError as e:
            logger.error(f"{command} failed: {e}")
            return {"success": False, "error": str(e), "error_type": type(e).__name__, "exit_code": e.exit_code}
        except Exception as e:
            log_exception(f"{command} 意外错误", e)
            return {"success": False, "error": str(e), "error_type": type(e).__name__, "exit_code": LwcError.exit_code}
        return {"success": True, **result}

    def resolve_spec(self, spec_text: str) -> CodeSpec:
        return parse_code_spec(spec_text)

    def resolve_code(self, spec_text: str) -> AdditiveCode:
        if spec_text not in self._codes:
            spec = self.resolve_spec(spec_text)
            self._codes[spec_text] = build(spec.g0(), name=spec.name)
            logger.info(f"Resolved code {spec_text!r}: {self._codes[spec_text]!r}")
        return self._codes[spec_text]

    def handle_analyze(self, code: str) -> dict:
        lwc = self.resolve_code(code)
        out = lwc.analysis().to_dict()
        out["perm"] = list(lwc.perm)
        return out

    def handle_weights(self, code: str) -> dict:
        linear = self.resolve_spec(code).linear_code()
        distribution = weight_distribution(linear)
        return {"n": linear.n, "k": linear.k, "weights": {str(w): a for w, a in enumerate(distribution) if a}}

    def _encoding_payload(self, enc) -> dict:
        return {"status": RunStatus.OK.value, "word": enc.codeword.to_string(), "parity": enc.parity.to_string(),
                "cost": enc.report.cost, **enc.report.to_dict()}

    def _failure_payload(self, e: MaskingFailure) -> dict:
        return {"status": RunStatus.MASKING_FAILURE.value, "detail": str(e), **e.to_dict()}

    def handle_encode(self, code: str, msg: str, state: str) -> dict:
        lwc = self.resolve_code(code)
        try:
            enc = encode_initial(lwc, BitVector.from_string(msg), ChannelState.from_string(state))
        except MaskingFailure as e:
            logger.warning(f"Masking failure for {code} msg={msg} state={state}: {e}")
            return self._failure_payload(e)
        return self._encoding_payload(enc)

    def handle_update(self, code: str, prev: str, msg: str, state: str) -> dict:
        lwc = self.resolve_code(code)
        try:
            enc = encode_update(lwc, BitVector.from_string(prev), BitVector.from_string(msg),
                                ChannelState.from_string(state))
        except MaskingFailure as e:
            logger.warning(f"Masking failure on update for {code} msg={msg} state={state}: {e}")
            return self._failure_payload(e)
        return self._encoding_payload(enc)

    def handle_decode(self, code: str, word: str) -> dict:
        lwc = self.resolve_code(code)
        return {"message": decode(lwc, BitVector.from_string(word)).to_string()}

    def handle_duality(self, lrc: str) -> dict:
        return verify_duality(self.resolve_spec(lrc).linear_code()).to_dict()

    def handle_repair(self, lrc: str, observed: str) -> dict:
        repair = repair_symbol(self.resolve_spec(lrc).linear_code(), observed)
        return {"position": repair.position, "value": repair.value,
                "accessed": list(repair.accessed), "access_count": len(repair.accessed)}

    def handle_bounds(self, n: int, k: Optional[int] = None, r: Optional[int] = None,
                      t: Optional[int] = None, kuznetsov: bool = False) -> dict:
        if kuznetsov:
            if t is None:
                raise UsageError("bounds --kuznetsov needs --t")
            return {"n": n, "t": t, **kuznetsov_bounds(n, t).to_dict()}
        if k is None or r is None:
            raise UsageError("bounds needs --k and --r (or --kuznetsov with --t)")
        return {"n": n, "k": k, "r": r, "d_max": singleton_bound(n, k, r)}

    def handle_simulate(self, config: str, out: Optional[str] = None) -> dict:
        cfg = load_sim_config(config)
        result = run(cfg)
        csv_path = resolve_output_path(out)
        try:
            write_csv(result, csv_path)
        except OSError as e:
            raise LwcError(f"cannot write {csv_path}: {e}") from e
        logger.info(f"Per-trial rows written to {csv_path}")
        summary = result.summary()
        summary["csv"] = csv_path
        return summary

    def handle_config(self, assignments: List[str], path: Optional[str] = None) -> dict:
        """Show the effective settings; with KEY=VALUE assignments, validate and persist them first."""
        path = path or CONFIG_PATH
        settings = load_settings(path)
        for item in assignments:
            key, sep, value = item.partition("=")
            if not sep:
                raise UsageError(f"expected KEY=VALUE, got {item!r}")
            try:
                settings[key.strip()] = coerce_setting(key.strip(), value.strip())
            except ValueError as e:
                raise UsageError(str(e)) from e
        if assignments:
            if not save_settings(settings, path):
                raise LwcError(f"cannot write settings to {path}")
            if path == CONFIG_PATH:
                reset_settings_cache()
            logger.info(f"Settings saved to {path}: {', '.join(assignments)}")
        return {"path": path, "saved": bool(assignments), "settings": apply_defaults(dict(settings))}
