# utils package - shared utilities for the quadrature-domain toolkit
from utils.helpers import round_sig, Bounds, parse_bounds
from utils.logging import log, log_warn, log_error, log_to_file, set_log_file, DEFAULT_TZ
from utils.jsonio import point_to_json, point_from_json, dumps, write_json, read_json
from utils.images import write_ppm

__all__ = [
    # helpers
    "round_sig",
    "Bounds",
    "parse_bounds",
    # logging
    "log",
    "log_warn",
    "log_error",
    "log_to_file",
    "set_log_file",
    "DEFAULT_TZ",
    # json
    "point_to_json",
    "point_from_json",
    "dumps",
    "write_json",
    "read_json",
    # images
    "write_ppm",
]
